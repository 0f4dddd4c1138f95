#pragma once

#include <Eigen/Dense>

#include "ordembed/errors.hpp"

namespace ordembed {

using Vec = Eigen::VectorXd;

/// Lorentz inner product -u0*v0 + sum_{a>=1} u_a*v_a on (1+d)-dimensional
/// Minkowski space. Throws on length mismatch or length < 2.
double minkowski_inner(const Vec& u, const Vec& v);

/// A point on the upper sheet of the hyperboloid {x : <x,x>_M = -1, x0 >= 1},
/// stored as its (1+d) ambient coordinates. coords[0] is the time coordinate.
struct HyperPoint {
    Vec coords;

    int dim() const { return static_cast<int>(coords.size()) - 1; }
    double time() const { return coords[0]; }
    Vec spatial() const { return coords.tail(coords.size() - 1); }

    // |<x,x>_M + 1| scaled by max(1, x0^2); the invariant tolerance is 1e-9 at
    // unit scale and degrades gracefully for far points whose squared
    // coordinates are large.
    double constraint_residual() const;
    bool valid(double tol = 1e-9) const;
};

/// Base point x0 = [1, 0, ..., 0] of the d-dimensional hyperboloid.
HyperPoint base_point(int d);

/// Completes spatial coordinates to a hyperboloid point: x0 = sqrt(1 + |s|^2).
/// Throws validation_error on non-finite input.
HyperPoint lift(const Vec& spatial);

/// Checked construction from full ambient coordinates.
HyperPoint hyperpoint_from_coords(const Vec& coords, double tol = 1e-9);

/// d(p, q) = arcosh(-<p,q>_M). The inner product is clamped to (-inf, -1]
/// before arcosh so roundoff below 1 cannot produce NaN.
double hyperbolic_distance(const HyperPoint& p, const HyperPoint& q);

/// d(x0, p) = arcosh(p0) without forming the base point.
double base_distance(const HyperPoint& p);

/// Tangent vector dir at point `at`, characterized by <at, dir>_M = 0.
struct TangentVector {
    HyperPoint at;
    Vec dir;

    double sq_norm() const { return minkowski_inner(dir, dir); }
    bool valid(double tol = 1e-9) const;
};

/// Minkowski-orthogonal projection of an ambient vector onto the tangent
/// space at p: g -> g + <p,g>_M p. Idempotent.
TangentVector project_to_tangent(const HyperPoint& p, const Vec& ambient);

/// Exponential map cosh(|v|) p + sinh(|v|) v/|v| with |v| = sqrt(<v,v>_M).
/// Returns p itself for |v| < 1e-12. The result is re-lifted so it sits on
/// the hyperboloid exactly up to roundoff.
HyperPoint exp_map(const TangentVector& t);

/// Metric projection onto the radius-R ball around the base point: points
/// farther than R are moved along their geodesic from x0 to distance exactly
/// R. Idempotent; R = 0 collapses to the base point.
HyperPoint project_to_ball(const HyperPoint& p, double R);

/// Radius restrictions on a configuration: every point within distance R of
/// the base point, and mean of cosh^2 base distances at most cosh^2 C.
/// C defaults to R, under which the mean condition is implied.
struct BallRestriction {
    double radius_R = 1.0;
    double mean_radius_C = 1.0;

    static BallRestriction radius(double R) { return BallRestriction{R, R}; }
    void validate() const;
};

}  // namespace ordembed
