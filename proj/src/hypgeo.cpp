#include "ordembed/hypgeo.hpp"

#include <cmath>

namespace ordembed {

double minkowski_inner(const Vec& u, const Vec& v) {
    if (u.size() != v.size())
        throw validation_error("minkowski_inner: dimension mismatch (" + std::to_string(u.size()) +
                               " vs " + std::to_string(v.size()) + ")");
    if (u.size() < 2) throw validation_error("minkowski_inner: need length >= 2");
    const auto n = u.size();
    return -u[0] * v[0] + u.tail(n - 1).dot(v.tail(n - 1));
}

double HyperPoint::constraint_residual() const {
    const double r = minkowski_inner(coords, coords) + 1.0;
    const double scale = std::max(1.0, coords[0] * coords[0]);
    return std::abs(r) / scale;
}

bool HyperPoint::valid(double tol) const {
    if (!coords.allFinite() || coords.size() < 2) return false;
    return coords[0] >= 1.0 - tol && constraint_residual() <= tol;
}

HyperPoint base_point(int d) {
    if (d < 1) throw validation_error("base_point: dimension must be >= 1");
    Vec c = Vec::Zero(1 + d);
    c[0] = 1.0;
    return HyperPoint{std::move(c)};
}

HyperPoint lift(const Vec& spatial) {
    if (!spatial.allFinite()) throw validation_error("lift: non-finite spatial coordinates");
    Vec c(spatial.size() + 1);
    c[0] = std::sqrt(1.0 + spatial.squaredNorm());
    c.tail(spatial.size()) = spatial;
    return HyperPoint{std::move(c)};
}

HyperPoint hyperpoint_from_coords(const Vec& coords, double tol) {
    HyperPoint p{coords};
    if (!p.valid(tol))
        throw validation_error("hyperpoint_from_coords: coordinates violate <x,x>_M = -1, x0 >= 1");
    return p;
}

double hyperbolic_distance(const HyperPoint& p, const HyperPoint& q) {
    const double ip = -minkowski_inner(p.coords, q.coords);
    return std::acosh(std::max(1.0, ip));
}

double base_distance(const HyperPoint& p) { return std::acosh(std::max(1.0, p.coords[0])); }

bool TangentVector::valid(double tol) const {
    if (!dir.allFinite() || dir.size() != at.coords.size()) return false;
    const double scale = std::max(1.0, at.coords[0] * std::sqrt(std::max(1.0, dir.squaredNorm())));
    return std::abs(minkowski_inner(at.coords, dir)) / scale <= tol;
}

TangentVector project_to_tangent(const HyperPoint& p, const Vec& ambient) {
    if (ambient.size() != p.coords.size())
        throw validation_error("project_to_tangent: dimension mismatch");
    Vec dir = ambient + minkowski_inner(p.coords, ambient) * p.coords;
    return TangentVector{p, std::move(dir)};
}

HyperPoint exp_map(const TangentVector& t) {
    const double sq = minkowski_inner(t.dir, t.dir);
    const double nrm = std::sqrt(std::max(0.0, sq));
    if (nrm < 1e-12) return t.at;
    Vec out = std::cosh(nrm) * t.at.coords + (std::sinh(nrm) / nrm) * t.dir;
    if (!out.allFinite()) throw numeric_error("exp_map: overflow (tangent norm " + std::to_string(nrm) + ")");
    // Re-lift to pin the point exactly onto the sheet; retraction drift would
    // otherwise accumulate over long optimization runs.
    return lift(out.tail(out.size() - 1));
}

HyperPoint project_to_ball(const HyperPoint& p, double R) {
    if (R < 0.0) throw validation_error("project_to_ball: negative radius");
    const double D = base_distance(p);
    if (D <= R) return p;
    if (R == 0.0) return base_point(p.dim());
    // Geodesic toward x0: spatial part shrinks by sinh(R)/sinh(D), keeping the
    // direction; this is the metric projection onto B_R.
    Vec spatial = p.spatial() * (std::sinh(R) / std::sinh(D));
    return lift(spatial);
}

void BallRestriction::validate() const {
    if (radius_R < 0.0 || mean_radius_C < 0.0)
        throw validation_error("BallRestriction: radii must be nonnegative");
    if (mean_radius_C > radius_R + 1e-12)
        throw validation_error("BallRestriction: C must not exceed R");
}

}  // namespace ordembed
