#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ordembed/embed.hpp"

namespace ordembed {

using Mat = Eigen::MatrixXd;

/// Euclidean Gramian G(a,b) = <x_a, x_b> of equal-dimension points.
Mat gramian(const std::vector<Vec>& points);

/// Norms of the Gramian computed from distances to the origin only:
/// nuclear = sum of squared base distances, max = largest squared base
/// distance. Equal to the SVD nuclear norm and the entrywise max.
struct NormIdentities {
    double nuclear;
    double max;
};
NormIdentities euclidean_norm_identities(const std::vector<Vec>& points);

/// Lorentz Gramian H(a,b) = <x_a, x_b>_M of hyperboloid points: diagonal -1,
/// every entry <= -1, exactly one negative eigenvalue.
Mat lorentz_gramian(const Embedding& emb);

/// The pair (G-, G+) with H = G+ - G-: G- rank-1 PSD from the time
/// coordinates, G+ rank <= d PSD from the spatial block.
struct DecomposedGramian {
    Mat g_minus;
    Mat g_plus;
};

/// Time/spatial coordinate split of a hyperbolic embedding.
DecomposedGramian coordinate_decompose(const Embedding& emb);

struct ConditionCheck {
    bool ok = false;
    /// Signed distance to the mathematical boundary; negative means violated
    /// beyond tolerance would follow. For the rank flags the slack is the
    /// magnitude gap at the eigenvalue cutoff.
    double slack = 0.0;
};

/// Per-condition report for the decomposition conditions:
///  (a-/a+)  both matrices PSD
///  (b-/b+)  rank G- = 1, rank G+ <= d
///  (c)      diag(G+ - G-) = -1
///  (d)      all entries of G+ - G- at most -1
///  (e-/e+)  max-norm bounds cosh^2 R / sinh^2 R     (when R given)
///  (f-/f+)  nuclear bounds n cosh^2 C / n sinh^2 C  (when C given)
struct ConditionReport {
    ConditionCheck a_minus, a_plus, b_minus, b_plus, c, d;
    ConditionCheck e_minus, e_plus, f_minus, f_plus;
    bool has_e = false, has_f = false;

    bool core_ok() const { return a_minus.ok && a_plus.ok && b_minus.ok && b_plus.ok && c.ok && d.ok; }
    bool e_ok() const { return e_minus.ok && e_plus.ok; }
    bool f_ok() const { return f_minus.ok && f_plus.ok; }
    bool all_ok() const { return core_ok() && (!has_e || e_ok()) && (!has_f || f_ok()); }
};

ConditionReport check_conditions(const DecomposedGramian& dec, int dim, std::optional<double> R = {},
                                 std::optional<double> C = {});

/// Constructive inverse of lorentz_gramian: eigendecompose H, take the
/// negative eigenpair as time coordinates (global sign fixed positive) and
/// the positive eigenpairs as spatial coordinates. The result reproduces H
/// up to a Lorentz isometry of the points; throws naming the violated
/// condition when H is not a Lorentz Gramian of rank-(1, <= d) structure.
Embedding reconstruct_points(const Mat& H, int d);

/// Sparse comparison matrix with -1/2 at (i,j),(j,i) and +1/2 at (i,k),(k,i);
/// <H, M>_F = -H(i,j) + H(i,k) recovers the cosh hypothesis.
struct ComparisonMatrix {
    int i, j, k, n;

    Mat dense() const;
    double frobenius_with(const Mat& H) const { return -H(i, j) + H(i, k); }
};

ComparisonMatrix comparison_matrix(int i, int j, int k, int n);

/// Empirical risk as a linear function of the Lorentz Gramian:
/// (1/m) sum_t loss(-y_t <H, M_t>). Equals empirical_risk of the generating
/// embedding by construction.
double gramian_empirical_risk(const Mat& H, std::span<const TripletObservation> obs,
                              const LossFunction& loss);

}  // namespace ordembed
