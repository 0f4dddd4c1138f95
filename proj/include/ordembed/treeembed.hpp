#pragma once

#include <array>
#include <vector>

#include "ordembed/dataset.hpp"
#include "ordembed/embed.hpp"
#include "ordembed/hypgeo.hpp"

namespace ordembed {

/// The two brute-force minima driving the margin construction: the smallest
/// pairwise tree distance and the smallest relative gap |1 - xi/xi'| over
/// distinct entity pairs. A single-pair tree reports gap 1 by convention
/// (the separation requirement is vacuous).
struct TreeMarginStats {
    double min_weight;
    double min_ratio_gap;
};

TreeMarginStats tree_margin_stats(const WeightedTree& tree);

/// Scaled cone embedding of the tree into the hyperbolic plane: the tree is
/// rooted at its weighted center, children leave each vertex along maximally
/// separated tangent directions, and every edge is laid out at exactly
/// tau * weight geodesic length. Throws numeric_error when cosh(tau * depth)
/// overflows the coordinate representation.
std::vector<HyperPoint> sarkar_embed(const WeightedTree& tree, double tau);

/// Pairwise distances of the same configuration computed intrinsically by
/// hyperbolic triangle recurrences in the log domain; exact at scales far
/// beyond coordinate representability.
Eigen::MatrixXd sarkar_embed_distances(const WeightedTree& tree, double tau);

struct MarginVerdict {
    bool ok;
    double worst_gap;              // min over ordered comparisons of d(P) - d(P')
    std::array<int, 4> witness;    // (i, j, i', j') attaining the worst gap
};

/// Exhaustive check over all ordered pairs of distinct entity pairs:
/// xi(i,j) > xi(i',j') must imply d(x_i,x_j) - d(x_i',x_j') > margin.
MarginVerdict verify_margin(const std::vector<HyperPoint>& points, const Dissimilarity& dsim,
                            double margin);
MarginVerdict verify_margin(const Eigen::MatrixXd& dist, const Dissimilarity& dsim, double margin);
MarginVerdict verify_margin_serial(const Eigen::MatrixXd& dist, const Dissimilarity& dsim, double margin);

struct MarginEmbedding {
    /// Ambient coordinates when representable in doubles; empty otherwise
    /// (points_representable tells which). Distances are always present.
    std::vector<HyperPoint> points;
    bool points_representable = false;
    Eigen::MatrixXd distances;
    double scale_tau = 0.0;
    double achieved_margin = 0.0;  // DBL_MAX sentinel when no comparable pair exists
    double epsilon = 0.0;          // distortion budget used by the certificate
};

/// Margin-1 separation construction: epsilon = min_ratio_gap / 3, starting
/// scale tau0 = (1+eps)/(w_min eps), then doubling tau until both the
/// (1 +- eps) distortion sandwich and the exhaustive margin check pass.
/// Throws numeric_error after 20 doublings.
MarginEmbedding embed_with_margin(const WeightedTree& tree);

struct ZeroRiskCertificate {
    MarginEmbedding embedding;
    double expected_risk;
};

/// Runs embed_with_margin and evaluates the exact expected ramp risk under
/// the step link; a successful margin embedding attains the noise floor
/// 1/2 - alpha.
ZeroRiskCertificate zero_risk_certificate(const WeightedTree& tree, double alpha);

namespace treedetail {

/// Side a opposite the angle theta enclosed by sides b and c, plus the angle
/// at the far endpoint (between side a and side c). Stable for sides from 0
/// to ~1e6.
struct TriangleStep {
    double side;
    double far_angle;
};
TriangleStep hyp_triangle_step(double b, double c, double theta);

}  // namespace treedetail

}  // namespace ordembed
