#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ordembed/dataset.hpp"
#include "ordembed/hypgeo.hpp"

namespace ordembed {

enum class Space { hyperbolic, euclidean };

/// Dissimilarity transformation inside the hypothesis: cosh(x) for the
/// hyperbolic model (which makes the hypothesis linear in Lorentz inner
/// products) and x^2 for the Euclidean one.
enum class Transform { cosh_hoe, square_eoe };

/// Monotone nondecreasing, nonnegative, 1-Lipschitz losses.
struct LossFunction {
    enum class Kind { hinge, ramp };
    Kind kind = Kind::hinge;

    double lipschitz_constant() const { return 1.0; }
    static LossFunction hinge() { return {Kind::hinge}; }
    static LossFunction ramp() { return {Kind::ramp}; }
};

/// hinge: max{0, x+1}.  ramp: 0 for x <= -1, x+1 on [-1, 0], 1 for x >= 0.
double loss_value(const LossFunction& loss, double x);

/// Minimal-norm subgradient: 0 at the knots.
double loss_subgradient(const LossFunction& loss, double x);

/// n points in either space. Hyperbolic points carry 1+d ambient coordinates,
/// Euclidean points d.
struct Embedding {
    Space space = Space::euclidean;
    int dim = 0;
    std::vector<Vec> points;

    int n() const { return static_cast<int>(points.size()); }
    double distance(int a, int b) const;
    Eigen::MatrixXd distance_matrix() const;
    void validate() const;
    bool within_radius(double R, double tol = 1e-9) const;
};

/// h(i,j,k) = f(d(x_i, x_j)) - f(d(x_i, x_k)). The transform must match the
/// space (cosh for hyperbolic, square for Euclidean).
double hypothesis(int i, int j, int k, const Embedding& emb, Transform f);

/// (1/m) sum_t loss(-y_t h_t); throws on an empty observation list.
double empirical_risk(const Embedding& emb, std::span<const TripletObservation> obs,
                      const LossFunction& loss, Transform f);
double empirical_risk_serial(const Embedding& emb, std::span<const TripletObservation> obs,
                             const LossFunction& loss, Transform f);

/// Closed-form expected risk under the uniform-triplet assumption:
/// (1/|T|) sum_T [p loss(-h) + (1-p) loss(h)], p = link(D(i,j) - D(i,k)).
/// Guarded to |T| <= 1e7.
double expected_risk_exact(const Embedding& emb, const Dissimilarity& dsim, const LinkFunction& link,
                           const LossFunction& loss, Transform f);
double expected_risk_exact_serial(const Embedding& emb, const Dissimilarity& dsim,
                                  const LinkFunction& link, const LossFunction& loss, Transform f);

/// Same evaluation from a precomputed matrix of embedding distances. The
/// cosh route evaluates saturated losses in the log domain, so it stays
/// finite for margin-scaled configurations whose cosh overflows a double.
double expected_risk_from_distances(const Eigen::MatrixXd& emb_dist, const Dissimilarity& dsim,
                                    const LinkFunction& link, const LossFunction& loss, Transform f);

struct FitConfig {
    BallRestriction restriction = BallRestriction::radius(2.0);
    double step_size = 0.05;
    int epochs = 100;
    int batch_size = 16;
    std::uint64_t seed = 0;
    double init_scale = 0.1;
    int restarts = 3;        // used by minimize_expected_risk and best-of-restarts fits
    bool sqrt_decay = false; // step_size / sqrt(t) schedule

    void validate() const;
};

struct FitResult {
    Embedding embedding;
    std::vector<double> risk_trace;  // empirical risk per epoch, index 0 = initialization
};

/// Riemannian SGD on the empirical risk over B_R. The cosh hypothesis is
/// linear in Minkowski coordinates, so the update uses the closed-form
/// ambient gradient, tangent projection, exp_map, ball projection, re-lift.
/// Returns the best epoch snapshot by training risk; deterministic per seed.
FitResult fit_hoe(std::span<const TripletObservation> obs, const FitConfig& config,
                  const LossFunction& loss, int n, int d);

/// Euclidean projected SGD onto the origin-centered radius-R ball.
FitResult fit_eoe(std::span<const TripletObservation> obs, const FitConfig& config,
                  const LossFunction& loss, int n, int d);

/// Multi-start full-gradient descent directly on the exact expected risk;
/// surrogate for the expected risk minimizer. Returns the best point seen
/// across all starts and iterations (config.restarts >= 3 enforced).
FitResult minimize_expected_risk(const Dissimilarity& dsim, const LinkFunction& link,
                                 const LossFunction& loss, Transform f, Space space,
                                 const BallRestriction& restriction, const FitConfig& config, int d);

/// Analytic risk gradients for verification: Riemannian tangent vectors for
/// hyperbolic embeddings, plain gradients for Euclidean ones.
std::vector<Vec> empirical_risk_gradient(const Embedding& emb, std::span<const TripletObservation> obs,
                                         const LossFunction& loss, Transform f);

}  // namespace ordembed
