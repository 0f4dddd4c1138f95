#include "ordembed/embed.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ordembed/parallel.hpp"
#include "ordembed/rng.hpp"
#include "ordembed/stablemath.hpp"

namespace ordembed {

double loss_value(const LossFunction& loss, double x) {
    switch (loss.kind) {
        case LossFunction::Kind::hinge:
            return std::max(0.0, x + 1.0);
        case LossFunction::Kind::ramp:
            return std::clamp(x + 1.0, 0.0, 1.0);
    }
    throw validation_error("loss_value: unknown kind");
}

double loss_subgradient(const LossFunction& loss, double x) {
    switch (loss.kind) {
        case LossFunction::Kind::hinge:
            return x > -1.0 ? 1.0 : 0.0;
        case LossFunction::Kind::ramp:
            return (x > -1.0 && x < 0.0) ? 1.0 : 0.0;
    }
    throw validation_error("loss_subgradient: unknown kind");
}

double Embedding::distance(int a, int b) const {
    if (a < 0 || b < 0 || a >= n() || b >= n()) throw validation_error("Embedding::distance: index out of range");
    if (space == Space::hyperbolic) {
        const double ip = -minkowski_inner(points[a], points[b]);
        return std::acosh(std::max(1.0, ip));
    }
    return (points[a] - points[b]).norm();
}

Eigen::MatrixXd Embedding::distance_matrix() const {
    const int m = n();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) out(a, b) = out(b, a) = distance(a, b);
    return out;
}

void Embedding::validate() const {
    const auto expected = space == Space::hyperbolic ? dim + 1 : dim;
    for (const auto& p : points) {
        if (p.size() != expected) throw validation_error("Embedding: point dimension mismatch");
        if (!p.allFinite()) throw validation_error("Embedding: non-finite point");
        if (space == Space::hyperbolic && !HyperPoint{p}.valid(1e-7))
            throw validation_error("Embedding: point off the hyperboloid");
    }
}

bool Embedding::within_radius(double R, double tol) const {
    for (const auto& p : points) {
        const double d = space == Space::hyperbolic ? std::acosh(std::max(1.0, p[0])) : p.norm();
        if (d > R + tol) return false;
    }
    return true;
}

namespace {

void check_transform(Space space, Transform f) {
    const bool ok = (space == Space::hyperbolic && f == Transform::cosh_hoe) ||
                    (space == Space::euclidean && f == Transform::square_eoe);
    if (!ok) throw validation_error("transform does not match the embedding space");
}

double hypothesis_unchecked(int i, int j, int k, const Embedding& emb, Transform f) {
    if (f == Transform::cosh_hoe) return std::cosh(emb.distance(i, j)) - std::cosh(emb.distance(i, k));
    return (emb.points[i] - emb.points[j]).squaredNorm() - (emb.points[i] - emb.points[k]).squaredNorm();
}

}  // namespace

double hypothesis(int i, int j, int k, const Embedding& emb, Transform f) {
    check_transform(emb.space, f);
    validate_triplet(emb.n(), i, j, k);
    return hypothesis_unchecked(i, j, k, emb, f);
}

namespace {

template <class RiskSum>
double empirical_risk_impl(const Embedding& emb, std::span<const TripletObservation> obs,
                           const LossFunction& loss, Transform f, RiskSum&& sum) {
    check_transform(emb.space, f);
    if (obs.empty()) throw validation_error("empirical_risk: empty observation list");
    const double total = sum(obs.size(), [&](std::size_t t) {
        const auto& o = obs[t];
        const double h = hypothesis_unchecked(o.i, o.j, o.k, emb, f);
        return loss_value(loss, -o.label * h);
    });
    return total / static_cast<double>(obs.size());
}

}  // namespace

double empirical_risk(const Embedding& emb, std::span<const TripletObservation> obs,
                      const LossFunction& loss, Transform f) {
    return empirical_risk_impl(emb, obs, loss, f,
                               [](std::size_t c, auto&& g) { return chunked_sum(c, g); });
}

double empirical_risk_serial(const Embedding& emb, std::span<const TripletObservation> obs,
                             const LossFunction& loss, Transform f) {
    return empirical_risk_impl(emb, obs, loss, f,
                               [](std::size_t c, auto&& g) { return chunked_sum_serial(c, g); });
}

namespace {

// One expected-risk term for the triplet (i, j, k) from its two embedding
// distances. Saturated cosh hypotheses are resolved in the log domain so the
// evaluation survives margin-scaled configurations.
double expected_term(double d_ij, double d_ik, double p, const LossFunction& loss, Transform f) {
    double h;
    if (f == Transform::cosh_hoe) {
        const SignedLog g = cosh_gap(d_ij, d_ik);
        if (g.log_abs > 45.0) {
            // |h| >= e^45: both losses sit on their flat/linear tails.
            const double pos = g.sign > 0 ? p : 1.0 - p;    // weight on loss(-|h|)
            const double neg = 1.0 - pos;                   // weight on loss(+|h|)
            if (loss.kind == LossFunction::Kind::ramp) return neg * 1.0;
            // hinge grows linearly on the wrong side; report the true magnitude
            // even if it overflows to inf.
            if (neg == 0.0) return 0.0;
            return neg * (std::exp(g.log_abs) + 1.0);
        }
        h = g.value();
    } else {
        h = d_ij * d_ij - d_ik * d_ik;
    }
    return p * loss_value(loss, -h) + (1.0 - p) * loss_value(loss, h);
}

template <class RiskSum>
double expected_risk_impl(const Eigen::MatrixXd& emb_dist, const Dissimilarity& dsim,
                          const LinkFunction& link, const LossFunction& loss, Transform f,
                          RiskSum&& sum) {
    const int n = dsim.n;
    if (n < 3) throw validation_error("expected_risk: need n >= 3");
    if (emb_dist.rows() != n || emb_dist.cols() != n)
        throw validation_error("expected_risk: distance matrix size mismatch");
    const std::size_t universe = triplet_count(n);
    if (universe > 10'000'000ULL)
        throw capacity_error("expected_risk: |T| exceeds the 1e7 enumeration guard");
    // Chunk by head entity i: each i owns the same number of (j, k) pairs, so
    // the reduction layout is independent of the thread count.
    const double total = sum(static_cast<std::size_t>(n), [&](std::size_t ii) {
        const int i = static_cast<int>(ii);
        double s = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            for (int k = j + 1; k < n; ++k) {
                if (k == i) continue;
                const double p = link_probability(link, dsim.D(i, j) - dsim.D(i, k));
                s += expected_term(emb_dist(i, j), emb_dist(i, k), p, loss, f);
            }
        }
        return s;
    });
    return total / static_cast<double>(universe);
}

}  // namespace

double expected_risk_from_distances(const Eigen::MatrixXd& emb_dist, const Dissimilarity& dsim,
                                    const LinkFunction& link, const LossFunction& loss, Transform f) {
    return expected_risk_impl(emb_dist, dsim, link, loss, f,
                              [](std::size_t c, auto&& g) { return chunked_sum(c, g); });
}

double expected_risk_exact(const Embedding& emb, const Dissimilarity& dsim, const LinkFunction& link,
                           const LossFunction& loss, Transform f) {
    check_transform(emb.space, f);
    if (emb.n() != dsim.n) throw validation_error("expected_risk_exact: entity count mismatch");
    return expected_risk_impl(emb.distance_matrix(), dsim, link, loss, f,
                              [](std::size_t c, auto&& g) { return chunked_sum(c, g); });
}

double expected_risk_exact_serial(const Embedding& emb, const Dissimilarity& dsim,
                                  const LinkFunction& link, const LossFunction& loss, Transform f) {
    check_transform(emb.space, f);
    if (emb.n() != dsim.n) throw validation_error("expected_risk_exact: entity count mismatch");
    return expected_risk_impl(emb.distance_matrix(), dsim, link, loss, f,
                              [](std::size_t c, auto&& g) { return chunked_sum_serial(c, g); });
}

void FitConfig::validate() const {
    restriction.validate();
    if (!(step_size > 0.0)) throw validation_error("FitConfig: step_size must be positive");
    if (epochs < 1) throw validation_error("FitConfig: epochs must be >= 1");
    if (batch_size < 1) throw validation_error("FitConfig: batch_size must be >= 1");
    if (init_scale < 0.0) throw validation_error("FitConfig: init_scale must be nonnegative");
}

namespace {

Embedding init_embedding(Space space, int n, int d, double init_scale, double R, Rng& rng) {
    Embedding emb;
    emb.space = space;
    emb.dim = d;
    emb.points.reserve(n);
    for (int a = 0; a < n; ++a) {
        Vec g(d);
        for (int x = 0; x < d; ++x) g[x] = init_scale * rng.normal();
        if (space == Space::hyperbolic) {
            Vec dir(1 + d);
            dir[0] = 0.0;
            dir.tail(d) = g;
            HyperPoint p = exp_map(TangentVector{base_point(d), dir});
            emb.points.push_back(project_to_ball(p, R).coords);
        } else {
            const double nrm = g.norm();
            if (nrm > R) g *= R / nrm;
            emb.points.push_back(g);
        }
    }
    return emb;
}

// Per-observation contribution to the ambient gradients of the mean loss.
// The cosh hypothesis is linear in Minkowski coordinates:
//   h = -<x_i, x_j> + <x_i, x_k>,
// so the ambient gradient of h touches only the three partner points. The
// Euclidean squared hypothesis contributes the analogous linear terms.
void accumulate_hypothesis_gradient(std::vector<Vec>& amb, const Embedding& emb, int i, int j, int k,
                                    double coeff) {
    if (emb.space == Space::hyperbolic) {
        amb[i] += coeff * (emb.points[k] - emb.points[j]);
        amb[j] -= coeff * emb.points[i];
        amb[k] += coeff * emb.points[i];
    } else {
        amb[i] += (2.0 * coeff) * (emb.points[k] - emb.points[j]);
        amb[j] += (2.0 * coeff) * (emb.points[j] - emb.points[i]);
        amb[k] += (2.0 * coeff) * (emb.points[i] - emb.points[k]);
    }
}

void apply_step(Embedding& emb, const std::vector<Vec>& amb, double lr, double R) {
    const int n = emb.n();
    for (int a = 0; a < n; ++a) {
        if (amb[a].isZero(0.0)) continue;
        if (!amb[a].allFinite()) throw numeric_error("fit: non-finite gradient at entity " + std::to_string(a));
        if (emb.space == Space::hyperbolic) {
            HyperPoint p{emb.points[a]};
            TangentVector g = project_to_tangent(p, amb[a]);
            g.dir *= -lr;
            HyperPoint moved = project_to_ball(exp_map(g), R);
            emb.points[a] = lift(moved.spatial()).coords;
        } else {
            Vec moved = emb.points[a] - lr * amb[a];
            const double nrm = moved.norm();
            if (nrm > R) moved *= R / nrm;
            emb.points[a] = std::move(moved);
        }
    }
}

FitResult fit_sgd(Space space, std::span<const TripletObservation> obs, const FitConfig& config,
                  const LossFunction& loss, int n, int d) {
    config.validate();
    if (n < 1 || d < 1) throw validation_error("fit: need n >= 1 and d >= 1");
    const Transform f = space == Space::hyperbolic ? Transform::cosh_hoe : Transform::square_eoe;
    const double R = config.restriction.radius_R;
    Rng rng(derive_seed(config.seed, "fit-init"));
    Embedding emb = init_embedding(space, n, d, config.init_scale, R, rng);

    FitResult result;
    result.embedding = emb;
    if (obs.empty()) return result;  // no gradient steps: initialization unchanged

    double best_risk = empirical_risk_serial(emb, obs, loss, f);
    result.risk_trace.push_back(best_risk);

    Rng shuffle_rng(derive_seed(config.seed, "fit-shuffle"));
    std::vector<std::size_t> order(obs.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<Vec> amb(n, Vec::Zero(space == Space::hyperbolic ? 1 + d : d));
    std::size_t step_index = 0;

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        // Fisher-Yates with our own stream keeps the permutation portable.
        for (std::size_t a = order.size(); a > 1; --a) {
            const std::size_t b = shuffle_rng.uniform_int(a);
            std::swap(order[a - 1], order[b]);
        }
        for (std::size_t lo = 0; lo < order.size(); lo += config.batch_size) {
            const std::size_t hi = std::min(order.size(), lo + config.batch_size);
            for (auto& g : amb) g.setZero();
            for (std::size_t t = lo; t < hi; ++t) {
                const auto& o = obs[order[t]];
                const double h = hypothesis_unchecked(o.i, o.j, o.k, emb, f);
                const double coeff = -o.label * loss_subgradient(loss, -o.label * h);
                if (coeff != 0.0) accumulate_hypothesis_gradient(amb, emb, o.i, o.j, o.k, coeff);
            }
            const double denom = static_cast<double>(hi - lo);
            for (auto& g : amb) g /= denom;
            ++step_index;
            const double lr =
                config.sqrt_decay ? config.step_size / std::sqrt(static_cast<double>(step_index))
                                  : config.step_size;
            apply_step(emb, amb, lr, R);
        }
        const double risk = empirical_risk_serial(emb, obs, loss, f);
        result.risk_trace.push_back(risk);
        if (risk < best_risk) {
            best_risk = risk;
            result.embedding = emb;
        }
    }
    return result;
}

}  // namespace

FitResult fit_hoe(std::span<const TripletObservation> obs, const FitConfig& config,
                  const LossFunction& loss, int n, int d) {
    return fit_sgd(Space::hyperbolic, obs, config, loss, n, d);
}

FitResult fit_eoe(std::span<const TripletObservation> obs, const FitConfig& config,
                  const LossFunction& loss, int n, int d) {
    return fit_sgd(Space::euclidean, obs, config, loss, n, d);
}

FitResult minimize_expected_risk(const Dissimilarity& dsim, const LinkFunction& link,
                                 const LossFunction& loss, Transform f, Space space,
                                 const BallRestriction& restriction, const FitConfig& config, int d) {
    restriction.validate();
    check_transform(space, f);
    const int n = dsim.n;
    if (n < 3) throw validation_error("minimize_expected_risk: need n >= 3");
    if (triplet_count(n) > 10'000'000ULL)
        throw capacity_error("minimize_expected_risk: |T| exceeds feasibility guard");
    const double R = restriction.radius_R;
    const int restarts = std::max(3, config.restarts);
    const int iterations = std::max(0, config.epochs);
    const auto triplets = enumerate_triplets(n);

    FitResult best;
    double best_risk = std::numeric_limits<double>::infinity();
    std::vector<Vec> amb(n, Vec::Zero(space == Space::hyperbolic ? 1 + d : d));

    for (int start = 0; start < restarts; ++start) {
        Rng rng(derive_seed(config.seed, "min-expected-init", static_cast<std::uint64_t>(start)));
        // First start from the base configuration, then from random spreads.
        const double scale = start == 0 ? 0.0 : config.init_scale * start;
        Embedding emb = init_embedding(space, n, d, scale, R, rng);
        double risk = expected_risk_exact(emb, dsim, link, loss, f);
        std::vector<double> trace{risk};
        if (risk < best_risk) {
            best_risk = risk;
            best.embedding = emb;
        }
        for (int it = 1; it <= iterations; ++it) {
            for (auto& g : amb) g.setZero();
            for (const auto& tr : triplets) {
                const double p = link_probability(link, dsim.D(tr.i, tr.j) - dsim.D(tr.i, tr.k));
                const double h = hypothesis_unchecked(tr.i, tr.j, tr.k, emb, f);
                const double coeff = -p * loss_subgradient(loss, -h) + (1.0 - p) * loss_subgradient(loss, h);
                if (coeff != 0.0) accumulate_hypothesis_gradient(amb, emb, tr.i, tr.j, tr.k, coeff);
            }
            const double denom = static_cast<double>(triplets.size());
            for (auto& g : amb) g /= denom;
            const double lr = config.sqrt_decay
                                  ? config.step_size / std::sqrt(static_cast<double>(it))
                                  : config.step_size;
            apply_step(emb, amb, lr, R);
            risk = expected_risk_exact(emb, dsim, link, loss, f);
            trace.push_back(risk);
            if (risk < best_risk) {
                best_risk = risk;
                best.embedding = emb;
            }
        }
        if (start == 0) best.risk_trace = std::move(trace);
    }
    return best;
}

std::vector<Vec> empirical_risk_gradient(const Embedding& emb, std::span<const TripletObservation> obs,
                                         const LossFunction& loss, Transform f) {
    check_transform(emb.space, f);
    if (obs.empty()) throw validation_error("empirical_risk_gradient: empty observation list");
    const int n = emb.n();
    std::vector<Vec> amb(n, Vec::Zero(emb.space == Space::hyperbolic ? emb.dim + 1 : emb.dim));
    for (const auto& o : obs) {
        const double h = hypothesis_unchecked(o.i, o.j, o.k, emb, f);
        const double coeff = -o.label * loss_subgradient(loss, -o.label * h);
        if (coeff != 0.0) accumulate_hypothesis_gradient(amb, emb, o.i, o.j, o.k, coeff);
    }
    const double denom = static_cast<double>(obs.size());
    for (auto& g : amb) g /= denom;
    if (emb.space == Space::hyperbolic) {
        for (int a = 0; a < n; ++a) amb[a] = project_to_tangent(HyperPoint{emb.points[a]}, amb[a]).dir;
    }
    return amb;
}

}  // namespace ordembed
