#include "ordembed/bounds.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "ordembed/embed.hpp"
#include "ordembed/gramian.hpp"
#include "ordembed/rng.hpp"

namespace ordembed {

namespace {

void require_formula_inputs(int n, std::size_t m) {
    if (n < 2) throw validation_error("bound formulas need n >= 2 (ln n must be positive)");
    if (m < 1) throw validation_error("bound formulas need m >= 1");
}

void require_delta(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw validation_error("delta must lie in (0, 1)");
}

double bracket(int n, std::size_t m, HoeBracketVariant variant) {
    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(m);
    const double ln_n = std::log(nn);
    switch (variant) {
        case HoeBracketVariant::theorem1:
            return std::sqrt(2.0 * (nn + 1.0) * ln_n / mm) + nn * ln_n / (std::sqrt(12.0) * mm);
        case HoeBracketVariant::lemma5_stated:
            return std::sqrt(2.0 * nn * ln_n / mm) + nn * ln_n / (6.0 * mm);
    }
    throw validation_error("unknown bracket variant");
}

const char* variant_name(HoeBracketVariant v) {
    return v == HoeBracketVariant::theorem1 ? "hoe_theorem1" : "hoe_lemma5_stated";
}

}  // namespace

double loss_range_hoe(double L, double R) {
    if (!(L > 0.0) || R < 0.0) throw validation_error("loss_range_hoe: need L > 0 and R >= 0");
    const double c = std::cosh(2.0 * R);
    return 2.0 * L * c * c;
}

double rademacher_bound_hoe(double C, int n, std::size_t m, HoeBracketVariant variant) {
    if (C < 0.0) throw validation_error("rademacher_bound_hoe: need C >= 0");
    require_formula_inputs(n, m);
    const double ch = std::cosh(C), sh = std::sinh(C);
    return (ch * ch + sh * sh) * bracket(n, m, variant);
}

void BoundInputs::validate() const {
    if (!(lipschitz_L > 0.0)) throw validation_error("BoundInputs: L must be positive");
    if (radius_R < 0.0 || mean_radius_C < 0.0 || loss_range_B < 0.0)
        throw validation_error("BoundInputs: R, C, B_ell must be nonnegative");
    require_formula_inputs(n, m);
    require_delta(delta);
    if (nuclear_gamma < 0.0 || max_B < 0.0)
        throw validation_error("BoundInputs: gamma and B must be nonnegative");
}

BoundReport hoe_excess_bound(const BoundInputs& in, HoeBracketVariant variant) {
    in.validate();
    const double mm = static_cast<double>(in.m);
    BoundReport rep;
    rep.variant = variant_name(variant);
    rep.complexity_term = 2.0 * in.lipschitz_L * rademacher_bound_hoe(in.mean_radius_C, in.n, in.m, variant);
    rep.concentration_term = 2.0 * in.loss_range_B * std::sqrt(2.0 * std::log(2.0 / in.delta) / mm);
    rep.total = rep.complexity_term + rep.concentration_term;
    return rep;
}

BoundReport hoe_excess_bound_radius(double L, double R, int n, std::size_t m, double delta) {
    BoundInputs in;
    in.lipschitz_L = L;
    in.radius_R = R;
    in.mean_radius_C = R;
    in.loss_range_B = loss_range_hoe(L, R);
    in.n = n;
    in.m = m;
    in.delta = delta;
    BoundReport rep = hoe_excess_bound(in, HoeBracketVariant::theorem1);
    rep.variant = "hoe_cor_radius";
    return rep;
}

BoundReport eoe_excess_bound(double L, double gamma, double B, int n, std::size_t m, double delta) {
    if (!(L > 0.0)) throw validation_error("eoe_excess_bound: L must be positive");
    if (gamma < 0.0 || B < 0.0) throw validation_error("eoe_excess_bound: gamma, B must be nonnegative");
    require_formula_inputs(n, m);
    require_delta(delta);
    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(m);
    const double ln_n = std::log(nn);
    const double lead = 12.0 * std::sqrt(2.0) * L;
    BoundReport rep;
    rep.variant = "eoe_theorem";
    rep.complexity_term =
        lead * (gamma / nn) * (std::sqrt(nn * ln_n / mm) + (std::sqrt(3.0) / 9.0) * nn * ln_n / mm);
    rep.concentration_term = lead * B * std::sqrt(std::log(2.0 / delta) / mm);
    rep.total = rep.complexity_term + rep.concentration_term;
    return rep;
}

BoundReport eoe_excess_bound_radius(double L, double R, int n, std::size_t m, double delta) {
    if (R < 0.0) throw validation_error("eoe_excess_bound_radius: need R >= 0");
    BoundReport rep = eoe_excess_bound(L, static_cast<double>(n) * R * R, R * R, n, m, delta);
    rep.variant = "eoe_cor_radius";
    return rep;
}

double decomposed_class_bound(double gamma, int n, std::size_t m, NuclearClassVariant variant) {
    if (gamma < 0.0) throw validation_error("decomposed_class_bound: gamma must be nonnegative");
    require_formula_inputs(n, m);
    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(m);
    const double ln_n = std::log(nn);
    const double K = variant == NuclearClassVariant::stated ? std::sqrt(12.0) : 3.0 * std::sqrt(2.0);
    return (gamma / nn) * (std::sqrt(2.0 * (nn + 1.0) * ln_n / mm) + nn * ln_n / (K * mm));
}

ComparisonMatrixStats comparison_matrix_stats(int n) {
    if (n < 3) throw validation_error("comparison_matrix_stats: need n >= 3");
    const double nn = static_cast<double>(n);
    ComparisonMatrixStats s;
    s.sigma_op = 1.0 / std::sqrt(2.0);
    s.diag_mean = 1.0 / nn;
    s.offdiag_mean = -0.5 / (nn * (nn - 1.0));
    s.variance_per_sample = 1.0 / nn + 0.5 / (nn * (nn - 1.0));
    return s;
}

double matrix_bernstein_bound(double variance_v, double sigma, double n_dim) {
    if (variance_v < 0.0 || sigma < 0.0) throw validation_error("matrix_bernstein_bound: need v, sigma >= 0");
    if (!(n_dim > 1.0)) throw validation_error("matrix_bernstein_bound: need n > 1");
    const double ln_n = std::log(n_dim);
    return std::sqrt(2.0 * variance_v * ln_n) + sigma * ln_n / 3.0;
}

namespace {

// Common geodesic rescale of the whole configuration toward the base point
// until the mean cosh^2 base distance meets the bound; this is a feasible
// point of the mean-radius set, not a metric projection.
void project_to_mean_ball(Embedding& emb, double C) {
    const double bound = std::cosh(C) * std::cosh(C);
    const int n = emb.n();
    std::vector<double> dist(n);
    auto mean_at = [&](double s) {
        double acc = 0.0;
        for (int a = 0; a < n; ++a) {
            const double c = std::cosh(s * dist[a]);
            acc += c * c;
        }
        return acc / static_cast<double>(n);
    };
    for (int a = 0; a < n; ++a) dist[a] = std::acosh(std::max(1.0, emb.points[a][0]));
    if (mean_at(1.0) <= bound) return;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mean_at(mid) <= bound ? lo : hi) = mid;
    }
    for (int a = 0; a < n; ++a) {
        if (dist[a] == 0.0) continue;
        HyperPoint p{emb.points[a]};
        const double target = lo * dist[a];
        const double scale = std::sinh(target) / std::sinh(dist[a]);
        emb.points[a] = lift(p.spatial() * scale).coords;
    }
}

// Sup of (1/m) sum sigma_t h(t_t) over the mean-radius-C set, approximated
// from below by projected gradient ascent.
double sup_correlation_draw(int n, int d, double C, const std::vector<Triplet>& triplets,
                            const std::vector<int>& sigma, int opt_budget, std::uint64_t draw_seed) {
    const std::size_t m = triplets.size();
    const double inv_m = 1.0 / static_cast<double>(m);
    double best = -std::numeric_limits<double>::infinity();
    for (int restart = 0; restart < 3; ++restart) {
        Rng rng(derive_seed(draw_seed, "rademacher-restart", static_cast<std::uint64_t>(restart)));
        Embedding emb;
        emb.space = Space::hyperbolic;
        emb.dim = d;
        emb.points.reserve(n);
        const double spread = C * (0.25 + 0.25 * restart);
        for (int a = 0; a < n; ++a) {
            Vec dir = Vec::Zero(1 + d);
            for (int x = 0; x < d; ++x) dir[1 + x] = spread * rng.normal();
            emb.points.push_back(exp_map(TangentVector{base_point(d), dir}).coords);
        }
        project_to_mean_ball(emb, C);

        std::vector<Vec> amb(n, Vec::Zero(1 + d));
        for (int step = 1; step <= opt_budget; ++step) {
            for (auto& g : amb) g.setZero();
            for (std::size_t t = 0; t < m; ++t) {
                const auto& tr = triplets[t];
                const double coeff = sigma[t] * inv_m;
                amb[tr.i] += coeff * (emb.points[tr.k] - emb.points[tr.j]);
                amb[tr.j] -= coeff * emb.points[tr.i];
                amb[tr.k] += coeff * emb.points[tr.i];
            }
            const double lr = 0.5 / std::sqrt(static_cast<double>(step));
            for (int a = 0; a < n; ++a) {
                HyperPoint p{emb.points[a]};
                TangentVector g = project_to_tangent(p, amb[a]);
                g.dir *= lr;  // ascent
                emb.points[a] = exp_map(g).coords;
            }
            project_to_mean_ball(emb, C);
        }
        double value = 0.0;
        for (std::size_t t = 0; t < m; ++t) {
            const auto& tr = triplets[t];
            const double h = -minkowski_inner(emb.points[tr.i], emb.points[tr.j]) +
                             minkowski_inner(emb.points[tr.i], emb.points[tr.k]);
            value += sigma[t] * h;
        }
        best = std::max(best, value * inv_m);
    }
    return best;
}

McEstimate mean_and_stderr(const std::vector<double>& values) {
    const double dn = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= dn;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var = values.size() > 1 ? var / (dn - 1.0) : 0.0;
    return {mean, std::sqrt(var / dn)};
}

template <bool Parallel>
McEstimate rademacher_mc_impl(int n, std::size_t m, double C, int d, int sigma_draws, int opt_budget,
                              std::uint64_t seed) {
    if (n < 3 || n > 12) throw validation_error("estimate_rademacher_mc: supported range is 3 <= n <= 12");
    if (d < 1 || m < 1 || sigma_draws < 1 || opt_budget < 0 || C < 0.0)
        throw validation_error("estimate_rademacher_mc: bad parameters");
    const std::size_t universe = triplet_count(n);
    std::vector<double> values(sigma_draws, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (Parallel)
#endif
    for (int dr = 0; dr < sigma_draws; ++dr) {
        Rng rng(derive_seed(seed, "rademacher-draw", static_cast<std::uint64_t>(dr)));
        std::vector<Triplet> triplets(m);
        std::vector<int> sigma(m);
        for (std::size_t t = 0; t < m; ++t) {
            triplets[t] = unrank_triplet(n, rng.uniform_int(universe));
            sigma[t] = rng.uniform() < 0.5 ? -1 : +1;
        }
        values[dr] = sup_correlation_draw(n, d, C, triplets, sigma, opt_budget,
                                          derive_seed(seed, "rademacher-sup", static_cast<std::uint64_t>(dr)));
    }
    return mean_and_stderr(values);
}

template <bool Parallel>
McEstimate opnorm_mc_impl(int n, std::size_t m, int draws, std::uint64_t seed) {
    if (n < 3) throw validation_error("estimate_comparison_opnorm_mc: need n >= 3");
    if (m < 1 || draws < 1) throw validation_error("estimate_comparison_opnorm_mc: bad parameters");
    const std::size_t universe = triplet_count(n);
    std::vector<double> values(draws, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (Parallel)
#endif
    for (int dr = 0; dr < draws; ++dr) {
        Rng rng(derive_seed(seed, "opnorm-draw", static_cast<std::uint64_t>(dr)));
        Mat sum = Mat::Zero(n, n);
        for (std::size_t t = 0; t < m; ++t) {
            const Triplet tr = unrank_triplet(n, rng.uniform_int(universe));
            const double s = rng.uniform() < 0.5 ? -0.5 : +0.5;
            sum(tr.i, tr.j) -= s;
            sum(tr.j, tr.i) -= s;
            sum(tr.i, tr.k) += s;
            sum(tr.k, tr.i) += s;
        }
        Eigen::SelfAdjointEigenSolver<Mat> es(sum, Eigen::EigenvaluesOnly);
        values[dr] = es.eigenvalues().cwiseAbs().maxCoeff();
    }
    return mean_and_stderr(values);
}

}  // namespace

McEstimate estimate_rademacher_mc(int n, std::size_t m, double C, int d, int sigma_draws,
                                  int opt_budget, std::uint64_t seed) {
    return rademacher_mc_impl<true>(n, m, C, d, sigma_draws, opt_budget, seed);
}

McEstimate estimate_rademacher_mc_serial(int n, std::size_t m, double C, int d, int sigma_draws,
                                         int opt_budget, std::uint64_t seed) {
    return rademacher_mc_impl<false>(n, m, C, d, sigma_draws, opt_budget, seed);
}

McEstimate estimate_comparison_opnorm_mc(int n, std::size_t m, int draws, std::uint64_t seed) {
    return opnorm_mc_impl<true>(n, m, draws, seed);
}

McEstimate estimate_comparison_opnorm_mc_serial(int n, std::size_t m, int draws, std::uint64_t seed) {
    return opnorm_mc_impl<false>(n, m, draws, seed);
}

}  // namespace ordembed
