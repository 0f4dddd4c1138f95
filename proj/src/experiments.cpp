#include "ordembed/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "ordembed/io.hpp"
#include "ordembed/rng.hpp"
#include "ordembed/treeembed.hpp"

namespace ordembed {

namespace {

std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot open for writing: " + path);
    return out;
}

const char* loss_name(const LossFunction& l) {
    return l.kind == LossFunction::Kind::hinge ? "hinge" : "ramp";
}

}  // namespace

void ExcessRiskConfig::validate() const {
    if (n < 3 || n > 20) throw validation_error("excess-risk: n must lie in [3, 20] (exact expected risk)");
    if (d < 1) throw validation_error("excess-risk: d must be >= 1");
    if (R < 0.0) throw validation_error("excess-risk: R must be >= 0");
    if (!(alpha >= 0.0 && alpha <= 0.5)) throw validation_error("excess-risk: alpha in [0, 1/2]");
    if (!(delta > 0.0 && delta < 1.0)) throw validation_error("excess-risk: delta in (0, 1)");
    if (m_list.empty() || seeds < 1) throw validation_error("excess-risk: need m values and seeds >= 1");
}

std::vector<ExcessRiskRow> run_excess_risk(const ExcessRiskConfig& cfg) {
    cfg.validate();
    const WeightedTree tree = generate_weighted_tree(cfg.n, cfg.tree_seed, cfg.weight_min, cfg.weight_max);
    const Dissimilarity dsim = tree_distances(tree);
    const LinkFunction link = LinkFunction::make_step(cfg.alpha);
    const BallRestriction ball = BallRestriction::radius(cfg.R);

    std::vector<std::string> spaces{"hoe"};
    if (cfg.include_eoe) spaces.push_back("eoe");

    struct Job {
        std::string space;
        std::size_t m;
        int seed_index;
    };
    std::vector<Job> jobs;
    for (const auto& sp : spaces)
        for (std::size_t m : cfg.m_list)
            for (int s = 0; s < cfg.seeds; ++s) jobs.push_back({sp, m, s});

    // The expected-risk minimizer surrogate is shared across seeds of a space.
    FitConfig xcfg;
    xcfg.restriction = ball;
    xcfg.step_size = cfg.xstar_step;
    xcfg.epochs = cfg.xstar_iters;
    xcfg.restarts = cfg.xstar_restarts;
    xcfg.init_scale = cfg.init_scale;
    xcfg.sqrt_decay = true;
    xcfg.seed = derive_seed(cfg.master_seed, "xstar");
    double xstar_hoe = 0.0, xstar_eoe = 0.0;
    {
        const FitResult r = minimize_expected_risk(dsim, link, cfg.loss, Transform::cosh_hoe,
                                                   Space::hyperbolic, ball, xcfg, cfg.d);
        xstar_hoe = expected_risk_exact(r.embedding, dsim, link, cfg.loss, Transform::cosh_hoe);
    }
    if (cfg.include_eoe) {
        const FitResult r = minimize_expected_risk(dsim, link, cfg.loss, Transform::square_eoe,
                                                   Space::euclidean, ball, xcfg, cfg.d);
        xstar_eoe = expected_risk_exact(r.embedding, dsim, link, cfg.loss, Transform::square_eoe);
    }

    std::vector<ExcessRiskRow> rows(jobs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long long ji = 0; ji < static_cast<long long>(jobs.size()); ++ji) {
        const Job& job = jobs[ji];
        ExcessRiskRow row;
        row.space = job.space;
        row.m = job.m;
        row.seed_index = job.seed_index;
        const bool hyper = job.space == "hoe";
        const Transform f = hyper ? Transform::cosh_hoe : Transform::square_eoe;
        try {
            const auto obs = sample_observations(
                dsim, link, job.m,
                derive_seed(cfg.master_seed, "excess-obs", 1000003ULL * job.m + job.seed_index));
            FitConfig fit;
            fit.restriction = ball;
            fit.step_size = cfg.fit_step;
            fit.epochs = cfg.fit_epochs;
            fit.batch_size = cfg.fit_batch;
            fit.init_scale = cfg.init_scale;
            fit.sqrt_decay = true;
            fit.seed = derive_seed(cfg.master_seed, "excess-fit", 1000003ULL * job.m + job.seed_index);
            const FitResult fr = hyper ? fit_hoe(obs, fit, cfg.loss, cfg.n, cfg.d)
                                       : fit_eoe(obs, fit, cfg.loss, cfg.n, cfg.d);
            row.empirical_risk = empirical_risk_serial(fr.embedding, obs, cfg.loss, f);
            row.expected_risk = expected_risk_exact_serial(fr.embedding, dsim, link, cfg.loss, f);
            row.xstar_risk = hyper ? xstar_hoe : xstar_eoe;
            row.excess = row.expected_risk - row.xstar_risk;
            row.bound = hyper ? hoe_excess_bound_radius(cfg.loss.lipschitz_constant(), cfg.R, cfg.n,
                                                        job.m, cfg.delta)
                              : eoe_excess_bound_radius(cfg.loss.lipschitz_constant(), cfg.R, cfg.n,
                                                        job.m, cfg.delta);
            row.within_bound = row.excess <= row.bound.total;
        } catch (const std::exception& e) {
            row.failed = true;
            row.failure = e.what();
        }
        rows[ji] = std::move(row);
    }
    return rows;
}

void write_excess_risk_csv(const std::string& path, const ExcessRiskConfig& cfg,
                           const std::vector<ExcessRiskRow>& rows) {
    auto out = open_csv(path);
    out << "experiment,space,n,d,R,alpha,delta,loss,m,seed,empirical_risk,expected_risk,xstar_risk,"
           "excess_risk,bound_complexity,bound_concentration,bound_total,within_bound,failed\n";
    for (const auto& r : rows) {
        out << "excess-risk," << r.space << ',' << cfg.n << ',' << cfg.d << ','
            << format_double(cfg.R) << ',' << format_double(cfg.alpha) << ','
            << format_double(cfg.delta) << ',' << loss_name(cfg.loss) << ',' << r.m << ','
            << r.seed_index << ',' << format_double(r.empirical_risk) << ','
            << format_double(r.expected_risk) << ',' << format_double(r.xstar_risk) << ','
            << format_double(r.excess) << ',' << format_double(r.bound.complexity_term) << ','
            << format_double(r.bound.concentration_term) << ',' << format_double(r.bound.total) << ','
            << (r.within_bound ? 1 : 0) << ',' << (r.failed ? 1 : 0) << '\n';
    }
}

void BoundSweepConfig::validate() const {
    if (!(L > 0.0)) throw validation_error("bounds: L must be positive");
    if (R_list.empty() || n_list.empty() || m_list.empty())
        throw validation_error("bounds: empty grid");
    if (!(delta > 0.0 && delta < 1.0)) throw validation_error("bounds: delta in (0, 1)");
}

std::vector<BoundSweepRow> run_bound_sweep(const BoundSweepConfig& cfg) {
    cfg.validate();
    std::vector<BoundSweepRow> rows;
    auto push = [&](const BoundReport& rep, double R, double C, int n, std::size_t m) {
        rows.push_back({rep.variant, cfg.L, R, C, n, m, cfg.delta, rep.complexity_term,
                        rep.concentration_term, rep.total});
    };
    for (double R : cfg.R_list)
        for (int n : cfg.n_list)
            for (std::size_t m : cfg.m_list) {
                BoundInputs in;
                in.lipschitz_L = cfg.L;
                in.radius_R = R;
                in.mean_radius_C = R;
                in.loss_range_B = loss_range_hoe(cfg.L, R);
                in.n = n;
                in.m = m;
                in.delta = cfg.delta;
                push(hoe_excess_bound(in, HoeBracketVariant::theorem1), R, R, n, m);
                push(hoe_excess_bound(in, HoeBracketVariant::lemma5_stated), R, R, n, m);
                const BoundReport hoe_r = hoe_excess_bound_radius(cfg.L, R, n, m, cfg.delta);
                push(hoe_r, R, R, n, m);
                push(eoe_excess_bound(cfg.L, static_cast<double>(n) * R * R, R * R, n, m, cfg.delta),
                     R, R, n, m);
                const BoundReport eoe_r = eoe_excess_bound_radius(cfg.L, R, n, m, cfg.delta);
                push(eoe_r, R, R, n, m);
                BoundReport ratio;
                ratio.variant = "hoe_over_eoe_radius_ratio";
                ratio.total = eoe_r.total > 0.0 ? hoe_r.total / eoe_r.total : 0.0;
                push(ratio, R, R, n, m);
            }
    return rows;
}

void write_bound_sweep_csv(const std::string& path, const std::vector<BoundSweepRow>& rows) {
    auto out = open_csv(path);
    out << "variant,L,R,C,n,m,delta,complexity_term,concentration_term,total\n";
    for (const auto& r : rows)
        out << r.variant << ',' << format_double(r.L) << ',' << format_double(r.R) << ','
            << format_double(r.C) << ',' << r.n << ',' << r.m << ',' << format_double(r.delta) << ','
            << format_double(r.complexity_term) << ',' << format_double(r.concentration_term) << ','
            << format_double(r.total) << '\n';
}

void RademacherConfig::validate() const {
    if (n_list.empty() || m_list.empty() || C_list.empty())
        throw validation_error("rademacher: empty grid");
    for (int n : n_list)
        if (n < 3 || n > 12) throw validation_error("rademacher: n must lie in [3, 12]");
    if (sigma_draws < 2 || opt_budget < 1 || d < 1) throw validation_error("rademacher: bad parameters");
}

std::vector<RademacherRow> run_rademacher_check(const RademacherConfig& cfg) {
    cfg.validate();
    std::vector<RademacherRow> rows;
    for (int n : cfg.n_list)
        for (std::size_t m : cfg.m_list)
            for (double C : cfg.C_list) {
                const std::uint64_t seed =
                    derive_seed(cfg.master_seed, "rademacher-grid",
                                static_cast<std::uint64_t>(n) * 1000003ULL + m * 1009ULL +
                                    static_cast<std::uint64_t>(C * 4096.0));
                const McEstimate mc =
                    estimate_rademacher_mc(n, m, C, cfg.d, cfg.sigma_draws, cfg.opt_budget, seed);
                const double bound = rademacher_bound_hoe(C, n, m, HoeBracketVariant::theorem1);
                const double margin =
                    mc.stderr_ > 0.0 ? (bound - mc.estimate) / mc.stderr_
                                     : std::numeric_limits<double>::infinity();
                rows.push_back({n, m, C, cfg.d, cfg.sigma_draws, cfg.opt_budget, mc.estimate,
                                mc.stderr_, bound, margin, margin >= 3.0});
            }
    return rows;
}

void write_rademacher_csv(const std::string& path, std::uint64_t seed,
                          const std::vector<RademacherRow>& rows) {
    auto out = open_csv(path);
    out << "experiment,seed,n,m,C,d,sigma_draws,opt_budget,estimate,stderr,bound,margin_sigmas,pass\n";
    for (const auto& r : rows)
        out << "rademacher," << seed << ',' << r.n << ',' << r.m << ',' << format_double(r.C) << ','
            << r.d << ',' << r.sigma_draws << ',' << r.opt_budget << ','
            << format_double(r.estimate) << ',' << format_double(r.stderr_) << ','
            << format_double(r.bound) << ',' << format_double(r.margin_sigmas) << ','
            << (r.pass ? 1 : 0) << '\n';
}

void TreeComparisonConfig::validate() const {
    if (!tree_given && star_leaves == 0 && n < 3)
        throw validation_error("tree-compare: need a tree, star_leaves, or n >= 3");
    if (!(alpha >= 0.0 && alpha <= 0.5)) throw validation_error("tree-compare: alpha in [0, 1/2]");
    if (d < 1 || R < 0.0 || restarts < 1 || iters < 0) throw validation_error("tree-compare: bad parameters");
}

WeightedTree make_star_tree(int leaves, std::uint64_t seed) {
    if (leaves < 2) throw validation_error("make_star_tree: need at least 2 leaves");
    Rng rng(derive_seed(seed, "star-tree"));
    WeightedTree tree;
    tree.n = leaves + 1;
    for (int l = 1; l <= leaves; ++l) {
        // Distinct spoke weights near 1: deterministic spread plus jitter.
        const double w = 1.0 + 0.01 * l + 1e-4 * rng.uniform();
        tree.edges.push_back({0, l, w});
    }
    if (!tree_distances(tree).all_pairs_distinct())
        throw numeric_error("make_star_tree: jitter failed to separate distances");
    return tree;
}

std::vector<TreeComparisonRow> run_tree_comparison(const TreeComparisonConfig& cfg) {
    cfg.validate();
    WeightedTree tree;
    if (cfg.tree_given)
        tree = cfg.tree;
    else if (cfg.star_leaves > 0)
        tree = make_star_tree(cfg.star_leaves, cfg.tree_seed);
    else
        tree = generate_weighted_tree(cfg.n, cfg.tree_seed, cfg.weight_min, cfg.weight_max);

    const Dissimilarity dsim = tree_distances(tree);
    const LinkFunction link = LinkFunction::make_step(cfg.alpha);
    const LossFunction ramp = LossFunction::ramp();
    const BallRestriction ball = BallRestriction::radius(cfg.R);

    bool cert_ok = true;
    double cert_risk = std::numeric_limits<double>::quiet_NaN();
    try {
        cert_risk = zero_risk_certificate(tree, cfg.alpha).expected_risk;
    } catch (const std::exception&) {
        cert_ok = false;  // comparison of the fitted embeddings is still emitted
    }

    FitConfig mcfg;
    mcfg.restriction = ball;
    mcfg.step_size = cfg.step;
    mcfg.epochs = cfg.iters;
    mcfg.restarts = cfg.restarts;
    mcfg.init_scale = 0.3;
    mcfg.sqrt_decay = true;
    mcfg.seed = derive_seed(cfg.master_seed, "tree-compare");

    const FitResult hoe = minimize_expected_risk(dsim, link, ramp, Transform::cosh_hoe,
                                                 Space::hyperbolic, ball, mcfg, cfg.d);
    const double hoe_risk = expected_risk_exact(hoe.embedding, dsim, link, ramp, Transform::cosh_hoe);
    const FitResult eoe = minimize_expected_risk(dsim, link, ramp, Transform::square_eoe,
                                                 Space::euclidean, ball, mcfg, cfg.d);
    const double eoe_risk = expected_risk_exact(eoe.embedding, dsim, link, ramp, Transform::square_eoe);

    const bool hoe_le_eoe = hoe_risk <= eoe_risk;
    return {{"margin_certificate", cert_risk, cert_ok, hoe_le_eoe},
            {"hoe_fit", hoe_risk, cert_ok, hoe_le_eoe},
            {"eoe_fit", eoe_risk, cert_ok, hoe_le_eoe}};
}

void write_tree_comparison_csv(const std::string& path, const TreeComparisonConfig& cfg,
                               const std::vector<TreeComparisonRow>& rows) {
    auto out = open_csv(path);
    out << "experiment,method,n,d,alpha,R,restarts,iters,expected_ramp_risk,certificate_ok,"
           "hoe_le_eoe\n";
    const int n = cfg.tree_given ? cfg.tree.n : (cfg.star_leaves > 0 ? cfg.star_leaves + 1 : cfg.n);
    for (const auto& r : rows)
        out << "tree-compare," << r.method << ',' << n << ',' << cfg.d << ','
            << format_double(cfg.alpha) << ',' << format_double(cfg.R) << ',' << cfg.restarts << ','
            << cfg.iters << ',' << format_double(r.expected_ramp_risk) << ','
            << (r.certificate_ok ? 1 : 0) << ',' << (r.hoe_le_eoe ? 1 : 0) << '\n';
}

}  // namespace ordembed
