// Command-line front end: experiment runners and file-format conversions.
// Exit codes: 0 success, 2 validation error, 3 numeric failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "ordembed/experiments.hpp"
#include "ordembed/gramian.hpp"
#include "ordembed/io.hpp"
#include "ordembed/parallel.hpp"
#include "ordembed/rng.hpp"
#include "ordembed/treeembed.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace ordembed;

struct GlobalOpts {
    std::uint64_t seed = 1;
    std::string out = "out.csv";
    int threads = 0;
};

LossFunction parse_loss(const std::string& name) {
    if (name == "hinge") return LossFunction::hinge();
    if (name == "ramp") return LossFunction::ramp();
    throw validation_error("unknown loss '" + name + "' (expected hinge or ramp)");
}

double wall_now() {
#ifdef _OPENMP
    return omp_get_wtime();
#else
    return 0.0;
#endif
}

int run(int argc, char** argv) {
    CLI::App app{"hyperbolic/Euclidean ordinal embedding toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key-value config file; sections named per subcommand");
    app.allow_config_extras(false);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "master seed; all substreams derive from it")->capture_default_str();
    app.add_option("--out", g.out, "output path")->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads (0 = library default)")->capture_default_str();

    // gen-tree
    auto* gen = app.add_subcommand("gen-tree", "generate a random weighted tree (distinct path distances)");
    int gt_n = 10;
    double gt_wmin = 0.5, gt_wmax = 1.5;
    gen->add_option("--n", gt_n, "vertex count")->required();
    gen->add_option("--weight-min", gt_wmin)->capture_default_str();
    gen->add_option("--weight-max", gt_wmax)->capture_default_str();

    // sample
    auto* sample = app.add_subcommand("sample", "sample noisy triplet observations from a tree metric");
    std::string sm_tree;
    std::size_t sm_m = 1000;
    double sm_alpha = -1.0, sm_logistic = 0.0;
    sample->add_option("--tree", sm_tree, "tree file")->required();
    sample->add_option("--m", sm_m, "number of observations")->required();
    sample->add_option("--alpha", sm_alpha, "step link noise level in [0, 1/2]");
    sample->add_option("--logistic-scale", sm_logistic, "logistic link scale (> 0)");

    // fit
    auto* fit = app.add_subcommand("fit", "minimize the empirical risk by (Riemannian) SGD");
    std::string ft_obs, ft_space = "hoe", ft_loss = "hinge", ft_trace;
    int ft_d = 2, ft_n = 0, ft_epochs = 100, ft_batch = 16;
    double ft_R = 2.0, ft_step = 0.05, ft_init = 0.1;
    bool ft_decay = false;
    fit->add_option("--obs", ft_obs, "observation CSV")->required();
    fit->add_option("--space", ft_space, "hoe or eoe")->capture_default_str();
    fit->add_option("--loss", ft_loss, "hinge or ramp")->capture_default_str();
    fit->add_option("--d", ft_d, "embedding dimension")->capture_default_str();
    fit->add_option("--n", ft_n, "entity count (0 = infer from observations)")->capture_default_str();
    fit->add_option("--R", ft_R, "radius restriction")->capture_default_str();
    fit->add_option("--epochs", ft_epochs)->capture_default_str();
    fit->add_option("--batch-size", ft_batch)->capture_default_str();
    fit->add_option("--step-size", ft_step)->capture_default_str();
    fit->add_option("--init-scale", ft_init)->capture_default_str();
    fit->add_flag("--sqrt-decay", ft_decay, "step_size / sqrt(t) schedule");
    fit->add_option("--trace", ft_trace, "risk trace CSV path");

    // bounds
    auto* bounds_cmd = app.add_subcommand("bounds", "evaluate every bound variant over a grid");
    BoundSweepConfig bs;
    bounds_cmd->add_option("--L", bs.L)->capture_default_str();
    bounds_cmd->add_option("--R", bs.R_list, "radius grid")->capture_default_str();
    bounds_cmd->add_option("--n", bs.n_list, "entity-count grid")->capture_default_str();
    bounds_cmd->add_option("--m", bs.m_list, "sample-count grid")->capture_default_str();
    bounds_cmd->add_option("--delta", bs.delta)->capture_default_str();

    // rademacher
    auto* rad = app.add_subcommand("rademacher", "Monte Carlo Rademacher estimate vs analytic bound");
    RademacherConfig rc;
    rad->add_option("--n", rc.n_list)->capture_default_str();
    rad->add_option("--m", rc.m_list)->capture_default_str();
    rad->add_option("--C", rc.C_list)->capture_default_str();
    rad->add_option("--d", rc.d)->capture_default_str();
    rad->add_option("--draws", rc.sigma_draws)->capture_default_str();
    rad->add_option("--budget", rc.opt_budget)->capture_default_str();

    // tree-compare
    auto* tc = app.add_subcommand("tree-compare", "margin certificate vs fitted HOE vs fitted EOE");
    TreeComparisonConfig tcc;
    std::string tc_tree;
    tc->add_option("--tree", tc_tree, "tree file (otherwise generated)");
    tc->add_option("--star-leaves", tcc.star_leaves, "generate a star with this many leaves");
    tc->add_option("--n", tcc.n, "generated tree size")->capture_default_str();
    tc->add_option("--tree-seed", tcc.tree_seed)->capture_default_str();
    tc->add_option("--alpha", tcc.alpha)->capture_default_str();
    tc->add_option("--d", tcc.d)->capture_default_str();
    tc->add_option("--R", tcc.R)->capture_default_str();
    tc->add_option("--restarts", tcc.restarts)->capture_default_str();
    tc->add_option("--iters", tcc.iters)->capture_default_str();
    tc->add_option("--step-size", tcc.step)->capture_default_str();

    // excess-risk
    auto* ex = app.add_subcommand("excess-risk", "measured excess risk vs the radius-form bound");
    ExcessRiskConfig ec;
    std::string ex_loss = "hinge";
    ex->add_option("--n", ec.n)->capture_default_str();
    ex->add_option("--d", ec.d)->capture_default_str();
    ex->add_option("--R", ec.R)->capture_default_str();
    ex->add_option("--alpha", ec.alpha)->capture_default_str();
    ex->add_option("--delta", ec.delta)->capture_default_str();
    ex->add_option("--loss", ex_loss)->capture_default_str();
    ex->add_option("--m", ec.m_list, "observation-count grid")->capture_default_str();
    ex->add_option("--seeds", ec.seeds)->capture_default_str();
    ex->add_option("--tree-seed", ec.tree_seed)->capture_default_str();
    ex->add_flag("--include-eoe", ec.include_eoe, "also fit/report the Euclidean rows");
    ex->add_option("--epochs", ec.fit_epochs)->capture_default_str();
    ex->add_option("--step-size", ec.fit_step)->capture_default_str();
    ex->add_option("--batch-size", ec.fit_batch)->capture_default_str();
    ex->add_option("--xstar-iters", ec.xstar_iters)->capture_default_str();
    ex->add_option("--xstar-restarts", ec.xstar_restarts)->capture_default_str();

    // gram: decompose / check / reconstruct
    auto* gram = app.add_subcommand("gram", "Lorentz Gramian decomposition, checking, reconstruction");
    gram->require_subcommand(1);
    auto* gdec = gram->add_subcommand("decompose", "split a hyperbolic embedding into (G-, G+)");
    std::string gd_emb, gd_minus = "g_minus.csv", gd_plus = "g_plus.csv";
    gdec->add_option("--emb", gd_emb, "hyperbolic embedding CSV")->required();
    gdec->add_option("--out-minus", gd_minus)->capture_default_str();
    gdec->add_option("--out-plus", gd_plus)->capture_default_str();
    auto* gchk = gram->add_subcommand("check", "evaluate decomposition conditions");
    std::string gc_emb, gc_minus, gc_plus;
    int gc_d = 2;
    double gc_R = -1.0, gc_C = -1.0;
    gchk->add_option("--emb", gc_emb, "hyperbolic embedding CSV (decomposed internally)");
    gchk->add_option("--minus", gc_minus, "G- matrix CSV");
    gchk->add_option("--plus", gc_plus, "G+ matrix CSV");
    gchk->add_option("--d", gc_d, "spatial rank budget")->capture_default_str();
    gchk->add_option("--R", gc_R, "check the radius conditions at this R");
    gchk->add_option("--C", gc_C, "check the mean-radius conditions at this C");
    auto* grec = gram->add_subcommand("reconstruct", "rebuild hyperboloid points from a Lorentz Gramian");
    std::string gr_matrix;
    int gr_d = 2;
    grec->add_option("--matrix", gr_matrix, "Lorentz Gramian CSV")->required();
    grec->add_option("--d", gr_d, "spatial dimension")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help/version exit clean; parse errors are validation errors
    }
    set_threads(g.threads);
    const double t0 = wall_now();

    if (*gen) {
        const WeightedTree tree = generate_weighted_tree(gt_n, g.seed, gt_wmin, gt_wmax);
        write_tree(g.out, tree);
        std::cerr << "gen-tree: wrote " << g.out << " (n=" << gt_n << ")\n";
    } else if (*sample) {
        LinkFunction link = LinkFunction::make_step(0.4);
        if (sm_alpha >= 0.0 && sm_logistic > 0.0)
            throw validation_error("sample: choose one of --alpha or --logistic-scale");
        if (sm_alpha >= 0.0)
            link = LinkFunction::make_step(sm_alpha);
        else if (sm_logistic > 0.0)
            link = LinkFunction::make_logistic(sm_logistic);
        else
            throw validation_error("sample: one of --alpha or --logistic-scale is required");
        const Dissimilarity dsim = tree_distances(read_tree(sm_tree));
        write_observations(g.out, sample_observations(dsim, link, sm_m, g.seed));
        std::cerr << "sample: wrote " << g.out << " (m=" << sm_m << ")\n";
    } else if (*fit) {
        const auto obs = read_observations(ft_obs, ft_n);
        int n = ft_n;
        for (const auto& o : obs) n = std::max({n, o.i + 1, o.j + 1, o.k + 1});
        FitConfig fc;
        fc.restriction = BallRestriction::radius(ft_R);
        fc.step_size = ft_step;
        fc.epochs = ft_epochs;
        fc.batch_size = ft_batch;
        fc.init_scale = ft_init;
        fc.sqrt_decay = ft_decay;
        fc.seed = g.seed;
        const LossFunction loss = parse_loss(ft_loss);
        FitResult res;
        if (ft_space == "hoe")
            res = fit_hoe(obs, fc, loss, n, ft_d);
        else if (ft_space == "eoe")
            res = fit_eoe(obs, fc, loss, n, ft_d);
        else
            throw validation_error("fit: --space must be hoe or eoe");
        write_embedding(g.out, res.embedding);
        if (!ft_trace.empty()) write_risk_trace(ft_trace, res.risk_trace);
        std::cerr << "fit: wrote " << g.out;
        if (!res.risk_trace.empty())
            std::cerr << " (final risk " << res.risk_trace.back() << ", best "
                      << *std::min_element(res.risk_trace.begin(), res.risk_trace.end()) << ")";
        std::cerr << "\n";
    } else if (*bounds_cmd) {
        write_bound_sweep_csv(g.out, run_bound_sweep(bs));
        std::cerr << "bounds: wrote " << g.out << "\n";
    } else if (*rad) {
        rc.master_seed = g.seed;
        write_rademacher_csv(g.out, g.seed, run_rademacher_check(rc));
        std::cerr << "rademacher: wrote " << g.out << "\n";
    } else if (*tc) {
        tcc.master_seed = g.seed;
        if (!tc_tree.empty()) {
            tcc.tree = read_tree(tc_tree);
            tcc.tree_given = true;
        }
        write_tree_comparison_csv(g.out, tcc, run_tree_comparison(tcc));
        std::cerr << "tree-compare: wrote " << g.out << "\n";
    } else if (*ex) {
        ec.master_seed = g.seed;
        ec.loss = parse_loss(ex_loss);
        write_excess_risk_csv(g.out, ec, run_excess_risk(ec));
        std::cerr << "excess-risk: wrote " << g.out << "\n";
    } else if (*gram) {
        if (*gdec) {
            const Embedding emb = read_embedding(gd_emb);
            const DecomposedGramian dec = coordinate_decompose(emb);
            write_matrix_csv(gd_minus, dec.g_minus);
            write_matrix_csv(gd_plus, dec.g_plus);
            std::cerr << "gram decompose: wrote " << gd_minus << ", " << gd_plus << "\n";
        } else if (*gchk) {
            DecomposedGramian dec;
            if (!gc_emb.empty()) {
                dec = coordinate_decompose(read_embedding(gc_emb));
            } else if (!gc_minus.empty() && !gc_plus.empty()) {
                dec.g_minus = read_matrix_csv(gc_minus);
                dec.g_plus = read_matrix_csv(gc_plus);
            } else {
                throw validation_error("gram check: need --emb or both --minus and --plus");
            }
            std::optional<double> R, C;
            if (gc_R >= 0.0) R = gc_R;
            if (gc_C >= 0.0) C = gc_C;
            const ConditionReport rep = check_conditions(dec, gc_d, R, C);
            std::ofstream out(g.out);
            if (!out) throw validation_error("cannot open " + g.out);
            out << "condition,ok,slack\n";
            auto line = [&](const char* name, const ConditionCheck& c) {
                out << name << ',' << (c.ok ? 1 : 0) << ',' << format_double(c.slack) << '\n';
            };
            line("a-", rep.a_minus);
            line("a+", rep.a_plus);
            line("b-", rep.b_minus);
            line("b+", rep.b_plus);
            line("c", rep.c);
            line("d", rep.d);
            if (rep.has_e) {
                line("e-", rep.e_minus);
                line("e+", rep.e_plus);
            }
            if (rep.has_f) {
                line("f-", rep.f_minus);
                line("f+", rep.f_plus);
            }
            std::cerr << "gram check: wrote " << g.out << " (core " << (rep.core_ok() ? "ok" : "FAIL")
                      << ")\n";
        } else if (*grec) {
            const Embedding emb = reconstruct_points(read_matrix_csv(gr_matrix), gr_d);
            write_embedding(g.out, emb);
            std::cerr << "gram reconstruct: wrote " << g.out << "\n";
        }
    }
    std::cerr << "done in " << (wall_now() - t0) << " s\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ordembed::validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const ordembed::capacity_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const ordembed::numeric_error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
