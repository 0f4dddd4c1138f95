#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ordembed/bounds.hpp"
#include "ordembed/dataset.hpp"
#include "ordembed/embed.hpp"

namespace ordembed {

// Batch experiment runners behind the CLI. Every row echoes the full
// parameter set, rows are emitted in canonical order, and all randomness is
// derived from the master seed, so a (config, seed) pair maps to exactly one
// output byte stream regardless of the worker count. Wall-clock timing is
// reported on stderr, never inside the CSVs.

struct ExcessRiskConfig {
    int n = 12;
    int d = 2;
    double R = 2.0;
    double alpha = 0.4;
    double delta = 0.1;
    LossFunction loss = LossFunction::hinge();
    std::vector<std::size_t> m_list{500, 2000};
    int seeds = 10;
    std::uint64_t master_seed = 1;
    std::uint64_t tree_seed = 7;
    double weight_min = 0.5;
    double weight_max = 1.5;
    bool include_eoe = false;
    // optimizer settings
    int fit_epochs = 120;
    double fit_step = 0.08;
    int fit_batch = 16;
    double init_scale = 0.1;
    int xstar_restarts = 3;
    int xstar_iters = 250;
    double xstar_step = 0.5;

    void validate() const;
};

struct ExcessRiskRow {
    std::string space;
    std::size_t m = 0;
    int seed_index = 0;
    double empirical_risk = 0.0;
    double expected_risk = 0.0;
    double xstar_risk = 0.0;
    double excess = 0.0;
    BoundReport bound;
    bool within_bound = false;
    bool failed = false;       // optimizer failure recorded per row, not fatal
    std::string failure;
};

std::vector<ExcessRiskRow> run_excess_risk(const ExcessRiskConfig& cfg);
void write_excess_risk_csv(const std::string& path, const ExcessRiskConfig& cfg,
                           const std::vector<ExcessRiskRow>& rows);

struct BoundSweepConfig {
    double L = 1.0;
    std::vector<double> R_list{1.0};
    std::vector<int> n_list{10};
    std::vector<std::size_t> m_list{1000};
    double delta = 0.1;

    void validate() const;
};

struct BoundSweepRow {
    std::string variant;
    double L, R, C;
    int n;
    std::size_t m;
    double delta;
    double complexity_term, concentration_term, total;
};

/// All bound variants on the grid, plus a ratio pseudo-variant
/// (radius-form HOE total / radius-form EOE total) per grid point.
std::vector<BoundSweepRow> run_bound_sweep(const BoundSweepConfig& cfg);
void write_bound_sweep_csv(const std::string& path, const std::vector<BoundSweepRow>& rows);

struct RademacherConfig {
    std::vector<int> n_list{4, 6, 8};
    std::vector<std::size_t> m_list{50, 200};
    std::vector<double> C_list{0.5, 1.0};
    int d = 2;
    int sigma_draws = 200;
    int opt_budget = 120;
    std::uint64_t master_seed = 1;

    void validate() const;
};

struct RademacherRow {
    int n;
    std::size_t m;
    double C;
    int d;
    int sigma_draws, opt_budget;
    double estimate, stderr_, bound, margin_sigmas;
    bool pass;  // estimate <= bound with >= 3 standard errors of room
};

std::vector<RademacherRow> run_rademacher_check(const RademacherConfig& cfg);
void write_rademacher_csv(const std::string& path, std::uint64_t seed,
                          const std::vector<RademacherRow>& rows);

struct TreeComparisonConfig {
    // Either an explicit tree or a generated one (star when star_leaves > 0).
    WeightedTree tree;
    bool tree_given = false;
    int n = 9;
    int star_leaves = 0;
    std::uint64_t tree_seed = 7;
    double weight_min = 0.9;
    double weight_max = 1.1;

    double alpha = 0.4;
    int d = 2;
    double R = 3.0;
    int restarts = 5;
    int iters = 400;
    double step = 0.5;
    std::uint64_t master_seed = 1;

    void validate() const;
};

struct TreeComparisonRow {
    std::string method;  // "margin_certificate", "hoe_fit", "eoe_fit"
    double expected_ramp_risk;
    bool certificate_ok;
    bool hoe_le_eoe;
};

std::vector<TreeComparisonRow> run_tree_comparison(const TreeComparisonConfig& cfg);
void write_tree_comparison_csv(const std::string& path, const TreeComparisonConfig& cfg,
                               const std::vector<TreeComparisonRow>& rows);

/// Star tree: vertex 0 is the hub, `leaves` spokes with weights near 1 made
/// pairwise distinct by an id-dependent offset.
WeightedTree make_star_tree(int leaves, std::uint64_t seed);

}  // namespace ordembed
