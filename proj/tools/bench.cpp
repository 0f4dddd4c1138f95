// Timing comparison of the OpenMP kernels against their serial reference
// twins. Both sides use the same fixed-chunk reduction, so outputs must be
// bit-identical; the program verifies that while it measures.

#include <cstdio>
#include <cstring>

#include "ordembed/bounds.hpp"
#include "ordembed/embed.hpp"
#include "ordembed/parallel.hpp"
#include "ordembed/rng.hpp"
#include "ordembed/treeembed.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace ordembed;

namespace {

double now() {
#ifdef _OPENMP
    return omp_get_wtime();
#else
    return 0.0;
#endif
}

struct Line {
    const char* name;
    double serial_s;
    double parallel_s;
    bool identical;
};

void print(const Line& l) {
    std::printf("%-28s serial %8.3f s   omp %8.3f s   speedup %5.2fx   identical %s\n", l.name,
                l.serial_s, l.parallel_s, l.serial_s / l.parallel_s, l.identical ? "yes" : "NO");
}

Embedding random_hyperbolic(int n, int d, double R, std::uint64_t seed) {
    Rng rng(seed);
    Embedding emb;
    emb.space = Space::hyperbolic;
    emb.dim = d;
    for (int a = 0; a < n; ++a) {
        Vec dir = Vec::Zero(1 + d);
        for (int x = 0; x < d; ++x) dir[1 + x] = 0.5 * R * rng.normal();
        emb.points.push_back(project_to_ball(exp_map(TangentVector{base_point(d), dir}), R).coords);
    }
    return emb;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif

    {
        const int n = 90;
        const Embedding emb = random_hyperbolic(n, 4, 2.0, 11);
        const WeightedTree tree = generate_weighted_tree(n, 3, 0.5, 1.5);
        const Dissimilarity dsim = tree_distances(tree);
        const LinkFunction link = LinkFunction::make_step(0.4);
        const LossFunction loss = LossFunction::hinge();
        double t = now();
        const double rs = expected_risk_exact_serial(emb, dsim, link, loss, Transform::cosh_hoe);
        const double ts = now() - t;
        t = now();
        const double rp = expected_risk_exact(emb, dsim, link, loss, Transform::cosh_hoe);
        const double tp = now() - t;
        print({"expected_risk_exact n=90", ts, tp, rs == rp});
    }
    {
        const int n = 40;
        const Embedding emb = random_hyperbolic(n, 3, 2.0, 17);
        const Dissimilarity dsim = tree_distances(generate_weighted_tree(n, 5, 0.5, 1.5));
        const auto obs = sample_observations(dsim, LinkFunction::make_step(0.3), 2'000'000, 23);
        const LossFunction loss = LossFunction::hinge();
        double t = now();
        const double rs = empirical_risk_serial(emb, obs, loss, Transform::cosh_hoe);
        const double ts = now() - t;
        t = now();
        const double rp = empirical_risk(emb, obs, loss, Transform::cosh_hoe);
        const double tp = now() - t;
        print({"empirical_risk m=2e6", ts, tp, rs == rp});
    }
    {
        double t = now();
        const McEstimate s = estimate_rademacher_mc_serial(6, 100, 1.0, 2, 64, 60, 31);
        const double ts = now() - t;
        t = now();
        const McEstimate p = estimate_rademacher_mc(6, 100, 1.0, 2, 64, 60, 31);
        const double tp = now() - t;
        print({"rademacher_mc 64 draws", ts, tp, s.estimate == p.estimate && s.stderr_ == p.stderr_});
    }
    {
        const WeightedTree tree = generate_weighted_tree(40, 9, 0.8, 1.6);
        const Dissimilarity dsim = tree_distances(tree);
        const Eigen::MatrixXd dist = sarkar_embed_distances(tree, 2.0);
        double t = now();
        const MarginVerdict s = verify_margin_serial(dist, dsim, 0.0);
        const double ts = now() - t;
        t = now();
        const MarginVerdict p = verify_margin(dist, dsim, 0.0);
        const double tp = now() - t;
        print({"verify_margin n=40", ts, tp,
               s.worst_gap == p.worst_gap && s.witness == p.witness && s.ok == p.ok});
    }
    return 0;
}
