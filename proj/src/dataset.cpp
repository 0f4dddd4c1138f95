#include "ordembed/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "ordembed/rng.hpp"

namespace ordembed {

std::size_t triplet_count(int n) {
    if (n < 0) throw validation_error("triplet_count: negative n");
    if (n < 3) return 0;
    const auto un = static_cast<std::size_t>(n);
    return un * (un - 1) * (un - 2) / 2;
}

std::vector<Triplet> enumerate_triplets(int n) {
    std::vector<Triplet> out;
    out.reserve(triplet_count(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            for (int k = j + 1; k < n; ++k) {
                if (k == i) continue;
                out.push_back({i, j, k});
            }
        }
    return out;
}

Triplet unrank_triplet(int n, std::size_t idx) {
    // Each i owns (n-1)(n-2)/2 lexicographic (j, k) pairs over [n] \ {i}.
    const std::size_t per_i = static_cast<std::size_t>(n - 1) * static_cast<std::size_t>(n - 2) / 2;
    if (n < 3 || idx >= triplet_count(n)) throw validation_error("unrank_triplet: index out of range");
    const int i = static_cast<int>(idx / per_i);
    std::size_t r = idx % per_i;
    // Walk j over [n] \ {i}; j contributes (count of valid k > j) pairs.
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        std::size_t cnt = static_cast<std::size_t>(n - 1 - j);
        if (i > j) cnt -= 1;  // k range excludes i when i lies above j
        if (r < cnt) {
            // r-th valid k above j
            int k = j;
            std::size_t seen = 0;
            for (k = j + 1; k < n; ++k) {
                if (k == i) continue;
                if (seen == r) return {i, j, k};
                ++seen;
            }
        }
        r -= cnt;
    }
    throw numeric_error("unrank_triplet: unreachable");
}

void validate_triplet(int n, int i, int j, int k) {
    const bool in_range = i >= 0 && j >= 0 && k >= 0 && i < n && j < n && k < n;
    if (!in_range || !(j < k) || k == i || i == j)
        throw validation_error("triplet (" + std::to_string(i) + "," + std::to_string(j) + "," +
                               std::to_string(k) + ") is not in T for n=" + std::to_string(n));
}

void WeightedTree::validate() const {
    if (n < 1) throw validation_error("WeightedTree: need n >= 1");
    if (edges.size() != static_cast<std::size_t>(n - 1))
        throw validation_error("WeightedTree: a tree on n vertices has n-1 edges");
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : edges) {
        if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n || e.u == e.v)
            throw validation_error("WeightedTree: bad edge endpoints");
        if (!(e.w > 0.0) || !std::isfinite(e.w))
            throw validation_error("WeightedTree: edge weights must be positive and finite");
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    // n-1 edges + connected implies acyclic.
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int visited = 1;
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int v : adj[u])
            if (!seen[v]) {
                seen[v] = 1;
                ++visited;
                q.push(v);
            }
    }
    if (visited != n) throw validation_error("WeightedTree: not connected");
}

void Dissimilarity::validate() const {
    if (n < 1 || D.rows() != n || D.cols() != n)
        throw validation_error("Dissimilarity: matrix must be n x n");
    for (int a = 0; a < n; ++a) {
        if (D(a, a) != 0.0) throw validation_error("Dissimilarity: nonzero diagonal");
        for (int b = a + 1; b < n; ++b) {
            if (D(a, b) != D(b, a)) throw validation_error("Dissimilarity: not symmetric");
            if (!(D(a, b) >= 0.0)) throw validation_error("Dissimilarity: negative entry");
        }
    }
}

bool Dissimilarity::all_pairs_distinct() const {
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) vals.push_back(D(a, b));
    std::sort(vals.begin(), vals.end());
    return std::adjacent_find(vals.begin(), vals.end()) == vals.end();
}

WeightedTree generate_weighted_tree(int n, std::uint64_t seed, double weight_min, double weight_max) {
    if (n < 2) throw validation_error("generate_weighted_tree: need n >= 2");
    if (!(0.0 < weight_min && weight_min < weight_max))
        throw validation_error("generate_weighted_tree: need 0 < weight_min < weight_max");
    for (int attempt = 0; attempt < 100; ++attempt) {
        Rng rng(derive_seed(seed, "gen-tree", static_cast<std::uint64_t>(attempt)));
        WeightedTree tree;
        tree.n = n;
        tree.edges.reserve(n - 1);
        for (int v = 1; v < n; ++v) {
            const int parent = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(v)));
            double w = rng.uniform(weight_min, weight_max);
            w *= 1.0 + rng.uniform() * 1e-6;  // jitter: ties between path sums become measure-zero
            tree.edges.push_back({parent, v, w});
        }
        if (tree_distances(tree).all_pairs_distinct()) return tree;
    }
    throw numeric_error("generate_weighted_tree: distinct path distances not achieved in 100 attempts");
}

Dissimilarity tree_distances(const WeightedTree& tree) {
    tree.validate();
    const int n = tree.n;
    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (const auto& e : tree.edges) {
        adj[e.u].push_back({e.v, e.w});
        adj[e.v].push_back({e.u, e.w});
    }
    Dissimilarity out;
    out.n = n;
    out.D = Eigen::MatrixXd::Zero(n, n);
    // BFS from every source; the path to each vertex is unique.
    for (int src = 0; src < n; ++src) {
        std::vector<char> seen(n, 0);
        std::queue<int> q;
        q.push(src);
        seen[src] = 1;
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            for (const auto& [v, w] : adj[u])
                if (!seen[v]) {
                    seen[v] = 1;
                    out.D(src, v) = out.D(src, u) + w;
                    q.push(v);
                }
        }
    }
    // Symmetrize bit-exactly: accumulate order can differ between directions.
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) out.D(b, a) = out.D(a, b);
    return out;
}

LinkFunction LinkFunction::make_step(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 0.5))
        throw validation_error("step link: alpha must lie in [0, 1/2]");
    return LinkFunction{Kind::step, alpha};
}

LinkFunction LinkFunction::make_logistic(double scale) {
    if (!(scale > 0.0)) throw validation_error("logistic link: scale must be positive");
    return LinkFunction{Kind::logistic, scale};
}

double link_probability(const LinkFunction& link, double x) {
    switch (link.kind) {
        case LinkFunction::Kind::step:
            if (x == 0.0) throw validation_error("step link: undefined at x = 0");
            return x > 0.0 ? 0.5 + link.param : 0.5 - link.param;
        case LinkFunction::Kind::logistic:
            return 1.0 / (1.0 + std::exp(-x / link.param));
    }
    throw validation_error("link_probability: unknown kind");
}

std::vector<TripletObservation> sample_observations(const Dissimilarity& dsim, const LinkFunction& link,
                                                    std::size_t m, std::uint64_t seed) {
    dsim.validate();
    if (dsim.n < 3) throw validation_error("sample_observations: triplet universe is empty for n < 3");
    const std::size_t universe = triplet_count(dsim.n);
    Rng rng(derive_seed(seed, "sample-observations"));
    std::vector<TripletObservation> out;
    out.reserve(m);
    for (std::size_t t = 0; t < m; ++t) {
        const Triplet tr = unrank_triplet(dsim.n, rng.uniform_int(universe));
        const double p = link_probability(link, dsim.D(tr.i, tr.j) - dsim.D(tr.i, tr.k));
        const int label = rng.uniform() < p ? +1 : -1;
        out.push_back({tr.i, tr.j, tr.k, label});
    }
    return out;
}

}  // namespace ordembed
