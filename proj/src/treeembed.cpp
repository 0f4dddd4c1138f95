#include "ordembed/treeembed.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "ordembed/parallel.hpp"
#include "ordembed/stablemath.hpp"

namespace ordembed {

TreeMarginStats tree_margin_stats(const WeightedTree& tree) {
    const Dissimilarity dsim = tree_distances(tree);
    std::vector<double> dist;
    dist.reserve(static_cast<std::size_t>(tree.n) * (tree.n - 1) / 2);
    for (int a = 0; a < tree.n; ++a)
        for (int b = a + 1; b < tree.n; ++b) dist.push_back(dsim.D(a, b));
    TreeMarginStats stats{};
    stats.min_weight = *std::min_element(dist.begin(), dist.end());
    if (dist.size() < 2) {
        stats.min_ratio_gap = 1.0;  // vacuous separation for a single pair
        return stats;
    }
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < dist.size(); ++a)
        for (std::size_t b = a + 1; b < dist.size(); ++b) {
            const double lo = std::min(dist[a], dist[b]), hi = std::max(dist[a], dist[b]);
            gap = std::min(gap, 1.0 - lo / hi);
        }
    if (!(gap > 0.0))
        throw validation_error("tree_margin_stats: path distances are not pairwise distinct");
    stats.min_ratio_gap = gap;
    return stats;
}

namespace treedetail {

TriangleStep hyp_triangle_step(double b, double c, double theta) {
    // cosh a = sin^2(theta/2) cosh(b+c) + cos^2(theta/2) cosh(b-c)
    const double sh = std::sin(0.5 * theta);
    const double ch = std::cos(0.5 * theta);
    const double term_far = sh > 0.0 ? 2.0 * std::log(sh) + log_cosh(b + c)
                                     : -std::numeric_limits<double>::infinity();
    const double term_near = std::abs(ch) > 0.0 ? 2.0 * std::log(std::abs(ch)) + log_cosh(b - c)
                                                : -std::numeric_limits<double>::infinity();
    const double a = acosh_from_log_cosh(log_sum_exp(term_far, term_near));

    // Angle at the far endpoint via 1 - cos(psi), assembled from pieces that
    // avoid the e^{a+c}-scale cancellation:
    //   1 - cos psi = cosh b / (sinh a sinh c) - (coth a coth c - 1)
    double psi;
    if (a == 0.0 || c == 0.0) {
        psi = 0.0;  // degenerate triangle; the caller's next angle fold handles it
    } else {
        const double t2 = std::exp(log_cosh(b) - log_sinh(a) - log_sinh(c));
        auto coth_excess = [](double x) {
            const double e = std::exp(-2.0 * x);
            return 2.0 * e / (1.0 - e);
        };
        const double ua = coth_excess(a), uc = coth_excess(c);
        double omc = t2 - (ua + uc + ua * uc);
        omc = std::clamp(omc, 0.0, 2.0);
        psi = omc <= 1.0 ? 2.0 * std::asin(std::sqrt(0.5 * omc)) : std::acos(1.0 - omc);
    }
    return {a, psi};
}

}  // namespace treedetail

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double wrap_to_pi(double x) {
    x = std::fmod(x, kTwoPi);
    if (x > 3.14159265358979323846) x -= kTwoPi;
    if (x <= -3.14159265358979323846) x += kTwoPi;
    return x;
}

// Canonical rooted view of the tree: rooted at its weighted center, children
// sorted by id. Incident edges of a vertex occupy maximally separated tangent
// slots (parent at angle 0, k-th remaining edge at 2 pi k / degree).
struct RootedLayout {
    int n = 0;
    int root = 0;
    std::vector<int> parent;
    std::vector<double> parent_len;  // scaled edge length to parent
    std::vector<std::vector<int>> children;
    std::vector<int> degree;
    std::vector<int> depth;

    double slot_angle(int v, int towards) const {
        const int deg = degree[v];
        if (towards == parent[v]) return 0.0;
        const auto& ch = children[v];
        const auto pos = std::find(ch.begin(), ch.end(), towards) - ch.begin();
        const int idx = v == root ? static_cast<int>(pos) : static_cast<int>(pos) + 1;
        return kTwoPi * idx / deg;
    }

    std::vector<int> path(int a, int b) const {
        std::vector<int> up_a, up_b;
        int x = a, y = b;
        while (depth[x] > depth[y]) {
            up_a.push_back(x);
            x = parent[x];
        }
        while (depth[y] > depth[x]) {
            up_b.push_back(y);
            y = parent[y];
        }
        while (x != y) {
            up_a.push_back(x);
            x = parent[x];
            up_b.push_back(y);
            y = parent[y];
        }
        up_a.push_back(x);  // lowest common ancestor
        up_a.insert(up_a.end(), up_b.rbegin(), up_b.rend());
        return up_a;
    }
};

RootedLayout build_layout(const WeightedTree& tree, double tau) {
    tree.validate();
    const int n = tree.n;
    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (const auto& e : tree.edges) {
        adj[e.u].push_back({e.v, e.w});
        adj[e.v].push_back({e.u, e.w});
    }
    // Weighted center: vertex minimizing the eccentricity; deterministic
    // tie-break on the id keeps both construction routes on one layout.
    int root = 0;
    if (n > 2) {
        const Dissimilarity d = tree_distances(tree);
        double best = std::numeric_limits<double>::infinity();
        for (int v = 0; v < n; ++v) {
            const double ecc = d.D.row(v).maxCoeff();
            if (ecc < best) {
                best = ecc;
                root = v;
            }
        }
    }
    RootedLayout lay;
    lay.n = n;
    lay.root = root;
    lay.parent.assign(n, -1);
    lay.parent_len.assign(n, 0.0);
    lay.children.assign(n, {});
    lay.degree.assign(n, 0);
    lay.depth.assign(n, 0);
    for (int v = 0; v < n; ++v) {
        lay.degree[v] = static_cast<int>(adj[v].size());
        std::sort(adj[v].begin(), adj[v].end());
    }
    std::queue<int> q;
    q.push(root);
    std::vector<char> seen(n, 0);
    seen[root] = 1;
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (const auto& [v, w] : adj[u])
            if (!seen[v]) {
                seen[v] = 1;
                lay.parent[v] = u;
                lay.parent_len[v] = tau * w;
                lay.depth[v] = lay.depth[u] + 1;
                lay.children[u].push_back(v);
                q.push(v);
            }
    }
    return lay;
}

double walk_pair_distance(const RootedLayout& lay, int a, int b) {
    const auto path = lay.path(a, b);
    auto edge_len = [&](int u, int v) {
        return lay.parent[v] == u ? lay.parent_len[v] : lay.parent_len[u];
    };
    double dist = edge_len(path[0], path[1]);
    double delta = 0.0;  // signed angle of the ray to `a` relative to the arrival ray
    for (std::size_t t = 1; t + 1 < path.size(); ++t) {
        const int v = path[t];
        const double A = lay.slot_angle(v, path[t - 1]);
        const double B = lay.slot_angle(v, path[t + 1]);
        const double phi = wrap_to_pi(A + delta - B);
        const auto step = treedetail::hyp_triangle_step(dist, edge_len(v, path[t + 1]), std::abs(phi));
        // The source stays on the same side of the traversed edge, which flips
        // the sign of its bearing when viewed from the far endpoint.
        delta = phi >= 0.0 ? -step.far_angle : step.far_angle;
        dist = step.side;
    }
    return dist;
}

// Minkowski-orthonormal completion of (p, u) with consistent orientation.
Vec rot90(const Vec& p, const Vec& u) {
    Eigen::Vector3d pe(p[0], p[1], p[2]), ue(u[0], u[1], u[2]);
    Eigen::Vector3d c = pe.cross(ue);
    Vec w(3);
    w << -c[0], c[1], c[2];  // J * (p x u)
    const double nrm = std::sqrt(std::max(0.0, minkowski_inner(w, w)));
    if (nrm == 0.0) throw numeric_error("sarkar_embed: degenerate tangent frame");
    return w / nrm;
}

}  // namespace

std::vector<HyperPoint> sarkar_embed(const WeightedTree& tree, double tau) {
    if (!(tau > 0.0)) throw validation_error("sarkar_embed: tau must be positive");
    const RootedLayout lay = build_layout(tree, tau);
    const int n = tree.n;
    std::vector<HyperPoint> pts(n, base_point(2));
    std::vector<Vec> e1(n), e2(n);
    e1[lay.root] = (Vec(3) << 0, 1, 0).finished();
    e2[lay.root] = (Vec(3) << 0, 0, 1).finished();
    std::queue<int> q;
    q.push(lay.root);
    while (!q.empty()) {
        const int v = q.front();
        q.pop();
        for (int c : lay.children[v]) {
            const double ang = lay.slot_angle(v, c);
            const Vec dir = std::cos(ang) * e1[v] + std::sin(ang) * e2[v];
            const double L = lay.parent_len[c];
            const double chL = std::cosh(L), shL = std::sinh(L);
            Vec qc = chL * pts[v].coords + shL * dir;
            if (!qc.allFinite())
                throw numeric_error(
                    "sarkar_embed: cosh overflow at tau=" + std::to_string(tau) +
                    "; the scaled tree is too deep for ambient coordinates (use the distance route "
                    "or a smaller tree)");
            Vec forward = shL * pts[v].coords + chL * dir;
            pts[c] = lift(qc.tail(2));
            Vec back = project_to_tangent(pts[c], -forward).dir;
            const double bn = std::sqrt(std::max(0.0, minkowski_inner(back, back)));
            if (bn == 0.0 || !back.allFinite())
                throw numeric_error("sarkar_embed: frame overflow at tau=" + std::to_string(tau));
            back /= bn;
            e1[c] = back;
            e2[c] = rot90(pts[c].coords, back);
            q.push(c);
        }
    }
    return pts;
}

Eigen::MatrixXd sarkar_embed_distances(const WeightedTree& tree, double tau) {
    if (!(tau > 0.0)) throw validation_error("sarkar_embed_distances: tau must be positive");
    const RootedLayout lay = build_layout(tree, tau);
    const int n = tree.n;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) out(a, b) = out(b, a) = walk_pair_distance(lay, a, b);
    return out;
}

namespace {

template <class Min>
MarginVerdict verify_margin_impl(const Eigen::MatrixXd& dist, const Dissimilarity& dsim, double margin,
                                 Min&& reduce_min) {
    dsim.validate();
    const int n = dsim.n;
    if (n < 2) throw validation_error("verify_margin: need n >= 2");
    if (dist.rows() != n || dist.cols() != n)
        throw validation_error("verify_margin: distance matrix size mismatch");
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) pairs.push_back({a, b});
    const std::size_t P = pairs.size();

    const MinWitness w = reduce_min(P * P, [&](std::size_t flat) {
        const auto& far = pairs[flat / P];
        const auto& near = pairs[flat % P];
        if (!(dsim.D(far.first, far.second) > dsim.D(near.first, near.second)))
            return std::numeric_limits<double>::infinity();
        return dist(far.first, far.second) - dist(near.first, near.second);
    });

    MarginVerdict verdict;
    if (w.index >= P * P) {  // no comparable ordered pair (n = 2)
        verdict.ok = true;
        verdict.worst_gap = std::numeric_limits<double>::max();
        verdict.witness = {-1, -1, -1, -1};
        return verdict;
    }
    const auto& far = pairs[w.index / P];
    const auto& near = pairs[w.index % P];
    verdict.worst_gap = w.value;
    verdict.ok = w.value > margin;
    verdict.witness = {far.first, far.second, near.first, near.second};
    return verdict;
}

}  // namespace

MarginVerdict verify_margin(const Eigen::MatrixXd& dist, const Dissimilarity& dsim, double margin) {
    return verify_margin_impl(dist, dsim, margin,
                              [](std::size_t c, auto&& f) { return chunked_min(c, f); });
}

MarginVerdict verify_margin_serial(const Eigen::MatrixXd& dist, const Dissimilarity& dsim, double margin) {
    return verify_margin_impl(dist, dsim, margin,
                              [](std::size_t c, auto&& f) { return chunked_min_serial(c, f); });
}

MarginVerdict verify_margin(const std::vector<HyperPoint>& points, const Dissimilarity& dsim,
                            double margin) {
    const int n = static_cast<int>(points.size());
    Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) dist(a, b) = dist(b, a) = hyperbolic_distance(points[a], points[b]);
    return verify_margin(dist, dsim, margin);
}

MarginEmbedding embed_with_margin(const WeightedTree& tree) {
    const TreeMarginStats stats = tree_margin_stats(tree);
    const Dissimilarity dsim = tree_distances(tree);
    const double eps = stats.min_ratio_gap / 3.0;
    double tau = std::max(1.0 / (stats.min_weight * eps), (1.0 + eps) / (stats.min_weight * eps));

    std::string last_failure;
    for (int attempt = 0; attempt < 20; ++attempt, tau *= 2.0) {
        const Eigen::MatrixXd dist = sarkar_embed_distances(tree, tau);

        bool sandwich = true;
        for (int a = 0; a < tree.n && sandwich; ++a)
            for (int b = a + 1; b < tree.n; ++b) {
                const double target = tau * dsim.D(a, b);
                const double d = dist(a, b);
                if (!(d > (1.0 - eps) * target) || d > (1.0 + eps) * target * (1.0 + 1e-12) + 1e-9) {
                    sandwich = false;
                    last_failure = "distortion sandwich violated at pair (" + std::to_string(a + 1) +
                                   "," + std::to_string(b + 1) + ") tau=" + std::to_string(tau);
                    break;
                }
            }
        if (!sandwich) continue;

        const MarginVerdict verdict = verify_margin(dist, dsim, 1.0);
        if (!verdict.ok) {
            last_failure = "worst margin gap " + std::to_string(verdict.worst_gap) +
                           " at tau=" + std::to_string(tau);
            continue;
        }

        MarginEmbedding out;
        out.distances = dist;
        out.scale_tau = tau;
        out.achieved_margin = verdict.worst_gap;
        out.epsilon = eps;
        try {
            out.points = sarkar_embed(tree, tau);
            out.points_representable = true;
        } catch (const numeric_error&) {
            out.points.clear();
            out.points_representable = false;
        }
        return out;
    }
    throw numeric_error("embed_with_margin: margin not achieved after 20 tau doublings (" +
                        last_failure + ")");
}

ZeroRiskCertificate zero_risk_certificate(const WeightedTree& tree, double alpha) {
    if (tree.n < 3) throw validation_error("zero_risk_certificate: need n >= 3");
    const LinkFunction link = LinkFunction::make_step(alpha);
    MarginEmbedding emb = embed_with_margin(tree);
    const double risk = expected_risk_from_distances(emb.distances, tree_distances(tree), link,
                                                     LossFunction::ramp(), Transform::cosh_hoe);
    return {std::move(emb), risk};
}

}  // namespace ordembed
