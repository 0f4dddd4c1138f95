#include "ordembed/gramian.hpp"

#include <cmath>

namespace ordembed {

namespace {

constexpr double kCondTol = 1e-8;

void require_square_pair(const Mat& a, const Mat& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw validation_error("decomposed Gramian: matrices must be square and equally sized");
}

}  // namespace

Mat gramian(const std::vector<Vec>& points) {
    const int n = static_cast<int>(points.size());
    if (n == 0) throw validation_error("gramian: empty point set");
    for (const auto& p : points)
        if (p.size() != points.front().size()) throw validation_error("gramian: dimension mismatch");
    Mat g(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) g(a, b) = g(b, a) = points[a].dot(points[b]);
    return g;
}

NormIdentities euclidean_norm_identities(const std::vector<Vec>& points) {
    if (points.empty()) throw validation_error("euclidean_norm_identities: empty point set");
    double nuclear = 0.0, mx = 0.0;
    for (const auto& p : points) {
        const double d0 = p.norm();  // distance to the origin
        nuclear += d0 * d0;
        mx = std::max(mx, d0 * d0);
    }
    return {nuclear, mx};
}

Mat lorentz_gramian(const Embedding& emb) {
    if (emb.space != Space::hyperbolic) throw validation_error("lorentz_gramian: hyperbolic embedding required");
    const int n = emb.n();
    if (n == 0) throw validation_error("lorentz_gramian: empty embedding");
    for (const auto& p : emb.points)
        if (!HyperPoint{p}.valid(1e-7))
            throw validation_error("lorentz_gramian: point off the hyperboloid");
    Mat h(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) h(a, b) = h(b, a) = minkowski_inner(emb.points[a], emb.points[b]);
    return h;
}

DecomposedGramian coordinate_decompose(const Embedding& emb) {
    if (emb.space != Space::hyperbolic)
        throw validation_error("coordinate_decompose: hyperbolic embedding required");
    const int n = emb.n();
    if (n == 0) throw validation_error("coordinate_decompose: empty embedding");
    Vec time(n);
    Mat spatial(emb.dim, n);
    for (int a = 0; a < n; ++a) {
        time[a] = emb.points[a][0];
        spatial.col(a) = emb.points[a].tail(emb.dim);
    }
    DecomposedGramian dec;
    dec.g_minus = time * time.transpose();
    dec.g_plus = spatial.transpose() * spatial;
    return dec;
}

namespace {

// Rank by relative eigenvalue threshold; exact rank is ill-posed in floating
// point. Returns the count of eigenvalues above 1e-8 * spectral radius and the
// magnitude gap at the cutoff.
struct RankInfo {
    int rank;
    double gap;
};

RankInfo psd_rank(const Eigen::VectorXd& eigs) {
    const double radius = eigs.cwiseAbs().maxCoeff();
    if (radius == 0.0) return {0, 0.0};
    const double thresh = kCondTol * radius;
    int rank = 0;
    double largest_below = 0.0;
    for (Eigen::Index a = 0; a < eigs.size(); ++a) {
        if (eigs[a] > thresh)
            ++rank;
        else
            largest_below = std::max(largest_below, std::abs(eigs[a]));
    }
    return {rank, thresh - largest_below};
}

}  // namespace

ConditionReport check_conditions(const DecomposedGramian& dec, int dim, std::optional<double> R,
                                 std::optional<double> C) {
    require_square_pair(dec.g_minus, dec.g_plus);
    const int n = static_cast<int>(dec.g_minus.rows());
    ConditionReport rep;

    Eigen::SelfAdjointEigenSolver<Mat> es_minus(dec.g_minus, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Mat> es_plus(dec.g_plus, Eigen::EigenvaluesOnly);
    const auto& ev_minus = es_minus.eigenvalues();
    const auto& ev_plus = es_plus.eigenvalues();

    rep.a_minus = {ev_minus.minCoeff() >= -kCondTol, ev_minus.minCoeff()};
    rep.a_plus = {ev_plus.minCoeff() >= -kCondTol, ev_plus.minCoeff()};

    const RankInfo rk_minus = psd_rank(ev_minus);
    const RankInfo rk_plus = psd_rank(ev_plus);
    rep.b_minus = {rk_minus.rank == 1, rk_minus.gap};
    rep.b_plus = {rk_plus.rank <= dim, rk_plus.gap};

    const Mat H = dec.g_plus - dec.g_minus;
    double worst_diag = 0.0;
    for (int a = 0; a < n; ++a) worst_diag = std::max(worst_diag, std::abs(H(a, a) + 1.0));
    rep.c = {worst_diag <= kCondTol, kCondTol - worst_diag};

    const double max_entry = H.maxCoeff();
    rep.d = {max_entry <= -1.0 + kCondTol, -1.0 - max_entry};

    if (R) {
        rep.has_e = true;
        const double cbound = std::cosh(*R) * std::cosh(*R);
        const double sbound = std::sinh(*R) * std::sinh(*R);
        const double tol_c = kCondTol * (1.0 + cbound);
        const double tol_s = kCondTol * (1.0 + cbound);  // same scale; sinh bound can be 0 at R=0
        const double max_minus = dec.g_minus.maxCoeff();
        const double max_plus = dec.g_plus.maxCoeff();
        rep.e_minus = {max_minus <= cbound + tol_c, cbound - max_minus};
        rep.e_plus = {max_plus <= sbound + tol_s, sbound - max_plus};
    }
    if (C) {
        rep.has_f = true;
        const double cbound = static_cast<double>(n) * std::cosh(*C) * std::cosh(*C);
        const double sbound = static_cast<double>(n) * std::sinh(*C) * std::sinh(*C);
        const double tol = kCondTol * (1.0 + cbound);
        // Nuclear norm of a (near-)PSD matrix: sum of absolute eigenvalues.
        const double nuc_minus = ev_minus.cwiseAbs().sum();
        const double nuc_plus = ev_plus.cwiseAbs().sum();
        rep.f_minus = {nuc_minus <= cbound + tol, cbound - nuc_minus};
        rep.f_plus = {nuc_plus <= sbound + tol, sbound - nuc_plus};
    }
    return rep;
}

Embedding reconstruct_points(const Mat& H, int d) {
    if (H.rows() != H.cols() || H.rows() < 1) throw validation_error("reconstruct_points: H must be square");
    if (d < 1) throw validation_error("reconstruct_points: need d >= 1");
    const int n = static_cast<int>(H.rows());
    if (!H.isApprox(H.transpose(), 1e-10))
        throw validation_error("reconstruct_points: H is not symmetric");
    for (int a = 0; a < n; ++a)
        if (std::abs(H(a, a) + 1.0) > kCondTol)
            throw validation_error("reconstruct_points: diagonal must be -1 (condition (c))");

    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    const Eigen::VectorXd eigs = es.eigenvalues();  // ascending
    const double radius = eigs.cwiseAbs().maxCoeff();
    const double thresh = kCondTol * std::max(radius, 1.0);

    int negatives = 0, positives = 0;
    for (int a = 0; a < n; ++a) {
        if (eigs[a] < -thresh) ++negatives;
        if (eigs[a] > thresh) ++positives;
    }
    if (negatives != 1)
        throw validation_error("reconstruct_points: expected exactly one negative eigenvalue, found " +
                               std::to_string(negatives));
    if (positives > d)
        throw validation_error("reconstruct_points: " + std::to_string(positives) +
                               " positive eigenvalues exceed spatial dimension " + std::to_string(d));

    // Time coordinates sqrt(-lambda_-) u with the global sign making them
    // positive; the construction fails on a genuinely mixed-sign eigenvector.
    Vec time = std::sqrt(-eigs[0]) * es.eigenvectors().col(0);
    int pivot = 0;
    for (int a = 1; a < n; ++a)
        if (std::abs(time[a]) > std::abs(time[pivot])) pivot = a;
    if (time[pivot] < 0.0) time = -time;
    for (int a = 0; a < n; ++a)
        if (time[a] <= 0.0)
            throw validation_error("reconstruct_points: mixed-sign time coordinates after sign fix");

    Embedding emb;
    emb.space = Space::hyperbolic;
    emb.dim = d;
    emb.points.assign(n, Vec::Zero(1 + d));
    for (int a = 0; a < n; ++a) emb.points[a][0] = time[a];
    int axis = 0;
    for (int e = n - 1; e >= 0 && eigs[e] > thresh; --e, ++axis) {
        const Vec row = std::sqrt(eigs[e]) * es.eigenvectors().col(e);
        for (int a = 0; a < n; ++a) emb.points[a][1 + axis] = row[a];
    }
    return emb;
}

ComparisonMatrix comparison_matrix(int i, int j, int k, int n) {
    validate_triplet(n, i, j, k);
    return ComparisonMatrix{i, j, k, n};
}

Mat ComparisonMatrix::dense() const {
    Mat m = Mat::Zero(n, n);
    m(i, j) = m(j, i) = -0.5;
    m(i, k) = m(k, i) = +0.5;
    return m;
}

double gramian_empirical_risk(const Mat& H, std::span<const TripletObservation> obs,
                              const LossFunction& loss) {
    if (H.rows() != H.cols()) throw validation_error("gramian_empirical_risk: H must be square");
    if (obs.empty()) throw validation_error("gramian_empirical_risk: empty observation list");
    const int n = static_cast<int>(H.rows());
    double total = 0.0;
    for (const auto& o : obs) {
        validate_triplet(n, o.i, o.j, o.k);
        const double h = -H(o.i, o.j) + H(o.i, o.k);
        total += loss_value(loss, -o.label * h);
    }
    return total / static_cast<double>(obs.size());
}

}  // namespace ordembed
