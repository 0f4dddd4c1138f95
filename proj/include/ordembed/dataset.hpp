#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ordembed/errors.hpp"

namespace ordembed {

/// A triplet (i, j, k) from the comparison universe T: j < k, k != i != j.
/// Entity ids are 0-based in memory; file formats use 1-based ids.
struct Triplet {
    int i, j, k;
    bool operator==(const Triplet&) const = default;
};

/// |T| = n(n-1)(n-2)/2.
std::size_t triplet_count(int n);

/// All of T in lexicographic order: i ascending, then (j, k) with j < k.
std::vector<Triplet> enumerate_triplets(int n);

/// The idx-th element of enumerate_triplets(n) without materializing the list.
Triplet unrank_triplet(int n, std::size_t idx);

/// Throws validation_error unless (i,j,k) is a member of T for this n.
void validate_triplet(int n, int i, int j, int k);

/// Tree on n vertices with positive edge weights; the graph distance is the
/// true dissimilarity source for the margin-embedding experiments.
struct WeightedTree {
    struct Edge {
        int u, v;
        double w;
    };
    int n = 0;
    std::vector<Edge> edges;

    void validate() const;  // n-1 edges, connected, acyclic, positive weights
};

/// Symmetric nonnegative dissimilarity matrix with zero diagonal. Off-diagonal
/// values over distinct unordered pairs are expected pairwise distinct.
struct Dissimilarity {
    int n = 0;
    Eigen::MatrixXd D;

    void validate() const;
    bool all_pairs_distinct() const;
};

/// Uniform random attachment tree with weights drawn from [weight_min,
/// weight_max] and a small multiplicative jitter. Regenerates (up to 100
/// attempts) until all pairwise path distances are distinct; deterministic
/// per seed.
WeightedTree generate_weighted_tree(int n, std::uint64_t seed, double weight_min, double weight_max);

/// Path-distance matrix of the tree.
Dissimilarity tree_distances(const WeightedTree& tree);

/// Label link: step yields 1/2 + alpha for x > 0 and 1/2 - alpha for x < 0;
/// logistic yields 1/(1 + exp(-x/scale)).
struct LinkFunction {
    enum class Kind { step, logistic };
    Kind kind = Kind::step;
    double param = 0.5;  // alpha for step, scale for logistic

    static LinkFunction make_step(double alpha);
    static LinkFunction make_logistic(double scale);
};

/// P[label = +1 | gap x]. The step link rejects x = 0 (distinct
/// dissimilarities rule it out upstream).
double link_probability(const LinkFunction& link, double x);

/// One ordinal comparison: label +1 means entity i is farther from j than
/// from k (i.e. D(i,j) > D(i,k) under a noiseless link).
struct TripletObservation {
    int i, j, k;
    int label;  // -1 or +1
};

/// m i.i.d. draws: triplet uniform over T, label +1 with probability
/// f(D(i,j) - D(i,k)). Deterministic per seed. Requires n >= 3.
std::vector<TripletObservation> sample_observations(const Dissimilarity& dsim, const LinkFunction& link,
                                                    std::size_t m, std::uint64_t seed);

}  // namespace ordembed
