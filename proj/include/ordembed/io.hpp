#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ordembed/dataset.hpp"

namespace ordembed {

struct Embedding;  // embed.hpp

// Tree file: UTF-8 text, one edge per line as "u v weight" with 1-based ids;
// '#' starts a comment, blank lines ignored.
void write_tree(const std::string& path, const WeightedTree& tree);
WeightedTree read_tree(const std::string& path);

// Observation file: CSV with header "t,i,j,k,y"; t is the 1-based draw index.
void write_observations(const std::string& path, const std::vector<TripletObservation>& obs);
std::vector<TripletObservation> read_observations(const std::string& path, int n_hint = 0);

// Embedding file: CSV with header "id,c0,c1,...,cd" (hyperbolic ambient
// coordinates) or "id,c1,...,cd" (Euclidean); ids are 1-based.
void write_embedding(const std::string& path, const Embedding& emb);
Embedding read_embedding(const std::string& path);

// Risk trace: CSV "epoch,empirical_risk" starting at epoch 0 (initialization).
void write_risk_trace(const std::string& path, const std::vector<double>& trace);

// Matrix file: dense CSV, row-major, no header.
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(const std::string& path);

// Round-trip-safe double formatting used by every CSV writer.
std::string format_double(double x);

}  // namespace ordembed
