#include "ordembed/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ordembed/embed.hpp"

namespace ordembed {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open for reading: " + path);
    return in;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, const std::string& ctx) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw validation_error("bad numeric field '" + s + "' in " + ctx);
    }
}

int parse_int(const std::string& s, const std::string& ctx) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw validation_error("bad integer field '" + s + "' in " + ctx);
    }
}

}  // namespace

void write_tree(const std::string& path, const WeightedTree& tree) {
    tree.validate();
    auto out = open_out(path);
    out << "# weighted tree: n=" << tree.n << ", one edge per line as 'u v weight' (1-based ids)\n";
    for (const auto& e : tree.edges)
        out << (e.u + 1) << ' ' << (e.v + 1) << ' ' << format_double(e.w) << '\n';
}

WeightedTree read_tree(const std::string& path) {
    auto in = open_in(path);
    WeightedTree tree;
    int max_id = 0;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream row(line);
        int u, v;
        double w;
        if (!(row >> u)) continue;  // blank/comment line
        if (!(row >> v >> w)) throw validation_error("tree file: malformed line '" + line + "'");
        if (u < 1 || v < 1) throw validation_error("tree file: ids are 1-based");
        tree.edges.push_back({u - 1, v - 1, w});
        max_id = std::max({max_id, u, v});
    }
    tree.n = max_id;
    tree.validate();
    return tree;
}

void write_observations(const std::string& path, const std::vector<TripletObservation>& obs) {
    auto out = open_out(path);
    out << "t,i,j,k,y\n";
    for (std::size_t t = 0; t < obs.size(); ++t)
        out << (t + 1) << ',' << (obs[t].i + 1) << ',' << (obs[t].j + 1) << ',' << (obs[t].k + 1)
            << ',' << obs[t].label << '\n';
}

std::vector<TripletObservation> read_observations(const std::string& path, int n_hint) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || split_csv(line) != std::vector<std::string>{"t", "i", "j", "k", "y"})
        throw validation_error("observation file: expected header 't,i,j,k,y'");
    std::vector<TripletObservation> obs;
    int max_id = n_hint;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 5) throw validation_error("observation file: malformed row '" + line + "'");
        TripletObservation o{parse_int(f[1], path) - 1, parse_int(f[2], path) - 1,
                             parse_int(f[3], path) - 1, parse_int(f[4], path)};
        if (o.label != -1 && o.label != 1)
            throw validation_error("observation file: label must be -1 or +1");
        max_id = std::max({max_id, o.i + 1, o.j + 1, o.k + 1});
        obs.push_back(o);
    }
    for (const auto& o : obs) validate_triplet(max_id, o.i, o.j, o.k);
    return obs;
}

void write_embedding(const std::string& path, const Embedding& emb) {
    auto out = open_out(path);
    const int cols = emb.space == Space::hyperbolic ? emb.dim + 1 : emb.dim;
    out << "id";
    for (int c = 0; c < cols; ++c) out << ",c" << (emb.space == Space::hyperbolic ? c : c + 1);
    out << '\n';
    for (int a = 0; a < emb.n(); ++a) {
        out << (a + 1);
        for (int c = 0; c < cols; ++c) out << ',' << format_double(emb.points[a][c]);
        out << '\n';
    }
}

Embedding read_embedding(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw validation_error("embedding file: missing header");
    const auto header = split_csv(line);
    if (header.size() < 2 || header[0] != "id")
        throw validation_error("embedding file: expected header 'id,c0,...' or 'id,c1,...'");
    Embedding emb;
    emb.space = header[1] == "c0" ? Space::hyperbolic : Space::euclidean;
    const int cols = static_cast<int>(header.size()) - 1;
    emb.dim = emb.space == Space::hyperbolic ? cols - 1 : cols;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (static_cast<int>(f.size()) != cols + 1)
            throw validation_error("embedding file: malformed row '" + line + "'");
        Vec p(cols);
        for (int c = 0; c < cols; ++c) p[c] = parse_double(f[c + 1], path);
        emb.points.push_back(std::move(p));
    }
    emb.validate();
    return emb;
}

void write_risk_trace(const std::string& path, const std::vector<double>& trace) {
    auto out = open_out(path);
    out << "epoch,empirical_risk\n";
    for (std::size_t e = 0; e < trace.size(); ++e) out << e << ',' << format_double(trace[e]) << '\n';
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
    auto out = open_out(path);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << ',';
            out << format_double(m(r, c));
        }
        out << '\n';
    }
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
    auto in = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        std::vector<double> row;
        row.reserve(f.size());
        for (const auto& s : f) row.push_back(parse_double(s, path));
        if (!rows.empty() && rows.front().size() != row.size())
            throw validation_error("matrix file: ragged rows in " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw validation_error("matrix file: empty " + path);
    Eigen::MatrixXd m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    return m;
}

}  // namespace ordembed
