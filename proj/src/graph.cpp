#include "specround/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "specround/error.hpp"

namespace specround::graph {

using linalg::Matrix;
using linalg::SymMatrix;
using linalg::Vector;

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "vertex count must be nonnegative");
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const Edge& e = edges_[k];
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
      throw Error(ErrorKind::InvalidArgument, "edge " + std::to_string(k) + " has an endpoint out of range");
    }
    if (e.u == e.v) throw Error(ErrorKind::InvalidArgument, "edge " + std::to_string(k) + " is a self-loop");
    if (!std::isfinite(e.weight) || e.weight < 0.0 || !std::isfinite(e.cost) || e.cost < 0.0) {
      throw Error(ErrorKind::InvalidArgument,
                  "edge " + std::to_string(k) + " needs finite nonnegative weight and cost");
    }
  }
}

std::vector<double> Graph::weights() const {
  std::vector<double> w;
  w.reserve(edges_.size());
  for (const auto& e : edges_) w.push_back(e.weight);
  return w;
}

std::vector<double> Graph::costs() const {
  std::vector<double> c;
  c.reserve(edges_.size());
  for (const auto& e : edges_) c.push_back(e.cost);
  return c;
}

Graph Graph::with_weights(const std::vector<double>& w) const {
  if (w.size() != edges_.size()) throw Error(ErrorKind::DimensionError, "one weight per edge required");
  std::vector<Edge> edges = edges_;
  for (std::size_t k = 0; k < edges.size(); ++k) edges[k].weight = w[k];
  return Graph(n_, std::move(edges));
}

std::vector<int> Graph::degrees() const {
  std::vector<int> deg(static_cast<std::size_t>(n_), 0);
  for (const auto& e : edges_) {
    ++deg[static_cast<std::size_t>(e.u)];
    ++deg[static_cast<std::size_t>(e.v)];
  }
  return deg;
}

int Graph::max_degree() const {
  const auto deg = degrees();
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

Vector Graph::incidence(int e) const {
  Vector b = Vector::Zero(n_);
  b(edge(e).u) = 1.0;
  b(edge(e).v) = -1.0;
  return b;
}

Graph complete_graph(int n, double weight, double cost) {
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.push_back({u, v, weight, cost});
  return Graph(n, std::move(edges));
}

Graph path_graph(int n, double weight, double cost) {
  std::vector<Edge> edges;
  for (int u = 0; u + 1 < n; ++u) edges.push_back({u, u + 1, weight, cost});
  return Graph(n, std::move(edges));
}

Graph cycle_graph(int n, double weight, double cost) {
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) edges.push_back({u, (u + 1) % n, weight, cost});
  return Graph(n, std::move(edges));
}

namespace {

SymMatrix signed_laplacian(const Graph& g, const std::vector<double>& w, double off_sign) {
  Matrix m = Matrix::Zero(g.num_vertices(), g.num_vertices());
  for (std::size_t k = 0; k < g.edges().size(); ++k) {
    const Edge& e = g.edges()[k];
    m(e.u, e.u) += w[k];
    m(e.v, e.v) += w[k];
    m(e.u, e.v) += off_sign * w[k];
    m(e.v, e.u) += off_sign * w[k];
  }
  return SymMatrix(m);
}

std::vector<double> effective_weights(const Graph& g, bool use_weights) {
  return use_weights ? g.weights() : std::vector<double>(g.edges().size(), 1.0);
}

}  // namespace

SymMatrix laplacian(const Graph& g, bool use_weights) {
  return signed_laplacian(g, effective_weights(g, use_weights), -1.0);
}

SymMatrix signless_laplacian(const Graph& g, bool use_weights) {
  return signed_laplacian(g, effective_weights(g, use_weights), 1.0);
}

SymMatrix laplacian_of(const Graph& g, const std::vector<double>& z) {
  if (z.size() != g.edges().size()) throw Error(ErrorKind::DimensionError, "one multiplicity per edge required");
  return signed_laplacian(g, z, -1.0);
}

SymMatrix degree_matrix(const Graph& g, bool use_weights) {
  const auto w = effective_weights(g, use_weights);
  std::vector<double> d(static_cast<std::size_t>(g.num_vertices()), 0.0);
  for (std::size_t k = 0; k < g.edges().size(); ++k) {
    d[static_cast<std::size_t>(g.edges()[k].u)] += w[k];
    d[static_cast<std::size_t>(g.edges()[k].v)] += w[k];
  }
  return SymMatrix::diagonal(d);
}

std::vector<int> component_labels(const Graph& g) {
  std::vector<int> parent(static_cast<std::size_t>(g.num_vertices()));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  for (const auto& e : g.edges()) {
    if (e.weight <= 0.0) continue;
    const int a = find(e.u);
    const int b = find(e.v);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
  std::vector<int> label(parent.size());
  for (int v = 0; v < g.num_vertices(); ++v) label[static_cast<std::size_t>(v)] = find(v);
  return label;
}

double effective_resistance(const SymMatrix& lap, int s, int t) {
  if (s == t) return 0.0;
  const SymMatrix pinv = linalg::psd_fn(lap, linalg::PsdFunction::Pinv);
  const Matrix& p = pinv.matrix();
  return p(s, s) + p(t, t) - 2.0 * p(s, t);
}

double effective_resistance(const Graph& g, int s, int t) {
  if (s < 0 || t < 0 || s >= g.num_vertices() || t >= g.num_vertices()) {
    throw Error(ErrorKind::InvalidArgument, "vertex out of range");
  }
  const auto label = component_labels(g);
  if (label[static_cast<std::size_t>(s)] != label[static_cast<std::size_t>(t)]) {
    throw Error(ErrorKind::Disconnected,
                "vertices " + std::to_string(s) + " and " + std::to_string(t) + " are disconnected");
  }
  return effective_resistance(laplacian(g), s, t);
}

double algebraic_connectivity(const Graph& g) {
  if (g.num_vertices() < 2) throw Error(ErrorKind::InvalidArgument, "algebraic connectivity needs n >= 2");
  const auto s = linalg::sym_eig(laplacian(g));
  return std::max(0.0, s.eigenvalues(1));
}

double cut_weight(const Graph& g, const std::vector<bool>& in_set) {
  if (static_cast<int>(in_set.size()) != g.num_vertices()) {
    throw Error(ErrorKind::DimensionError, "membership mask must have one entry per vertex");
  }
  const auto inside = std::count(in_set.begin(), in_set.end(), true);
  if (inside == 0 || inside == g.num_vertices()) {
    throw Error(ErrorKind::InvalidCut, "cut set must be a proper nonempty subset");
  }
  double total = 0.0;
  for (const auto& e : g.edges()) {
    if (in_set[static_cast<std::size_t>(e.u)] != in_set[static_cast<std::size_t>(e.v)]) total += e.weight;
  }
  return total;
}

namespace {

bool next_content_line(std::istream& in, std::string& line, int& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

[[noreturn]] void parse_fail(int lineno, const std::string& what) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": " + what);
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  std::string line;
  int lineno = 0;
  if (!next_content_line(in, line, lineno)) parse_fail(lineno, "missing header \"n m\"");
  long long n = -1, m = -1;
  {
    std::istringstream hs(line);
    std::string extra;
    if (!(hs >> n >> m) || (hs >> extra) || n < 0 || m < 0) parse_fail(lineno, "malformed header, expected \"n m\"");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long k = 0; k < m; ++k) {
    if (!next_content_line(in, line, lineno)) parse_fail(lineno, "expected " + std::to_string(m) + " edges, found " + std::to_string(k));
    std::istringstream ls(line);
    long long u, v;
    double w, c;
    std::string extra;
    if (!(ls >> u >> v >> w >> c) || (ls >> extra)) parse_fail(lineno, "malformed edge line, expected \"u v weight cost\"");
    if (u < 0 || v < 0 || u >= n || v >= n) parse_fail(lineno, "endpoint out of range");
    if (u == v) parse_fail(lineno, "self-loop");
    if (!std::isfinite(w) || w < 0.0 || !std::isfinite(c) || c < 0.0) parse_fail(lineno, "weight and cost must be finite and nonnegative");
    edges.push_back({static_cast<int>(u), static_cast<int>(v), w, c});
  }
  if (next_content_line(in, line, lineno)) parse_fail(lineno, "trailing content after the declared edges");
  return Graph(static_cast<int>(n), std::move(edges));
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  out << std::setprecision(17);
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << ' ' << e.weight << ' ' << e.cost << '\n';
}

}  // namespace specround::graph
