#pragma once

#include <istream>
#include <string>
#include <vector>

#include "specround/linalg.hpp"

namespace specround::graph {

struct Edge {
  int u = 0;
  int v = 0;
  double weight = 1.0;
  double cost = 0.0;
};

/// Undirected edge list on vertices 0..n-1. Parallel edges are distinct
/// entries; edge order is significant for downstream tie-breaking.
class Graph {
 public:
  Graph() = default;
  Graph(int n, std::vector<Edge> edges);

  int num_vertices() const noexcept { return n_; }
  int num_edges() const noexcept { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(int e) const { return edges_.at(static_cast<std::size_t>(e)); }

  std::vector<double> weights() const;
  std::vector<double> costs() const;
  /// Copy with the edge weights replaced.
  Graph with_weights(const std::vector<double>& w) const;
  /// Unweighted degree (edge count) per vertex.
  std::vector<int> degrees() const;
  int max_degree() const;
  /// Signed incidence vector b_e = chi_u - chi_v.
  linalg::Vector incidence(int e) const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

Graph complete_graph(int n, double weight = 1.0, double cost = 1.0);
Graph path_graph(int n, double weight = 1.0, double cost = 1.0);
Graph cycle_graph(int n, double weight = 1.0, double cost = 1.0);

/// L = D - A. With use_weights off every edge counts with weight 1.
linalg::SymMatrix laplacian(const Graph& g, bool use_weights = true);
/// L+ = D + A (weighted).
linalg::SymMatrix signless_laplacian(const Graph& g, bool use_weights = true);
/// Laplacian of the sub-multigraph given by per-edge multiplicities z.
linalg::SymMatrix laplacian_of(const Graph& g, const std::vector<double>& z);
linalg::SymMatrix degree_matrix(const Graph& g, bool use_weights = true);

/// b_st^T L^+ b_st. Throws Disconnected when s and t lie in different
/// components of the positive-weight subgraph.
double effective_resistance(const Graph& g, int s, int t);
/// Same quantity from a precomputed Laplacian.
double effective_resistance(const linalg::SymMatrix& lap, int s, int t);

/// Second-smallest Laplacian eigenvalue (weighted).
double algebraic_connectivity(const Graph& g);

/// Total weight crossing (S, V \ S); in_set is a per-vertex membership mask.
double cut_weight(const Graph& g, const std::vector<bool>& in_set);

/// Connected components of the subgraph of edges with weight > 0.
std::vector<int> component_labels(const Graph& g);

/// Edge-list text: header "n m", then m lines "u v weight cost". '#' starts
/// a comment. Throws ParseError citing the offending line number.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace specround::graph
