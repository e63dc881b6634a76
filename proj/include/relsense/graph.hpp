#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "relsense/linalg.hpp"

namespace relsense {

/// Oriented edge between two 0-based vertex indices.
struct Edge {
  std::size_t tail = 0;
  std::size_t head = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  std::size_t vertex = 0;
  double weight = 1.0;
  std::size_t edge = 0;
};

/// Simple graph with per-edge orientation and optional positive weights.
/// Immutable once constructed; every constructor path validates.
class Graph {
 public:
  Graph(std::size_t vertex_count, std::vector<Edge> edges,
        std::optional<std::vector<double>> weights = std::nullopt);

  std::size_t vertex_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  bool has_weights() const noexcept { return weights_.has_value(); }
  /// Weight of edge k, 1.0 for unweighted graphs.
  double weight(std::size_t k) const;
  const std::optional<std::vector<double>>& weights() const noexcept { return weights_; }

  Graph with_weights(std::vector<double> weights) const;
  Graph with_uniform_weight(double w) const;
  Graph without_weights() const;
  /// Copy with every edge whose flag is set reversed.
  Graph with_flipped_edges(const std::vector<bool>& flip) const;

  /// Per-vertex neighbor lists in edge order.
  std::vector<std::vector<Neighbor>> adjacency() const;
  std::vector<std::size_t> degrees() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::optional<std::vector<double>> weights_;
};

/// Non-empty set of distinct 0-based anchor vertices.
class AnchorSet {
 public:
  AnchorSet(std::vector<std::size_t> indices, std::size_t vertex_count);

  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }

 private:
  std::vector<std::size_t> indices_;
};

/// n x |E|; column k is -1 at the tail, +1 at the head.
Matrix incidence_matrix(const Graph& g);

/// Degree minus adjacency; weights are ignored.
Matrix laplacian(const Graph& g);

/// D W D^T. Throws if the graph carries no weights.
Matrix weighted_laplacian(const Graph& g);

bool is_connected(const Graph& g);

/// I_n - R_n with R_n the full cycle shift; row i is e_i - e_{i+1 mod n}.
Matrix cycle_observation_matrix(std::size_t n);

/// (n+1) x n: the cycle observation matrix with the row e_n appended.
Matrix anchored_cycle_matrix(std::size_t n);

/// Indicator rows e_i, one per anchor.
Matrix anchor_rows(const AnchorSet& anchors, std::size_t vertex_count);

enum class GraphFamily { Path, Cycle, Complete, Grid, Star };

// Generated families use tail = lower index; the grid is numbered row-major
// with 4-neighborhood adjacency.
Graph make_path(std::size_t n);
Graph make_cycle(std::size_t n);
Graph make_complete(std::size_t n);
Graph make_grid(std::size_t rows, std::size_t cols);
Graph make_star(std::size_t leaves);

/// `size` is n for path/cycle/complete, rows for grid, leaf count for star;
/// `cols` is used by grid only.
Graph make_family(GraphFamily kind, std::size_t size, std::size_t cols = 0);

}  // namespace relsense
