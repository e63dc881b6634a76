#include "relsense/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>
#include <utility>

#include "relsense/error.hpp"

namespace relsense {

namespace {

void validate_weights(const std::vector<double>& weights, std::size_t edge_count) {
  if (weights.size() != edge_count) {
    std::ostringstream os;
    os << "graph: " << weights.size() << " weights for " << edge_count << " edges";
    throw InvalidArgumentError(os.str());
  }
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (!(weights[k] > 0.0) || !std::isfinite(weights[k])) {
      std::ostringstream os;
      os << "graph: weight of edge " << k + 1 << " must be positive and finite";
      throw InvalidArgumentError(os.str());
    }
  }
}

}  // namespace

Graph::Graph(std::size_t vertex_count, std::vector<Edge> edges,
             std::optional<std::vector<double>> weights)
    : n_(vertex_count), edges_(std::move(edges)), weights_(std::move(weights)) {
  if (n_ == 0) throw InvalidArgumentError("graph: vertex count must be positive");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const Edge& e = edges_[k];
    if (e.tail >= n_ || e.head >= n_) {
      std::ostringstream os;
      os << "graph: edge " << k + 1 << " (" << e.tail + 1 << ", " << e.head + 1
         << ") has an endpoint outside [1, " << n_ << "]";
      throw InvalidArgumentError(os.str());
    }
    if (e.tail == e.head) {
      std::ostringstream os;
      os << "graph: edge " << k + 1 << " is a self-loop at vertex " << e.tail + 1;
      throw InvalidArgumentError(os.str());
    }
    if (!seen.emplace(std::min(e.tail, e.head), std::max(e.tail, e.head)).second) {
      std::ostringstream os;
      os << "graph: duplicate edge {" << e.tail + 1 << ", " << e.head + 1 << "}";
      throw InvalidArgumentError(os.str());
    }
  }
  if (weights_) validate_weights(*weights_, edges_.size());
}

double Graph::weight(std::size_t k) const {
  if (k >= edges_.size()) throw InvalidArgumentError("graph: edge index out of range");
  return weights_ ? (*weights_)[k] : 1.0;
}

Graph Graph::with_weights(std::vector<double> weights) const {
  return Graph(n_, edges_, std::move(weights));
}

Graph Graph::with_uniform_weight(double w) const {
  return with_weights(std::vector<double>(edges_.size(), w));
}

Graph Graph::without_weights() const { return Graph(n_, edges_); }

Graph Graph::with_flipped_edges(const std::vector<bool>& flip) const {
  if (flip.size() != edges_.size()) {
    throw InvalidArgumentError("graph: flip mask length differs from edge count");
  }
  std::vector<Edge> flipped = edges_;
  for (std::size_t k = 0; k < flipped.size(); ++k) {
    if (flip[k]) std::swap(flipped[k].tail, flipped[k].head);
  }
  return Graph(n_, std::move(flipped), weights_);
}

std::vector<std::vector<Neighbor>> Graph::adjacency() const {
  std::vector<std::vector<Neighbor>> adj(n_);
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const double w = weight(k);
    adj[edges_[k].tail].push_back({edges_[k].head, w, k});
    adj[edges_[k].head].push_back({edges_[k].tail, w, k});
  }
  return adj;
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> deg(n_, 0);
  for (const Edge& e : edges_) {
    ++deg[e.tail];
    ++deg[e.head];
  }
  return deg;
}

AnchorSet::AnchorSet(std::vector<std::size_t> indices, std::size_t vertex_count)
    : indices_(std::move(indices)) {
  if (indices_.empty()) throw InvalidArgumentError("anchors: anchor set is empty");
  std::set<std::size_t> seen;
  for (std::size_t i : indices_) {
    if (i >= vertex_count) {
      std::ostringstream os;
      os << "anchors: vertex " << i + 1 << " outside [1, " << vertex_count << "]";
      throw InvalidArgumentError(os.str());
    }
    if (!seen.insert(i).second) {
      std::ostringstream os;
      os << "anchors: vertex " << i + 1 << " listed twice";
      throw InvalidArgumentError(os.str());
    }
  }
}

Matrix incidence_matrix(const Graph& g) {
  Matrix d = Matrix::Zero(static_cast<Eigen::Index>(g.vertex_count()),
                          static_cast<Eigen::Index>(g.edge_count()));
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    const Edge& e = g.edges()[k];
    d(static_cast<Eigen::Index>(e.tail), static_cast<Eigen::Index>(k)) = -1.0;
    d(static_cast<Eigen::Index>(e.head), static_cast<Eigen::Index>(k)) = 1.0;
  }
  return d;
}

namespace {

Matrix assemble_laplacian(const Graph& g, bool use_weights) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  Matrix l = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    const auto i = static_cast<Eigen::Index>(g.edges()[k].tail);
    const auto j = static_cast<Eigen::Index>(g.edges()[k].head);
    const double w = use_weights ? g.weight(k) : 1.0;
    l(i, i) += w;
    l(j, j) += w;
    l(i, j) -= w;
    l(j, i) -= w;
  }
  return l;
}

}  // namespace

Matrix laplacian(const Graph& g) { return assemble_laplacian(g, false); }

Matrix weighted_laplacian(const Graph& g) {
  if (!g.has_weights()) {
    throw PreconditionError("weighted_laplacian: graph carries no edge weights");
  }
  return assemble_laplacian(g, true);
}

bool is_connected(const Graph& g) {
  const auto adj = g.adjacency();
  std::vector<bool> seen(g.vertex_count(), false);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const std::size_t v = frontier.front();
    frontier.pop();
    for (const Neighbor& nb : adj[v]) {
      if (!seen[nb.vertex]) {
        seen[nb.vertex] = true;
        ++reached;
        frontier.push(nb.vertex);
      }
    }
  }
  return reached == g.vertex_count();
}

Matrix cycle_observation_matrix(std::size_t n) {
  if (n < 2) throw InvalidArgumentError("cycle_observation_matrix: n must be at least 2");
  const auto size = static_cast<Eigen::Index>(n);
  Matrix c = Matrix::Identity(size, size);
  for (Eigen::Index i = 0; i < size; ++i) c(i, (i + 1) % size) -= 1.0;
  return c;
}

Matrix anchored_cycle_matrix(std::size_t n) {
  if (n < 2) throw InvalidArgumentError("anchored_cycle_matrix: n must be at least 2");
  const auto size = static_cast<Eigen::Index>(n);
  Matrix c = Matrix::Zero(size + 1, size);
  c.topRows(size) = cycle_observation_matrix(n);
  c(size, size - 1) = 1.0;
  return c;
}

Matrix anchor_rows(const AnchorSet& anchors, std::size_t vertex_count) {
  Matrix rows = Matrix::Zero(static_cast<Eigen::Index>(anchors.size()),
                             static_cast<Eigen::Index>(vertex_count));
  for (std::size_t r = 0; r < anchors.size(); ++r) {
    rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(anchors.indices()[r])) = 1.0;
  }
  return rows;
}

Graph make_path(std::size_t n) {
  if (n < 1) throw InvalidArgumentError("path: n must be positive");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return Graph(n, std::move(edges));
}

Graph make_cycle(std::size_t n) {
  if (n < 3) throw InvalidArgumentError("cycle: n must be at least 3");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  edges.push_back({0, n - 1});
  return Graph(n, std::move(edges));
}

Graph make_complete(std::size_t n) {
  if (n < 1) throw InvalidArgumentError("complete: n must be positive");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) edges.push_back({i, j});
  }
  return Graph(n, std::move(edges));
}

Graph make_grid(std::size_t rows, std::size_t cols) {
  if (rows < 1 || cols < 1) throw InvalidArgumentError("grid: dimensions must be positive");
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t v = r * cols + c;
      if (c + 1 < cols) edges.push_back({v, v + 1});
      if (r + 1 < rows) edges.push_back({v, v + cols});
    }
  }
  return Graph(rows * cols, std::move(edges));
}

Graph make_star(std::size_t leaves) {
  if (leaves < 1) throw InvalidArgumentError("star: leaf count must be positive");
  std::vector<Edge> edges;
  for (std::size_t i = 1; i <= leaves; ++i) edges.push_back({0, i});
  return Graph(leaves + 1, std::move(edges));
}

Graph make_family(GraphFamily kind, std::size_t size, std::size_t cols) {
  switch (kind) {
    case GraphFamily::Path:
      return make_path(size);
    case GraphFamily::Cycle:
      return make_cycle(size);
    case GraphFamily::Complete:
      return make_complete(size);
    case GraphFamily::Grid:
      return make_grid(size, cols);
    case GraphFamily::Star:
      return make_star(size);
  }
  throw InvalidArgumentError("make_family: unknown family");
}

}  // namespace relsense
