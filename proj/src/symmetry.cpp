// Automorphism search for observation-symmetric anchors.
//
// A non-identity automorphism fixing the anchor has a smallest moved vertex v;
// it fixes every vertex below v. For each candidate v we individualize the
// anchor and all smaller vertices, refine colors to an equitable partition,
// and backtrack over images that stay inside their color cells. The first
// automorphism found in this fixed order is returned.

#include <algorithm>
#include <map>
#include <sstream>
#include <vector>

#include "relsense/error.hpp"
#include "relsense/observability.hpp"

namespace relsense {

namespace {

using Coloring = std::vector<std::size_t>;

// Color refinement: split cells by the multiset of neighbor colors until
// stable. New colors are assigned from sorted signatures, so the result does
// not depend on vertex numbering beyond the initial colors.
Coloring refine(const std::vector<std::vector<std::size_t>>& adj, Coloring colors) {
  const std::size_t n = colors.size();
  std::size_t count = 0;
  {
    std::vector<std::size_t> sorted(colors);
    std::sort(sorted.begin(), sorted.end());
    count = static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
  }
  while (true) {
    std::vector<std::vector<std::size_t>> signature(n);
    for (std::size_t v = 0; v < n; ++v) {
      signature[v].push_back(colors[v]);
      std::vector<std::size_t> nb;
      nb.reserve(adj[v].size());
      for (std::size_t u : adj[v]) nb.push_back(colors[u]);
      std::sort(nb.begin(), nb.end());
      signature[v].insert(signature[v].end(), nb.begin(), nb.end());
    }
    std::map<std::vector<std::size_t>, std::size_t> ids;
    for (const auto& s : signature) ids.emplace(s, 0);
    std::size_t next = 0;
    for (auto& [sig, id] : ids) id = next++;
    Coloring refined(n);
    for (std::size_t v = 0; v < n; ++v) refined[v] = ids.at(signature[v]);
    colors = std::move(refined);
    if (ids.size() == count) return colors;
    count = ids.size();
  }
}

class Search {
 public:
  Search(const Graph& g, std::size_t budget)
      : n_(g.vertex_count()), budget_(budget), adjacent_(n_ * n_, false), adj_(n_) {
    for (const Edge& e : g.edges()) {
      adjacent_[e.tail * n_ + e.head] = true;
      adjacent_[e.head * n_ + e.tail] = true;
      adj_[e.tail].push_back(e.head);
      adj_[e.head].push_back(e.tail);
    }
  }

  SymmetrySearchResult run(std::size_t anchor) {
    SymmetrySearchResult result;
    for (std::size_t v = 0; v < n_; ++v) {
      if (v == anchor) continue;
      Coloring initial(n_, 0);
      // Fixed vertices get unique colors 1..k; free vertices share color 0.
      std::size_t tag = 1;
      initial[anchor] = tag++;
      for (std::size_t u = 0; u < v; ++u) {
        if (u != anchor) initial[u] = tag++;
      }
      colors_ = refine(adj_, initial);

      for (std::size_t w = v + 1; w < n_; ++w) {
        if (w == anchor || colors_[w] != colors_[v]) continue;
        image_.assign(n_, kUnassigned);
        used_.assign(n_, false);
        bool consistent = true;
        for (std::size_t u = 0; u < v; ++u) consistent = consistent && assign(u, u);
        consistent = consistent && assign(anchor, anchor) && assign(v, w);
        if (!consistent) continue;
        const Status st = extend(0);
        if (st == Status::Found) {
          result.outcome = SymmetryOutcome::Found;
          result.permutation = PermutationMatrix(image_);
          result.nodes_explored = explored_;
          return result;
        }
        if (st == Status::OutOfBudget) {
          result.outcome = SymmetryOutcome::BudgetExceeded;
          result.nodes_explored = explored_;
          return result;
        }
      }
    }
    result.outcome = SymmetryOutcome::None;
    result.nodes_explored = explored_;
    return result;
  }

 private:
  enum class Status { Found, Exhausted, OutOfBudget };
  static constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

  // Assigns u -> x if injective, color preserving and edge preserving with
  // respect to every vertex already assigned.
  bool assign(std::size_t u, std::size_t x) {
    if (image_[u] != kUnassigned) return image_[u] == x;
    if (used_[x] || colors_[u] != colors_[x]) return false;
    for (std::size_t p = 0; p < n_; ++p) {
      if (image_[p] == kUnassigned) continue;
      if (adjacent_[u * n_ + p] != adjacent_[x * n_ + image_[p]]) return false;
    }
    image_[u] = x;
    used_[x] = true;
    return true;
  }

  void unassign(std::size_t u) {
    used_[image_[u]] = false;
    image_[u] = kUnassigned;
  }

  Status extend(std::size_t from) {
    std::size_t u = from;
    while (u < n_ && image_[u] != kUnassigned) ++u;
    if (u == n_) return Status::Found;
    for (std::size_t x = 0; x < n_; ++x) {
      if (++explored_ > budget_) return Status::OutOfBudget;
      if (!assign(u, x)) continue;
      const Status st = extend(u + 1);
      if (st != Status::Exhausted) return st;
      unassign(u);
    }
    return Status::Exhausted;
  }

  std::size_t n_;
  std::size_t budget_;
  std::vector<bool> adjacent_;
  std::vector<std::vector<std::size_t>> adj_;
  Coloring colors_;
  std::vector<std::size_t> image_;
  std::vector<bool> used_;
  std::size_t explored_ = 0;
};

Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> integer_laplacian(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> l =
      Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  for (const Edge& e : g.edges()) {
    const auto i = static_cast<Eigen::Index>(e.tail);
    const auto j = static_cast<Eigen::Index>(e.head);
    ++l(i, i);
    ++l(j, j);
    --l(i, j);
    --l(j, i);
  }
  return l;
}

}  // namespace

PermutationMatrix::PermutationMatrix(std::vector<std::size_t> mapping)
    : mapping_(std::move(mapping)) {
  std::vector<bool> hit(mapping_.size(), false);
  for (std::size_t i = 0; i < mapping_.size(); ++i) {
    if (mapping_[i] >= mapping_.size() || hit[mapping_[i]]) {
      throw InvalidArgumentError("permutation: mapping is not a bijection");
    }
    hit[mapping_[i]] = true;
  }
}

bool PermutationMatrix::is_identity() const noexcept {
  for (std::size_t i = 0; i < mapping_.size(); ++i) {
    if (mapping_[i] != i) return false;
  }
  return true;
}

Matrix PermutationMatrix::to_matrix() const {
  const auto n = static_cast<Eigen::Index>(mapping_.size());
  Matrix p = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < mapping_.size(); ++i) {
    p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(mapping_[i])) = 1.0;
  }
  return p;
}

bool PermutationMatrix::commutes_with_laplacian(const Graph& g) const {
  if (g.vertex_count() != mapping_.size()) return false;
  const auto l = integer_laplacian(g);
  const auto n = static_cast<Eigen::Index>(mapping_.size());
  Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> p =
      Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  for (std::size_t i = 0; i < mapping_.size(); ++i) {
    p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(mapping_[i])) = 1;
  }
  return p * l == l * p;
}

SymmetrySearchResult find_anchor_symmetry(const Graph& g, std::size_t anchor,
                                          std::size_t budget) {
  if (anchor >= g.vertex_count()) {
    std::ostringstream os;
    os << "find_anchor_symmetry: anchor " << anchor + 1 << " outside [1, " << g.vertex_count()
       << "]";
    throw InvalidArgumentError(os.str());
  }
  if (!is_connected(g)) throw PreconditionError("find_anchor_symmetry: graph must be connected");

  Search search(g, budget);
  SymmetrySearchResult result = search.run(anchor);
  if (result.permutation) {
    const PermutationMatrix& p = *result.permutation;
    if (p.is_identity() || p(anchor) != anchor || !p.commutes_with_laplacian(g)) {
      throw NumericalError("find_anchor_symmetry: candidate permutation failed verification");
    }
  }
  return result;
}

AnchorClassification classify_anchors(const Graph& g, std::size_t budget) {
  if (!is_connected(g)) throw PreconditionError("classify_anchors: graph must be connected");
  AnchorClassification out;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    SymmetrySearchResult r = find_anchor_symmetry(g, v, budget);
    switch (r.outcome) {
      case SymmetryOutcome::Found:
        out.classes.push_back(AnchorClass::Symmetric);
        break;
      case SymmetryOutcome::None:
        out.classes.push_back(AnchorClass::Asymmetric);
        break;
      case SymmetryOutcome::BudgetExceeded:
        out.classes.push_back(AnchorClass::Undetermined);
        break;
    }
    out.permutations.push_back(std::move(r.permutation));
  }
  return out;
}

}  // namespace relsense
