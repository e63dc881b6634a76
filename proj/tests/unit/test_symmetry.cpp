#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "relsense/error.hpp"
#include "relsense/observability.hpp"

using namespace relsense;

namespace {

Graph from_oracle(std::size_t n, const oracle::EdgeList& edges) {
  std::vector<Edge> list;
  for (auto [u, v] : edges) list.push_back({u, v});
  return Graph(n, list);
}

oracle::EdgeList to_oracle(const Graph& g) {
  oracle::EdgeList out;
  for (const Edge& e : g.edges()) out.emplace_back(e.tail, e.head);
  return out;
}

}  // namespace

TEST(Permutation, Validation) {
  EXPECT_THROW(PermutationMatrix({0, 0}), InvalidArgumentError);
  EXPECT_THROW(PermutationMatrix({0, 2}), InvalidArgumentError);
  EXPECT_TRUE(PermutationMatrix({0, 1, 2}).is_identity());
  const Matrix p = PermutationMatrix({1, 2, 0}).to_matrix();
  EXPECT_EQ(p(0, 1), 1.0);
  EXPECT_EQ(p(2, 0), 1.0);
  EXPECT_EQ(p.sum(), 3.0);
}

TEST(Permutation, CommutesWithLaplacianExactly) {
  EXPECT_TRUE(PermutationMatrix({2, 1, 0}).commutes_with_laplacian(make_path(3)));
  EXPECT_FALSE(PermutationMatrix({1, 0, 2}).commutes_with_laplacian(make_path(3)));
  EXPECT_TRUE(PermutationMatrix({1, 2, 0}).commutes_with_laplacian(make_cycle(3)));
}

TEST(Symmetry, PathThree) {
  const auto mid = find_anchor_symmetry(make_path(3), 1);
  ASSERT_EQ(mid.outcome, SymmetryOutcome::Found);
  EXPECT_EQ(mid.permutation->mapping(), (std::vector<std::size_t>{2, 1, 0}));
  EXPECT_EQ(find_anchor_symmetry(make_path(3), 0).outcome, SymmetryOutcome::None);
  EXPECT_EQ(find_anchor_symmetry(make_path(3), 2).outcome, SymmetryOutcome::None);
}

TEST(Symmetry, CycleFourSwapsTheNeighboursOfTheAnchor) {
  const auto r = find_anchor_symmetry(make_cycle(4), 0);
  ASSERT_EQ(r.outcome, SymmetryOutcome::Found);
  EXPECT_EQ(r.permutation->mapping(), (std::vector<std::size_t>{0, 3, 2, 1}));
}

TEST(Symmetry, PathWithTriangleMatchesBruteForce) {
  const Graph g(7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {2, 6}, {6, 3}});
  for (std::size_t a = 0; a < 7; ++a) {
    const bool brute = oracle::brute_force_anchor_symmetric(7, to_oracle(g), a);
    EXPECT_EQ(find_anchor_symmetry(g, a).outcome == SymmetryOutcome::Found, brute) << a;
  }
}

TEST(Symmetry, MatchesBruteForceOnRandomGraphs) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const auto edges = oracle::random_connected_edges(n, 0.25 + 0.1 * (trial % 4), rng);
    const Graph g = from_oracle(n, edges);
    for (std::size_t a = 0; a < n; ++a) {
      const auto r = find_anchor_symmetry(g, a);
      const bool brute = oracle::brute_force_anchor_symmetric(n, edges, a);
      ASSERT_NE(r.outcome, SymmetryOutcome::BudgetExceeded);
      EXPECT_EQ(r.outcome == SymmetryOutcome::Found, brute) << "trial " << trial << " anchor " << a;
      if (r.permutation) {
        EXPECT_FALSE(r.permutation->is_identity());
        EXPECT_EQ((*r.permutation)(a), a);
        EXPECT_TRUE(r.permutation->commutes_with_laplacian(g));
      }
    }
  }
}

TEST(Symmetry, TinyBudgetIsReportedNotGuessed) {
  const auto r = find_anchor_symmetry(make_grid(4, 4), 5, 1);
  EXPECT_EQ(r.outcome, SymmetryOutcome::BudgetExceeded);
  EXPECT_FALSE(r.permutation.has_value());
}

TEST(Symmetry, LargeRegularGraphsStayFast) {
  const auto r = find_anchor_symmetry(make_grid(12, 12), 0);
  ASSERT_EQ(r.outcome, SymmetryOutcome::Found);  // transpose
  EXPECT_TRUE(r.permutation->commutes_with_laplacian(make_grid(12, 12)));
  EXPECT_EQ(find_anchor_symmetry(make_cycle(200), 17).outcome, SymmetryOutcome::Found);
}

TEST(Classify, PathAndTriangle) {
  const auto p = classify_anchors(make_path(3));
  EXPECT_EQ(p.classes, (std::vector<AnchorClass>{AnchorClass::Asymmetric, AnchorClass::Symmetric,
                                                 AnchorClass::Asymmetric}));
  const auto t = classify_anchors(make_complete(3));
  for (auto c : t.classes) EXPECT_EQ(c, AnchorClass::Symmetric);
  for (const auto& perm : t.permutations) ASSERT_TRUE(perm.has_value());
}

TEST(Classify, SymmetricAnchorsAreUnobservable) {
  std::mt19937_64 rng(81);
  int symmetric = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 3 + trial % 8;
    const Graph g = from_oracle(n, oracle::random_connected_edges(n, 0.2, rng));
    const auto cls = classify_anchors(g);
    for (std::size_t a = 0; a < n; ++a) {
      if (cls.classes[a] != AnchorClass::Symmetric) continue;
      ++symmetric;
      EXPECT_FALSE(test_single_anchor_agreement(g, a, Tolerance{}).observable());
    }
  }
  EXPECT_GT(symmetric, 20);
}

TEST(Symmetry, Preconditions) {
  EXPECT_THROW(find_anchor_symmetry(make_path(3), 3), InvalidArgumentError);
  EXPECT_THROW(find_anchor_symmetry(Graph(3, {{0, 1}}), 0), PreconditionError);
}
