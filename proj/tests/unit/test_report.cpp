#include <gtest/gtest.h>

#include "json.hpp"
#include "relsense/observability.hpp"
#include "relsense/report.hpp"

using namespace relsense;
using nlohmann::json;

TEST(Report, RankDocument) {
  const LtiSystem sys(Matrix::Zero(3, 3), cycle_observation_matrix(3));
  const json doc = json::parse(report_to_json(test_rank(sys, Tolerance{})));
  EXPECT_EQ(doc["schema"], kReportSchema);
  EXPECT_EQ(doc["method"], "rank");
  EXPECT_EQ(doc["verdict"], "unobservable");
  EXPECT_EQ(doc["certificate"]["kind"], "rank");
  EXPECT_EQ(doc["certificate"]["rank"], 2);
  EXPECT_EQ(doc["certificate"]["rows"], 9);
  EXPECT_EQ(doc["tolerance"]["rank_rel"], 1e-9);
  EXPECT_EQ(doc["tolerance"]["zero_abs"], 1e-8);
  EXPECT_EQ(doc["state_dim"], 3);
  EXPECT_TRUE(doc["diagnostics"].is_array());
}

TEST(Report, WitnessIsOneBasedAndRoundTripsExactly) {
  const auto r = test_single_anchor_agreement(make_path(3), 1, Tolerance{});
  const json doc = json::parse(report_to_json(r));
  const auto& cert = doc["certificate"];
  EXPECT_EQ(cert["kind"], "single-anchor-witness");
  EXPECT_EQ(cert["anchor"], 2);
  EXPECT_EQ(cert["reason"], "zero-component");
  const auto& w = std::get<SingleAnchorWitness>(r.certificate).witness;
  for (int i = 0; i < 3; ++i) EXPECT_EQ(cert["witness"][i].get<double>(), w(i));
}

TEST(Report, PbhAndSpectrumDocuments) {
  Matrix a = Eigen::Vector3d(1, 2, 3).asDiagonal();
  Matrix c(1, 3);
  c << 1, 0, 1;
  const json pbh = json::parse(report_to_json(test_pbh(LtiSystem(a, c), Tolerance{})));
  EXPECT_EQ(pbh["certificate"]["kind"], "pbh");
  EXPECT_EQ(pbh["certificate"]["checks"].size(), 3u);
  EXPECT_NEAR(pbh["certificate"]["failing_eigenvalue"].get<double>(), 2.0, 1e-10);
  c << 1, 1, 1;
  const json ok = json::parse(report_to_json(test_eigenvector(LtiSystem(a, c), Tolerance{})));
  EXPECT_EQ(ok["verdict"], "observable");
  EXPECT_EQ(ok["certificate"]["kind"], "spectrum-checked");
}

TEST(Report, RssDocument) {
  const Graph g = make_cycle(4);
  const json doc = json::parse(report_to_json(test_rss(-laplacian(g), g, Tolerance{})));
  EXPECT_EQ(doc["certificate"]["kind"], "rss");
  EXPECT_EQ(doc["certificate"]["span_test_unobservable"], true);
}

TEST(Report, SymmetryAndClassificationDocuments) {
  const auto sym = find_anchor_symmetry(make_cycle(4), 0);
  const json s = json::parse(symmetry_to_json(sym, 0, 4));
  EXPECT_EQ(s["schema"], kSymmetrySchema);
  EXPECT_EQ(s["outcome"], "found");
  EXPECT_EQ(s["anchor"], 1);
  EXPECT_EQ(s["permutation"], json({1, 4, 3, 2}));

  const json c = json::parse(classification_to_json(classify_anchors(make_path(3))));
  EXPECT_EQ(c["schema"], kClassificationSchema);
  EXPECT_EQ(c["classes"], json({"asymmetric", "symmetric", "asymmetric"}));
  EXPECT_TRUE(c["permutations"][0].is_null());
  EXPECT_EQ(c["permutations"][1], json({3, 2, 1}));
}
