#include "relsense/report.hpp"

#include <json.hpp>

namespace relsense {

namespace {

using nlohmann::json;

json vector_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

json permutation_json(const PermutationMatrix& p) {
  json arr = json::array();
  for (std::size_t image : p.mapping()) arr.push_back(image + 1);
  return arr;
}

json witness_json(const EigenvectorWitness& w) {
  return {{"eigenvalue", w.eigenvalue},
          {"eigenspace_dimension", w.eigenspace_dimension},
          {"witness", vector_json(w.witness)}};
}

struct CertificateVisitor {
  json operator()(const RankCertificate& c) const {
    return {{"kind", "rank"}, {"rank", c.rank}, {"rows", c.rows}, {"cols", c.cols}};
  }
  json operator()(const EigenvectorWitness& c) const {
    json j = witness_json(c);
    j["kind"] = "eigenvector-witness";
    return j;
  }
  json operator()(const SpectrumChecked& c) const {
    return {{"kind", "spectrum-checked"}, {"eigenvalues", c.eigenvalues}};
  }
  json operator()(const PbhCertificate& c) const {
    json checks = json::array();
    for (const PbhCheck& chk : c.checks) {
      checks.push_back({{"eigenvalue", chk.eigenvalue}, {"rank", chk.rank}});
    }
    json j = {{"kind", "pbh"}, {"rows", c.rows}, {"cols", c.cols}, {"checks", checks}};
    if (c.failing) {
      j["failing_eigenvalue"] = c.checks[*c.failing].eigenvalue;
      j["failing_rank"] = c.checks[*c.failing].rank;
    } else {
      j["failing_eigenvalue"] = nullptr;
    }
    return j;
  }
  json operator()(const RssCertificate& c) const {
    json j = {{"kind", "rss"},
              {"span_test_unobservable", c.span_test_unobservable},
              {"span_eigenvalue", c.span_eigenvalue},
              {"span_residual", c.span_residual}};
    j["witness"] = c.witness ? witness_json(*c.witness) : json(nullptr);
    return j;
  }
  json operator()(const SingleAnchorWitness& c) const {
    return {{"kind", "single-anchor-witness"},
            {"reason", c.reason == SingleAnchorReason::ZeroComponent ? "zero-component"
                                                                       : "repeated-eigenvalue"},
            {"anchor", c.anchor + 1},
            {"laplacian_eigenvalue", c.laplacian_eigenvalue},
            {"eigenvalue", -c.laplacian_eigenvalue},
            {"eigenspace_dimension", c.eigenspace_dimension},
            {"witness", vector_json(c.witness)}};
  }
};

}  // namespace

std::string report_to_json(const ObservabilityReport& report, int indent) {
  json j;
  j["schema"] = kReportSchema;
  j["method"] = report.method;
  j["verdict"] = to_string(report.verdict);
  j["state_dim"] = report.state_dim;
  j["output_dim"] = report.output_dim;
  j["tolerance"] = {{"rank_rel", report.tolerance.rank_rel},
                    {"zero_abs", report.tolerance.zero_abs}};
  j["complex_eigenvalue_count"] = report.complex_eigenvalue_count;
  j["restricted_to_real_spectrum"] = report.restricted_to_real_spectrum;
  j["certificate"] = std::visit(CertificateVisitor{}, report.certificate);
  j["diagnostics"] = report.diagnostics;
  return j.dump(indent);
}

std::string symmetry_to_json(const SymmetrySearchResult& result, std::size_t anchor,
                             std::size_t vertex_count, int indent) {
  json j;
  j["schema"] = kSymmetrySchema;
  j["anchor"] = anchor + 1;
  j["vertex_count"] = vertex_count;
  switch (result.outcome) {
    case SymmetryOutcome::Found:
      j["outcome"] = "found";
      break;
    case SymmetryOutcome::None:
      j["outcome"] = "none";
      break;
    case SymmetryOutcome::BudgetExceeded:
      j["outcome"] = "budget-exceeded";
      break;
  }
  j["anchor_class"] = result.outcome == SymmetryOutcome::Found    ? "symmetric"
                      : result.outcome == SymmetryOutcome::None ? "asymmetric"
                                                                : "undetermined";
  j["permutation"] = result.permutation ? permutation_json(*result.permutation) : json(nullptr);
  j["nodes_explored"] = result.nodes_explored;
  return j.dump(indent);
}

std::string classification_to_json(const AnchorClassification& result, int indent) {
  json j;
  j["schema"] = kClassificationSchema;
  j["vertex_count"] = result.classes.size();
  json classes = json::array();
  json perms = json::array();
  for (std::size_t v = 0; v < result.classes.size(); ++v) {
    classes.push_back(to_string(result.classes[v]));
    perms.push_back(result.permutations[v] ? permutation_json(*result.permutations[v])
                                           : json(nullptr));
  }
  j["classes"] = classes;
  j["permutations"] = perms;
  return j.dump(indent);
}

}  // namespace relsense
