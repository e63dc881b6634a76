#pragma once

#include <cstddef>
#include <string>

#include "relsense/observability.hpp"

namespace relsense {

// Report documents are JSON objects tagged with "schema". Vertex indices are
// 1-based. Layout (schema "relsense.report/1"):
//
//   { "schema", "method", "verdict", "state_dim", "output_dim",
//     "tolerance": {"rank_rel", "zero_abs"},
//     "complex_eigenvalue_count", "restricted_to_real_spectrum",
//     "certificate": {"kind": ..., kind-specific fields},
//     "diagnostics": [string...] }
//
// Certificate kinds: "rank", "eigenvector-witness", "spectrum-checked", "pbh",
// "rss", "single-anchor-witness". Symmetry searches use "relsense.symmetry/1"
// and anchor classifications "relsense.classification/1".
inline constexpr const char* kReportSchema = "relsense.report/1";
inline constexpr const char* kSymmetrySchema = "relsense.symmetry/1";
inline constexpr const char* kClassificationSchema = "relsense.classification/1";

std::string report_to_json(const ObservabilityReport& report, int indent = 2);

std::string symmetry_to_json(const SymmetrySearchResult& result, std::size_t anchor,
                             std::size_t vertex_count, int indent = 2);

std::string classification_to_json(const AnchorClassification& result, int indent = 2);

}  // namespace relsense
