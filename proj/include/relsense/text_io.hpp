#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "relsense/graph.hpp"
#include "relsense/linalg.hpp"

namespace relsense {

// Edge-list format:
//   n m
//   tail head [weight]     (m lines, 1-based vertices)
// Either every edge line has a weight or none does. Weights are written with
// 17 significant digits so that parse(format(g)) == g bit for bit.
// In both text formats '#' starts a comment that runs to the end of the line.
Graph parse_graph(std::string_view text);
std::string format_graph(const Graph& g);
Graph load_graph(const std::filesystem::path& path);
void save_graph(const Graph& g, const std::filesystem::path& path);

// Matrix format: first line `rows cols`, then row-major entries.
Matrix parse_matrix(std::string_view text);
std::string format_matrix(const Matrix& m);
Matrix load_matrix(const std::filesystem::path& path);
void save_matrix(const Matrix& m, const std::filesystem::path& path);

/// Shortest-form-agnostic 17 significant digit rendering ("%.17g").
std::string format_real(double x);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace relsense
