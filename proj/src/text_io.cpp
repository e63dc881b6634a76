#include "relsense/text_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "relsense/error.hpp"

namespace relsense {

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string_view> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view raw = text.substr(pos, end - pos);
    raw = raw.substr(0, raw.find('#'));  // comments run to end of line
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      std::size_t j = i;
      while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
      if (j > i) line.tokens.push_back(raw.substr(i, j - i));
      i = j;
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    pos = end + 1;
  }
  return lines;
}

[[noreturn]] void fail(std::string_view what, std::size_t line, std::string_view detail) {
  std::ostringstream os;
  os << what << ": line " << line << ": " << detail;
  throw ParseError(os.str());
}

std::size_t parse_count(std::string_view token, std::string_view what, std::size_t line) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    fail(what, line, "expected a nonnegative integer, got '" + std::string(token) + "'");
  }
  return value;
}

double parse_real(std::string_view token, std::string_view what, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value)) {
    fail(what, line, "expected a finite real, got '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Graph parse_graph(std::string_view text) {
  constexpr std::string_view what = "graph";
  const auto lines = tokenize(text);
  if (lines.empty()) throw ParseError("graph: empty input");
  const Line& header = lines.front();
  if (header.tokens.size() != 2) fail(what, header.number, "header must be `n m`");
  const std::size_t n = parse_count(header.tokens[0], what, header.number);
  const std::size_t m = parse_count(header.tokens[1], what, header.number);
  if (n == 0) fail(what, header.number, "vertex count must be positive");
  if (lines.size() != m + 1) {
    std::ostringstream os;
    os << "graph: header declares " << m << " edges but " << lines.size() - 1
       << " edge lines follow";
    throw ParseError(os.str());
  }

  std::vector<Edge> edges;
  std::vector<double> weights;
  edges.reserve(m);
  bool weighted = false;
  for (std::size_t k = 0; k < m; ++k) {
    const Line& line = lines[k + 1];
    if (line.tokens.size() != 2 && line.tokens.size() != 3) {
      fail(what, line.number, "edge line must be `tail head [weight]`");
    }
    const bool has_weight = line.tokens.size() == 3;
    if (k == 0) {
      weighted = has_weight;
    } else if (has_weight != weighted) {
      fail(what, line.number, "weights must be given for every edge or for none");
    }
    const std::size_t tail = parse_count(line.tokens[0], what, line.number);
    const std::size_t head = parse_count(line.tokens[1], what, line.number);
    if (tail == 0 || head == 0) fail(what, line.number, "vertices are 1-based");
    edges.push_back({tail - 1, head - 1});
    if (has_weight) weights.push_back(parse_real(line.tokens[2], what, line.number));
  }
  try {
    if (weighted) return Graph(n, std::move(edges), std::move(weights));
    return Graph(n, std::move(edges));
  } catch (const InvalidArgumentError& e) {
    throw ParseError(e.what());
  }
}

std::string format_graph(const Graph& g) {
  std::string out = std::to_string(g.vertex_count()) + " " + std::to_string(g.edge_count()) + "\n";
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    const Edge& e = g.edges()[k];
    out += std::to_string(e.tail + 1) + " " + std::to_string(e.head + 1);
    if (g.has_weights()) out += " " + format_real(g.weight(k));
    out += "\n";
  }
  return out;
}

Matrix parse_matrix(std::string_view text) {
  constexpr std::string_view what = "matrix";
  const auto lines = tokenize(text);
  if (lines.empty()) throw ParseError("matrix: empty input");
  const Line& header = lines.front();
  if (header.tokens.size() != 2) fail(what, header.number, "header must be `rows cols`");
  const std::size_t rows = parse_count(header.tokens[0], what, header.number);
  const std::size_t cols = parse_count(header.tokens[1], what, header.number);
  if (rows == 0 || cols == 0) fail(what, header.number, "dimensions must be positive");

  std::vector<double> entries;
  entries.reserve(rows * cols);
  for (std::size_t l = 1; l < lines.size(); ++l) {
    for (std::string_view token : lines[l].tokens) {
      if (entries.size() == rows * cols) fail(what, lines[l].number, "too many entries");
      entries.push_back(parse_real(token, what, lines[l].number));
    }
  }
  if (entries.size() != rows * cols) {
    std::ostringstream os;
    os << "matrix: expected " << rows * cols << " entries, found " << entries.size();
    throw ParseError(os.str());
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = entries[i * cols + j];
    }
  }
  return m;
}

std::string format_matrix(const Matrix& m) {
  std::string out = std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += " ";
      out += format_real(m(i, j));
    }
    out += "\n";
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

Graph load_graph(const std::filesystem::path& path) { return parse_graph(read_text_file(path)); }

void save_graph(const Graph& g, const std::filesystem::path& path) {
  write_text_file(path, format_graph(g));
}

Matrix load_matrix(const std::filesystem::path& path) {
  return parse_matrix(read_text_file(path));
}

void save_matrix(const Matrix& m, const std::filesystem::path& path) {
  write_text_file(path, format_matrix(m));
}

}  // namespace relsense
