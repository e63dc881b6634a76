#include "relsense/pgm.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

#include "relsense/error.hpp"
#include "relsense/text_io.hpp"

namespace relsense {

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  // Skips whitespace and comments, then reads one unsigned decimal field.
  std::size_t next_number(const char* field) {
    skip_separators();
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    if (pos_ == start) throw ParseError(std::string("pgm: missing or malformed ") + field);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(bytes_.data() + start, bytes_.data() + pos_, value);
    if (ec != std::errc()) throw ParseError(std::string("pgm: ") + field + " out of range");
    return value;
  }

  std::size_t position() const noexcept { return pos_; }
  void advance(std::size_t k) { pos_ += k; }

 private:
  void skip_separators() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayscaleImage::GrayscaleImage(std::size_t rows, std::size_t cols,
                               std::vector<std::uint8_t> pixels)
    : rows_(rows), cols_(cols), pixels_(std::move(pixels)) {
  if (rows_ == 0 || cols_ == 0) throw InvalidArgumentError("image: dimensions must be positive");
  if (pixels_.size() != rows_ * cols_) {
    throw InvalidArgumentError("image: pixel count differs from rows * cols");
  }
}

GrayscaleImage::GrayscaleImage(std::size_t rows, std::size_t cols, std::uint8_t fill)
    : GrayscaleImage(rows, cols, std::vector<std::uint8_t>(rows * cols, fill)) {}

GrayscaleImage decode_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
    throw ParseError("pgm: expected magic number P2 or P5");
  }
  const bool binary = bytes[1] == '5';
  HeaderReader reader(bytes);
  reader.advance(2);
  const std::size_t cols = reader.next_number("width");
  const std::size_t rows = reader.next_number("height");
  const std::size_t maxval = reader.next_number("maximum value");
  if (cols == 0 || rows == 0) throw ParseError("pgm: dimensions must be positive");
  if (maxval == 0 || maxval > 255) throw ParseError("pgm: maximum value must lie in [1, 255]");

  const std::size_t count = rows * cols;
  std::vector<std::uint8_t> pixels;
  pixels.reserve(count);
  if (binary) {
    // Exactly one whitespace byte separates the header from the raster.
    std::size_t pos = reader.position();
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
      throw ParseError("pgm: truncated header");
    }
    ++pos;
    if (bytes.size() - pos < count) {
      std::ostringstream os;
      os << "pgm: truncated raster, expected " << count << " bytes, found " << bytes.size() - pos;
      throw ParseError(os.str());
    }
    for (std::size_t k = 0; k < count; ++k) {
      const auto value = static_cast<std::uint8_t>(bytes[pos + k]);
      if (value > maxval) throw ParseError("pgm: pixel exceeds the declared maximum value");
      pixels.push_back(value);
    }
  } else {
    for (std::size_t k = 0; k < count; ++k) {
      std::size_t value = 0;
      try {
        value = reader.next_number("pixel");
      } catch (const ParseError&) {
        std::ostringstream os;
        os << "pgm: truncated or malformed raster at pixel " << k + 1 << " of " << count;
        throw ParseError(os.str());
      }
      if (value > maxval) throw ParseError("pgm: pixel exceeds the declared maximum value");
      pixels.push_back(static_cast<std::uint8_t>(value));
    }
  }
  return GrayscaleImage(rows, cols, std::move(pixels));
}

std::string encode_pgm(const GrayscaleImage& image, PgmEncoding encoding) {
  std::string out = encoding == PgmEncoding::Binary ? "P5\n" : "P2\n";
  out += std::to_string(image.cols()) + " " + std::to_string(image.rows()) + "\n255\n";
  if (encoding == PgmEncoding::Binary) {
    out.append(reinterpret_cast<const char*>(image.pixels().data()), image.pixels().size());
    return out;
  }
  for (std::size_t r = 0; r < image.rows(); ++r) {
    for (std::size_t c = 0; c < image.cols(); ++c) {
      if (c > 0) out += ' ';
      out += std::to_string(image.at(r, c));
    }
    out += '\n';
  }
  return out;
}

GrayscaleImage load_image(const std::filesystem::path& path) {
  return decode_pgm(read_text_file(path));
}

void save_image(const GrayscaleImage& image, const std::filesystem::path& path,
                PgmEncoding encoding) {
  write_text_file(path, encode_pgm(image, encoding));
}

}  // namespace relsense
