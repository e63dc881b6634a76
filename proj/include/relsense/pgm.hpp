#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace relsense {

/// 8-bit grayscale image, row-major.
class GrayscaleImage {
 public:
  GrayscaleImage(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> pixels);
  GrayscaleImage(std::size_t rows, std::size_t cols, std::uint8_t fill = 0);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return pixels_.size(); }
  const std::vector<std::uint8_t>& pixels() const noexcept { return pixels_; }
  std::uint8_t at(std::size_t r, std::size_t c) const { return pixels_.at(r * cols_ + c); }
  void set(std::size_t r, std::size_t c, std::uint8_t value) { pixels_.at(r * cols_ + c) = value; }

  friend bool operator==(const GrayscaleImage&, const GrayscaleImage&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint8_t> pixels_;
};

enum class PgmEncoding { Plain /* P2 */, Binary /* P5 */ };

/// Accepts P2 and P5 with a maximum value of at most 255 and '#' comments in
/// the header. Pixel values are taken as-is (no rescaling to 255).
GrayscaleImage decode_pgm(std::string_view bytes);
std::string encode_pgm(const GrayscaleImage& image, PgmEncoding encoding = PgmEncoding::Binary);

GrayscaleImage load_image(const std::filesystem::path& path);
void save_image(const GrayscaleImage& image, const std::filesystem::path& path,
                PgmEncoding encoding = PgmEncoding::Binary);

}  // namespace relsense
