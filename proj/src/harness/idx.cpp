#include "lamina/harness/idx.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>

#include "lamina/errors.hpp"

namespace lamina::harness {

namespace {

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset, const std::string& source,
                        const char* what) {
  if (bytes.size() < offset + 4) throw FormatError(source + ": truncated " + what, bytes.size());
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void check_magic(std::span<const std::uint8_t> bytes, std::uint32_t expected, const std::string& source) {
  const std::uint32_t magic = read_be32(bytes, 0, source, "header");
  if (magic != expected) {
    char buf[64];
    std::snprintf(buf, sizeof buf, ": magic 0x%08x, expected 0x%08x", magic, expected);
    throw FormatError(source + buf, 0);
  }
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

Matrix parse_idx_images(std::span<const std::uint8_t> bytes, const std::string& source) {
  check_magic(bytes, kIdxImagesMagic, source);
  const std::size_t n = read_be32(bytes, 4, source, "image count");
  const std::size_t rows = read_be32(bytes, 8, source, "row count");
  const std::size_t cols = read_be32(bytes, 12, source, "column count");
  const std::size_t width = rows * cols;
  const std::size_t need = 16 + n * width;
  if (bytes.size() < need) {
    throw FormatError(source + ": " + std::to_string(n) + " images need " + std::to_string(need) + " bytes, file has " +
                          std::to_string(bytes.size()),
                      bytes.size());
  }
  Matrix out(n, width);
  auto dst = out.data();
  for (std::size_t i = 0; i < n * width; ++i) dst[i] = bytes[16 + i] / 255.0;
  return out;
}

std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes, const std::string& source) {
  check_magic(bytes, kIdxLabelsMagic, source);
  const std::size_t n = read_be32(bytes, 4, source, "label count");
  if (bytes.size() < 8 + n) {
    throw FormatError(source + ": " + std::to_string(n) + " labels need " + std::to_string(8 + n) + " bytes, file has " +
                          std::to_string(bytes.size()),
                      bytes.size());
  }
  return {bytes.begin() + 8, bytes.begin() + 8 + static_cast<std::ptrdiff_t>(n)};
}

Matrix load_idx_images(const std::filesystem::path& path) {
  return parse_idx_images(read_file(path), path.string());
}

std::vector<std::uint8_t> load_idx_labels(const std::filesystem::path& path) {
  return parse_idx_labels(read_file(path), path.string());
}

LabeledImages load_idx_pair(const std::filesystem::path& images, const std::filesystem::path& labels) {
  LabeledImages out{load_idx_images(images), load_idx_labels(labels)};
  if (out.images.rows() != out.labels.size()) {
    throw FormatError(images.string() + " has " + std::to_string(out.images.rows()) + " images but " +
                          labels.string() + " has " + std::to_string(out.labels.size()) + " labels",
                      4);
  }
  return out;
}

}  // namespace lamina::harness
