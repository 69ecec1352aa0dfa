#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "lamina/matrix.hpp"

namespace lamina::harness {

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

/// Images from an IDX3 byte buffer, one flattened image per row, pixels / 255.
Matrix parse_idx_images(std::span<const std::uint8_t> bytes, const std::string& source = "IDX");
/// Labels from an IDX1 byte buffer.
std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes, const std::string& source = "IDX");

Matrix load_idx_images(const std::filesystem::path& path);
std::vector<std::uint8_t> load_idx_labels(const std::filesystem::path& path);

struct LabeledImages {
  Matrix images;                     // [n, rows·cols] in [0, 1]
  std::vector<std::uint8_t> labels;  // [n]
};

/// Loads an image file and a label file and checks their counts agree.
LabeledImages load_idx_pair(const std::filesystem::path& images, const std::filesystem::path& labels);

}  // namespace lamina::harness
