#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dlgn/types.hpp"

namespace dlgn {

/// Raw contents of an IDX image/label file pair (big-endian, magics
/// 0x00000803 and 0x00000801).
struct IdxImages {
  int count = 0;
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> pixels;  // count * rows * cols
};

struct IdxLabels {
  int count = 0;
  std::vector<std::uint8_t> labels;
};

IdxImages read_idx_images(const std::string& path);
IdxLabels read_idx_labels(const std::string& path);

void write_idx_images(const IdxImages& images, const std::string& path);
void write_idx_labels(const IdxLabels& labels, const std::string& path);

}  // namespace dlgn
