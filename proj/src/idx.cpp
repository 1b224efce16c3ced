#include "dlgn/idx.hpp"

#include <fstream>
#include <stdexcept>

namespace dlgn {

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

std::uint32_t read_be_u32(std::ifstream& in, const std::string& path) {
  std::uint8_t bytes[4];
  in.read(reinterpret_cast<char*>(bytes), 4);
  if (!in) throw std::runtime_error("idx: truncated header in " + path);
  return (static_cast<std::uint32_t>(bytes[0]) << 24) |
         (static_cast<std::uint32_t>(bytes[1]) << 16) |
         (static_cast<std::uint32_t>(bytes[2]) << 8) |
         static_cast<std::uint32_t>(bytes[3]);
}

void write_be_u32(std::ofstream& out, std::uint32_t v) {
  const std::uint8_t bytes[4] = {
      static_cast<std::uint8_t>(v >> 24), static_cast<std::uint8_t>(v >> 16),
      static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

}  // namespace

IdxImages read_idx_images(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("idx: cannot open " + path);
  const std::uint32_t magic = read_be_u32(in, path);
  if (magic != kImagesMagic)
    throw std::runtime_error("idx: bad image magic in " + path +
                             " (expected 0x00000803)");
  IdxImages images;
  images.count = static_cast<int>(read_be_u32(in, path));
  images.rows = static_cast<int>(read_be_u32(in, path));
  images.cols = static_cast<int>(read_be_u32(in, path));
  const std::size_t total = static_cast<std::size_t>(images.count) *
                            static_cast<std::size_t>(images.rows) *
                            static_cast<std::size_t>(images.cols);
  images.pixels.resize(total);
  in.read(reinterpret_cast<char*>(images.pixels.data()),
          static_cast<std::streamsize>(total));
  if (static_cast<std::size_t>(in.gcount()) != total)
    throw std::runtime_error("idx: truncated image data in " + path);
  return images;
}

IdxLabels read_idx_labels(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("idx: cannot open " + path);
  const std::uint32_t magic = read_be_u32(in, path);
  if (magic != kLabelsMagic)
    throw std::runtime_error("idx: bad label magic in " + path +
                             " (expected 0x00000801)");
  IdxLabels labels;
  labels.count = static_cast<int>(read_be_u32(in, path));
  labels.labels.resize(static_cast<std::size_t>(labels.count));
  in.read(reinterpret_cast<char*>(labels.labels.data()), labels.count);
  if (static_cast<std::size_t>(in.gcount()) !=
      static_cast<std::size_t>(labels.count))
    throw std::runtime_error("idx: truncated label data in " + path);
  return labels;
}

void write_idx_images(const IdxImages& images, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("idx: cannot open " + path + " for write");
  write_be_u32(out, kImagesMagic);
  write_be_u32(out, static_cast<std::uint32_t>(images.count));
  write_be_u32(out, static_cast<std::uint32_t>(images.rows));
  write_be_u32(out, static_cast<std::uint32_t>(images.cols));
  out.write(reinterpret_cast<const char*>(images.pixels.data()),
            static_cast<std::streamsize>(images.pixels.size()));
  if (!out) throw std::runtime_error("idx: write failed for " + path);
}

void write_idx_labels(const IdxLabels& labels, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("idx: cannot open " + path + " for write");
  write_be_u32(out, kLabelsMagic);
  write_be_u32(out, static_cast<std::uint32_t>(labels.count));
  out.write(reinterpret_cast<const char*>(labels.labels.data()),
            static_cast<std::streamsize>(labels.labels.size()));
  if (!out) throw std::runtime_error("idx: write failed for " + path);
}

}  // namespace dlgn
