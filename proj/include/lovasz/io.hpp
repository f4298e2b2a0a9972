#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "lovasz/types.hpp"

namespace lsv::io {

/// Label mask with its raster dimensions, as stored in PGM files.
struct MaskImage {
  int height = 0;
  int width = 0;
  LabelMask labels;  // row-major, one class index per pixel
};

/// Binary PGM (P5, maxval 255); each pixel byte is a class index.
void write_pgm(const std::filesystem::path& path, const LabelMask& labels, int height,
               int width);
MaskImage read_pgm(const std::filesystem::path& path);

/// Raw per-pixel real field: 16-byte header (magic "LSV1", then u32 height,
/// width, channels), followed by height*width*channels little-endian f64.
struct FloatField {
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::uint32_t channels = 0;
  std::vector<double> data;
};

void write_field(const std::filesystem::path& path, const FloatField& field);
FloatField read_field(const std::filesystem::path& path);

/// Minimal CSV dialect used by all emitted tables: no quoting, cells must not
/// contain commas or newlines. parse_csv reads back exactly what to_csv wrote.
using CsvTable = std::vector<std::vector<std::string>>;

std::string to_csv(const CsvTable& table);
CsvTable parse_csv(const std::string& text);

/// Write via a temp file in the same directory, then rename into place.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

}  // namespace lsv::io
