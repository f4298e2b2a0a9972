#include "lovasz/io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace lsv::io {

namespace {

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open for writing: " + tmp.string());
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for reading: " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Skips PGM whitespace and '#' comment lines, then parses a decimal token.
int next_pgm_int(const std::string& bytes, std::size_t& pos) {
  while (pos < bytes.size()) {
    const char ch = bytes[pos];
    if (ch == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
      ++pos;
    } else {
      break;
    }
  }
  int value = 0;
  bool any = false;
  while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
    value = value * 10 + (bytes[pos] - '0');
    any = true;
    ++pos;
  }
  if (!any) throw std::runtime_error("malformed PGM header");
  return value;
}

template <typename T>
void append_le(std::string& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(buf, buf + sizeof(T));
  out.append(buf, sizeof(T));
}

template <typename T>
T read_le(const std::string& bytes, std::size_t offset) {
  char buf[sizeof(T)];
  std::memcpy(buf, bytes.data() + offset, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(buf, buf + sizeof(T));
  T value;
  std::memcpy(&value, buf, sizeof(T));
  return value;
}

}  // namespace

void write_pgm(const std::filesystem::path& path, const LabelMask& labels, int height,
               int width) {
  require(height > 0 && width > 0, "write_pgm: dimensions must be positive");
  require(labels.size() == static_cast<std::size_t>(height) * static_cast<std::size_t>(width),
          "write_pgm: label count does not match dimensions");
  std::string bytes = "P5\n" + std::to_string(width) + " " + std::to_string(height) +
                      "\n255\n";
  bytes.reserve(bytes.size() + labels.size());
  for (int label : labels) {
    require(label >= 0 && label <= 255, "write_pgm: label outside [0,255]");
    bytes.push_back(static_cast<char>(static_cast<unsigned char>(label)));
  }
  write_file_atomic(path, bytes);
}

MaskImage read_pgm(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
    throw std::runtime_error("not a P5 PGM file: " + path.string());
  std::size_t pos = 2;
  MaskImage img;
  img.width = next_pgm_int(bytes, pos);
  img.height = next_pgm_int(bytes, pos);
  const int maxval = next_pgm_int(bytes, pos);
  if (maxval <= 0 || maxval > 255)
    throw std::runtime_error("unsupported PGM maxval in " + path.string());
  ++pos;  // single whitespace byte after maxval
  const std::size_t count =
      static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
  if (bytes.size() - pos < count)
    throw std::runtime_error("truncated PGM data in " + path.string());
  img.labels.resize(count);
  for (std::size_t i = 0; i < count; ++i)
    img.labels[i] = static_cast<unsigned char>(bytes[pos + i]);
  return img;
}

void write_field(const std::filesystem::path& path, const FloatField& field) {
  require(field.data.size() == static_cast<std::size_t>(field.height) * field.width *
                                   field.channels,
          "write_field: data size does not match header");
  std::string bytes;
  bytes.reserve(16 + field.data.size() * 8);
  bytes.append("LSV1", 4);
  append_le(bytes, field.height);
  append_le(bytes, field.width);
  append_le(bytes, field.channels);
  for (double value : field.data) append_le(bytes, value);
  write_file_atomic(path, bytes);
}

FloatField read_field(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  if (bytes.size() < 16 || bytes.compare(0, 4, "LSV1") != 0)
    throw std::runtime_error("not an LSV1 field file: " + path.string());
  FloatField field;
  field.height = read_le<std::uint32_t>(bytes, 4);
  field.width = read_le<std::uint32_t>(bytes, 8);
  field.channels = read_le<std::uint32_t>(bytes, 12);
  const std::size_t count =
      static_cast<std::size_t>(field.height) * field.width * field.channels;
  if (bytes.size() != 16 + count * 8)
    throw std::runtime_error("LSV1 payload size mismatch in " + path.string());
  field.data.resize(count);
  for (std::size_t i = 0; i < count; ++i)
    field.data[i] = read_le<double>(bytes, 16 + i * 8);
  return field;
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  for (const auto& row : table) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      require(row[i].find_first_of(",\n\r") == std::string::npos,
              "to_csv: cell contains a separator");
      if (i) out.push_back(',');
      out += row[i];
    }
    out.push_back('\n');
  }
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::vector<std::string> row;
    std::size_t field_start = pos;
    for (std::size_t i = pos; i <= eol; ++i) {
      if (i == eol || text[i] == ',') {
        row.emplace_back(text.substr(field_start, i - field_start));
        field_start = i + 1;
      }
    }
    table.push_back(std::move(row));
    pos = eol + 1;
  }
  return table;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  write_file_atomic(path, content);
}

std::string read_text(const std::filesystem::path& path) { return read_file(path); }

}  // namespace lsv::io
