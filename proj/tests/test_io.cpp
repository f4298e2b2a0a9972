#include <doctest.h>

#include <filesystem>
#include <random>

#include "lovasz/io.hpp"
#include "lovasz/rng.hpp"

using namespace lsv;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("lovasz_io_test_" + std::to_string(Rng(std::random_device{}()).next_u64()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("pgm round trip") {
  TempDir dir;
  const LabelMask labels{0, 1, 2, 1, 0, 2};
  io::write_pgm(dir.path / "mask.pgm", labels, 2, 3);
  const io::MaskImage img = io::read_pgm(dir.path / "mask.pgm");
  CHECK(img.height == 2);
  CHECK(img.width == 3);
  CHECK(img.labels == labels);
}

TEST_CASE("pgm reader accepts comments and rejects other formats") {
  TempDir dir;
  {
    const std::string with_comment = "P5\n# a comment line\n2 1\n255\n\x01\x02";
    io::write_text_atomic(dir.path / "c.pgm", with_comment);
    const io::MaskImage img = io::read_pgm(dir.path / "c.pgm");
    CHECK(img.width == 2);
    CHECK(img.height == 1);
    CHECK(img.labels == LabelMask{1, 2});
  }
  io::write_text_atomic(dir.path / "bad.pgm", "P6\n1 1\n255\nx");
  CHECK_THROWS(io::read_pgm(dir.path / "bad.pgm"));
  io::write_text_atomic(dir.path / "trunc.pgm", "P5\n4 4\n255\nxy");
  CHECK_THROWS(io::read_pgm(dir.path / "trunc.pgm"));
}

TEST_CASE("pgm writer validates labels and dimensions") {
  TempDir dir;
  CHECK_THROWS_AS(io::write_pgm(dir.path / "x.pgm", {0, 300}, 1, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(io::write_pgm(dir.path / "x.pgm", {0, 1, 2}, 2, 2),
                  std::invalid_argument);
}

TEST_CASE("raw field round trip preserves exact doubles") {
  TempDir dir;
  io::FloatField field;
  field.height = 2;
  field.width = 2;
  field.channels = 1;
  field.data = {0.1, -2.5e-7, 3.14159, 1e300};
  io::write_field(dir.path / "f.lsv", field);
  const io::FloatField back = io::read_field(dir.path / "f.lsv");
  CHECK(back.height == 2);
  CHECK(back.width == 2);
  CHECK(back.channels == 1);
  CHECK(back.data == field.data);

  // header starts with the magic and the byte count matches exactly
  const std::string bytes = io::read_text(dir.path / "f.lsv");
  CHECK(bytes.substr(0, 4) == "LSV1");
  CHECK(bytes.size() == 16 + 4 * 8);
}

TEST_CASE("field reader rejects corrupt payloads") {
  TempDir dir;
  io::write_text_atomic(dir.path / "bad.lsv", "LSV0 nonsense");
  CHECK_THROWS(io::read_field(dir.path / "bad.lsv"));
  std::string short_payload("LSV1", 4);
  short_payload += std::string(12, '\0');  // header says 0x0x0, ok; add a byte
  short_payload += 'x';
  io::write_text_atomic(dir.path / "short.lsv", short_payload);
  CHECK_THROWS(io::read_field(dir.path / "short.lsv"));
}

TEST_CASE("csv round trip is exact for separator-free cells") {
  Rng rng(12345);
  for (int trial = 0; trial < 50; ++trial) {
    io::CsvTable table;
    const std::size_t rows = 1 + rng.uniform_index(8);
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<std::string> row;
      const std::size_t cols = 1 + rng.uniform_index(5);
      for (std::size_t c = 0; c < cols; ++c) {
        switch (rng.uniform_index(3)) {
          case 0: row.push_back(std::to_string(rng.uniform(-10, 10))); break;
          case 1: row.push_back("field" + std::to_string(rng.uniform_index(100))); break;
          default: row.push_back(""); break;
        }
      }
      table.push_back(std::move(row));
    }
    CHECK(io::parse_csv(io::to_csv(table)) == table);
  }
  CHECK_THROWS_AS(io::to_csv({{"a,b"}}), std::invalid_argument);
}

TEST_CASE("atomic writes leave no temp file behind") {
  TempDir dir;
  io::write_text_atomic(dir.path / "out.txt", "hello\n");
  CHECK(io::read_text(dir.path / "out.txt") == "hello\n");
  CHECK_FALSE(fs::exists(dir.path / "out.txt.tmp"));
}
