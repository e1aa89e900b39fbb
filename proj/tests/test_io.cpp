#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "icd/io.hpp"
#include "icd/noise.hpp"

using namespace icd;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name)
        : path(fs::temp_directory_path() / ("icd_io_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_bytes(const fs::path& p, const std::string& bytes) {
    std::ofstream f(p, std::ios::binary);
    f << bytes;
}

} // namespace

TEST_CASE("pfm round trip at float precision") {
    TempDir tmp("pfm");
    const RgbImage img = uniform_image(7, 5, -3.0, 1.0, 11);
    io::write_pfm(tmp.path / "a.pfm", io::to_float_map(img));
    const auto back = io::from_float_map<RgbImage>(io::read_pfm(tmp.path / "a.pfm"), "a");
    REQUIRE(back.same_shape(img));
    for (std::size_t k = 0; k < img.values().size(); ++k) {
        CHECK(back.values()[k] == static_cast<double>(static_cast<float>(img.values()[k])));
    }

    IntensityMap one(3, 2);
    for (std::size_t k = 0; k < 6; ++k) one(k) = 0.125 * double(k);
    io::write_pfm(tmp.path / "b.pfm", io::to_float_map(one));
    const auto m = io::read_pfm(tmp.path / "b.pfm");
    CHECK(m.channels == 1);
    CHECK(io::from_float_map<IntensityMap>(m, "b") == one);
    CHECK_THROWS_AS(io::from_float_map<RgbImage>(m, "b"), DimensionError);
}

TEST_CASE("pfm layout: bottom-up rows, little-endian") {
    TempDir tmp("layout");
    IntensityMap m(1, 2);
    m(0) = 1.0; // top row
    m(1) = 2.0;
    io::write_pfm(tmp.path / "m.pfm", io::to_float_map(m));
    const auto bytes = io::read_file(tmp.path / "m.pfm");
    const std::string header = "Pf\n1 2\n-1.0\n";
    REQUIRE(bytes.size() == header.size() + 8);
    CHECK(std::string(bytes.begin(), bytes.begin() + long(header.size())) == header);
    float first = 0.0f;
    std::memcpy(&first, bytes.data() + header.size(), 4);
    CHECK(first == 2.0f);
}

TEST_CASE("pfm big-endian input") {
    std::string s = "Pf\n1 1\n1.0\n";
    const unsigned char be[4] = {0x3f, 0x80, 0x00, 0x00}; // 1.0f
    s.append(reinterpret_cast<const char*>(be), 4);
    const auto m = io::parse_pfm(std::vector<unsigned char>(s.begin(), s.end()));
    CHECK(m.data.at(0) == 1.0);
}

TEST_CASE("pfm parse errors carry a byte offset") {
    const auto as_bytes = [](const std::string& s) { return std::vector<unsigned char>(s.begin(), s.end()); };
    try {
        io::parse_pfm(as_bytes("PX\n1 1\n-1.0\n0000"));
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 0);
        CHECK(std::string(e.what()).find("offset") != std::string::npos);
    }
    try {
        io::parse_pfm(as_bytes("PF\n2 x\n-1.0\n"));
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 5);
    }
    // Truncated data block.
    CHECK_THROWS_AS(io::parse_pfm(as_bytes("Pf\n2 2\n-1.0\n\x01\x02")), ParseError);
    CHECK_THROWS_AS(io::parse_pfm({}), ParseError);
    CHECK_THROWS_AS(io::read_pfm("/nonexistent/x.pfm"), Error);
}

TEST_CASE("png write and read") {
    TempDir tmp("png");
    RgbImage img(3, 2);
    for (std::size_t k = 0; k < img.values().size(); ++k) img.values()[k] = double(k) / 17.0;
    io::write_png(tmp.path / "a.png", img);
    const auto loaded = io::read_image(tmp.path / "a.png");
    CHECK(loaded.bit_depth == 8);
    REQUIRE(loaded.image.same_shape(img));
    for (std::size_t k = 0; k < img.values().size(); ++k) {
        CHECK(std::abs(loaded.image.values()[k] - img.values()[k]) <= 0.5 / 255.0 + 1e-12);
    }
}

TEST_CASE("pnm variants") {
    TempDir tmp("pnm");
    write_bytes(tmp.path / "a.ppm", "P3\n# comment\n2 1\n255\n255 0 0  0 51 255\n");
    const auto a = io::read_image(tmp.path / "a.ppm");
    CHECK(a.image(0, 0) == 1.0);
    CHECK(a.image(1, 1) == doctest::Approx(0.2));

    write_bytes(tmp.path / "g.pgm", "P2\n1 1\n4\n2\n");
    const auto g = io::read_image(tmp.path / "g.pgm");
    CHECK(g.image.pixel(0) == Pixel{0.5, 0.5, 0.5});

    std::string p6 = "P6\n1 1\n65535\n";
    const unsigned char px[6] = {0xff, 0xff, 0x80, 0x00, 0x00, 0x00};
    p6.append(reinterpret_cast<const char*>(px), 6);
    write_bytes(tmp.path / "d.ppm", p6);
    const auto d = io::read_image(tmp.path / "d.ppm");
    CHECK(d.bit_depth == 16);
    CHECK(d.image(0, 0) == 1.0);
    CHECK(d.image(0, 1) == doctest::Approx(32768.0 / 65535.0));
    CHECK(d.image(0, 2) == 0.0);

    write_bytes(tmp.path / "bad.ppm", "P6\n1 1\n255\n\x01");
    CHECK_THROWS_AS(io::read_image(tmp.path / "bad.ppm"), ParseError);
    write_bytes(tmp.path / "bad.png", "\x89PNG\r\n\x1a\nnot really");
    CHECK_THROWS_AS(io::read_image(tmp.path / "bad.png"), Error);
}

TEST_CASE("quantize8") {
    CHECK(io::quantize8(0.0) == 0);
    CHECK(io::quantize8(1.0) == 255);
    CHECK(io::quantize8(-0.5) == 0);
    CHECK(io::quantize8(2.0) == 255);
    CHECK(io::quantize8(0.5) == 128);
    CHECK(io::quantize8(1.0 / 255.0) == 1);
}

TEST_CASE("sha256 and file helpers") {
    TempDir tmp("sha");
    write_bytes(tmp.path / "abc.txt", "abc");
    CHECK(io::sha256_file(tmp.path / "abc.txt") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(io::is_image_path("x.PNG"));
    CHECK(io::is_image_path("x.ppm"));
    CHECK_FALSE(io::is_image_path("x.pfm"));
}
