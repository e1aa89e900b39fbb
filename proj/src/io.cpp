#include "icd/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>

#include <openssl/evp.h>
#include <png.h>

namespace icd::io {
namespace fs = std::filesystem;

std::vector<unsigned char> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

namespace {

bool is_space(unsigned char ch) { return std::isspace(ch) != 0; }

// Whitespace-separated header reader shared by PFM and PNM. PNM comments
// ('#' to end of line) are skipped when allowed.
class HeaderReader {
public:
    HeaderReader(const std::vector<unsigned char>& bytes, bool comments)
        : bytes_(bytes), comments_(comments) {}

    std::size_t pos() const noexcept { return pos_; }

    std::string token(const char* what) {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < bytes_.size() && !is_space(bytes_[pos_])) ++pos_;
        if (pos_ == start) throw ParseError(std::string("missing ") + what, start);
        return {bytes_.begin() + static_cast<std::ptrdiff_t>(start),
                bytes_.begin() + static_cast<std::ptrdiff_t>(pos_)};
    }

    template <class T>
    T number(const char* what) {
        skip_space();
        const std::size_t start = pos_;
        const std::string tok = token(what);
        T v{};
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) {
            throw ParseError(std::string("malformed ") + what + " '" + tok + "'", start);
        }
        return v;
    }

    // Exactly one whitespace byte separates the header from the raster.
    void end_of_header() {
        if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) {
            throw ParseError("expected single whitespace after header", pos_);
        }
        ++pos_;
    }

private:
    void skip_space() {
        while (pos_ < bytes_.size()) {
            if (is_space(bytes_[pos_])) {
                ++pos_;
            } else if (comments_ && bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    const std::vector<unsigned char>& bytes_;
    bool comments_;
    std::size_t pos_ = 0;
};

std::string lower_ext(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return ext;
}

} // namespace

FloatMap parse_pfm(const std::vector<unsigned char>& bytes) {
    HeaderReader hdr(bytes, false);
    const std::string magic = hdr.token("PFM magic");
    FloatMap m;
    if (magic == "PF") {
        m.channels = 3;
    } else if (magic == "Pf") {
        m.channels = 1;
    } else {
        throw ParseError("bad PFM magic '" + magic + "'", 0);
    }
    const long long w = hdr.number<long long>("width");
    const long long h = hdr.number<long long>("height");
    if (w <= 0 || h <= 0) throw ParseError("non-positive PFM dimensions", hdr.pos());
    const std::size_t scale_at = hdr.pos();
    const double scale = hdr.number<double>("scale");
    if (scale == 0.0 || !std::isfinite(scale)) throw ParseError("invalid PFM scale", scale_at);
    hdr.end_of_header();

    m.width = static_cast<std::size_t>(w);
    m.height = static_cast<std::size_t>(h);
    const std::size_t count = m.width * m.height * m.channels;
    const std::size_t start = hdr.pos();
    if (bytes.size() - start < count * 4) {
        throw ParseError("truncated PFM raster: need " + std::to_string(count * 4) + " bytes, have " +
                             std::to_string(bytes.size() - start),
                         bytes.size());
    }

    const bool little = scale < 0.0;
    const std::size_t row_len = m.width * m.channels;
    m.data.resize(count);
    for (std::size_t row = 0; row < m.height; ++row) {
        // File rows run bottom to top.
        const std::size_t dst_row = m.height - 1 - row;
        for (std::size_t k = 0; k < row_len; ++k) {
            const unsigned char* p = bytes.data() + start + (row * row_len + k) * 4;
            std::uint32_t bits = little ? (std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 |
                                           std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24)
                                        : (std::uint32_t(p[3]) | std::uint32_t(p[2]) << 8 |
                                           std::uint32_t(p[1]) << 16 | std::uint32_t(p[0]) << 24);
            m.data[dst_row * row_len + k] = static_cast<double>(std::bit_cast<float>(bits));
        }
    }
    return m;
}

FloatMap read_pfm(const fs::path& path) {
    try {
        return parse_pfm(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.offset());
    }
}

void write_pfm(const fs::path& path, const FloatMap& m) {
    if (m.channels != 1 && m.channels != 3) throw DimensionError("PFM supports 1 or 3 channels");
    if (m.data.size() != m.width * m.height * m.channels) {
        throw DimensionError("PFM data length does not match shape");
    }
    std::string header = (m.channels == 3 ? "PF\n" : "Pf\n") + std::to_string(m.width) + " " +
                         std::to_string(m.height) + "\n-1.0\n";
    std::vector<unsigned char> out(header.begin(), header.end());
    out.reserve(out.size() + m.data.size() * 4);
    const std::size_t row_len = m.width * m.channels;
    for (std::size_t row = m.height; row-- > 0;) {
        for (std::size_t k = 0; k < row_len; ++k) {
            const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(m.data[row * row_len + k]));
            for (int b = 0; b < 4; ++b) out.push_back(static_cast<unsigned char>(bits >> (8 * b)));
        }
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write '" + path.string() + "'");
    f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!f) throw Error("write failed for '" + path.string() + "'");
}

namespace {

LoadedImage parse_pnm(const std::vector<unsigned char>& bytes) {
    HeaderReader hdr(bytes, true);
    const std::string magic = hdr.token("PNM magic");
    if (magic != "P2" && magic != "P3" && magic != "P5" && magic != "P6") {
        throw ParseError("unsupported PNM magic '" + magic + "'", 0);
    }
    const bool color = magic == "P3" || magic == "P6";
    const bool ascii = magic == "P2" || magic == "P3";
    const long long w = hdr.number<long long>("width");
    const long long h = hdr.number<long long>("height");
    const long long maxval = hdr.number<long long>("maxval");
    if (w <= 0 || h <= 0) throw ParseError("non-positive PNM dimensions", hdr.pos());
    if (maxval <= 0 || maxval > 65535) throw ParseError("PNM maxval out of range", hdr.pos());

    const std::size_t width = static_cast<std::size_t>(w);
    const std::size_t height = static_cast<std::size_t>(h);
    const std::size_t ch = color ? 3 : 1;
    const std::size_t count = width * height * ch;
    std::vector<unsigned> raw(count);
    if (ascii) {
        for (std::size_t i = 0; i < count; ++i) raw[i] = hdr.number<unsigned>("sample");
    } else {
        hdr.end_of_header();
        const std::size_t bps = maxval > 255 ? 2 : 1;
        const std::size_t start = hdr.pos();
        if (bytes.size() - start < count * bps) throw ParseError("truncated PNM raster", bytes.size());
        for (std::size_t i = 0; i < count; ++i) {
            const unsigned char* p = bytes.data() + start + i * bps;
            raw[i] = bps == 2 ? (unsigned(p[0]) << 8 | p[1]) : p[0];
        }
    }

    LoadedImage out{RgbImage(width, height), maxval > 255 ? 16 : 8};
    const double scale = static_cast<double>(maxval);
    for (std::size_t i = 0; i < width * height; ++i) {
        for (std::size_t c = 0; c < 3; ++c) {
            const unsigned v = raw[i * ch + (color ? c : 0)];
            if (v > static_cast<unsigned>(maxval)) throw ParseError("PNM sample exceeds maxval", 0);
            out.image(i, c) = static_cast<double>(v) / scale;
        }
    }
    return out;
}

struct PngReadState {
    png_structp png = nullptr;
    png_infop info = nullptr;
    char message[256] = {};
    ~PngReadState() { png_destroy_read_struct(&png, info ? &info : nullptr, nullptr); }
};

void png_error_to_state(png_structp png, png_const_charp msg) {
    auto* st = static_cast<PngReadState*>(png_get_error_ptr(png));
    std::snprintf(st->message, sizeof st->message, "%s", msg);
    png_longjmp(png, 1);
}

void png_ignore_warning(png_structp, png_const_charp) {}

struct FileCloser {
    void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};

// libpng reports errors through longjmp; nothing with a destructor may live
// between setjmp and the libpng calls.
bool read_png_rows(std::FILE* fp, PngReadState& st, std::vector<unsigned char>& pixels,
                   std::vector<png_bytep>& rows, png_uint_32& width, png_uint_32& height, int& depth, std::string& err) {
    st.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &st, png_error_to_state,
                                    png_ignore_warning);
    if (!st.png) {
        err = "png_create_read_struct failed";
        return false;
    }
    st.info = png_create_info_struct(st.png);
    if (!st.info) {
        err = "png_create_info_struct failed";
        return false;
    }
    if (setjmp(png_jmpbuf(st.png))) {
        err = st.message[0] ? st.message : "libpng decode error";
        return false;
    }
    png_init_io(st.png, fp);
    png_read_info(st.png, st.info);
    width = png_get_image_width(st.png, st.info);
    height = png_get_image_height(st.png, st.info);
    depth = png_get_bit_depth(st.png, st.info);
    const int color = png_get_color_type(st.png, st.info);

    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(st.png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(st.png);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) {
        png_set_gray_to_rgb(st.png);
    }
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(st.png);
    if (png_get_valid(st.png, st.info, PNG_INFO_tRNS)) png_set_strip_alpha(st.png);
    if (depth < 8) depth = 8;
    png_read_update_info(st.png, st.info);

    const std::size_t rowbytes = png_get_rowbytes(st.png, st.info);
    pixels.resize(rowbytes * height);
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y) rows[y] = pixels.data() + y * rowbytes;
    png_read_image(st.png, rows.data());
    png_read_end(st.png, nullptr);
    return true;
}

LoadedImage read_png(const fs::path& path) {
    std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) throw Error("cannot open '" + path.string() + "'");
    unsigned char sig[8] = {};
    if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
        throw ParseError(path.string() + ": not a PNG file", 0);
    }
    std::rewind(fp.get());

    PngReadState st;
    std::vector<unsigned char> pixels;
    std::vector<png_bytep> rows;
    png_uint_32 width = 0, height = 0;
    int depth = 8;
    std::string err;
    if (!read_png_rows(fp.get(), st, pixels, rows, width, height, depth, err)) {
        throw Error(path.string() + ": " + err);
    }

    LoadedImage out{RgbImage(width, height), depth};
    const std::size_t n = static_cast<std::size_t>(width) * height * 3;
    if (depth == 16) {
        for (std::size_t i = 0; i < n; ++i) {
            const unsigned v = unsigned(pixels[2 * i]) << 8 | pixels[2 * i + 1];
            out.image.values()[i] = static_cast<double>(v) / 65535.0;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) out.image.values()[i] = pixels[i] / 255.0;
    }
    return out;
}

} // namespace

LoadedImage read_image(const fs::path& path) {
    const std::string ext = lower_ext(path);
    if (ext == ".png") return read_png(path);
    try {
        return parse_pnm(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.offset());
    }
}

unsigned char quantize8(double v) noexcept {
    const double c = std::clamp(std::isnan(v) ? 0.0 : v, 0.0, 1.0);
    return static_cast<unsigned char>(std::lround(c * 255.0));
}

void write_png(const fs::path& path, const RgbImage& img) {
    std::vector<unsigned char> buf(img.values().size());
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = quantize8(img.values()[i]);

    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&image, path.string().c_str(), 0, buf.data(), 0, nullptr)) {
        const std::string msg = image.message;
        png_image_free(&image);
        throw Error("cannot write PNG '" + path.string() + "': " + msg);
    }
}

std::string sha256_file(const fs::path& path) {
    const auto bytes = read_file(path);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 failed for '" + path.string() + "'");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

bool is_image_path(const fs::path& path) {
    const std::string ext = lower_ext(path);
    return ext == ".png" || ext == ".ppm" || ext == ".pgm" || ext == ".pnm";
}

} // namespace icd::io
