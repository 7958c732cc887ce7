#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <png.h>

#include "angiomim/core/raster.hpp"

namespace angiomim {

namespace detail {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

inline FilePtr open_file(const std::string& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f)
        throw std::runtime_error("cannot open '" + path + "' for " +
                                 (mode[0] == 'r' ? "reading" : "writing"));
    return f;
}

inline void put_u32_le(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

inline std::uint32_t get_u32_le(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) |
           (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
}

inline std::vector<std::uint8_t> read_all(const std::string& path) {
    FilePtr f = open_file(path, "rb");
    std::fseek(f.get(), 0, SEEK_END);
    const long size = std::ftell(f.get());
    if (size < 0) throw std::runtime_error("cannot determine size of '" + path + "'");
    std::fseek(f.get(), 0, SEEK_SET);
    std::vector<std::uint8_t> buf(static_cast<std::size_t>(size));
    if (!buf.empty() &&
        std::fread(buf.data(), 1, buf.size(), f.get()) != buf.size())
        throw std::runtime_error("short read on '" + path + "'");
    return buf;
}

inline void write_all(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    FilePtr f = open_file(path, "wb");
    if (!bytes.empty() &&
        std::fwrite(bytes.data(), 1, bytes.size(), f.get()) != bytes.size())
        throw std::runtime_error("short write on '" + path + "'");
}

inline bool has_suffix(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() &&
           s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

// ---- PGM (binary P5) ----

inline GrayImage load_pgm(const std::vector<std::uint8_t>& bytes, const std::string& path) {
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < bytes.size()) {
            const char ch = static_cast<char>(bytes[pos]);
            if (ch == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto read_int = [&]() -> long {
        skip_ws();
        long v = 0;
        bool any = false;
        while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
            v = v * 10 + (bytes[pos] - '0');
            ++pos;
            any = true;
        }
        if (!any) throw std::runtime_error("malformed PGM header in '" + path + "'");
        return v;
    };

    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
        throw std::runtime_error("'" + path + "' is not a binary (P5) PGM file");
    pos = 2;
    const long w = read_int();
    const long h = read_int();
    const long maxval = read_int();
    if (w < 1 || h < 1)
        throw std::runtime_error("invalid PGM dimensions in '" + path + "'");
    if (maxval < 1 || maxval > 65535)
        throw std::runtime_error("unsupported bit depth: PGM maxval " +
                                 std::to_string(maxval) + " in '" + path + "'");
    ++pos; // single whitespace byte after maxval

    const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    const bool wide = maxval > 255;
    if (bytes.size() - pos < n * (wide ? 2 : 1))
        throw std::runtime_error("truncated PGM pixel data in '" + path + "'");

    GrayImage img(static_cast<std::size_t>(h), static_cast<std::size_t>(w));
    const float scale = 1.0f / static_cast<float>(maxval);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t v;
        if (wide) {
            v = (static_cast<std::uint32_t>(bytes[pos + 2 * i]) << 8) |
                bytes[pos + 2 * i + 1]; // PGM 16-bit samples are big-endian
        } else {
            v = bytes[pos + i];
        }
        img.data[i] = static_cast<float>(v) * scale;
    }
    return img;
}

inline void save_pgm(const std::string& path, std::size_t h, std::size_t w,
                     const std::vector<std::uint16_t>& samples, unsigned maxval) {
    std::vector<std::uint8_t> out;
    const std::string header = "P5\n" + std::to_string(w) + " " + std::to_string(h) +
                               "\n" + std::to_string(maxval) + "\n";
    out.insert(out.end(), header.begin(), header.end());
    for (std::uint16_t s : samples) {
        if (maxval > 255) {
            out.push_back(static_cast<std::uint8_t>(s >> 8));
            out.push_back(static_cast<std::uint8_t>(s & 0xff));
        } else {
            out.push_back(static_cast<std::uint8_t>(s));
        }
    }
    write_all(path, out);
}

// ---- PNG (grayscale 8/16-bit via libpng) ----

inline GrayImage load_png(const std::string& path) {
    FilePtr fp = open_file(path, "rb");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw std::runtime_error("libpng init failed");
    }
    std::vector<std::uint8_t> raw;
    std::size_t h = 0, w = 0;
    int bit_depth = 0, color_type = 0;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("failed to decode PNG '" + path + "'");
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);
    w = png_get_image_width(png, info);
    h = png_get_image_height(png, info);
    bit_depth = png_get_bit_depth(png, info);
    color_type = png_get_color_type(png, info);

    if (color_type != PNG_COLOR_TYPE_GRAY) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("unsupported channel count in '" + path +
                                 "': expected single-channel grayscale");
    }
    if (bit_depth != 8 && bit_depth != 16) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("unsupported bit depth " + std::to_string(bit_depth) +
                                 " in '" + path + "': expected 8 or 16");
    }

    const std::size_t stride = w * (bit_depth == 16 ? 2 : 1);
    raw.resize(h * stride);
    std::vector<png_bytep> rows(h);
    for (std::size_t r = 0; r < h; ++r) rows[r] = raw.data() + r * stride;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    GrayImage img(h, w);
    if (bit_depth == 16) {
        for (std::size_t i = 0; i < h * w; ++i) {
            const std::uint32_t v = (static_cast<std::uint32_t>(raw[2 * i]) << 8) |
                                    raw[2 * i + 1]; // network byte order
            img.data[i] = static_cast<float>(v) / 65535.0f;
        }
    } else {
        for (std::size_t i = 0; i < h * w; ++i)
            img.data[i] = static_cast<float>(raw[i]) / 255.0f;
    }
    return img;
}

inline void save_png(const std::string& path, std::size_t h, std::size_t w,
                     const std::vector<std::uint16_t>& samples, int bit_depth) {
    FilePtr fp = open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("failed to encode PNG '" + path + "'");
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h),
                 bit_depth, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    const std::size_t stride = w * (bit_depth == 16 ? 2 : 1);
    std::vector<std::uint8_t> raw(h * stride);
    if (bit_depth == 16) {
        for (std::size_t i = 0; i < h * w; ++i) {
            raw[2 * i] = static_cast<std::uint8_t>(samples[i] >> 8);
            raw[2 * i + 1] = static_cast<std::uint8_t>(samples[i] & 0xff);
        }
    } else {
        for (std::size_t i = 0; i < h * w; ++i)
            raw[i] = static_cast<std::uint8_t>(samples[i]);
    }
    std::vector<png_bytep> rows(h);
    for (std::size_t r = 0; r < h; ++r) rows[r] = raw.data() + r * stride;
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

} // namespace detail

// ---- VGM1 float raster: "VGM1", u32 height, u32 width (LE), then
//      height*width little-endian IEEE-754 float32, row-major. Lossless. ----

inline void save_field(const ScalarField& field, const std::string& path) {
    validate_finite(field, "save_field");
    std::vector<std::uint8_t> out;
    out.reserve(12 + field.size() * 4);
    out.insert(out.end(), {'V', 'G', 'M', '1'});
    detail::put_u32_le(out, static_cast<std::uint32_t>(field.height));
    detail::put_u32_le(out, static_cast<std::uint32_t>(field.width));
    for (float v : field.data) {
        std::uint32_t bits;
        std::memcpy(&bits, &v, 4);
        detail::put_u32_le(out, bits);
    }
    detail::write_all(path, out);
}

inline ScalarField load_field(const std::string& path) {
    const auto bytes = detail::read_all(path);
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "VGM1", 4) != 0)
        throw std::runtime_error("'" + path + "' is not a VGM1 raster");
    const std::uint32_t h = detail::get_u32_le(bytes.data() + 4);
    const std::uint32_t w = detail::get_u32_le(bytes.data() + 8);
    const std::size_t n = static_cast<std::size_t>(h) * w;
    if (h == 0 || w == 0 || bytes.size() != 12 + n * 4)
        throw std::runtime_error("corrupt VGM1 raster '" + path + "'");
    ScalarField field(h, w);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t bits = detail::get_u32_le(bytes.data() + 12 + 4 * i);
        float v;
        std::memcpy(&v, &bits, 4);
        field.data[i] = v;
    }
    validate_finite(field, "load_field('" + path + "')");
    return field;
}

inline ProbMap load_probmap(const std::string& path) {
    ScalarField f = load_field(path);
    validate_unit_range(f, "load_probmap('" + path + "')");
    return f;
}

// ---- Generic raster load/save. Format chosen by content on load and by
//      file extension on save (.pgm / .png / .vgm). ----

/// Load an 8/16-bit single-channel PGM or PNG, linearly rescaled to [0,1].
inline GrayImage load_image(const std::string& path) {
    const auto bytes = detail::read_all(path);
    static const std::uint8_t png_sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    if (bytes.size() >= 8 && std::memcmp(bytes.data(), png_sig, 8) == 0)
        return detail::load_png(path);
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5')
        return detail::load_pgm(bytes, path);
    throw std::runtime_error("'" + path + "' is not a supported raster (PGM/PNG)");
}

/// Save a [0,1] image. .pgm/.png quantize to the requested bit depth
/// (default 8); .vgm stores floats losslessly.
inline void save_image(const GrayImage& img, const std::string& path, int bit_depth = 8) {
    validate_unit_range(img, "save_image");
    if (detail::has_suffix(path, ".vgm")) {
        save_field(img, path);
        return;
    }
    if (bit_depth != 8 && bit_depth != 16)
        throw std::invalid_argument("save_image: bit depth must be 8 or 16");
    const unsigned maxval = bit_depth == 16 ? 65535u : 255u;
    std::vector<std::uint16_t> samples(img.size());
    for (std::size_t i = 0; i < img.size(); ++i)
        samples[i] = static_cast<std::uint16_t>(
            img.data[i] * static_cast<float>(maxval) + 0.5f);
    if (detail::has_suffix(path, ".pgm"))
        detail::save_pgm(path, img.height, img.width, samples, maxval);
    else if (detail::has_suffix(path, ".png"))
        detail::save_png(path, img.height, img.width, samples, bit_depth);
    else
        throw std::invalid_argument("save_image: unknown extension on '" + path +
                                    "' (expected .pgm, .png or .vgm)");
}

/// Masks are stored as 8-bit rasters with values {0, 255}.
inline void save_mask(const BinaryMask& mask, const std::string& path) {
    validate_binary(mask, "save_mask");
    std::vector<std::uint16_t> samples(mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i)
        samples[i] = mask.data[i] ? 255 : 0;
    if (detail::has_suffix(path, ".pgm"))
        detail::save_pgm(path, mask.height, mask.width, samples, 255);
    else if (detail::has_suffix(path, ".png"))
        detail::save_png(path, mask.height, mask.width, samples, 8);
    else
        throw std::invalid_argument("save_mask: unknown extension on '" + path +
                                    "' (expected .pgm or .png)");
}

inline BinaryMask load_mask(const std::string& path) {
    const GrayImage img = load_image(path);
    BinaryMask mask(img.height, img.width);
    for (std::size_t i = 0; i < img.size(); ++i)
        mask.data[i] = img.data[i] > 0.5f ? 1 : 0;
    return mask;
}

} // namespace angiomim
