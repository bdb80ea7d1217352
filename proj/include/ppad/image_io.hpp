#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <png.h>

#include "ppad/errors.hpp"
#include "ppad/image.hpp"

namespace ppad {

// On-disk formats: binary portable graymap (P5) is canonical for both input
// and output; PNG is accepted on input. Bytes map to intensities as value /
// maxval on load and round-half-up of 255 * intensity on save.

namespace detail {

inline int pnm_next_token(std::istream& in, std::string& tok) {
    tok.clear();
    int c = in.get();
    for (;;) {
        while (c != EOF && std::isspace(c)) c = in.get();
        if (c == '#') { // comment runs to end of line
            while (c != EOF && c != '\n') c = in.get();
            continue;
        }
        break;
    }
    while (c != EOF && !std::isspace(c)) {
        tok.push_back(char(c));
        c = in.get();
    }
    return tok.empty() ? EOF : 0;
}

inline GrayImage load_pgm_stream(std::istream& in) {
    std::string tok;
    if (pnm_next_token(in, tok) == EOF || tok != "P5")
        throw UnsupportedFormat("not a binary portable graymap (P5)");
    long vals[3];
    for (long& v : vals) {
        if (pnm_next_token(in, tok) == EOF) throw UnsupportedFormat("truncated graymap header");
        try {
            v = std::stol(tok);
        } catch (const std::exception&) {
            throw UnsupportedFormat("malformed graymap header field '" + tok + "'");
        }
    }
    const long w = vals[0], h = vals[1], maxval = vals[2];
    if (w <= 0 || h <= 0) throw ZeroDimension("graymap has zero dimension");
    if (maxval < 1 || maxval > 255)
        throw UnsupportedFormat("only 8-bit graymaps are supported (maxval 1..255)");

    std::vector<std::uint8_t> bytes(std::size_t(w) * std::size_t(h));
    in.read(reinterpret_cast<char*>(bytes.data()), std::streamsize(bytes.size()));
    if (in.gcount() != std::streamsize(bytes.size()))
        throw UnsupportedFormat("graymap pixel data truncated");

    GrayImage img{int(w), int(h)};
    double lut[256]; // byte / maxval, computed by division so k/255.0 is exact
    for (long v = 0; v < 256; ++v) lut[v] = double(std::min(v, maxval)) / double(maxval);
    for (std::size_t i = 0; i < bytes.size(); ++i) img.data[i] = lut[bytes[i]];
    return img;
}

struct PngReadCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* fp = nullptr;
    ~PngReadCloser() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

inline GrayImage load_png_file(const std::filesystem::path& path) {
    PngReadCloser c;
    c.fp = std::fopen(path.string().c_str(), "rb");
    if (!c.fp) throw IoError("cannot open " + path.string());

    c.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!c.png) throw IoError("libpng initialization failed");
    c.info = png_create_info_struct(c.png);
    if (!c.info) throw IoError("libpng initialization failed");
    if (setjmp(png_jmpbuf(c.png))) throw UnsupportedFormat("PNG decode failed: " + path.string());

    png_init_io(c.png, c.fp);
    png_read_info(c.png, c.info);

    png_set_palette_to_rgb(c.png);
    png_set_expand_gray_1_2_4_to_8(c.png);
    png_set_strip_16(c.png);
    png_set_strip_alpha(c.png);
    png_read_update_info(c.png, c.info);

    const png_uint_32 w = png_get_image_width(c.png, c.info);
    const png_uint_32 h = png_get_image_height(c.png, c.info);
    const int channels = png_get_channels(c.png, c.info);
    if (w == 0 || h == 0) throw ZeroDimension("PNG has zero dimension");
    if (channels != 1 && channels != 3)
        throw UnsupportedFormat("PNG must decode to 8-bit gray or RGB");

    std::vector<std::uint8_t> rowbuf(std::size_t(w) * channels);
    GrayImage img{int(w), int(h)};
    for (png_uint_32 y = 0; y < h; ++y) {
        png_read_row(c.png, rowbuf.data(), nullptr);
        for (png_uint_32 x = 0; x < w; ++x) {
            double v;
            if (channels == 1) {
                v = rowbuf[x] / 255.0;
            } else { // RGB converted via channel average
                const std::uint8_t* p = &rowbuf[std::size_t(x) * 3];
                v = (p[0] + p[1] + p[2]) / (3.0 * 255.0);
            }
            img.at(int(x), int(y)) = v;
        }
    }
    return img;
}

} // namespace detail

/// Loads a P5 graymap or PNG and bilinearly resamples it to a
/// target_size x target_size square.
inline GrayImage load_image(const std::filesystem::path& path, int target_size) {
    if (target_size <= 0) throw ZeroDimension("target size must be positive");
    if (!std::filesystem::exists(path)) throw FileNotFound("no such file: " + path.string());

    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    unsigned char magic[2] = {0, 0};
    in.read(reinterpret_cast<char*>(magic), 2);
    in.seekg(0);

    GrayImage img;
    if (magic[0] == 'P' && magic[1] == '5') {
        img = detail::load_pgm_stream(in);
    } else if (magic[0] == 0x89 && magic[1] == 'P') {
        in.close();
        img = detail::load_png_file(path);
    } else {
        throw UnsupportedFormat("unrecognized image format: " + path.string());
    }
    return resize_bilinear(img, target_size, target_size);
}

/// Writes an 8-bit binary graymap; bytes are round-half-up of 255 * intensity.
inline void save_image(const GrayImage& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    std::vector<std::uint8_t> bytes(img.size());
    for (std::size_t i = 0; i < img.size(); ++i)
        bytes[i] = std::uint8_t(std::floor(img.data[i] * 255.0 + 0.5));
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

inline void save_mask(const BinaryMask& mask, const std::filesystem::path& path) {
    GrayImage img(mask.width, mask.height);
    for (std::size_t i = 0; i < mask.data.size(); ++i) img.data[i] = mask.data[i] ? 1.0 : 0.0;
    save_image(img, path);
}

} // namespace ppad
