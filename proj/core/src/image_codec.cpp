#include "segsynth/image_codec.hpp"

#include <png.h>

#include <algorithm>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

// jpeglib.h expects size_t and FILE to be declared first.
#include <jpeglib.h>

namespace segsynth {
namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};

bool is_png(std::span<const std::uint8_t> bytes) {
    return bytes.size() >= 8 && std::memcmp(bytes.data(), kPngSignature, 8) == 0;
}

bool is_jpeg(std::span<const std::uint8_t> bytes) {
    return bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF;
}

// libpng reports errors through longjmp. No object with a non-trivial destructor may be
// constructed between setjmp and the last libpng call of a function; containers are declared
// up front and only resized afterwards.
struct PngContext {
    std::span<const std::uint8_t> input;
    std::size_t offset = 0;
    Bytes* output = nullptr;
    char message[256] = {};
};

void png_error_handler(png_structp png, png_const_charp msg) {
    auto* ctx = static_cast<PngContext*>(png_get_error_ptr(png));
    std::snprintf(ctx->message, sizeof(ctx->message), "%s", msg);
    png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

void png_read_callback(png_structp png, png_bytep out, png_size_t length) {
    auto* ctx = static_cast<PngContext*>(png_get_io_ptr(png));
    if (ctx->offset + length > ctx->input.size()) {
        png_error(png, "unexpected end of PNG data");
    }
    std::memcpy(out, ctx->input.data() + ctx->offset, length);
    ctx->offset += length;
}

void png_write_callback(png_structp png, png_bytep data, png_size_t length) {
    auto* ctx = static_cast<PngContext*>(png_get_io_ptr(png));
    ctx->output->insert(ctx->output->end(), data, data + length);
}

void png_flush_callback(png_structp) {}

enum class PngMode { Rgb, Raw };

struct DecodedPng {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<std::uint8_t> pixels;
    std::vector<std::array<std::uint8_t, 3>> palette;
    bool paletted = false;
};

DecodedPng decode_png(std::span<const std::uint8_t> bytes, PngMode mode) {
    DecodedPng result;
    std::vector<png_bytep> rows;
    PngContext ctx;
    ctx.input = bytes;

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &ctx, png_error_handler, png_warning_handler);
    if (png == nullptr) {
        throw IoError("png: out of memory");
    }
    png_infop info = png_create_info_struct(png);
    if (info == nullptr) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("png: out of memory");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError(std::string("png decode failed: ") + ctx.message);
    }
    png_set_read_fn(png, &ctx, png_read_callback);
    png_read_info(png, info);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const int color_type = png_get_color_type(png, info);
    const int bit_depth = png_get_bit_depth(png, info);

    if (mode == PngMode::Rgb) {
        if (color_type == PNG_COLOR_TYPE_PALETTE) {
            png_set_palette_to_rgb(png);
        }
        if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
            if (bit_depth < 8) {
                png_set_expand_gray_1_2_4_to_8(png);
            }
            png_set_gray_to_rgb(png);
        }
        if (bit_depth == 16) {
            png_set_strip_16(png);
        }
        png_set_strip_alpha(png);
        if (png_get_valid(png, info, PNG_INFO_tRNS)) {
            // transparency is dropped, colour values are kept
            png_set_tRNS_to_alpha(png);
            png_set_strip_alpha(png);
        }
        result.channels = 3;
    } else {
        if (color_type == PNG_COLOR_TYPE_PALETTE) {
            result.paletted = true;
            png_colorp entries = nullptr;
            int count = 0;
            if (png_get_PLTE(png, info, &entries, &count) != 0) {
                result.palette.resize(static_cast<std::size_t>(count));
                for (int i = 0; i < count; ++i) {
                    result.palette[static_cast<std::size_t>(i)] = {entries[i].red, entries[i].green, entries[i].blue};
                }
            }
            if (bit_depth < 8) {
                png_set_packing(png);
            }
        } else if (color_type == PNG_COLOR_TYPE_GRAY) {
            if (bit_depth < 8) {
                png_set_expand_gray_1_2_4_to_8(png);
            }
            if (bit_depth == 16) {
                png_set_strip_16(png);
            }
        } else {
            png_error(png, "label must be a palette or 8-bit grayscale PNG");
        }
        result.channels = 1;
    }
    png_read_update_info(png, info);
    if (png_get_rowbytes(png, info) != static_cast<png_size_t>(width) * result.channels) {
        png_error(png, "unsupported PNG pixel layout");
    }

    result.width = static_cast<int>(width);
    result.height = static_cast<int>(height);
    result.pixels.resize(static_cast<std::size_t>(width) * height * result.channels);
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y) {
        rows[y] = result.pixels.data() + static_cast<std::size_t>(y) * width * result.channels;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return result;
}

Bytes encode_png_raw(const std::uint8_t* pixels, int width, int height, int channels,
                     const std::vector<std::array<std::uint8_t, 3>>* palette = nullptr) {
    Bytes out;
    std::vector<png_bytep> rows;
    PngContext ctx;
    ctx.output = &out;

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &ctx, png_error_handler, png_warning_handler);
    if (png == nullptr) {
        throw IoError("png: out of memory");
    }
    png_infop info = png_create_info_struct(png);
    if (info == nullptr) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png: out of memory");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError(std::string("png encode failed: ") + ctx.message);
    }
    png_set_write_fn(png, &ctx, png_write_callback, png_flush_callback);
    png_set_compression_level(png, 6);
    const bool paletted = palette != nullptr && !palette->empty();
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 paletted ? PNG_COLOR_TYPE_PALETTE : (channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY),
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    if (paletted) {
        png_color entries[256];
        const int count = static_cast<int>(std::min<std::size_t>(palette->size(), 256));
        for (int i = 0; i < count; ++i) {
            const auto& rgb = (*palette)[static_cast<std::size_t>(i)];
            entries[i] = png_color{rgb[0], rgb[1], rgb[2]};
        }
        png_set_PLTE(png, info, entries, count);
    }
    png_write_info(png, info);
    rows.resize(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y) {
        rows[static_cast<std::size_t>(y)] =
            const_cast<png_bytep>(pixels + static_cast<std::size_t>(y) * width * channels);
    }
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

struct JpegErrorManager {
    jpeg_error_mgr base;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX] = {};
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

RgbImage decode_jpeg(std::span<const std::uint8_t> bytes) {
    std::vector<std::uint8_t> pixels;
    jpeg_decompress_struct cinfo{};
    JpegErrorManager err{};
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_error_exit;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw IoError(std::string("jpeg decode failed: ") + err.message);
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);
    const auto width = static_cast<int>(cinfo.output_width);
    const auto height = static_cast<int>(cinfo.output_height);
    pixels.resize(static_cast<std::size_t>(width) * height * 3);
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = pixels.data() + static_cast<std::size_t>(cinfo.output_scanline) * width * 3;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return RgbImage(Size{width, height}, std::move(pixels));
}

}  // namespace

RgbImage decode_rgb(std::span<const std::uint8_t> encoded) {
    if (is_png(encoded)) {
        auto png = decode_png(encoded, PngMode::Rgb);
        return RgbImage(Size{png.width, png.height}, std::move(png.pixels));
    }
    if (is_jpeg(encoded)) {
        return decode_jpeg(encoded);
    }
    throw IoError("unrecognized image format (expected PNG or JPEG)");
}

RgbImage read_rgb(const std::filesystem::path& path) {
    const Bytes bytes = read_file(path);
    try {
        return decode_rgb(bytes);
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

IndexedImage decode_indexed(std::span<const std::uint8_t> encoded) {
    if (!is_png(encoded)) {
        throw IoError("label must be a PNG file");
    }
    auto png = decode_png(encoded, PngMode::Raw);
    IndexedImage out;
    out.indices = GrayImage(Size{png.width, png.height}, std::move(png.pixels));
    out.palette = std::move(png.palette);
    return out;
}

IndexedImage read_indexed(const std::filesystem::path& path) {
    const Bytes bytes = read_file(path);
    try {
        return decode_indexed(bytes);
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

Bytes encode_png(const RgbImage& image) {
    if (image.empty()) {
        throw RasterError("cannot encode an empty image");
    }
    return encode_png_raw(image.values().data(), image.width(), image.height(), 3);
}

Bytes encode_png(const GrayImage& image) {
    if (image.empty()) {
        throw RasterError("cannot encode an empty image");
    }
    return encode_png_raw(image.values().data(), image.width(), image.height(), 1);
}

Bytes encode_png(const IndexedImage& image) {
    if (image.indices.empty()) {
        throw RasterError("cannot encode an empty image");
    }
    if (!image.palette.empty()) {
        const auto values = image.indices.values();
        const auto top = *std::max_element(values.begin(), values.end());
        if (top >= image.palette.size()) {
            throw RasterError("palette index " + std::to_string(top) + " exceeds a palette of " +
                              std::to_string(image.palette.size()) + " entries");
        }
    }
    return encode_png_raw(image.indices.values().data(), image.indices.width(), image.indices.height(), 1,
                          &image.palette);
}

void write_png(const std::filesystem::path& path, const IndexedImage& image) { write_file(path, encode_png(image)); }

void write_png(const std::filesystem::path& path, const RgbImage& image) { write_file(path, encode_png(image)); }

void write_png(const std::filesystem::path& path, const GrayImage& image) { write_file(path, encode_png(image)); }

Bytes read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError("read failed: " + path.string());
    }
    return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open for writing: " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

}  // namespace segsynth
