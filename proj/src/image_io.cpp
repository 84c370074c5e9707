#include "amplipix/image_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace amplipix {

namespace {

const unsigned char kPngSignature[8] = {137, 80, 78, 71, 13, 10, 26, 10};

std::vector<unsigned char> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    return std::vector<unsigned char>(std::istreambuf_iterator<char>(in),
                                      std::istreambuf_iterator<char>());
}

void write_file(const std::string& path,
                const std::vector<unsigned char>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path + " for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("short write to " + path);
    }
}

std::uint32_t read_u32(const unsigned char* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

void push_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    out.push_back(static_cast<unsigned char>(v >> 24));
    out.push_back(static_cast<unsigned char>(v >> 16));
    out.push_back(static_cast<unsigned char>(v >> 8));
    out.push_back(static_cast<unsigned char>(v));
}

void push_chunk(std::vector<unsigned char>& out, const char type[4],
                const std::vector<unsigned char>& data) {
    push_u32(out, static_cast<std::uint32_t>(data.size()));
    const std::size_t type_at = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    const uLong crc =
        crc32(0L, out.data() + type_at, static_cast<uInt>(4 + data.size()));
    push_u32(out, static_cast<std::uint32_t>(crc));
}

int paeth_predict(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a);
    const int pb = std::abs(p - b);
    const int pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

void unfilter_rows(std::vector<unsigned char>& raw, int height,
                   std::size_t rowbytes, int bpp) {
    std::vector<unsigned char> prior(rowbytes, 0);
    for (int y = 0; y < height; ++y) {
        unsigned char* row = raw.data() + y * (rowbytes + 1);
        const int filter = row[0];
        unsigned char* cur = row + 1;
        switch (filter) {
            case 0:
                break;
            case 1:  // Sub
                for (std::size_t x = bpp; x < rowbytes; ++x) {
                    cur[x] = static_cast<unsigned char>(cur[x] + cur[x - bpp]);
                }
                break;
            case 2:  // Up
                for (std::size_t x = 0; x < rowbytes; ++x) {
                    cur[x] = static_cast<unsigned char>(cur[x] + prior[x]);
                }
                break;
            case 3:  // Average
                for (std::size_t x = 0; x < rowbytes; ++x) {
                    const int left = x >= static_cast<std::size_t>(bpp)
                                         ? cur[x - bpp]
                                         : 0;
                    cur[x] = static_cast<unsigned char>(
                        cur[x] + (left + prior[x]) / 2);
                }
                break;
            case 4:  // Paeth
                for (std::size_t x = 0; x < rowbytes; ++x) {
                    const bool has_left = x >= static_cast<std::size_t>(bpp);
                    const int left = has_left ? cur[x - bpp] : 0;
                    const int up = prior[x];
                    const int ul = has_left ? prior[x - bpp] : 0;
                    cur[x] = static_cast<unsigned char>(
                        cur[x] + paeth_predict(left, up, ul));
                }
                break;
            default:
                throw IoError("PNG: unknown filter type " +
                              std::to_string(filter));
        }
        std::memcpy(prior.data(), cur, rowbytes);
    }
}

int quantize(float v, int maxval) {
    const double clamped =
        std::clamp(static_cast<double>(v), 0.0, 1.0) * maxval;
    return static_cast<int>(std::lround(clamped));
}

}  // namespace

ImageBuf read_png(const std::string& path) {
    const std::vector<unsigned char> file = read_file(path);
    if (file.size() < 8 ||
        std::memcmp(file.data(), kPngSignature, 8) != 0) {
        throw IoError(path + ": not a PNG file");
    }

    std::uint32_t width = 0, height = 0;
    int depth = 0, color_type = -1;
    bool saw_ihdr = false, saw_iend = false;
    std::vector<unsigned char> idat;

    std::size_t pos = 8;
    while (pos + 12 <= file.size() && !saw_iend) {
        const std::uint32_t len = read_u32(file.data() + pos);
        if (pos + 12 + len > file.size()) {
            throw IoError(path + ": truncated PNG chunk");
        }
        const unsigned char* type = file.data() + pos + 4;
        const unsigned char* data = file.data() + pos + 8;
        const uLong crc = crc32(0L, type, static_cast<uInt>(4 + len));
        if (crc != read_u32(data + len)) {
            throw IoError(path + ": PNG chunk CRC mismatch");
        }
        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (len != 13) {
                throw IoError(path + ": bad IHDR length");
            }
            width = read_u32(data);
            height = read_u32(data + 4);
            depth = data[8];
            color_type = data[9];
            if (data[10] != 0 || data[11] != 0) {
                throw IoError(path + ": unsupported PNG compression/filter");
            }
            // TODO: Adam7 deinterlacing; progressive files are rejected
            // until then.
            if (data[12] != 0) {
                throw IoError(path + ": interlaced PNG not supported");
            }
            saw_ihdr = true;
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            idat.insert(idat.end(), data, data + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            saw_iend = true;
        } else if (std::memcmp(type, "PLTE", 4) == 0) {
            throw IoError(path + ": palette PNG not supported");
        }
        pos += 12 + len;
    }
    if (!saw_ihdr || !saw_iend || idat.empty()) {
        throw IoError(path + ": incomplete PNG stream");
    }
    if (width == 0 || height == 0) {
        throw IoError(path + ": empty PNG image");
    }
    if (depth != 8 && depth != 16) {
        throw IoError(path + ": only 8- and 16-bit PNG supported");
    }
    int src_channels;
    switch (color_type) {
        case 0: src_channels = 1; break;
        case 2: src_channels = 3; break;
        case 4: src_channels = 2; break;
        case 6: src_channels = 4; break;
        default:
            throw IoError(path + ": unsupported PNG color type " +
                          std::to_string(color_type));
    }

    const int bytes_per_sample = depth / 8;
    const int bpp = src_channels * bytes_per_sample;
    const std::size_t rowbytes = static_cast<std::size_t>(width) * bpp;
    const std::size_t expected = height * (rowbytes + 1);

    std::vector<unsigned char> raw(expected);
    uLongf dest_len = static_cast<uLongf>(expected);
    const int rc = uncompress(raw.data(), &dest_len, idat.data(),
                              static_cast<uLong>(idat.size()));
    if (rc != Z_OK || dest_len != expected) {
        throw IoError(path + ": PNG inflate failed");
    }
    unfilter_rows(raw, static_cast<int>(height), rowbytes, bpp);

    const int out_channels = src_channels >= 3 ? 3 : 1;
    const double scale = depth == 8 ? 255.0 : 65535.0;
    ImageBuf img(static_cast<int>(height), static_cast<int>(width),
                 out_channels);
    for (std::uint32_t y = 0; y < height; ++y) {
        const unsigned char* row = raw.data() + y * (rowbytes + 1) + 1;
        for (std::uint32_t x = 0; x < width; ++x) {
            const unsigned char* px = row + x * bpp;
            for (int c = 0; c < out_channels; ++c) {
                const unsigned char* s = px + c * bytes_per_sample;
                const unsigned value =
                    depth == 8 ? *s : (unsigned(s[0]) << 8) | s[1];
                img.at(static_cast<int>(y), static_cast<int>(x), c) =
                    static_cast<float>(value / scale);
            }
        }
    }
    return img;
}

void write_png(const ImageBuf& img, const std::string& path, int bit_depth) {
    if (img.empty()) {
        throw IoError("write_png: empty image");
    }
    if (bit_depth != 8 && bit_depth != 16) {
        throw IoError("write_png: bit depth must be 8 or 16");
    }
    const int maxval = bit_depth == 8 ? 255 : 65535;
    const int color_type = img.channels == 1 ? 0 : 2;
    const int bytes_per_sample = bit_depth / 8;
    const std::size_t rowbytes =
        static_cast<std::size_t>(img.width) * img.channels * bytes_per_sample;

    std::vector<unsigned char> raw;
    raw.reserve(img.height * (rowbytes + 1));
    for (int y = 0; y < img.height; ++y) {
        raw.push_back(0);  // filter: None
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < img.channels; ++c) {
                const int q = quantize(img.at(y, x, c), maxval);
                if (bit_depth == 16) {
                    raw.push_back(static_cast<unsigned char>(q >> 8));
                }
                raw.push_back(static_cast<unsigned char>(q & 0xFF));
            }
        }
    }

    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<unsigned char> compressed(bound);
    const int rc =
        compress2(compressed.data(), &bound, raw.data(),
                  static_cast<uLong>(raw.size()), Z_DEFAULT_COMPRESSION);
    if (rc != Z_OK) {
        throw IoError("write_png: deflate failed");
    }
    compressed.resize(bound);

    std::vector<unsigned char> ihdr;
    push_u32(ihdr, static_cast<std::uint32_t>(img.width));
    push_u32(ihdr, static_cast<std::uint32_t>(img.height));
    ihdr.push_back(static_cast<unsigned char>(bit_depth));
    ihdr.push_back(static_cast<unsigned char>(color_type));
    ihdr.push_back(0);  // compression
    ihdr.push_back(0);  // filter
    ihdr.push_back(0);  // interlace

    std::vector<unsigned char> out(kPngSignature, kPngSignature + 8);
    push_chunk(out, "IHDR", ihdr);
    push_chunk(out, "IDAT", compressed);
    push_chunk(out, "IEND", {});
    write_file(path, out);
}

namespace {

int next_pnm_token(const std::vector<unsigned char>& file, std::size_t& pos) {
    while (pos < file.size()) {
        if (file[pos] == '#') {
            while (pos < file.size() && file[pos] != '\n') {
                ++pos;
            }
        } else if (std::isspace(file[pos])) {
            ++pos;
        } else {
            break;
        }
    }
    if (pos >= file.size() || !std::isdigit(file[pos])) {
        throw IoError("PNM: malformed header");
    }
    int value = 0;
    while (pos < file.size() && std::isdigit(file[pos])) {
        value = value * 10 + (file[pos] - '0');
        ++pos;
    }
    return value;
}

}  // namespace

ImageBuf read_pnm(const std::string& path) {
    const std::vector<unsigned char> file = read_file(path);
    if (file.size() < 2 || file[0] != 'P' ||
        (file[1] != '5' && file[1] != '6')) {
        throw IoError(path + ": not a binary PGM/PPM file");
    }
    const int channels = file[1] == '6' ? 3 : 1;
    std::size_t pos = 2;
    const int width = next_pnm_token(file, pos);
    const int height = next_pnm_token(file, pos);
    const int maxval = next_pnm_token(file, pos);
    if (width < 1 || height < 1 || maxval < 1 || maxval > 65535) {
        throw IoError(path + ": bad PNM dimensions");
    }
    ++pos;  // single whitespace byte after maxval
    const int bytes_per_sample = maxval > 255 ? 2 : 1;
    const std::size_t need = static_cast<std::size_t>(width) * height *
                             channels * bytes_per_sample;
    if (pos + need > file.size()) {
        throw IoError(path + ": truncated PNM data");
    }
    ImageBuf img(height, width, channels);
    const unsigned char* p = file.data() + pos;
    for (float& v : img.data) {
        unsigned value;
        if (bytes_per_sample == 1) {
            value = *p++;
        } else {
            value = (unsigned(p[0]) << 8) | p[1];
            p += 2;
        }
        v = static_cast<float>(static_cast<double>(value) / maxval);
    }
    return img;
}

void write_pnm(const ImageBuf& img, const std::string& path, int bit_depth) {
    if (img.empty()) {
        throw IoError("write_pnm: empty image");
    }
    if (bit_depth != 8 && bit_depth != 16) {
        throw IoError("write_pnm: bit depth must be 8 or 16");
    }
    const int maxval = bit_depth == 8 ? 255 : 65535;
    std::string header = img.channels == 3 ? "P6" : "P5";
    header += "\n" + std::to_string(img.width) + " " +
              std::to_string(img.height) + "\n" + std::to_string(maxval) +
              "\n";
    std::vector<unsigned char> out(header.begin(), header.end());
    for (float v : img.data) {
        const int q = quantize(v, maxval);
        if (bit_depth == 16) {
            out.push_back(static_cast<unsigned char>(q >> 8));
        }
        out.push_back(static_cast<unsigned char>(q & 0xFF));
    }
    write_file(path, out);
}

ImageBuf read_image(const std::string& path) {
    const std::vector<unsigned char> head = read_file(path);
    if (head.size() >= 8 &&
        std::memcmp(head.data(), kPngSignature, 8) == 0) {
        return read_png(path);
    }
    if (head.size() >= 2 && head[0] == 'P' &&
        (head[1] == '5' || head[1] == '6')) {
        return read_pnm(path);
    }
    throw IoError(path + ": unrecognized image format");
}

namespace {

std::string lower_ext(const std::string& path) {
    const std::size_t dot = path.rfind('.');
    if (dot == std::string::npos) {
        return "";
    }
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext;
}

}  // namespace

void write_image(const ImageBuf& img, const std::string& path,
                 int bit_depth) {
    const std::string ext = lower_ext(path);
    if (ext == "png") {
        write_png(img, path, bit_depth);
    } else if (ext == "ppm" || ext == "pgm" || ext == "pnm") {
        write_pnm(img, path, bit_depth);
    } else {
        throw IoError(path + ": unsupported output extension ." + ext);
    }
}

}  // namespace amplipix
