#include "amplipix/image.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace amplipix {

ImageBuf::ImageBuf(int height, int width, int channels, float fill)
    : height(height), width(width), channels(channels) {
    if (height < 1 || width < 1 || (channels != 1 && channels != 3)) {
        throw ShapeError("ImageBuf: invalid shape " + std::to_string(height) +
                         "x" + std::to_string(width) + "x" +
                         std::to_string(channels));
    }
    data.assign(static_cast<std::size_t>(height) * width * channels, fill);
}

Atmosphere Atmosphere::scalar(float value) { return Atmosphere(value); }

Atmosphere Atmosphere::rgb(float r, float g, float b) {
    return Atmosphere(std::array<float, 3>{r, g, b});
}

Atmosphere Atmosphere::map(ImageBuf image) {
    if (image.channels != 3) {
        throw ShapeError("Atmosphere::map requires a 3-channel image");
    }
    return Atmosphere(std::move(image));
}

float Atmosphere::at(int y, int x, int c) const {
    if (const float* s = std::get_if<float>(&value_)) {
        return *s;
    }
    if (const auto* v = std::get_if<std::array<float, 3>>(&value_)) {
        return (*v)[static_cast<std::size_t>(c)];
    }
    return std::get<ImageBuf>(value_).at(y, x, c);
}

bool Atmosphere::strictly_positive() const {
    if (const float* s = std::get_if<float>(&value_)) {
        return *s > 0.0f;
    }
    if (const auto* v = std::get_if<std::array<float, 3>>(&value_)) {
        return (*v)[0] > 0.0f && (*v)[1] > 0.0f && (*v)[2] > 0.0f;
    }
    const ImageBuf& m = std::get<ImageBuf>(value_);
    return std::all_of(m.data.begin(), m.data.end(),
                       [](float v) { return v > 0.0f; });
}

bool Atmosphere::finite() const {
    if (const float* s = std::get_if<float>(&value_)) {
        return std::isfinite(*s);
    }
    if (const auto* v = std::get_if<std::array<float, 3>>(&value_)) {
        return std::isfinite((*v)[0]) && std::isfinite((*v)[1]) &&
               std::isfinite((*v)[2]);
    }
    const ImageBuf& m = std::get<ImageBuf>(value_);
    return std::all_of(m.data.begin(), m.data.end(),
                       [](float v) { return std::isfinite(v); });
}

bool Atmosphere::compatible_with(const ImageBuf& img) const {
    if (is_scalar()) {
        return true;
    }
    if (is_rgb()) {
        return img.channels == 3;
    }
    const ImageBuf& m = std::get<ImageBuf>(value_);
    return m.height == img.height && m.width == img.width &&
           img.channels == 3;
}

ImageBuf invert(const ImageBuf& img) {
    ImageBuf out = img;
    for (float& v : out.data) {
        v = static_cast<float>(1.0 - static_cast<double>(v));
    }
    return out;
}

ImageBuf clip01(const ImageBuf& img) {
    ImageBuf out = img;
    for (float& v : out.data) {
        if (std::isnan(v)) {
            throw Error("clip01: NaN sample in input");
        }
        v = std::clamp(v, 0.0f, 1.0f);
    }
    return out;
}

CropResult center_crop_fundus(const ImageBuf& img, float background_threshold) {
    if (img.channels != 3) {
        throw ShapeError("center_crop_fundus requires a 3-channel image");
    }
    int y_min = img.height;
    int y_max = -1;
    int x_min = img.width;
    int x_max = -1;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double mean = (static_cast<double>(img.at(y, x, 0)) +
                                 img.at(y, x, 1) + img.at(y, x, 2)) /
                                3.0;
            if (mean > background_threshold) {
                y_min = std::min(y_min, y);
                y_max = std::max(y_max, y);
                x_min = std::min(x_min, x);
                x_max = std::max(x_max, x);
            }
        }
    }
    if (y_max < 0) {
        return CropResult{img, false};
    }
    const int out_h = y_max - y_min + 1;
    const int out_w = x_max - x_min + 1;
    ImageBuf out(out_h, out_w, img.channels);
    for (int y = 0; y < out_h; ++y) {
        for (int x = 0; x < out_w; ++x) {
            for (int c = 0; c < img.channels; ++c) {
                out.at(y, x, c) = img.at(y_min + y, x_min + x, c);
            }
        }
    }
    return CropResult{std::move(out), true};
}

namespace {

// Corner-aligned source coordinate for output index i of n samples.
inline double src_coord(int i, int out_n, int in_n) {
    if (out_n <= 1) {
        return (in_n - 1) * 0.5;
    }
    return static_cast<double>(i) * (in_n - 1) / (out_n - 1);
}

}  // namespace

ImageBuf resize_bilinear(const ImageBuf& img, int out_h, int out_w) {
    if (out_h < 1 || out_w < 1) {
        throw ShapeError("resize_bilinear: output dimensions must be >= 1");
    }
    ImageBuf out(out_h, out_w, img.channels);
    for (int y = 0; y < out_h; ++y) {
        const double sy = src_coord(y, out_h, img.height);
        const int y0 = static_cast<int>(sy);
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double fy = sy - y0;
        for (int x = 0; x < out_w; ++x) {
            const double sx = src_coord(x, out_w, img.width);
            const int x0 = static_cast<int>(sx);
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double fx = sx - x0;
            for (int c = 0; c < img.channels; ++c) {
                const double top = img.at(y0, x0, c) * (1.0 - fx) +
                                   img.at(y0, x1, c) * fx;
                const double bot = img.at(y1, x0, c) * (1.0 - fx) +
                                   img.at(y1, x1, c) * fx;
                out.at(y, x, c) =
                    static_cast<float>(top * (1.0 - fy) + bot * fy);
            }
        }
    }
    return out;
}

float min_sample(const ImageBuf& img) {
    float m = std::numeric_limits<float>::infinity();
    for (float v : img.data) {
        m = std::min(m, v);
    }
    return m;
}

float max_sample(const ImageBuf& img) {
    float m = -std::numeric_limits<float>::infinity();
    for (float v : img.data) {
        m = std::max(m, v);
    }
    return m;
}

double mean_sample(const ImageBuf& img) {
    double sum = 0.0;
    for (float v : img.data) {
        sum += v;
    }
    return img.data.empty() ? 0.0 : sum / static_cast<double>(img.data.size());
}

bool has_nan(const ImageBuf& img) {
    return std::any_of(img.data.begin(), img.data.end(),
                       [](float v) { return std::isnan(v); });
}

}  // namespace amplipix
