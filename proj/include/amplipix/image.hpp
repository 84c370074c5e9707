#pragma once

#include <array>
#include <cstddef>
#include <variant>
#include <vector>

#include "amplipix/error.hpp"

namespace amplipix {

// Row-major, channel-interleaved float raster. Values are nominally in
// [0, 1]; intermediate results (Laplace responses, unclipped recoveries)
// may step outside that range until a clip01() at the pipeline boundary.
struct ImageBuf {
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<float> data;

    ImageBuf() = default;
    ImageBuf(int height, int width, int channels, float fill = 0.0f);

    float& at(int y, int x, int c) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    float at(int y, int x, int c) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }

    std::size_t sample_count() const { return data.size(); }
    bool empty() const { return data.empty(); }
    bool same_shape(const ImageBuf& other) const {
        return height == other.height && width == other.width &&
               channels == other.channels;
    }
};

// The amplification center/direction: a scalar, a per-channel RGB vector,
// or a full RGB image. Broadcasts against 1- or 3-channel images.
class Atmosphere {
public:
    static Atmosphere scalar(float value);
    static Atmosphere rgb(float r, float g, float b);
    static Atmosphere map(ImageBuf image);  // must be 3-channel

    // Sample with broadcasting. (y, x) are ignored for scalar/rgb variants.
    float at(int y, int x, int c) const;

    bool is_scalar() const { return std::holds_alternative<float>(value_); }
    bool is_rgb() const {
        return std::holds_alternative<std::array<float, 3>>(value_);
    }
    bool is_map() const { return std::holds_alternative<ImageBuf>(value_); }

    bool strictly_positive() const;
    bool finite() const;

    // Scalar broadcasts to anything; Rgb needs a 3-channel target; Map needs
    // matching height/width.
    bool compatible_with(const ImageBuf& img) const;

private:
    explicit Atmosphere(std::variant<float, std::array<float, 3>, ImageBuf> v)
        : value_(std::move(v)) {}

    std::variant<float, std::array<float, 3>, ImageBuf> value_;
};

// out(x,c) = 1 - img(x,c). Exact involution on [0,1] images.
ImageBuf invert(const ImageBuf& img);

// Clamp every sample into [0,1]. Throws Error if any sample is NaN.
ImageBuf clip01(const ImageBuf& img);

struct CropResult {
    ImageBuf image;
    bool foreground_found = true;
};

// Tight axis-aligned bounding box around pixels whose channel mean exceeds
// background_threshold. If nothing exceeds the threshold the input is
// returned unchanged with foreground_found = false.
CropResult center_crop_fundus(const ImageBuf& img,
                              float background_threshold = 0.05f);

// Corner-aligned bilinear resampling with edge clamping: output corners
// sample input corners exactly. A 1-pixel output axis samples the input
// axis midpoint.
ImageBuf resize_bilinear(const ImageBuf& img, int out_h, int out_w);

// Sample statistics over all channels.
float min_sample(const ImageBuf& img);
float max_sample(const ImageBuf& img);
double mean_sample(const ImageBuf& img);
bool has_nan(const ImageBuf& img);

}  // namespace amplipix
