#include "amplipix/sharpen.hpp"

#include <algorithm>
#include <cmath>

namespace amplipix {

namespace {

constexpr float kRecoveryEpsFloor = 1e-8f;

}  // namespace

ImageBuf sharpen_simple(const ImageBuf& img, const SharpenParams& params,
                        const TransmissionMap* t_override) {
    if (!(params.scalar_t > 0.0f && params.scalar_t <= 1.0f)) {
        throw Error("sharpen_simple: scalar_t must be in (0, 1]");
    }
    if (t_override && (t_override->map.height != img.height ||
                       t_override->map.width != img.width ||
                       (t_override->map.channels != 1 &&
                        t_override->map.channels != img.channels))) {
        throw ShapeError("sharpen_simple: t_override shape mismatch");
    }

    const ImageBuf atmosphere = guided_filter(img, img, params.blur);

    // eps* clamp only matters for provided maps; the scalar rate is already
    // bounded away from zero.
    double eps_star = 0.0;
    if (t_override) {
        eps_star = std::max(static_cast<double>(kRecoveryEpsFloor),
                            t_override->min_value() / 2.0);
    }

    ImageBuf result(img.height, img.width, img.channels);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < img.channels; ++c) {
                const double tv =
                    t_override
                        ? std::max(static_cast<double>(
                                       t_override->value_at(y, x, c)),
                                   eps_star)
                        : static_cast<double>(params.scalar_t);
                const double av = atmosphere.at(y, x, c);
                const double iv = img.at(y, x, c);
                result.at(y, x, c) =
                    static_cast<float>((iv - av) / tv + av);
            }
        }
    }

    if (std::min(img.height, img.width) > params.denoise_threshold) {
        result = guided_filter(img, result, params.blur);
    }
    return result;
}

ImageBuf sharpen_complex(const ImageBuf& img, const SharpenParams& params) {
    // The Laplace response is deliberately left unclipped: the negative
    // lobes carry half the edge signal and the normalization below absorbs
    // the range anyway.
    const ImageBuf laplace = morphological_laplace(img, params.laplace_se);
    ImageBuf response = sharpen_simple(laplace, params);

    const float lo = min_sample(response);
    const float hi = max_sample(response);
    TransmissionMap t;
    if (hi == lo) {
        // Flat response: identity sharpening.
        t.map = ImageBuf(img.height, img.width, img.channels, 1.0f);
    } else {
        const double range = static_cast<double>(hi) - lo;
        for (float& v : response.data) {
            v = static_cast<float>(1.0 - (static_cast<double>(v) - lo) / range);
        }
        const float eps = std::max(1e-8f, min_sample(response) / 2.0f);
        for (float& v : response.data) {
            v = std::max(v, eps);
        }
        t.map = std::move(response);
    }

    return clip01(sharpen_simple(img, params, &t));
}

}  // namespace amplipix
