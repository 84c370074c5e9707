#pragma once

#include "amplipix/amplify.hpp"
#include "amplipix/filters.hpp"
#include "amplipix/image.hpp"

namespace amplipix {

struct SharpenParams {
    float scalar_t = 0.15f;             // amplification rate when no map given
    GuidedFilterParams blur{30, 1e-8f}; // the "blurry atmosphere" operator
    int denoise_threshold = 1500;       // min(H,W) above which output is denoised
    StructuringElement laplace_se{2, 2, 1};
};

// Sharpening as amplification with a blurred atmosphere:
//   A = guided_filter(guide = img, src = img, blur)
//   J = (I - A) / t + A
// t is scalar_t unless t_override is given (then the recovery epsilon rule
// max(1e-8, min(t)/2) applies). When min(H, W) > denoise_threshold the
// result gets one more guided filter pass against the input. Output is
// unclipped; with scalar t this is exactly unsharp masking with gain 1/t.
ImageBuf sharpen_simple(const ImageBuf& img, const SharpenParams& params = {},
                        const TransmissionMap* t_override = nullptr);

// Edge-selective sharpening: derives a 3-channel transmission map by
// sharpening the morphological Laplace of the image, min-max normalizing
// and inverting it, then runs sharpen_simple with that map. A flat Laplace
// response degenerates to the identity. Output clipped to [0,1].
ImageBuf sharpen_complex(const ImageBuf& img, const SharpenParams& params = {});

}  // namespace amplipix
