#pragma once

#include "amplipix/image.hpp"

namespace amplipix {

struct GuidedFilterParams {
    int radius = 1;     // window half-width in pixels
    float eps = 1e-8f;  // regularization added to window variance
};

// Rectangular structuring element for min/max morphology. Odd sizes are
// centered on the anchor; even sizes anchor at the top-left of the window
// pair, i.e. size k spans offsets [-(k-1)/2, k/2].
struct StructuringElement {
    int rows = 1;
    int cols = 1;
    int channels = 1;
};

// Mean over the (2r+1)x(2r+1) window centered at each pixel, truncated at
// borders (mean over valid pixels only), per channel. Implemented with
// summed-area tables so cost is independent of radius.
ImageBuf box_filter(const ImageBuf& img, int radius);

// Single-channel-guide guided filter:
//   a = cov(guide, src) / (var(guide) + eps)
//   b = mean(src) - a * mean(guide)
//   out = mean(a) * guide + mean(b)
// with all window means via box_filter(radius). A 3-channel guide is
// reduced to its channel mean; a 3-channel src is filtered per channel.
ImageBuf guided_filter(const ImageBuf& guide, const ImageBuf& src,
                       const GuidedFilterParams& params);

// Window minimum / maximum with truncated borders. When se.channels > 1 the
// extremum also spans neighboring channels (same offset convention).
ImageBuf min_filter(const ImageBuf& img, const StructuringElement& se);
ImageBuf max_filter(const ImageBuf& img, const StructuringElement& se);

// max_filter(img, se) + min_filter(img, se) - 2 * img. Output range is not
// confined to [0,1]; callers normalize.
ImageBuf morphological_laplace(const ImageBuf& img,
                               const StructuringElement& se);

}  // namespace amplipix
