#include "amplipix/filters.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace amplipix {

namespace {

void validate_se(const StructuringElement& se, const ImageBuf& img) {
    if (se.rows < 1 || se.cols < 1 || se.channels < 1) {
        throw ShapeError("structuring element sizes must be >= 1");
    }
    if (se.channels > img.channels) {
        throw ShapeError(
            "structuring element spans more channels than the image has");
    }
}

// Offset range for window size k: [-(k-1)/2, k/2]. Centered for odd k;
// even k anchors at the top-left of the window pair.
inline int win_lo(int k) { return -((k - 1) / 2); }
inline int win_hi(int k) { return k / 2; }

// Mean over the truncated (2r+1)^2 window of one plane, via a summed-area
// table with 64-bit accumulation.
std::vector<double> box_mean_plane(const std::vector<double>& src, int h,
                                   int w, int radius) {
    std::vector<double> sat(static_cast<std::size_t>(h + 1) * (w + 1), 0.0);
    for (int y = 0; y < h; ++y) {
        const std::size_t row = static_cast<std::size_t>(y + 1) * (w + 1);
        const std::size_t prev = static_cast<std::size_t>(y) * (w + 1);
        for (int x = 0; x < w; ++x) {
            sat[row + x + 1] = src[static_cast<std::size_t>(y) * w + x] +
                               sat[prev + x + 1] + sat[row + x] -
                               sat[prev + x];
        }
    }
    std::vector<double> out(static_cast<std::size_t>(h) * w);
    for (int y = 0; y < h; ++y) {
        const int y0 = std::max(0, y - radius);
        const int y1 = std::min(h - 1, y + radius);
        const std::size_t top = static_cast<std::size_t>(y0) * (w + 1);
        const std::size_t bot = static_cast<std::size_t>(y1 + 1) * (w + 1);
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(0, x - radius);
            const int x1 = std::min(w - 1, x + radius);
            const double sum =
                sat[bot + x1 + 1] - sat[top + x1 + 1] - sat[bot + x0] +
                sat[top + x0];
            const int count = (y1 - y0 + 1) * (x1 - x0 + 1);
            out[static_cast<std::size_t>(y) * w + x] = sum / count;
        }
    }
    return out;
}

std::vector<double> extract_plane(const ImageBuf& img, int c) {
    std::vector<double> plane(static_cast<std::size_t>(img.height) *
                              img.width);
    std::size_t i = 0;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            plane[i++] = img.at(y, x, c);
        }
    }
    return plane;
}

std::vector<double> gray_plane(const ImageBuf& img) {
    if (img.channels == 1) {
        return extract_plane(img, 0);
    }
    std::vector<double> plane(static_cast<std::size_t>(img.height) *
                              img.width);
    std::size_t i = 0;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            plane[i++] = (static_cast<double>(img.at(y, x, 0)) +
                          img.at(y, x, 1) + img.at(y, x, 2)) /
                         3.0;
        }
    }
    return plane;
}

std::vector<double> mul_planes(const std::vector<double>& a,
                               const std::vector<double>& b) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] * b[i];
    }
    return out;
}

template <typename Cmp>
ImageBuf extremum_filter(const ImageBuf& img, const StructuringElement& se,
                         Cmp better) {
    validate_se(se, img);
    ImageBuf out(img.height, img.width, img.channels);
    const int ry0 = win_lo(se.rows), ry1 = win_hi(se.rows);
    const int rx0 = win_lo(se.cols), rx1 = win_hi(se.cols);
    const int rc0 = win_lo(se.channels), rc1 = win_hi(se.channels);
    for (int y = 0; y < img.height; ++y) {
        const int y0 = std::max(0, y + ry0);
        const int y1 = std::min(img.height - 1, y + ry1);
        for (int x = 0; x < img.width; ++x) {
            const int x0 = std::max(0, x + rx0);
            const int x1 = std::min(img.width - 1, x + rx1);
            for (int c = 0; c < img.channels; ++c) {
                const int c0 = std::max(0, c + rc0);
                const int c1 = std::min(img.channels - 1, c + rc1);
                float best = img.at(y0, x0, c0);
                for (int yy = y0; yy <= y1; ++yy) {
                    for (int xx = x0; xx <= x1; ++xx) {
                        for (int cc = c0; cc <= c1; ++cc) {
                            const float v = img.at(yy, xx, cc);
                            if (better(v, best)) {
                                best = v;
                            }
                        }
                    }
                }
                out.at(y, x, c) = best;
            }
        }
    }
    return out;
}

}  // namespace

ImageBuf box_filter(const ImageBuf& img, int radius) {
    if (radius < 1) {
        throw Error("box_filter: radius must be >= 1");
    }
    ImageBuf out(img.height, img.width, img.channels);
    for (int c = 0; c < img.channels; ++c) {
        const std::vector<double> mean =
            box_mean_plane(extract_plane(img, c), img.height, img.width,
                           radius);
        std::size_t i = 0;
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                out.at(y, x, c) = static_cast<float>(mean[i++]);
            }
        }
    }
    return out;
}

ImageBuf guided_filter(const ImageBuf& guide, const ImageBuf& src,
                       const GuidedFilterParams& params) {
    if (params.radius < 1 || !(params.eps > 0.0f)) {
        throw Error("guided_filter: radius must be >= 1 and eps > 0");
    }
    if (guide.height != src.height || guide.width != src.width) {
        throw ShapeError("guided_filter: guide and src dimensions differ");
    }
    const int h = src.height;
    const int w = src.width;
    const int r = params.radius;
    const double eps = params.eps;

    const std::vector<double> g = gray_plane(guide);
    const std::vector<double> mean_g = box_mean_plane(g, h, w, r);
    const std::vector<double> corr_gg =
        box_mean_plane(mul_planes(g, g), h, w, r);

    ImageBuf out(h, w, src.channels);
    const std::size_t n = g.size();
    for (int c = 0; c < src.channels; ++c) {
        const std::vector<double> p = extract_plane(src, c);
        const std::vector<double> mean_p = box_mean_plane(p, h, w, r);
        const std::vector<double> corr_gp =
            box_mean_plane(mul_planes(g, p), h, w, r);

        std::vector<double> a(n);
        std::vector<double> b(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double var_g = corr_gg[i] - mean_g[i] * mean_g[i];
            const double cov_gp = corr_gp[i] - mean_g[i] * mean_p[i];
            a[i] = cov_gp / (var_g + eps);
            b[i] = mean_p[i] - a[i] * mean_g[i];
        }
        const std::vector<double> mean_a = box_mean_plane(a, h, w, r);
        const std::vector<double> mean_b = box_mean_plane(b, h, w, r);

        std::size_t i = 0;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x, ++i) {
                out.at(y, x, c) =
                    static_cast<float>(mean_a[i] * g[i] + mean_b[i]);
            }
        }
    }
    return out;
}

ImageBuf min_filter(const ImageBuf& img, const StructuringElement& se) {
    return extremum_filter(img, se,
                           [](float v, float best) { return v < best; });
}

ImageBuf max_filter(const ImageBuf& img, const StructuringElement& se) {
    return extremum_filter(img, se,
                           [](float v, float best) { return v > best; });
}

ImageBuf morphological_laplace(const ImageBuf& img,
                               const StructuringElement& se) {
    const ImageBuf dil = max_filter(img, se);
    const ImageBuf ero = min_filter(img, se);
    ImageBuf out(img.height, img.width, img.channels);
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        out.data[i] = static_cast<float>(static_cast<double>(dil.data[i]) +
                                         ero.data[i] - 2.0 * img.data[i]);
    }
    return out;
}

}  // namespace amplipix
