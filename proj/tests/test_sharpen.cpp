#include <doctest.h>

#include <cmath>
#include <random>

#include "amplipix/sharpen.hpp"
#include "support/synthetic.hpp"

using namespace amplipix;

namespace {

SharpenParams small_blur() {
    SharpenParams p;
    p.blur = GuidedFilterParams{4, 1e-8f};
    return p;
}

}  // namespace

TEST_SUITE("sharpen") {

TEST_CASE("sharpen_simple keeps constants") {
    const ImageBuf img(16, 16, 3, 0.5f);
    const ImageBuf j = sharpen_simple(img, small_blur());
    CHECK(synth::max_abs_diff(j, img) < 1e-6f);
}

TEST_CASE("sharpen_simple with t = 1 override is the identity") {
    std::mt19937 rng(307);
    const ImageBuf img = synth::random_image(rng, 12, 12, 3);
    const TransmissionMap ones{ImageBuf(12, 12, 1, 1.0f)};
    const ImageBuf j = sharpen_simple(img, small_blur(), &ones);
    CHECK(synth::bitwise_equal(j, img));
}

TEST_CASE("sharpen_simple equals unsharp masking") {
    // J = u*I - (u-1)*blur(I) with u = 1/t; blur is the guided self-filter.
    std::mt19937 rng(311);
    const SharpenParams params = small_blur();
    const ImageBuf img = synth::random_image(rng, 24, 24, 3);
    const ImageBuf blurred = guided_filter(img, img, params.blur);
    const double u = 1.0 / params.scalar_t;

    const ImageBuf j = sharpen_simple(img, params);
    float worst = 0.0f;
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        const double expected =
            u * img.data[i] - (u - 1.0) * blurred.data[i];
        worst = std::max(worst,
                         std::abs(j.data[i] - static_cast<float>(expected)));
    }
    CHECK(worst < 1e-6f);
}

TEST_CASE("sharpen_simple rejects a mismatched override") {
    const ImageBuf img(8, 8, 3, 0.5f);
    const TransmissionMap wrong{ImageBuf(4, 8, 1, 1.0f)};
    CHECK_THROWS_AS(sharpen_simple(img, small_blur(), &wrong), ShapeError);
}

TEST_CASE("sharpen_simple denoise pass triggers on large images only") {
    std::mt19937 rng(313);
    SharpenParams params = small_blur();
    params.denoise_threshold = 10;
    const ImageBuf img = synth::random_image(rng, 12, 12, 3);

    SharpenParams no_denoise = params;
    no_denoise.denoise_threshold = 1500;
    const ImageBuf plain = sharpen_simple(img, no_denoise);
    const ImageBuf denoised = sharpen_simple(img, params);
    CHECK_FALSE(synth::bitwise_equal(plain, denoised));
    CHECK(synth::bitwise_equal(
        denoised, guided_filter(img, plain, params.blur)));
}

TEST_CASE("sharpen_complex is the identity on constants") {
    const ImageBuf img(20, 20, 3, 0.35f);
    const ImageBuf j = sharpen_complex(img, small_blur());
    CHECK(synth::max_abs_diff(j, img) < 1e-6f);
}

TEST_CASE("sharpen_complex transmission map spans [eps, 1]") {
    // Re-derive the map exactly as the algorithm does and check its range;
    // a non-flat response must normalize to max 1 and min at the eps floor.
    const SharpenParams params = small_blur();
    const ImageBuf img = synth::fundus(48, 48);
    ImageBuf response =
        sharpen_simple(morphological_laplace(img, params.laplace_se), params);
    const float lo = min_sample(response);
    const float hi = max_sample(response);
    REQUIRE(hi > lo);
    const double range = static_cast<double>(hi) - lo;
    for (float& v : response.data) {
        v = static_cast<float>(1.0 - (static_cast<double>(v) - lo) / range);
    }
    CHECK(max_sample(response) == 1.0f);
    CHECK(min_sample(response) == 0.0f);
    const float eps = std::max(1e-8f, min_sample(response) / 2.0f);
    CHECK(eps == 1e-8f);
}

TEST_CASE("sharpen_complex amplifies edges more than flat interiors") {
    const int n = 96;
    const double radius = 30.0;
    const ImageBuf img = synth::disc(n, n, n / 2.0, n / 2.0, radius, 0.7f,
                                     0.1f);
    SharpenParams params;
    params.blur = GuidedFilterParams{8, 1e-8f};
    const ImageBuf j = sharpen_complex(img, params);

    double edge_sum = 0.0, interior_sum = 0.0;
    int edge_n = 0, interior_n = 0;
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const double d = std::hypot(y - n / 2.0, x - n / 2.0);
            double diff = 0.0;
            for (int c = 0; c < 3; ++c) {
                diff += std::abs(j.at(y, x, c) - img.at(y, x, c));
            }
            if (std::abs(d - radius) <= 3.0) {
                edge_sum += diff;
                ++edge_n;
            } else if (d < radius - 3.0) {
                interior_sum += diff;
                ++interior_n;
            }
        }
    }
    REQUIRE(edge_n > 0);
    REQUIRE(interior_n > 0);
    const double edge_mean = edge_sum / edge_n;
    const double interior_mean = interior_sum / interior_n;
    CHECK(edge_mean > 2.0 * interior_mean);
}

TEST_CASE("sharpen_complex output is clipped") {
    const ImageBuf img = synth::fundus(40, 40);
    const ImageBuf j = sharpen_complex(img, small_blur());
    CHECK(min_sample(j) >= 0.0f);
    CHECK(max_sample(j) <= 1.0f);
}

TEST_CASE("scalar-t mean shift follows the unsharp identity") {
    // mean(J) = mean(I) + (1/t - 1) * (mean(I) - mean(blur(I))).
    std::mt19937 rng(331);
    const SharpenParams params = small_blur();
    const ImageBuf img = synth::random_image(rng, 20, 20, 3);
    const ImageBuf blurred = guided_filter(img, img, params.blur);
    const ImageBuf j = sharpen_simple(img, params);
    const double u = 1.0 / params.scalar_t;
    const double expected =
        mean_sample(img) +
        (u - 1.0) * (mean_sample(img) - mean_sample(blurred));
    CHECK(mean_sample(j) == doctest::Approx(expected).epsilon(1e-6));
}

}  // TEST_SUITE
