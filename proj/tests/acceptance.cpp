// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances are fixed here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "amplipix/amplify.hpp"
#include "amplipix/compose.hpp"
#include "amplipix/filters.hpp"
#include "amplipix/image_io.hpp"
#include "amplipix/run.hpp"
#include "amplipix/sharpen.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace amplipix;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), format, a, b);
    return buf;
}

// --- 1. identity suite -----------------------------------------------------

bool identity_suite(std::string& detail) {
    const auto start = Clock::now();
    std::mt19937 rng(1001);
    std::uniform_real_distribution<float> unit(0.0f, 1.0f);
    const Atmosphere ones = Atmosphere::scalar(1.0f);
    float worst_recovery = 0.0f;

    for (int trial = 0; trial < 50; ++trial) {
        const int omega = 1 + trial % 5;
        const ImageBuf img = synth::random_image(rng, 16, 16, 3);

        const ImageBuf min_lhs = invert(solve_min_t(img, ones, omega).map);
        const ImageBuf min_rhs = solve_max_t(invert(img), ones, omega).map;
        if (!synth::bitwise_equal(min_lhs, min_rhs)) {
            detail = "min-statistic inversion identity not exact";
            return false;
        }
        const ImageBuf max_lhs = invert(solve_max_t(img, ones, omega).map);
        const ImageBuf max_rhs = solve_min_t(invert(img), ones, omega).map;
        if (!synth::bitwise_equal(max_lhs, max_rhs)) {
            detail = "max-statistic inversion identity not exact";
            return false;
        }

        const TransmissionMap t{
            synth::random_image(rng, 16, 16, 1, 0.1f, 1.0f)};
        Atmosphere a = Atmosphere::scalar(unit(rng));
        Atmosphere a_inv = Atmosphere::scalar(1.0f - a.at(0, 0, 0));
        if (trial % 3 == 1) {
            const float r = unit(rng), g = unit(rng), b = unit(rng);
            a = Atmosphere::rgb(r, g, b);
            a_inv = Atmosphere::rgb(1.0f - r, 1.0f - g, 1.0f - b);
        } else if (trial % 3 == 2) {
            const ImageBuf amap = synth::random_image(rng, 16, 16, 3);
            a = Atmosphere::map(amap);
            a_inv = Atmosphere::map(invert(amap));
        }
        const ImageBuf rec_lhs = solve_j(img, t, a, 1e-8f);
        const ImageBuf rec_rhs = invert(solve_j(invert(img), t, a_inv, 1e-8f));
        worst_recovery = std::max(worst_recovery, synth::max_abs_diff(rec_lhs, rec_rhs));
    }

    const double elapsed = seconds_since(start);
    detail = fmt("max recovery-inversion gap = %.2e, %.2f s", worst_recovery, elapsed);
    return worst_recovery < 1e-6f && elapsed < 5.0;
}

// --- 2. ordering suite ------------------------------------------------------

bool ordering_suite(std::string& detail) {
    std::mt19937 rng(1002);
    std::uniform_real_distribution<float> unit(0.0f, 1.0f);
    long long samples = 0;
    for (int trial = 0; trial < 30; ++trial) {
        const ImageBuf img = synth::random_image(rng, 12, 12, 3);
        const TransmissionMap t{
            synth::random_image(rng, 12, 12, 1, 0.05f, 1.0f)};
        Atmosphere a = Atmosphere::scalar(unit(rng));
        if (trial % 3 == 1) {
            a = Atmosphere::rgb(unit(rng), unit(rng), unit(rng));
        } else if (trial % 3 == 2) {
            a = Atmosphere::map(synth::random_image(rng, 12, 12, 3));
        }
        const ImageBuf j = solve_j(img, t, a, 1e-8f);
        for (int y = 0; y < 12; ++y) {
            for (int x = 0; x < 12; ++x) {
                for (int c = 0; c < 3; ++c) {
                    const float iv = img.at(y, x, c);
                    const float av = a.at(y, x, c);
                    const float jv = j.at(y, x, c);
                    ++samples;
                    if (av >= iv) {
                        if (!(jv <= iv + 1e-9f && iv <= av + 1e-9f)) {
                            detail = "J <= I <= A violated";
                            return false;
                        }
                    } else {
                        if (!(jv >= iv - 1e-9f && iv >= av - 1e-9f)) {
                            detail = "J >= I >= A violated";
                            return false;
                        }
                    }
                }
            }
        }
    }
    detail = fmt("%.0f samples ordered correctly",
                 static_cast<double>(samples));
    return true;
}

// --- 3. direct attenuation ---------------------------------------------------

bool direct_attenuation(std::string& detail) {
    std::mt19937 rng(1003);
    float worst = 0.0f;
    for (int trial = 0; trial < 30; ++trial) {
        const ImageBuf img = synth::random_image(rng, 12, 12, 3);
        const TransmissionMap t{
            synth::random_image(rng, 12, 12, 1, 0.1f, 1.0f)};
        const ImageBuf via_inversion =
            invert(solve_j(invert(img), t, Atmosphere::scalar(1.0f), 1e-8f));
        const double eps_star =
            std::max(1e-8, static_cast<double>(t.min_value()) / 2.0);
        for (int y = 0; y < 12; ++y) {
            for (int x = 0; x < 12; ++x) {
                for (int c = 0; c < 3; ++c) {
                    const double expected =
                        img.at(y, x, c) /
                        std::max(static_cast<double>(t.value_at(y, x, c)),
                                 eps_star);
                    worst = std::max(
                        worst,
                        std::abs(via_inversion.at(y, x, c) -
                                 static_cast<float>(expected)));
                }
            }
        }
    }
    detail = fmt("max |1 - solve_j(1-I,t,1) - I/t| = %.2e", worst);
    return worst < 1e-6f;
}

// --- 4. unsharp equivalence ---------------------------------------------------

bool unsharp_equivalence(std::string& detail) {
    std::mt19937 rng(1004);
    const SharpenParams params;  // radius 30, eps 1e-8, t = 0.15
    float worst = 0.0f;
    for (int trial = 0; trial < 3; ++trial) {
        const ImageBuf img = synth::random_image(rng, 64, 64, 3);
        const ImageBuf blurred = guided_filter(img, img, params.blur);
        const ImageBuf j = sharpen_simple(img, params);
        const double u = 1.0 / params.scalar_t;
        for (std::size_t i = 0; i < img.data.size(); ++i) {
            const double expected =
                u * img.data[i] - (u - 1.0) * blurred.data[i];
            worst = std::max(
                worst,
                std::abs(j.data[i] - static_cast<float>(expected)));
        }
    }
    detail = fmt("max |J - (u I - (u-1) blur)| = %.2e", worst);
    return worst < 1e-6f;
}

// --- 5. guided filter oracle ---------------------------------------------------

bool guided_oracle(std::string& detail) {
    std::mt19937 rng(1005);
    float worst = 0.0f;
    for (int radius = 1; radius <= 3; ++radius) {
        for (int channels : {1, 3}) {
            const ImageBuf guide = synth::random_image(rng, 12, 12, channels);
            const ImageBuf src = synth::random_image(rng, 12, 12, channels);
            const GuidedFilterParams params{radius, 1e-4f};
            const ImageBuf got = guided_filter(guide, src, params);
            const ImageBuf expected =
                oracle::naive_guided(guide, src, radius, 1e-4);
            worst = std::max(worst, synth::max_abs_diff(got, expected));
        }
    }
    if (worst >= 1e-5f) {
        detail = fmt("oracle gap %.2e >= 1e-5", worst);
        return false;
    }

    const ImageBuf flat(256, 256, 3, 0.42f);
    const ImageBuf filtered =
        guided_filter(flat, flat, GuidedFilterParams{100, 1e-8f});
    const float fixed_gap = synth::max_abs_diff(filtered, flat);
    detail = fmt("oracle gap %.2e, radius-100 fixed point gap %.2e", worst,
                 fixed_gap);
    return fixed_gap < 1e-6f;
}

// --- 6. min/max/box oracle -----------------------------------------------------

bool window_filter_oracles(std::string& detail) {
    std::mt19937 rng(1006);
    const ImageBuf img = synth::random_image(rng, 8, 8, 3);
    for (int rows = 1; rows <= 5; ++rows) {
        for (int cols = 1; cols <= 5; ++cols) {
            for (int chans : {1, 2, 3}) {
                const StructuringElement se{rows, cols, chans};
                if (!synth::bitwise_equal(
                        min_filter(img, se),
                        oracle::naive_window_min(img, rows, cols, chans)) ||
                    !synth::bitwise_equal(
                        max_filter(img, se),
                        oracle::naive_window_max(img, rows, cols, chans))) {
                    detail = "min/max mismatch at size " +
                             std::to_string(rows) + "x" +
                             std::to_string(cols) + "x" +
                             std::to_string(chans);
                    return false;
                }
            }
        }
    }
    float worst_box = 0.0f;
    for (int radius = 1; radius <= 5; ++radius) {
        worst_box = std::max(
            worst_box, synth::max_abs_diff(box_filter(img, radius),
                                           oracle::naive_box_mean(img,
                                                                  radius)));
    }
    detail = fmt("min/max exact, box gap %.2e", worst_box);
    return worst_box < 1e-6f;
}

// --- 7. brighten/darken contract ------------------------------------------------

bool brighten_darken_contract(std::string& detail) {
    const ImageBuf img = synth::fundus(128, 128);
    const AmplifyParams params;  // full-scale defaults
    for (LetterMethod m : {LetterMethod::A, LetterMethod::B, LetterMethod::C,
                           LetterMethod::D}) {
        const ImageBuf j = letter_method_unclipped(img, m, params);
        for (std::size_t i = 0; i < img.data.size(); ++i) {
            if (!(j.data[i] >= img.data[i])) {
                detail = std::string("method ") + letter_name(m) +
                         " failed J >= I";
                return false;
            }
        }
    }
    for (LetterMethod m : {LetterMethod::W, LetterMethod::X, LetterMethod::Y,
                           LetterMethod::Z}) {
        const ImageBuf j = letter_method_unclipped(img, m, params);
        for (std::size_t i = 0; i < img.data.size(); ++i) {
            if (!(j.data[i] <= img.data[i])) {
                detail = std::string("method ") + letter_name(m) +
                         " failed J <= I";
                return false;
            }
        }
    }
    detail = "all eight methods ordered correctly on every sample";
    return true;
}

// --- 8. edge selectivity ----------------------------------------------------------

bool edge_selectivity(std::string& detail) {
    const int n = 256;
    const double radius = 80.0;
    const ImageBuf img =
        synth::disc(n, n, n / 2.0, n / 2.0, radius, 0.7f, 0.1f);
    const SharpenParams params;  // blur radius 30
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
    const double edge_mean = edge_sum / edge_n;
    const double interior_mean = interior_sum / interior_n;

    const ImageBuf flat(64, 64, 3, 0.5f);
    const bool fixed_point =
        synth::bitwise_equal(sharpen_complex(flat, params), flat);
    detail = fmt("edge/interior mean ratio %.1f",
                 interior_mean > 0.0 ? edge_mean / interior_mean : 1e9);
    detail += fixed_point ? ", constant fixed point holds"
                          : ", constant fixed point VIOLATED";
    return fixed_point &&
           (interior_mean == 0.0 || edge_mean >= 2.0 * interior_mean);
}

// --- 9. composition semantics ------------------------------------------------------

bool composition_semantics(std::string& detail) {
    const ImageBuf img = synth::fundus(64, 64);
    const AmplifyParams ap;
    const SharpenParams sp;

    const ImageBuf a_out = letter_method(img, LetterMethod::A, ap);
    const ImageBuf x_out = letter_method(img, LetterMethod::X, ap);

    ImageBuf mean(img.height, img.width, img.channels);
    for (std::size_t i = 0; i < mean.data.size(); ++i) {
        mean.data[i] = static_cast<float>(
            (static_cast<double>(a_out.data[i]) + x_out.data[i]) / 2.0);
    }
    const float gap_plain = synth::max_abs_diff(
        evaluate("A+X", img, ap, sp), clip01(sharpen_complex(mean, sp)));

    const ImageBuf sa = sharpen_complex(a_out, sp);
    const ImageBuf sx = sharpen_complex(x_out, sp);
    ImageBuf smean(img.height, img.width, img.channels);
    for (std::size_t i = 0; i < smean.data.size(); ++i) {
        smean.data[i] = static_cast<float>(
            (static_cast<double>(sa.data[i]) + sx.data[i]) / 2.0);
    }
    const float gap_sharp =
        synth::max_abs_diff(evaluate("sA+sX", img, ap, sp), clip01(smean));

    const float gap_bare = synth::max_abs_diff(
        evaluate("X", img, ap, sp), clip01(sharpen_complex(x_out, sp)));

    const float worst = std::max({gap_plain, gap_sharp, gap_bare});
    detail = fmt("max composition gap %.2e", worst);
    return worst < 1e-6f;
}

// --- 10. end-to-end determinism ------------------------------------------------------

bool batch_determinism(std::string& detail) {
    const fs::path root =
        fs::temp_directory_path() /
        ("amplipix_accept_" + std::to_string(std::random_device{}()));
    const fs::path in_dir = root / "in";
    fs::create_directories(in_dir);
    struct Cleanup {
        fs::path p;
        ~Cleanup() {
            std::error_code ec;
            fs::remove_all(p, ec);
        }
    } cleanup{root};

    std::mt19937 rng(1010);
    std::uniform_real_distribution<float> jitter(-0.01f, 0.01f);
    std::vector<std::string> names;
    for (int i = 0; i < 8; ++i) {
        ImageBuf img = synth::fundus(300, 400);
        for (float& v : img.data) {
            v = std::clamp(v + jitter(rng), 0.0f, 1.0f);
        }
        const std::string name = "img" + std::to_string(i) + ".png";
        write_png(img, (in_dir / name).string());
        names.push_back(name);
    }

    cli::RunConfig cfg;  // full defaults: crop, resize 512x512, clip
    cfg.method = "A+X";
    cfg.input_dir = in_dir.string();
    std::ostringstream err;

    cfg.jobs = 1;
    cfg.output_dir = (root / "out1").string();
    const auto start = Clock::now();
    if (cli::cmd_batch(cfg, err) != cli::kExitOk) {
        detail = "batch with jobs=1 failed: " + err.str();
        return false;
    }
    const double per_image = seconds_since(start) / 8.0;

    cfg.jobs = 4;
    cfg.output_dir = (root / "out4").string();
    if (cli::cmd_batch(cfg, err) != cli::kExitOk) {
        detail = "batch with jobs=4 failed: " + err.str();
        return false;
    }

    for (const std::string& name : names) {
        std::ifstream f1(root / "out1" / name, std::ios::binary);
        std::ifstream f4(root / "out4" / name, std::ios::binary);
        const std::string b1((std::istreambuf_iterator<char>(f1)),
                             std::istreambuf_iterator<char>());
        const std::string b4((std::istreambuf_iterator<char>(f4)),
                             std::istreambuf_iterator<char>());
        if (b1.empty() || b1 != b4) {
            detail = name + " differs between jobs=1 and jobs=4";
            return false;
        }
    }
    detail = fmt("outputs byte-identical, %.2f s per 512x512 image",
                 per_image);
    return per_image < 2.0;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<bool(std::string&)> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "identity suite (min/max and recovery inversions)",
         identity_suite},
        {2, "amplification ordering", ordering_suite},
        {3, "direct-attenuation equivalence", direct_attenuation},
        {4, "unsharp masking equivalence", unsharp_equivalence},
        {5, "guided filter oracle", guided_oracle},
        {6, "min/max/box filter oracles", window_filter_oracles},
        {7, "brighten/darken contract", brighten_darken_contract},
        {8, "edge-selective sharpening", edge_selectivity},
        {9, "composition semantics", composition_semantics},
        {10, "batch determinism and throughput", batch_determinism},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL",
                    c.id, c.name, detail.c_str());
        std::fflush(stdout);
        failures += !ok;
    }
    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
    }
    return failures == 0 ? 0 : 1;
}
