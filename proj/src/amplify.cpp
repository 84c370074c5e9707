#include "amplipix/amplify.hpp"

#include <algorithm>
#include <cmath>

namespace amplipix {

namespace {

// I/A with broadcasting, reduced to the per-pixel channel minimum or
// maximum. Division happens at the source pixel, so image atmospheres give
// per-pixel control.
ImageBuf channel_extremum_ratio(const ImageBuf& img, const Atmosphere& a,
                                bool take_min) {
    ImageBuf out(img.height, img.width, 1);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double best = static_cast<double>(img.at(y, x, 0)) / a.at(y, x, 0);
            for (int c = 1; c < img.channels; ++c) {
                const double v =
                    static_cast<double>(img.at(y, x, c)) / a.at(y, x, c);
                best = take_min ? std::min(best, v) : std::max(best, v);
            }
            out.at(y, x, 0) = static_cast<float>(best);
        }
    }
    return out;
}

TransmissionMap solve_extremum_t(const ImageBuf& img, const Atmosphere& a,
                                 int omega, bool take_min) {
    if (img.channels != 3) {
        throw ShapeError("transmission solvers require a 3-channel image");
    }
    if (omega < 1) {
        throw Error("transmission solvers: omega must be >= 1");
    }
    if (!a.strictly_positive()) {
        throw Error("transmission solvers: atmosphere must be > 0");
    }
    if (!a.compatible_with(img)) {
        throw ShapeError("transmission solvers: atmosphere shape mismatch");
    }
    const ImageBuf reduced = channel_extremum_ratio(img, a, take_min);
    const StructuringElement window{omega, omega, 1};
    const ImageBuf ext =
        take_min ? min_filter(reduced, window) : max_filter(reduced, window);
    return TransmissionMap{invert(ext)};
}

ImageBuf with_blue_as_ones(const ImageBuf& img) {
    ImageBuf out = img;
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            out.at(y, x, 2) = 1.0f;
        }
    }
    return out;
}

void require_no_nan(const ImageBuf& img, const char* what) {
    if (has_nan(img)) {
        throw Error(std::string("solve_j: NaN in ") + what);
    }
}

}  // namespace

TransmissionMap solve_min_t(const ImageBuf& img, const Atmosphere& a,
                            int omega) {
    return solve_extremum_t(img, a, omega, /*take_min=*/true);
}

TransmissionMap solve_max_t(const ImageBuf& img, const Atmosphere& a,
                            int omega) {
    return solve_extremum_t(img, a, omega, /*take_min=*/false);
}

TransmissionMap raw_transmission_for_prior(const ImageBuf& img,
                                           PriorKind prior,
                                           const AmplifyParams& params) {
    if (img.channels != 3) {
        throw ShapeError("transmission priors require a 3-channel image");
    }
    const Atmosphere ones = Atmosphere::scalar(1.0f);
    const bool blue_trick =
        params.blue_channel_to_ones && (prior == PriorKind::StandardDcp ||
                                        prior == PriorKind::NovelStrongDark);
    switch (prior) {
        case PriorKind::ColorIllumination:
            return solve_min_t(invert(img), ones, params.omega);
        case PriorKind::StandardDcp: {
            const ImageBuf& base = blue_trick ? with_blue_as_ones(img) : img;
            return solve_min_t(base, ones, params.omega);
        }
        case PriorKind::NovelStrongDark: {
            const ImageBuf& base = blue_trick ? with_blue_as_ones(img) : img;
            return TransmissionMap{
                invert(solve_min_t(base, ones, params.omega).map)};
        }
        case PriorKind::BrightChannel:
            return TransmissionMap{
                invert(solve_min_t(invert(img), ones, params.omega).map)};
    }
    throw Error("unknown prior");
}

TransmissionMap transmission_for_prior(const ImageBuf& img, PriorKind prior,
                                       const AmplifyParams& params) {
    const TransmissionMap raw = raw_transmission_for_prior(img, prior, params);
    const ImageBuf refined = guided_filter(img, raw.map, params.t_refine);
    return TransmissionMap{clip01(refined)};
}

ImageBuf solve_j(const ImageBuf& img, const TransmissionMap& t,
                 const Atmosphere& a, float eps_floor) {
    if (!(eps_floor > 0.0f)) {
        throw Error("solve_j: eps_floor must be > 0");
    }
    if (t.map.height != img.height || t.map.width != img.width) {
        throw ShapeError("solve_j: transmission map dimensions differ");
    }
    if (t.map.channels != 1 && t.map.channels != img.channels) {
        throw ShapeError("solve_j: transmission map channels incompatible");
    }
    if (!a.compatible_with(img)) {
        throw ShapeError("solve_j: atmosphere shape mismatch");
    }
    require_no_nan(img, "image");
    require_no_nan(t.map, "transmission map");
    if (!a.finite()) {
        throw Error("solve_j: non-finite atmosphere");
    }

    const double eps_star =
        std::max(static_cast<double>(eps_floor), t.min_value() / 2.0);
    ImageBuf out(img.height, img.width, img.channels);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < img.channels; ++c) {
                const double av = a.at(y, x, c);
                const double tv = std::max(
                    static_cast<double>(t.value_at(y, x, c)), eps_star);
                const double iv = img.at(y, x, c);
                out.at(y, x, c) = static_cast<float>((iv - av) / tv + av);
            }
        }
    }
    return out;
}

PriorKind prior_for_letter(LetterMethod letter) {
    switch (letter) {
        case LetterMethod::A:
        case LetterMethod::W:
            return PriorKind::ColorIllumination;
        case LetterMethod::B:
        case LetterMethod::X:
            return PriorKind::StandardDcp;
        case LetterMethod::C:
        case LetterMethod::Y:
            return PriorKind::NovelStrongDark;
        case LetterMethod::D:
        case LetterMethod::Z:
            return PriorKind::BrightChannel;
    }
    throw Error("unknown letter method");
}

bool brightens(LetterMethod letter) {
    switch (letter) {
        case LetterMethod::A:
        case LetterMethod::B:
        case LetterMethod::C:
        case LetterMethod::D:
            return true;
        default:
            return false;
    }
}

char letter_name(LetterMethod letter) {
    static constexpr char names[] = {'A', 'B', 'C', 'D', 'W', 'X', 'Y', 'Z'};
    return names[static_cast<int>(letter)];
}

ImageBuf letter_method_unclipped(const ImageBuf& img, LetterMethod letter,
                                 const AmplifyParams& params,
                                 const TransmissionMap* t_override) {
    const TransmissionMap t =
        t_override ? *t_override
                   : transmission_for_prior(img, prior_for_letter(letter),
                                            params);
    const Atmosphere atm =
        Atmosphere::scalar(brightens(letter) ? 0.0f : 1.0f);
    return solve_j(img, t, atm, params.recovery_eps_floor);
}

ImageBuf letter_method(const ImageBuf& img, LetterMethod letter,
                       const AmplifyParams& params,
                       const TransmissionMap* t_override) {
    return clip01(letter_method_unclipped(img, letter, params, t_override));
}

}  // namespace amplipix
