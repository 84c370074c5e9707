#pragma once

#include "amplipix/filters.hpp"
#include "amplipix/image.hpp"

namespace amplipix {

// Per-pixel mixing coefficient: the fraction of undistorted signal. Priors
// produce values in [0,1]; recovery clamps below by a positive epsilon.
struct TransmissionMap {
    ImageBuf map;  // 1- or 3-channel

    // Broadcast accessor: a 1-channel map applies to every channel.
    float value_at(int y, int x, int c) const {
        return map.channels == 1 ? map.at(y, x, 0) : map.at(y, x, c);
    }
    float min_value() const { return min_sample(map); }
};

// The four priors, a 2x2 grid of {weak, strong} x {amplify dark, amplify
// bright} neighborhoods.
enum class PriorKind {
    ColorIllumination,  // weak, amplifies dark
    StandardDcp,        // weak, amplifies bright
    NovelStrongDark,    // strong, amplifies dark
    BrightChannel,      // strong, amplifies bright
};

// The eight whole-image methods: A-D brighten (recovery toward 0), W-Z
// darken (recovery toward 1), paired with the four priors in grid order.
enum class LetterMethod { A, B, C, D, W, X, Y, Z };

struct AmplifyParams {
    int omega = 5;  // square neighborhood size for the min/max statistics
    GuidedFilterParams t_refine{100, 1e-8f};
    float recovery_eps_floor = 1e-8f;
    // Replace the blue channel with ones before min statistics of the raw
    // image (fundus blue channels are noisy near their minimum). Applies
    // only to StandardDcp and NovelStrongDark.
    bool blue_channel_to_ones = true;
};

// t = 1 - min over channels and the omega x omega neighborhood of I/A.
// Single-channel output. Atmosphere must be strictly positive.
TransmissionMap solve_min_t(const ImageBuf& img, const Atmosphere& a,
                            int omega);

// t = 1 - max over channels and neighborhood of I/A. May go negative when
// any sample exceeds its atmosphere value; callers clip.
TransmissionMap solve_max_t(const ImageBuf& img, const Atmosphere& a,
                            int omega);

// The prior's map with A = 1, before guided refinement:
//   ColorIllumination: solve_min_t(1 - I)
//   StandardDcp:       solve_min_t(I)
//   NovelStrongDark:   1 - solve_min_t(I)
//   BrightChannel:     1 - solve_min_t(1 - I)
TransmissionMap raw_transmission_for_prior(const ImageBuf& img,
                                           PriorKind prior,
                                           const AmplifyParams& params);

// raw_transmission_for_prior, refined with guided_filter(guide = img) and
// clipped to [0,1].
TransmissionMap transmission_for_prior(const ImageBuf& img, PriorKind prior,
                                       const AmplifyParams& params);

// Recovery J = (I - A) / max(t, eps*) + A with eps* = max(eps_floor,
// min(t)/2). A 1-channel t broadcasts across channels. Output is NOT
// clipped so the inversion identities stay exact.
ImageBuf solve_j(const ImageBuf& img, const TransmissionMap& t,
                 const Atmosphere& a, float eps_floor);

PriorKind prior_for_letter(LetterMethod letter);
bool brightens(LetterMethod letter);  // true for A-D, false for W-Z
char letter_name(LetterMethod letter);

// Full letter method without the final clip: transmission_for_prior (or
// t_override when given), then solve_j with A = 0 (brighten) or A = 1
// (darken).
ImageBuf letter_method_unclipped(const ImageBuf& img, LetterMethod letter,
                                 const AmplifyParams& params,
                                 const TransmissionMap* t_override = nullptr);

// letter_method_unclipped followed by clip01.
ImageBuf letter_method(const ImageBuf& img, LetterMethod letter,
                       const AmplifyParams& params,
                       const TransmissionMap* t_override = nullptr);

}  // namespace amplipix
