#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "amplipix/amplify.hpp"
#include "amplipix/compose.hpp"
#include "amplipix/image.hpp"
#include "amplipix/sharpen.hpp"

namespace amplipix::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitProcessing = 1;
inline constexpr int kExitUsage = 2;

struct PreprocessOptions {
    bool crop = true;
    float crop_threshold = 0.05f;
    bool resize = true;
    int resize_h = 512;
    int resize_w = 512;
    bool clip = true;
};

struct RunConfig {
    std::string method;
    std::vector<std::string> inputs;  // enhance: input files
    std::string output;               // enhance: file, or dir for multiple
    std::string input_dir;            // batch
    std::string output_dir;           // batch
    PreprocessOptions preprocess;
    AmplifyParams amplify;
    SharpenParams sharpen;
    int jobs = 1;
};

// Crop / resize / clip per options. Grayscale inputs are replicated to
// 3 channels first. Emits a warning line when crop finds no foreground.
ImageBuf preprocess(const ImageBuf& img, const PreprocessOptions& opts,
                    std::ostream& warn);

// Decode each input, preprocess, evaluate the method expression, clip and
// encode. Per-file failures go to err; returns kExitProcessing if any file
// failed, kExitUsage if the method expression does not parse.
int cmd_enhance(const RunConfig& cfg, std::ostream& err);

// Write the transmission map of `prior` for `input` as a grayscale PNG at
// `output_png` and print "min=... mean=... max=..." to out. raw_map skips
// the guided refinement.
int cmd_inspect_t(const RunConfig& cfg, const std::string& input,
                  PriorKind prior, bool raw_map,
                  const std::string& output_png, std::ostream& out,
                  std::ostream& err);

// Enhance every decodable image under cfg.input_dir into cfg.output_dir
// using cfg.jobs workers, then write <output_dir>/manifest.jsonl with one
// record per attempted file (fields input, output, method, ms, status).
// Partial failures do not abort the batch.
int cmd_batch(const RunConfig& cfg, std::ostream& err);

// "color-illumination" | "standard-dcp" | "novel-strong-dark" |
// "bright-channel", or a letter method name as an alias.
PriorKind parse_prior(const std::string& name);

}  // namespace amplipix::cli
