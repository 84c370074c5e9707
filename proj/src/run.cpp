#include "amplipix/run.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "amplipix/image_io.hpp"

namespace amplipix::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

ImageBuf ensure_rgb(const ImageBuf& img) {
    if (img.channels == 3) {
        return img;
    }
    ImageBuf out(img.height, img.width, 3);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const float v = img.at(y, x, 0);
            out.at(y, x, 0) = v;
            out.at(y, x, 1) = v;
            out.at(y, x, 2) = v;
        }
    }
    return out;
}

bool decodable_extension(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".ppm" || ext == ".pgm" || ext == ".pnm";
}

ImageBuf enhance_one(const ImageBuf& decoded, const MethodExpr& expr,
                     const RunConfig& cfg, std::ostream& warn) {
    const ImageBuf pre = preprocess(decoded, cfg.preprocess, warn);
    return evaluate(expr, pre, cfg.amplify, cfg.sharpen);
}

struct BatchRecord {
    std::string input;
    std::string output;
    long long ms = 0;
    bool ok = false;
    std::string error;
};

}  // namespace

ImageBuf preprocess(const ImageBuf& img, const PreprocessOptions& opts,
                    std::ostream& warn) {
    ImageBuf out = ensure_rgb(img);
    if (opts.crop) {
        CropResult crop = center_crop_fundus(out, opts.crop_threshold);
        if (!crop.foreground_found) {
            warn << "warning: no foreground above threshold "
                 << opts.crop_threshold << ", skipping crop\n";
        }
        out = std::move(crop.image);
    }
    if (opts.resize) {
        out = resize_bilinear(out, opts.resize_h, opts.resize_w);
    }
    if (opts.clip) {
        out = clip01(out);
    }
    return out;
}

int cmd_enhance(const RunConfig& cfg, std::ostream& err) {
    MethodExpr expr;
    try {
        expr = parse_expr(cfg.method);
    } catch (const ParseError& e) {
        err << "error: invalid method expression: " << e.what() << "\n";
        return kExitUsage;
    }
    if (cfg.inputs.empty() || cfg.output.empty()) {
        err << "error: enhance needs input file(s) and an output\n";
        return kExitUsage;
    }
    const bool out_is_dir =
        cfg.inputs.size() > 1 || fs::is_directory(cfg.output);
    if (cfg.inputs.size() > 1 && !fs::is_directory(cfg.output)) {
        err << "error: multiple inputs require an output directory\n";
        return kExitUsage;
    }

    int failures = 0;
    for (const std::string& input : cfg.inputs) {
        try {
            const ImageBuf decoded = read_image(input);
            const ImageBuf result = enhance_one(decoded, expr, cfg, err);
            const std::string out_path =
                out_is_dir
                    ? (fs::path(cfg.output) / fs::path(input).filename())
                          .string()
                    : cfg.output;
            write_image(result, out_path);
        } catch (const std::exception& e) {
            err << "error: " << input << ": " << e.what() << "\n";
            ++failures;
        }
    }
    return failures > 0 ? kExitProcessing : kExitOk;
}

int cmd_inspect_t(const RunConfig& cfg, const std::string& input,
                  PriorKind prior, bool raw_map,
                  const std::string& output_png, std::ostream& out,
                  std::ostream& err) {
    try {
        const ImageBuf decoded = read_image(input);
        const ImageBuf pre = preprocess(decoded, cfg.preprocess, err);
        const TransmissionMap t =
            raw_map ? raw_transmission_for_prior(pre, prior, cfg.amplify)
                    : transmission_for_prior(pre, prior, cfg.amplify);
        write_png(clip01(t.map), output_png, 16);
        char line[96];
        std::snprintf(line, sizeof(line), "min=%.6f mean=%.6f max=%.6f\n",
                      static_cast<double>(min_sample(t.map)),
                      mean_sample(t.map),
                      static_cast<double>(max_sample(t.map)));
        out << line;
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << input << ": " << e.what() << "\n";
        return kExitProcessing;
    }
}

int cmd_batch(const RunConfig& cfg, std::ostream& err) {
    MethodExpr expr;
    try {
        expr = parse_expr(cfg.method);
    } catch (const ParseError& e) {
        err << "error: invalid method expression: " << e.what() << "\n";
        return kExitUsage;
    }

    std::error_code ec;
    if (!fs::is_directory(cfg.input_dir, ec)) {
        err << "error: cannot read input directory " << cfg.input_dir << "\n";
        return kExitProcessing;
    }
    fs::create_directories(cfg.output_dir, ec);
    if (ec) {
        err << "error: cannot create output directory " << cfg.output_dir
            << "\n";
        return kExitProcessing;
    }

    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(cfg.input_dir)) {
        if (entry.is_regular_file() && decodable_extension(entry.path())) {
            files.push_back(entry.path().string());
        }
    }
    std::sort(files.begin(), files.end());

    std::vector<BatchRecord> records(files.size());
    std::atomic<std::size_t> next{0};
    const int workers =
        std::max(1, std::min<int>(cfg.jobs, static_cast<int>(files.size())));

    auto worker = [&]() {
        // Per-file warnings are dropped here; the manifest carries status.
        std::ostringstream sink;
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= files.size()) {
                return;
            }
            BatchRecord& rec = records[i];
            rec.input = files[i];
            rec.output = (fs::path(cfg.output_dir) /
                          fs::path(files[i]).filename())
                             .string();
            const auto start = std::chrono::steady_clock::now();
            try {
                const ImageBuf decoded = read_image(files[i]);
                const ImageBuf result = enhance_one(decoded, expr, cfg, sink);
                write_image(result, rec.output);
                rec.ok = true;
            } catch (const std::exception& e) {
                rec.ok = false;
                rec.error = e.what();
                rec.output.clear();
            }
            rec.ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
        }
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int i = 0; i < workers; ++i) {
            pool.emplace_back(worker);
        }
        for (std::thread& t : pool) {
            t.join();
        }
    }

    const fs::path manifest_path = fs::path(cfg.output_dir) / "manifest.jsonl";
    std::ofstream manifest(manifest_path, std::ios::trunc);
    if (!manifest) {
        err << "error: cannot write " << manifest_path.string() << "\n";
        return kExitProcessing;
    }
    int failures = 0;
    for (const BatchRecord& rec : records) {
        ordered_json line = {
            {"input", rec.input},   {"output", rec.output},
            {"method", cfg.method}, {"ms", rec.ms},
            {"status", rec.ok ? "ok" : "error"},
        };
        if (!rec.ok) {
            line["error"] = rec.error;
            err << "error: " << rec.input << ": " << rec.error << "\n";
            ++failures;
        }
        manifest << line.dump() << "\n";
    }
    return failures > 0 ? kExitProcessing : kExitOk;
}

PriorKind parse_prior(const std::string& name) {
    std::string key = name;
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (key == "color-illumination" || key == "a" || key == "w") {
        return PriorKind::ColorIllumination;
    }
    if (key == "standard-dcp" || key == "b" || key == "x") {
        return PriorKind::StandardDcp;
    }
    if (key == "novel-strong-dark" || key == "c" || key == "y") {
        return PriorKind::NovelStrongDark;
    }
    if (key == "bright-channel" || key == "d" || key == "z") {
        return PriorKind::BrightChannel;
    }
    throw Error("unknown prior '" + name +
                "' (expected color-illumination, standard-dcp, "
                "novel-strong-dark or bright-channel)");
}

}  // namespace amplipix::cli
