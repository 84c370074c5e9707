#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "amplipix/run.hpp"

namespace cli = amplipix::cli;

namespace {

struct CommonOptions {
    cli::RunConfig* cfg = nullptr;
    std::string resize_spec;
    std::string config_path;
};

// Flags shared by all subcommands. Command-line values override --config
// file entries (simple key=value lines).
void add_common_options(CLI::App& cmd, cli::RunConfig& cfg,
                        CommonOptions& common) {
    common.cfg = &cfg;
    cmd.add_option("--omega", cfg.amplify.omega,
                   "Neighborhood size for transmission statistics")
        ->capture_default_str();
    cmd.add_option("--t-radius", cfg.amplify.t_refine.radius,
                   "Guided filter radius for transmission refinement")
        ->capture_default_str();
    cmd.add_option("--t-eps", cfg.amplify.t_refine.eps,
                   "Guided filter epsilon for transmission refinement")
        ->capture_default_str();
    cmd.add_option("--blur-radius", cfg.sharpen.blur.radius,
                   "Guided filter radius for the sharpening blur")
        ->capture_default_str();
    cmd.add_option("--blur-eps", cfg.sharpen.blur.eps,
                   "Guided filter epsilon for the sharpening blur")
        ->capture_default_str();
    cmd.add_option("--scalar-t", cfg.sharpen.scalar_t,
                   "Scalar transmission for simple sharpening")
        ->capture_default_str();
    cmd.add_flag_callback(
        "--no-crop", [&cfg]() { cfg.preprocess.crop = false; },
        "Skip the fundus center crop");
    cmd.add_flag_callback(
        "--no-resize", [&cfg]() { cfg.preprocess.resize = false; },
        "Skip resizing");
    cmd.add_option("--resize", common.resize_spec,
                   "Output size as HxW (default 512x512)");
    cmd.add_flag_callback(
        "--no-blue-trick",
        [&cfg]() { cfg.amplify.blue_channel_to_ones = false; },
        "Do not replace the blue channel with ones for min statistics");
    cmd.add_option("--jobs", cfg.jobs, "Worker count for batch processing")
        ->envname("AMPLIPIX_JOBS")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--config", common.config_path,
                   "Key=value config file; flags win");
}

std::string trimmed(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    const auto end = s.find_last_not_of(" \t\r");
    return begin == std::string::npos ? "" : s.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& v) {
    return v == "1" || v == "true" || v == "yes" || v == "on";
}

// Apply key=value entries for options the command line left untouched.
// Unknown keys are an error so typos do not pass silently.
bool apply_config_file(const CLI::App& cmd, CommonOptions& common,
                       std::ostream& err) {
    if (common.config_path.empty()) {
        return true;
    }
    std::ifstream in(common.config_path);
    if (!in) {
        err << "error: cannot read config file " << common.config_path
            << "\n";
        return false;
    }
    cli::RunConfig& cfg = *common.cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string entry = trimmed(line);
        if (entry.empty() || entry[0] == '#') {
            continue;
        }
        const auto eq = entry.find('=');
        if (eq == std::string::npos) {
            err << "error: " << common.config_path << ":" << line_no
                << ": expected key=value\n";
            return false;
        }
        const std::string key = trimmed(entry.substr(0, eq));
        const std::string value = trimmed(entry.substr(eq + 1));
        const auto given = [&cmd](const std::string& flag) {
            return cmd.count(flag) > 0;
        };
        try {
            if (key == "omega") {
                if (!given("--omega")) cfg.amplify.omega = std::stoi(value);
            } else if (key == "t-radius") {
                if (!given("--t-radius"))
                    cfg.amplify.t_refine.radius = std::stoi(value);
            } else if (key == "t-eps") {
                if (!given("--t-eps"))
                    cfg.amplify.t_refine.eps = std::stof(value);
            } else if (key == "blur-radius") {
                if (!given("--blur-radius"))
                    cfg.sharpen.blur.radius = std::stoi(value);
            } else if (key == "blur-eps") {
                if (!given("--blur-eps"))
                    cfg.sharpen.blur.eps = std::stof(value);
            } else if (key == "scalar-t") {
                if (!given("--scalar-t"))
                    cfg.sharpen.scalar_t = std::stof(value);
            } else if (key == "resize") {
                if (!given("--resize") && !given("--no-resize"))
                    common.resize_spec = value;
            } else if (key == "no-crop") {
                if (!given("--no-crop") && parse_bool(value))
                    cfg.preprocess.crop = false;
            } else if (key == "no-resize") {
                if (!given("--no-resize") && parse_bool(value))
                    cfg.preprocess.resize = false;
            } else if (key == "no-blue-trick") {
                if (!given("--no-blue-trick") && parse_bool(value))
                    cfg.amplify.blue_channel_to_ones = false;
            } else if (key == "jobs") {
                if (!given("--jobs")) cfg.jobs = std::stoi(value);
            } else {
                err << "error: " << common.config_path << ":" << line_no
                    << ": unknown key '" << key << "'\n";
                return false;
            }
        } catch (const std::exception&) {
            err << "error: " << common.config_path << ":" << line_no
                << ": bad value for '" << key << "'\n";
            return false;
        }
    }
    return true;
}

bool apply_resize_spec(const std::string& spec, cli::RunConfig& cfg,
                       std::ostream& err) {
    if (spec.empty()) {
        return true;
    }
    int h = 0, w = 0;
    char sep = 0;
    if (std::sscanf(spec.c_str(), "%d%c%d", &h, &sep, &w) != 3 ||
        (sep != 'x' && sep != 'X') || h < 1 || w < 1) {
        err << "error: --resize expects HxW with positive dimensions, got '"
            << spec << "'\n";
        return false;
    }
    cfg.preprocess.resize_h = h;
    cfg.preprocess.resize_w = w;
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "amplipix - pixel color amplification for fundus-style image "
        "enhancement"};
    app.require_subcommand(1);

    cli::RunConfig enhance_cfg;
    CommonOptions enhance_common;
    std::vector<std::string> enhance_paths;
    CLI::App* enhance =
        app.add_subcommand("enhance", "Enhance one or more images");
    enhance->add_option("--method", enhance_cfg.method,
                        "Method expression, e.g. \"sA+sC+sX+sZ\"")
        ->required();
    enhance->add_option("paths", enhance_paths,
                        "Input file(s) followed by the output file or dir")
        ->expected(-2);
    add_common_options(*enhance, enhance_cfg, enhance_common);

    cli::RunConfig inspect_cfg;
    CommonOptions inspect_common;
    std::string inspect_prior;
    bool inspect_raw = false;
    std::vector<std::string> inspect_paths;
    CLI::App* inspect = app.add_subcommand(
        "inspect-t", "Write a prior's transmission map and print stats");
    inspect->add_option("--prior", inspect_prior,
                        "color-illumination | standard-dcp | "
                        "novel-strong-dark | bright-channel")
        ->required();
    inspect->add_flag("--raw", inspect_raw,
                      "Skip guided refinement (raw prior map)");
    inspect->add_option("paths", inspect_paths, "INPUT OUTPUT.png")
        ->expected(2);
    add_common_options(*inspect, inspect_cfg, inspect_common);

    cli::RunConfig batch_cfg;
    CommonOptions batch_common;
    std::vector<std::string> batch_paths;
    CLI::App* batch =
        app.add_subcommand("batch", "Enhance a directory of images");
    batch->add_option("--method", batch_cfg.method, "Method expression")
        ->required();
    batch->add_option("paths", batch_paths, "INPUT_DIR OUTPUT_DIR")
        ->expected(2);
    add_common_options(*batch, batch_cfg, batch_common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::kExitUsage;
    }

    const auto finish_common = [](const CLI::App& cmd, CommonOptions& common,
                                  cli::RunConfig& cfg) {
        return apply_config_file(cmd, common, std::cerr) &&
               apply_resize_spec(common.resize_spec, cfg, std::cerr);
    };

    try {
        if (enhance->parsed()) {
            if (!finish_common(*enhance, enhance_common, enhance_cfg)) {
                return cli::kExitUsage;
            }
            enhance_cfg.inputs.assign(enhance_paths.begin(),
                                      enhance_paths.end() - 1);
            enhance_cfg.output = enhance_paths.back();
            return cli::cmd_enhance(enhance_cfg, std::cerr);
        }
        if (inspect->parsed()) {
            if (!finish_common(*inspect, inspect_common, inspect_cfg)) {
                return cli::kExitUsage;
            }
            amplipix::PriorKind prior;
            try {
                prior = cli::parse_prior(inspect_prior);
            } catch (const amplipix::Error& e) {
                std::cerr << "error: " << e.what() << "\n";
                return cli::kExitUsage;
            }
            return cli::cmd_inspect_t(inspect_cfg, inspect_paths[0], prior,
                                      inspect_raw, inspect_paths[1],
                                      std::cout, std::cerr);
        }
        if (!finish_common(*batch, batch_common, batch_cfg)) {
            return cli::kExitUsage;
        }
        batch_cfg.input_dir = batch_paths[0];
        batch_cfg.output_dir = batch_paths[1];
        return cli::cmd_batch(batch_cfg, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kExitProcessing;
    }
}
