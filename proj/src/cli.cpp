#include "sar/cli.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sar/config.hpp"
#include "sar/errors.hpp"
#include "sar/pipeline.hpp"

namespace sar {

namespace {

struct CliOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::string stage;
    std::optional<std::string> roi;
    std::optional<double> pfa;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CliOptions& opts, bool with_stage) {
    cmd->add_option("--config", opts.config, "pipeline config file")->required();
    cmd->add_option("--seed", [&opts](const CLI::results_t& res) {
        opts.seed = std::stoull(res[0]);
        return true;
    }, "override [run] seed");
    cmd->add_option("--out", [&opts](const CLI::results_t& res) {
        opts.out = res[0];
        return true;
    }, "override [run] out directory");
    cmd->add_option("--roi", [&opts](const CLI::results_t& res) {
        opts.roi = res[0];
        return true;
    }, "override [stats] roi as r0,c0,r1,c1");
    cmd->add_option("--pfa", [&opts](const CLI::results_t& res) {
        opts.pfa = std::stod(res[0]);
        return true;
    }, "override [cfar] pfa");
    cmd->add_flag("--quiet", opts.quiet, "suppress progress output");
    if (with_stage) {
        cmd->add_option("--stage", opts.stage, "run the pipeline up to this stage");
    }
}

PipelineConfig load_config(const CliOptions& opts) {
    PipelineConfig cfg = read_config(opts.config);
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.out) cfg.out_dir = *opts.out;
    if (opts.pfa) {
        if (!(*opts.pfa > 0.0) || !(*opts.pfa < 1.0)) {
            throw ConfigError("--pfa must lie strictly inside (0, 1)");
        }
        cfg.p_fa = *opts.pfa;
    }
    if (opts.roi) {
        int r0, c0, r1, c1;
        if (std::sscanf(opts.roi->c_str(), "%d,%d,%d,%d", &r0, &c0, &r1, &c1) != 4) {
            throw ConfigError("--roi expects r0,c0,r1,c1");
        }
        Roi roi{r0, c0, r1, c1};
        if (roi.r0 < 0 || roi.c0 < 0 || roi.r1 <= roi.r0 || roi.c1 <= roi.c0 ||
            roi.r1 > cfg.n_az || roi.c1 > cfg.n_rg) {
            throw ConfigError("--roi rectangle is empty or leaves the image bounds");
        }
        cfg.roi = roi;
    }
    return cfg;
}

void run_stages(const PipelineConfig& cfg, const std::vector<std::string>& stages, bool quiet) {
    for (const auto& stage : stages) {
        if (!quiet) std::cout << "[" << stage << "] running\n";
        const auto files = run_stage(cfg, stage);
        if (!quiet) {
            for (const auto& f : files) std::cout << "[" << stage << "] wrote " << f.string() << "\n";
        }
    }
}

} // namespace

int sarctl_main(int argc, const char* const* argv) {
    if (const char* env = std::getenv("SARCTL_THREADS")) {
        const int threads = std::atoi(env);
        if (threads > 0) omp_set_num_threads(threads);
    }

    CLI::App app{"sea-clutter target detection toolkit"};
    app.require_subcommand(1);

    CliOptions opts;
    CLI::App* sim = app.add_subcommand("simulate", "generate the raw echo image");
    CLI::App* focus = app.add_subcommand("focus", "range compression through azimuth compression");
    CLI::App* despeckle = app.add_subcommand("despeckle", "magnitude + median filtering");
    CLI::App* fit = app.add_subcommand("fit", "fit the candidate clutter models on the roi");
    CLI::App* kl = app.add_subcommand("kl", "score the fitted models by KL distance");
    CLI::App* cfar = app.add_subcommand("cfar", "run the 2D CFAR detector");
    CLI::App* pipeline = app.add_subcommand("pipeline", "run every stage");
    for (CLI::App* cmd : {sim, focus, despeckle, fit, kl, cfar}) add_common(cmd, opts, false);
    add_common(pipeline, opts, true);

    try {
        app.parse(argc, const_cast<char**>(argv));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const PipelineConfig cfg = load_config(opts);
        if (sim->parsed()) {
            run_stages(cfg, {"simulate"}, opts.quiet);
        } else if (focus->parsed()) {
            run_stages(cfg, {"rc", "doppler", "rcmc", "focus"}, opts.quiet);
        } else if (despeckle->parsed()) {
            run_stages(cfg, {"magnitude", "despeckle"}, opts.quiet);
        } else if (fit->parsed()) {
            run_stages(cfg, {"fit"}, opts.quiet);
        } else if (kl->parsed()) {
            run_stages(cfg, {"kl"}, opts.quiet);
        } else if (cfar->parsed()) {
            run_stages(cfg, {"cfar"}, opts.quiet);
        } else if (pipeline->parsed()) {
            const RunManifest manifest = run_pipeline(cfg, opts.stage);
            if (!opts.quiet) std::cout << manifest.to_text();
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const StageError& e) {
        std::cerr << "stage error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace sar
