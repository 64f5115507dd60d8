#include "sar/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "sar/cfar.hpp"
#include "sar/despeckle.hpp"
#include "sar/errors.hpp"
#include "sar/focus.hpp"
#include "sar/io.hpp"
#include "sar/sim.hpp"
#include "sar/stats.hpp"

namespace sar {

namespace fs = std::filesystem;

namespace {

struct Paths {
    fs::path dir;
    fs::path raw() const { return dir / "raw.sarc"; }
    fs::path rc() const { return dir / "rc.sarc"; }
    fs::path doppler() const { return dir / "doppler.txt"; }
    fs::path rcmc() const { return dir / "rcmc.sarc"; }
    fs::path focused() const { return dir / "focused.sarc"; }
    fs::path focus_report() const { return dir / "focus_report.txt"; }
    fs::path magnitude() const { return dir / "magnitude.sarm"; }
    fs::path despeckled() const { return dir / "despeckled.sarm"; }
    fs::path despeckled_pgm() const { return dir / "despeckled.pgm"; }
    fs::path fits() const { return dir / "fits.csv"; }
    fs::path histogram() const { return dir / "histogram.csv"; }
    fs::path kl() const { return dir / "kl.csv"; }
    fs::path mask() const { return dir / "mask.pbm"; }
    fs::path detections() const { return dir / "detections.csv"; }
    fs::path manifest() const { return dir / "manifest.txt"; }
};

DopplerEstimate read_doppler_file(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path.string());
    DopplerEstimate dop;
    std::string line;
    while (std::getline(f, line)) {
        std::istringstream ss(line);
        std::string key, eq;
        double value;
        if (!(ss >> key >> eq >> value) || eq != "=") continue;
        if (key == "slope") dop.slope = value;
        else if (key == "radial_velocity") dop.radial_velocity = value;
        else if (key == "f_dc_coarse") dop.f_dc_coarse = value;
        else if (key == "f_dc_frac") dop.f_dc_frac = value;
        else if (key == "ambiguity_index") dop.ambiguity_index = static_cast<int>(value);
        else if (key == "f_dc") dop.f_dc = value;
    }
    return dop;
}

std::vector<double> roi_samples(const MagnitudeImage& img, const PipelineConfig& cfg) {
    Roi roi = cfg.roi ? *cfg.roi : Roi{0, 0, img.n_az, img.n_rg};
    if (roi.r1 > img.n_az || roi.c1 > img.n_rg) {
        throw ConfigError("stats roi leaves the image bounds");
    }
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(roi.rows()) * roi.cols());
    for (int r = roi.r0; r < roi.r1; ++r) {
        for (int c = roi.c0; c < roi.c1; ++c) samples.push_back(img.at(r, c));
    }
    return samples;
}

FittedModel weibull_from_fits(const fs::path& path) {
    for (const auto& m : read_fits_csv(path)) {
        if (m.family == DistFamily::Weibull) return m;
    }
    throw StageError("cfar", "fits.csv carries no weibull row");
}

std::vector<fs::path> stage_simulate(const PipelineConfig& cfg, const Paths& p) {
    ComplexImage raw;
    if (cfg.input) {
        raw = read_complex_image(*cfg.input);
        if (raw.n_az != cfg.n_az || raw.n_rg != cfg.n_rg) {
            throw ConfigError("ingested raw image dimensions disagree with the config");
        }
    } else {
        raw = simulate_echo(cfg.radar, cfg.targets, cfg.clutter, cfg.n_az, cfg.n_rg, cfg.seed,
                            cfg.sim);
    }
    write_image(p.raw(), raw);
    return {p.raw()};
}

std::vector<fs::path> stage_rc(const PipelineConfig& cfg, const Paths& p) {
    const ComplexImage raw = read_complex_image(p.raw());
    write_image(p.rc(), range_compress(raw, cfg.radar, cfg.focus));
    return {p.rc()};
}

std::vector<fs::path> stage_doppler(const PipelineConfig& cfg, const Paths& p) {
    const ComplexImage rc = read_complex_image(p.rc());
    DopplerEstimate dop;
    bool estimated = true;
    std::string note;
    try {
        dop = estimate_doppler(rc, cfg.radar, cfg.slope_quantile, cfg.effective_n_lines());
    } catch (const EstimationError& e) {
        // Homogeneous scenes carry no centroid signature; processing them at
        // zero Doppler is the correct degenerate choice, so record and go on.
        estimated = false;
        note = e.what();
        dop = DopplerEstimate{};
    }
    std::ostringstream os;
    os << std::setprecision(17);
    os << "slope = " << dop.slope << "\n";
    os << "radial_velocity = " << dop.radial_velocity << "\n";
    os << "f_dc_coarse = " << dop.f_dc_coarse << "\n";
    os << "f_dc_frac = " << dop.f_dc_frac << "\n";
    os << "ambiguity_index = " << dop.ambiguity_index << "\n";
    os << "f_dc = " << dop.f_dc << "\n";
    os << "estimated = " << (estimated ? 1 : 0) << "\n";
    if (!note.empty()) os << "note = " << note << "\n";
    std::ofstream f(p.doppler());
    if (!f) throw IoError("cannot open " + p.doppler().string() + " for writing");
    f << os.str();
    f.close();
    return {p.doppler()};
}

std::vector<fs::path> stage_rcmc(const PipelineConfig& cfg, const Paths& p) {
    const ComplexImage rc = read_complex_image(p.rc());
    const DopplerEstimate dop = read_doppler_file(p.doppler());
    write_image(p.rcmc(), rcmc(rc, cfg.radar, dop, cfg.focus));
    return {p.rcmc()};
}

std::vector<fs::path> stage_focus(const PipelineConfig& cfg, const Paths& p) {
    const ComplexImage rd = read_complex_image(p.rcmc());
    const DopplerEstimate dop = read_doppler_file(p.doppler());
    const ComplexImage focused = azimuth_compress(rd, cfg.radar, dop, cfg.focus);
    write_image(p.focused(), focused);
    const FocusReport report = measure_focus(focused, cfg.radar, dop);
    std::ofstream f(p.focus_report());
    if (!f) throw IoError("cannot open " + p.focus_report().string() + " for writing");
    f << report.to_text();
    f.close();
    return {p.focused(), p.focus_report()};
}

std::vector<fs::path> stage_magnitude(const PipelineConfig&, const Paths& p) {
    const ComplexImage focused = read_complex_image(p.focused());
    write_image(p.magnitude(), magnitude(focused));
    return {p.magnitude()};
}

std::vector<fs::path> stage_despeckle(const PipelineConfig& cfg, const Paths& p) {
    const MagnitudeImage mag = read_magnitude_image(p.magnitude());
    const MagnitudeImage filtered = median_filter(mag, cfg.median_m, cfg.median_n);
    write_image(p.despeckled(), filtered);
    export_pgm(filtered, p.despeckled_pgm(), -40.0);
    return {p.despeckled(), p.despeckled_pgm()};
}

std::vector<fs::path> stage_fit(const PipelineConfig& cfg, const Paths& p) {
    const MagnitudeImage img = read_magnitude_image(p.despeckled());
    const std::vector<double> samples = roi_samples(img, cfg);
    std::vector<FittedModel> fits;
    for (DistFamily fam : {DistFamily::Weibull, DistFamily::LogNormal,
                           DistFamily::InverseGaussian, DistFamily::Gamma, DistFamily::Rayleigh}) {
        try {
            fits.push_back(fit(fam, samples));
        } catch (const FitError&) {
            // family omitted; kl stage reports it as unfitted
        }
    }
    if (fits.empty()) throw StageError("stats", "every candidate family failed to fit");
    write_fits_csv(fits, p.fits());
    write_histogram_csv(build_histogram(samples, cfg.bins), p.histogram());
    return {p.fits(), p.histogram()};
}

std::vector<fs::path> stage_kl(const PipelineConfig& cfg, const Paths& p) {
    const MagnitudeImage img = read_magnitude_image(p.despeckled());
    const std::vector<double> samples = roi_samples(img, cfg);
    const EmpiricalPdf hist = build_histogram(samples, cfg.bins);
    const std::vector<FittedModel> fits = read_fits_csv(p.fits());

    KlReport report;
    for (DistFamily fam : {DistFamily::Weibull, DistFamily::LogNormal,
                           DistFamily::InverseGaussian, DistFamily::Gamma, DistFamily::Rayleigh}) {
        KlEntry entry;
        entry.family = fam;
        auto it = std::find_if(fits.begin(), fits.end(),
                               [&](const FittedModel& m) { return m.family == fam; });
        if (it != fits.end()) {
            entry.fitted = true;
            entry.model = *it;
            entry.kl = kl_distance(hist, *it);
        } else {
            entry.error = "fit failed";
        }
        report.entries.push_back(entry);
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : report.entries) {
        if (e.fitted && e.kl < best) {
            best = e.kl;
            report.best_family = e.family;
        }
    }
    write_kl_csv(report, p.kl());
    return {p.kl()};
}

std::vector<fs::path> stage_stats(const PipelineConfig& cfg, const Paths& p) {
    auto files = stage_fit(cfg, p);
    auto kl_files = stage_kl(cfg, p);
    files.insert(files.end(), kl_files.begin(), kl_files.end());
    return files;
}

std::vector<fs::path> stage_cfar(const PipelineConfig& cfg, const Paths& p) {
    const MagnitudeImage img = read_magnitude_image(p.despeckled());
    CfarConfig cc;
    cc.guard_az = cfg.guard_az;
    cc.guard_rg = cfg.guard_rg;
    cc.train_az = cfg.train_az;
    cc.train_rg = cfg.train_rg;
    cc.p_fa = cfg.p_fa;
    cc.q_override = cfg.q_override;
    // the adaptive threshold is driven by the weibull fit; the kl table
    // reports how the candidates ranked
    cc.model = cfg.q_override ? FittedModel{DistFamily::Weibull, 1.0, 1.0, 0, 0.0}
                              : weibull_from_fits(p.fits());
    const DetectionMap map = cfar_scan(img, cc);
    export_pbm(map, p.mask());
    write_detections_csv(map, p.detections());
    return {p.mask(), p.detections()};
}

using StageFn = std::vector<fs::path> (*)(const PipelineConfig&, const Paths&);

struct StageDef {
    const char* name;
    StageFn fn;
};

constexpr StageDef kStages[] = {
    {"simulate", stage_simulate}, {"rc", stage_rc},           {"doppler", stage_doppler},
    {"rcmc", stage_rcmc},         {"focus", stage_focus},     {"magnitude", stage_magnitude},
    {"despeckle", stage_despeckle}, {"stats", stage_stats},   {"cfar", stage_cfar},
};

} // namespace

const std::vector<std::string>& pipeline_stage_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& s : kStages) v.emplace_back(s.name);
        return v;
    }();
    return names;
}

std::string RunManifest::to_text() const {
    std::ostringstream os;
    os << "tool_version = " << tool_version << "\n";
    os << "config_hash = " << std::hex << std::setw(16) << std::setfill('0') << config_hash
       << std::dec << std::setfill(' ') << "\n";
    os << "stages = " << stages.size() << "\n";
    for (std::size_t i = 0; i < stages.size(); ++i) {
        const auto& s = stages[i];
        os << "stage_" << i << "_name = " << s.name << "\n";
        os << "stage_" << i << "_files =";
        for (const auto& f : s.files) os << " " << f.filename().string();
        os << "\n";
        os << "stage_" << i << "_ms = " << s.wall_ms << "\n";
        os << "stage_" << i << "_hash = " << std::hex << std::setw(16) << std::setfill('0')
           << s.hash << std::dec << std::setfill(' ') << "\n";
    }
    return os.str();
}

std::vector<fs::path> run_stage(const PipelineConfig& cfg, const std::string& stage) {
    Paths p{cfg.out_dir};
    std::filesystem::create_directories(cfg.out_dir);
    StageFn fn = nullptr;
    for (const auto& def : kStages) {
        if (stage == def.name) fn = def.fn;
    }
    // the stats stage splits into separately runnable halves
    if (stage == "fit") fn = stage_fit;
    if (stage == "kl") fn = stage_kl;
    if (!fn) throw ConfigError("unknown pipeline stage '" + stage + "'");
    try {
        return fn(cfg, p);
    } catch (const StageError&) {
        throw;
    } catch (const ConfigError&) {
        throw;
    } catch (const IoError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(stage, e.what());
    }
}

RunManifest run_pipeline(const PipelineConfig& cfg, const std::string& upto) {
    if (!upto.empty()) {
        const auto& names = pipeline_stage_names();
        if (std::find(names.begin(), names.end(), upto) == names.end()) {
            throw ConfigError("unknown pipeline stage '" + upto + "'");
        }
    }
    std::filesystem::create_directories(cfg.out_dir);

    RunManifest manifest;
    manifest.tool_version = kToolVersion;
    const std::string canon = canonical_config(cfg);
    manifest.config_hash = fnv1a_bytes(canon.data(), canon.size());

    for (const auto& def : kStages) {
        const auto start = std::chrono::steady_clock::now();
        StageRecord record;
        record.name = def.name;
        record.files = run_stage(cfg, def.name);
        record.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (const auto& f : record.files) {
            const std::uint64_t fh = fnv1a_file(f);
            h = fnv1a_bytes(&fh, sizeof fh, h);
        }
        record.hash = h;
        manifest.stages.push_back(std::move(record));
        if (upto == def.name) break;
    }

    Paths p{cfg.out_dir};
    std::ofstream f(p.manifest());
    if (!f) throw IoError("cannot open " + p.manifest().string() + " for writing");
    f << manifest.to_text();
    return manifest;
}

} // namespace sar
