#include "sar/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "sar/errors.hpp"

namespace sar {

namespace {

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

// section -> key -> entries (repeatable keys keep every occurrence)
using Sections = std::map<std::string, std::map<std::string, std::vector<Entry>>>;

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

// strip a trailing comment: '#' at line start or preceded by whitespace
std::string strip_comment(const std::string& s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '#' && (i == 0 || s[i - 1] == ' ' || s[i - 1] == '\t')) {
            return s.substr(0, i);
        }
    }
    return s;
}

Sections parse_sections(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path.string());
    Sections sections;
    std::string line;
    std::string current;
    int line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        const std::string t = trim(strip_comment(line));
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') {
                throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
            }
            current = trim(t.substr(1, t.size() - 2));
            if (current.empty()) {
                throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
            }
            sections[current];
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        if (current.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": key outside any [section]");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        }
        sections[current][key].push_back({value, line_no, false});
    }
    return sections;
}

class SectionView {
public:
    SectionView(Sections& sections, const std::string& name) : name_(name) {
        auto it = sections.find(name);
        if (it != sections.end()) map_ = &it->second;
    }

    bool present() const { return map_ != nullptr; }

    std::optional<std::string> get(const std::string& key) {
        if (!map_) return std::nullopt;
        auto it = map_->find(key);
        if (it == map_->end()) return std::nullopt;
        if (it->second.size() > 1) {
            throw ConfigError("[" + name_ + "] " + key + ": key given more than once");
        }
        it->second[0].used = true;
        return it->second[0].value;
    }

    std::vector<std::string> get_all(const std::string& key) {
        std::vector<std::string> out;
        if (!map_) return out;
        auto it = map_->find(key);
        if (it == map_->end()) return out;
        for (auto& e : it->second) {
            e.used = true;
            out.push_back(e.value);
        }
        return out;
    }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
        auto raw = get(key);
        if (!raw) {
            if (fallback) return *fallback;
            throw ConfigError("[" + name_ + "] missing required key '" + key + "'");
        }
        return parse_number(key, *raw);
    }

    double parse_number(const std::string& key, const std::string& raw) {
        char* end = nullptr;
        const double v = std::strtod(raw.c_str(), &end);
        if (end == raw.c_str() || *end != '\0' || !std::isfinite(v)) {
            throw ConfigError("[" + name_ + "] " + key + ": '" + raw + "' is not a number");
        }
        return v;
    }

    long integer(const std::string& key, std::optional<long> fallback = std::nullopt) {
        auto raw = get(key);
        if (!raw) {
            if (fallback) return *fallback;
            throw ConfigError("[" + name_ + "] missing required key '" + key + "'");
        }
        const double v = parse_number(key, *raw);
        if (v != std::floor(v)) {
            throw ConfigError("[" + name_ + "] " + key + ": expected an integer");
        }
        return static_cast<long>(v);
    }

private:
    std::string name_;
    std::map<std::string, std::vector<Entry>>* map_ = nullptr;
};

std::vector<double> split_numbers(const std::string& section, const std::string& key,
                                  const std::string& raw) {
    std::vector<double> out;
    std::string piece;
    std::istringstream ss(raw);
    // accept spaces or commas between fields
    std::string normalized = raw;
    for (auto& ch : normalized) {
        if (ch == ',') ch = ' ';
    }
    std::istringstream ns(normalized);
    while (ns >> piece) {
        char* end = nullptr;
        const double v = std::strtod(piece.c_str(), &end);
        if (end == piece.c_str() || *end != '\0' || !std::isfinite(v)) {
            throw ConfigError("[" + section + "] " + key + ": '" + piece + "' is not a number");
        }
        out.push_back(v);
    }
    return out;
}

DistFamily parse_family(const std::string& raw) {
    for (DistFamily fam : {DistFamily::Weibull, DistFamily::LogNormal, DistFamily::InverseGaussian,
                           DistFamily::Gamma, DistFamily::Rayleigh}) {
        if (raw == family_name(fam)) return fam;
    }
    throw ConfigError("[scene] clutter_family: unknown family '" + raw + "'");
}

void check_unused(const Sections& sections) {
    static const std::map<std::string, int> known = {
        {"radar", 0}, {"scene", 0}, {"focus", 0}, {"despeckle", 0},
        {"stats", 0}, {"cfar", 0}, {"run", 0}};
    for (const auto& [name, entries] : sections) {
        if (!known.count(name)) throw ConfigError("unknown section [" + name + "]");
        for (const auto& [key, occurrences] : entries) {
            for (const auto& e : occurrences) {
                if (!e.used) {
                    throw ConfigError("line " + std::to_string(e.line) + ": unknown key '" + key +
                                      "' in [" + name + "]");
                }
            }
        }
    }
}

} // namespace

PipelineConfig read_config(const std::filesystem::path& path) {
    Sections sections = parse_sections(path);

    std::vector<std::string> missing;
    for (const char* required : {"radar", "scene"}) {
        if (!sections.count(required)) missing.push_back(required);
    }
    if (!missing.empty()) {
        std::string msg = "config is missing required section(s):";
        for (const auto& s : missing) msg += " [" + s + "]";
        throw ConfigError(msg);
    }

    PipelineConfig cfg;

    SectionView radar(sections, "radar");
    cfg.radar.f_c = radar.number("f_c");
    cfg.radar.Fr = radar.number("Fr");
    cfg.radar.PRF = radar.number("PRF");
    cfg.radar.R0 = radar.number("R0");
    cfg.radar.chirp_rate = radar.number("chirp_rate");
    cfg.radar.T = radar.number("T");
    cfg.radar.v = radar.number("v");
    cfg.radar.b = radar.number("b");
    cfg.radar.t0 = radar.number("t0", 0.0);
    cfg.radar.validate();

    SectionView scene(sections, "scene");
    cfg.n_az = static_cast<int>(scene.integer("n_az"));
    cfg.n_rg = static_cast<int>(scene.integer("n_rg"));
    if (cfg.n_az < 1 || cfg.n_rg < 1) throw ConfigError("[scene] n_az and n_rg must be >= 1");
    cfg.sim.injected_fdc = scene.number("injected_fdc", 0.0);
    cfg.sim.az_bandwidth_fraction = scene.number("az_bandwidth_fraction", 0.8);
    if (!(cfg.sim.az_bandwidth_fraction > 0.0) || cfg.sim.az_bandwidth_fraction >= 1.0) {
        throw ConfigError("[scene] az_bandwidth_fraction must lie in (0, 1)");
    }
    if (auto raw = scene.get("input")) cfg.input = *raw;

    for (const auto& raw : scene.get_all("target")) {
        const auto v = split_numbers("scene", "target", raw);
        if (v.size() != 4) {
            throw ConfigError("[scene] target: expected 'amplitude phase R0_t eta_c'");
        }
        SceneTarget t;
        t.sigma = std::polar(v[0], v[1]);
        t.R0_t = v[2];
        t.eta_c = v[3];
        if (!(t.R0_t > 0.0)) throw ConfigError("[scene] target: R0_t must be positive");
        cfg.targets.push_back(t);
    }
    for (const auto& raw : scene.get_all("ship")) {
        // grid of unit-phase scatterers spaced one resolution cell apart
        const auto v = split_numbers("scene", "ship", raw);
        if (v.size() != 5) {
            throw ConfigError("[scene] ship: expected 'amplitude R0_t eta_c cells_rg cells_az'");
        }
        const double amp = v[0], r0t = v[1], eta_c = v[2];
        const int cells_rg = static_cast<int>(v[3]);
        const int cells_az = static_cast<int>(v[4]);
        if (!(r0t > 0.0) || cells_rg < 1 || cells_az < 1) {
            throw ConfigError("[scene] ship: bad geometry");
        }
        const double d_range = kSpeedOfLight / (2.0 * cfg.radar.b);
        const double d_eta = 1.0 / (cfg.sim.az_bandwidth_fraction * cfg.radar.PRF);
        for (int i = 0; i < cells_az; ++i) {
            for (int j = 0; j < cells_rg; ++j) {
                SceneTarget t;
                t.sigma = amp;
                t.R0_t = r0t + (j - (cells_rg - 1) / 2.0) * d_range;
                t.eta_c = eta_c + (i - (cells_az - 1) / 2.0) * d_eta;
                cfg.targets.push_back(t);
            }
        }
    }

    if (auto fam = scene.get("clutter_family"); fam && *fam != "none") {
        ClutterSpec spec;
        spec.family = parse_family(*fam);
        spec.p1 = scene.number("clutter_p1");
        spec.p2 = scene.number("clutter_p2", 0.0);
        spec.validate();
        cfg.clutter = spec;
    } else {
        // consume optional params so they do not count as unknown keys
        scene.get("clutter_p1");
        scene.get("clutter_p2");
    }

    SectionView focus(sections, "focus");
    cfg.n_lines = static_cast<int>(focus.integer("n_lines", 0));
    if (cfg.n_lines < 0) throw ConfigError("[focus] n_lines must be >= 0");
    cfg.slope_quantile = focus.number("slope_quantile", 0.999);
    if (!(cfg.slope_quantile > 0.0) || !(cfg.slope_quantile < 1.0)) {
        throw ConfigError("[focus] slope_quantile must lie in (0, 1)");
    }
    cfg.focus.rcmc_taps = static_cast<int>(focus.integer("rcmc_taps", 8));
    if (cfg.focus.rcmc_taps < 4 || cfg.focus.rcmc_taps > 16 || cfg.focus.rcmc_taps % 2 != 0) {
        throw ConfigError("[focus] rcmc_taps must be an even count in [4, 16]");
    }
    if (auto w = focus.get("window")) {
        if (*w == "none") {
            cfg.focus.window = Window::None;
        } else if (*w == "hamming") {
            cfg.focus.window = Window::Hamming;
        } else {
            throw ConfigError("[focus] window must be 'none' or 'hamming'");
        }
    }

    SectionView despeckle(sections, "despeckle");
    cfg.median_m = static_cast<int>(despeckle.integer("m", 6));
    cfg.median_n = static_cast<int>(despeckle.integer("n", 6));
    if (cfg.median_m < 1 || cfg.median_n < 1) {
        throw ConfigError("[despeckle] window extents must be >= 1");
    }

    SectionView stats(sections, "stats");
    const long bins = stats.integer("bins", 0);
    if (bins < 0) throw ConfigError("[stats] bins must be >= 0");
    cfg.bins = static_cast<std::size_t>(bins);
    if (auto raw = stats.get("roi")) {
        const auto v = split_numbers("stats", "roi", *raw);
        if (v.size() != 4) throw ConfigError("[stats] roi: expected 'r0,c0,r1,c1'");
        Roi roi{static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2]),
                static_cast<int>(v[3])};
        if (roi.r0 < 0 || roi.c0 < 0 || roi.r1 <= roi.r0 || roi.c1 <= roi.c0) {
            throw ConfigError("[stats] roi: rectangle is empty or negative");
        }
        if (roi.r1 > cfg.n_az || roi.c1 > cfg.n_rg) {
            throw ConfigError("[stats] roi: rectangle leaves the image bounds");
        }
        cfg.roi = roi;
    }

    SectionView cfar(sections, "cfar");
    cfg.guard_az = static_cast<int>(cfar.integer("guard_az", 0));
    cfg.guard_rg = static_cast<int>(cfar.integer("guard_rg", 0));
    cfg.train_az = static_cast<int>(cfar.integer("train_az", 0));
    cfg.train_rg = static_cast<int>(cfar.integer("train_rg", 0));
    cfg.p_fa = cfar.number("pfa", 1e-6);
    if (!(cfg.p_fa > 0.0) || !(cfg.p_fa < 1.0)) {
        throw ConfigError("[cfar] pfa must lie strictly inside (0, 1)");
    }
    if (cfg.guard_az < 0 || cfg.guard_rg < 0 || cfg.train_az < 0 || cfg.train_rg < 0) {
        throw ConfigError("[cfar] window extents must be nonnegative");
    }
    if (sections.count("cfar") && cfg.train_az + cfg.train_rg < 1) {
        throw ConfigError("[cfar] needs at least one training cell");
    }
    if (auto q = cfar.get("q")) cfg.q_override = cfar.parse_number("q", *q);

    SectionView run(sections, "run");
    const long seed = run.integer("seed", 1);
    if (seed < 0) throw ConfigError("[run] seed must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(seed);
    if (auto out = run.get("out")) cfg.out_dir = *out;

    check_unused(sections);
    return cfg;
}

std::string canonical_config(const PipelineConfig& cfg) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "f_c=" << cfg.radar.f_c << "\nFr=" << cfg.radar.Fr << "\nPRF=" << cfg.radar.PRF
       << "\nR0=" << cfg.radar.R0 << "\nchirp_rate=" << cfg.radar.chirp_rate
       << "\nT=" << cfg.radar.T << "\nv=" << cfg.radar.v << "\nb=" << cfg.radar.b
       << "\nt0=" << cfg.radar.fast_time_origin() << "\n";
    os << "n_az=" << cfg.n_az << "\nn_rg=" << cfg.n_rg << "\n";
    os << "injected_fdc=" << cfg.sim.injected_fdc
       << "\naz_bandwidth_fraction=" << cfg.sim.az_bandwidth_fraction << "\n";
    for (const auto& t : cfg.targets) {
        os << "target=" << t.sigma.real() << " " << t.sigma.imag() << " " << t.R0_t << " "
           << t.eta_c << "\n";
    }
    if (cfg.clutter) {
        os << "clutter=" << family_name(cfg.clutter->family) << " " << cfg.clutter->p1 << " "
           << cfg.clutter->p2 << "\n";
    }
    if (cfg.input) os << "input=" << cfg.input->string() << "\n";
    os << "n_lines=" << cfg.effective_n_lines() << "\nslope_quantile=" << cfg.slope_quantile
       << "\nwindow=" << static_cast<int>(cfg.focus.window)
       << "\nrcmc_taps=" << cfg.focus.rcmc_taps << "\n";
    os << "median_m=" << cfg.median_m << "\nmedian_n=" << cfg.median_n << "\n";
    os << "bins=" << cfg.bins << "\n";
    if (cfg.roi) {
        os << "roi=" << cfg.roi->r0 << "," << cfg.roi->c0 << "," << cfg.roi->r1 << ","
           << cfg.roi->c1 << "\n";
    }
    os << "guard_az=" << cfg.guard_az << "\nguard_rg=" << cfg.guard_rg
       << "\ntrain_az=" << cfg.train_az << "\ntrain_rg=" << cfg.train_rg << "\npfa=" << cfg.p_fa
       << "\n";
    if (cfg.q_override) os << "q=" << *cfg.q_override << "\n";
    os << "seed=" << cfg.seed << "\n";
    return os.str();
}

} // namespace sar
