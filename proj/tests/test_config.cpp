#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "sar/config.hpp"
#include "sar/errors.hpp"

using namespace sar;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& body) {
    const fs::path dir = fs::temp_directory_path() / "sar_config_tests";
    fs::create_directories(dir);
    const fs::path path = dir / name;
    std::ofstream f(path, std::ios::trunc);
    f << body;
    return path;
}

const std::string kMinimal = R"([radar]
f_c = 5.3e9
Fr = 32.317e6
PRF = 1256.98
R0 = 988.65e3
chirp_rate = 0.72135e12
T = 41.75e-6
v = 7062
b = 30.116e6

[scene]
n_az = 64
n_rg = 2048

[cfar]
train_az = 1
pfa = 1e-6
)";

} // namespace

TEST_CASE("read_config: bundled acquisition constants parse to the reference values") {
    const PipelineConfig cfg = read_config(fs::path(SAR_CONFIG_DIR) / "radarsat1.cfg");
    CHECK(cfg.radar.f_c == 5.3e9);
    CHECK(cfg.radar.Fr == 32.317e6);
    CHECK(cfg.radar.PRF == 1256.98);
    CHECK(cfg.radar.R0 == 988.65e3);
    CHECK(cfg.radar.chirp_rate == 0.72135e12);
    CHECK(cfg.radar.T == 41.75e-6);
    CHECK(cfg.radar.v == 7062.0);
    CHECK(cfg.radar.b == 30.116e6);
    CHECK(cfg.radar.wavelength() == doctest::Approx(0.0565646).epsilon(1e-4));
    CHECK(cfg.clutter.has_value());
    CHECK(!cfg.targets.empty());
    CHECK(cfg.roi.has_value());
}

TEST_CASE("read_config: empty file lists the missing sections") {
    const fs::path path = write_temp("empty.cfg", "");
    try {
        (void)read_config(path);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("radar") != std::string::npos);
        CHECK(msg.find("scene") != std::string::npos);
    }
}

TEST_CASE("read_config: out-of-range pfa names the field") {
    std::string body = kMinimal;
    body.replace(body.find("pfa = 1e-6"), 10, "pfa = 2.0");
    const fs::path path = write_temp("badpfa.cfg", body);
    try {
        (void)read_config(path);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("pfa") != std::string::npos);
    }
}

TEST_CASE("read_config: unknown keys are rejected with their line number") {
    const fs::path path = write_temp("unknown.cfg", kMinimal + "\n[focus]\nbogus_knob = 3\n");
    try {
        (void)read_config(path);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("bogus_knob") != std::string::npos);
        CHECK(msg.find("line") != std::string::npos);
    }
}

TEST_CASE("read_config: inconsistent chirp product is rejected") {
    std::string body = kMinimal;
    body.replace(body.find("b = 30.116e6"), 12, "b = 31e6");
    const fs::path path = write_temp("badchirp.cfg", body);
    CHECK_THROWS_AS((void)read_config(path), ConfigError);
}

TEST_CASE("read_config: roi must stay inside the image") {
    const fs::path path =
        write_temp("badroi.cfg", kMinimal + "\n[stats]\nroi = 0,0,65,100\n");
    CHECK_THROWS_AS((void)read_config(path), ConfigError);
}

TEST_CASE("read_config: ship entries expand into a scatterer grid") {
    const fs::path path = write_temp(
        "ship.cfg", kMinimal + "\n# one ship\n[scene2]\n");
    // reuse the minimal config but with a ship line inside [scene]
    std::string body = kMinimal;
    body.insert(body.find("[cfar]"), "ship = 0.5 990000 0.0 3 2\n\n");
    const fs::path path2 = write_temp("ship2.cfg", body);
    const PipelineConfig cfg = read_config(path2);
    CHECK(cfg.targets.size() == 6);
    for (const auto& t : cfg.targets) {
        CHECK(std::abs(t.sigma) == doctest::Approx(0.5));
        CHECK(t.R0_t > 989990.0);
        CHECK(t.R0_t < 990010.0);
    }
    // a section header typo is an unknown section
    CHECK_THROWS_AS((void)read_config(path), ConfigError);
}

TEST_CASE("read_config: parse diagnostics carry line numbers") {
    const fs::path path = write_temp("syntax.cfg", "[radar]\nf_c 5.3e9\n");
    try {
        (void)read_config(path);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("canonical_config: stable fingerprint input") {
    const PipelineConfig a = read_config(fs::path(SAR_CONFIG_DIR) / "radarsat1.cfg");
    const PipelineConfig b = read_config(fs::path(SAR_CONFIG_DIR) / "radarsat1.cfg");
    CHECK(canonical_config(a) == canonical_config(b));
    PipelineConfig c = a;
    c.seed = a.seed + 1;
    CHECK(canonical_config(a) != canonical_config(c));
}
