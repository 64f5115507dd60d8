#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <vector>

#include "sar/cli.hpp"

namespace fs = std::filesystem;

namespace {

int run(std::vector<const char*> args) {
    args.insert(args.begin(), "sarctl");
    return sar::sarctl_main(static_cast<int>(args.size()), args.data());
}

const std::string kTinyScene = R"([radar]
f_c = 5.3e9
Fr = 8.0e6
PRF = 1256.98
R0 = 988.65e3
chirp_rate = 0.72135e12
T = 5e-6
v = 7062
b = 3.60675e6

[scene]
n_az = 64
n_rg = 128
az_bandwidth_fraction = 0.1
clutter_family = weibull
clutter_p1 = 1.9521
clutter_p2 = 0.4835

[despeckle]
m = 1
n = 1

[cfar]
guard_az = 2
guard_rg = 2
train_az = 2
train_rg = 2
pfa = 1e-3

[run]
seed = 3
)";

fs::path tiny_config() {
    const fs::path dir = fs::temp_directory_path() / "sar_cli_tests";
    fs::create_directories(dir);
    const fs::path path = dir / "tiny.cfg";
    std::ofstream f(path, std::ios::trunc);
    f << kTinyScene;
    return path;
}

} // namespace

TEST_CASE("sarctl: argument and config failures exit with code 2") {
    CHECK(run({}) == 2);                                     // missing subcommand
    CHECK(run({"pipeline"}) == 2);                           // missing --config
    CHECK(run({"pipeline", "--config", "/nonexistent.cfg", "--quiet"}) == 2);
    const fs::path cfg = tiny_config();
    CHECK(run({"pipeline", "--config", cfg.string().c_str(), "--pfa", "7", "--quiet"}) == 2);
    CHECK(run({"pipeline", "--config", cfg.string().c_str(), "--roi", "0,0,999,999",
               "--quiet"}) == 2);
    CHECK(run({"pipeline", "--config", cfg.string().c_str(), "--stage", "nonsense",
               "--quiet"}) == 2);
}

TEST_CASE("sarctl: subcommand chain runs and missing inputs exit with code 4") {
    const fs::path cfg = tiny_config();
    const fs::path out = fs::temp_directory_path() / "sar_cli_tests" / "out";
    fs::remove_all(out);
    const std::string out_s = out.string();

    // focusing before simulating: the raw product is missing
    CHECK(run({"focus", "--config", cfg.string().c_str(), "--out", out_s.c_str(),
               "--quiet"}) == 4);

    CHECK(run({"simulate", "--config", cfg.string().c_str(), "--out", out_s.c_str(),
               "--quiet"}) == 0);
    CHECK(fs::exists(out / "raw.sarc"));
    CHECK(run({"focus", "--config", cfg.string().c_str(), "--out", out_s.c_str(),
               "--quiet"}) == 0);
    CHECK(run({"despeckle", "--config", cfg.string().c_str(), "--out", out_s.c_str(),
               "--quiet"}) == 0);
    CHECK(run({"fit", "--config", cfg.string().c_str(), "--out", out_s.c_str(),
               "--quiet"}) == 0);
    CHECK(run({"kl", "--config", cfg.string().c_str(), "--out", out_s.c_str(),
               "--quiet"}) == 0);
    CHECK(run({"cfar", "--config", cfg.string().c_str(), "--out", out_s.c_str(),
               "--quiet"}) == 0);
    for (const char* name : {"rc.sarc", "doppler.txt", "rcmc.sarc", "focused.sarc",
                             "magnitude.sarm", "despeckled.sarm", "fits.csv", "histogram.csv",
                             "kl.csv", "mask.pbm", "detections.csv"}) {
        CAPTURE(name);
        CHECK(fs::exists(out / name));
    }
}

TEST_CASE("sarctl: pipeline honors --stage and exits 0") {
    const fs::path cfg = tiny_config();
    const fs::path out = fs::temp_directory_path() / "sar_cli_tests" / "upto";
    fs::remove_all(out);
    const std::string out_s = out.string();
    CHECK(run({"pipeline", "--config", cfg.string().c_str(), "--out", out_s.c_str(), "--stage",
               "magnitude", "--quiet"}) == 0);
    CHECK(fs::exists(out / "magnitude.sarm"));
    CHECK(!fs::exists(out / "despeckled.sarm"));
    CHECK(fs::exists(out / "manifest.txt"));
}
