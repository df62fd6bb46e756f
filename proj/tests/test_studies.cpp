#include <doctest.h>

#include <iwbl/errors.hpp>
#include <iwbl/io.hpp>
#include <iwbl/studies.hpp>

#include <filesystem>
#include <fstream>
#include <string>

using namespace iwbl;
namespace fs = std::filesystem;

namespace {

std::string fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    return p.string();
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    REQUIRE(f.good());
    return std::string((std::istreambuf_iterator<char>(f)), {});
}

}  // namespace

TEST_SUITE("studies") {

TEST_CASE("unknown study name is a configuration error") {
    Config c = Config::parse("study = no-such-study\n");
    c.set("output.dir", fresh_dir("iwbl_study_unknown"));
    CHECK_THROWS_AS(run_study(c), ConfigError);
}

TEST_CASE("linear bulk with zero data produces an all-zero series") {
    std::string dir = fresh_dir("iwbl_study_zero");
    Config c = Config::parse(
        "study = linear-bulk\n"
        "grid.Nx = 8\ngrid.Ny = 8\ngrid.Nz = 33\n"
        "init.recipe = zero\n"
        "physics.eps = 0.1\nphysics.T = 0.1\noutput.samples = 4\n");
    c.set("output.dir", dir);
    run_study(c);
    std::string report = slurp(dir + "/report.json");
    CHECK(report.find("\"energy_drift_rel_per_unit_time\": 0.0") !=
          std::string::npos);
    CHECK(fs::exists(dir + "/series.csv"));
    CHECK(fs::exists(dir + "/manifest.txt"));
    fs::remove_all(dir);
}

TEST_CASE("identical configs give byte-identical outputs") {
    std::string d1 = fresh_dir("iwbl_study_det1");
    std::string d2 = fresh_dir("iwbl_study_det2");
    for (const std::string& d : {d1, d2}) {
        Config c = Config::parse(
            "study = linear-bl\n"
            "grid.Nx = 8\ngrid.Ny = 8\ngrid.Neta = 65\n"
            "init.recipe = bl-poly-exp\ninit.amplitude = 0.01\n"
            "init.decay = 1.5\n"
            "physics.T = 0.2\noutput.samples = 10\n");
        c.set("output.dir", d);
        run_study(c);
    }
    CHECK(slurp(d1 + "/series.csv") == slurp(d2 + "/series.csv"));
    CHECK(slurp(d1 + "/report.json") == slurp(d2 + "/report.json"));
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("manifest records version and resolved configuration") {
    std::string dir = fresh_dir("iwbl_study_manifest");
    Config c = Config::parse(
        "study = norms\n"
        "grid.Nx = 8\ngrid.Ny = 8\ngrid.Neta = 65\n"
        "init.recipe = bl-exp\ninit.amplitude = 0.01\n");
    c.set("output.dir", dir);
    run_study(c);
    std::string manifest = slurp(dir + "/manifest.txt");
    CHECK(manifest.find(kVersion) != std::string::npos);
    CHECK(manifest.find("study = norms") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("iota sweep demands doubling truncation lengths") {
    std::string dir = fresh_dir("iwbl_study_lbad");
    Config c = Config::parse(
        "study = iota-sweep\n"
        "grid.Nx = 8\ngrid.Ny = 8\ngrid.Neta = 33\n"
        "init.recipe = bl-exp\ninit.amplitude = 0.01\n"
        "sweep.L_list = [10, 15, 40]\n");
    c.set("output.dir", dir);
    CHECK_THROWS_AS(run_study(c), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("output directories resolve against IWBL_OUTPUT_ROOT") {
    std::string root = fresh_dir("iwbl_study_root");
    Config c = Config::parse("study = x\noutput.dir = sub\n");
    setenv("IWBL_OUTPUT_ROOT", root.c_str(), 1);
    std::string resolved = resolve_output_dir(c);
    unsetenv("IWBL_OUTPUT_ROOT");
    CHECK(resolved == root + "/sub");
}

}  // TEST_SUITE
