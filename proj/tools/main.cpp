// iwbl command-line entry point.
//
//   iwbl run <config> [--set key=value ...]
//
// Loads a flat key=value config file, applies overrides in order, and runs
// the study named by its `study` key.  Exit codes: 0 success, 2 bad
// configuration, 3 iteration diverged, 4 I/O failure.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "iwbl/errors.hpp"
#include "iwbl/io.hpp"
#include "iwbl/studies.hpp"

int main(int argc, char** argv) {
    CLI::App app{"iwbl: internal-wave boundary-layer laboratory"};
    app.set_version_flag("--version", std::string(iwbl::kVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    CLI::App* run = app.add_subcommand("run", "run the study named by a config file");
    run->add_option("config", config_path, "path to a key = value config file")
        ->required();
    run->add_option("--set", overrides, "override a config entry (key=value)")
        ->take_all();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }

    try {
        iwbl::Config cfg = iwbl::Config::load(config_path);
        for (const std::string& ov : overrides) {
            auto eq = ov.find('=');
            if (eq == std::string::npos || eq == 0)
                throw iwbl::ConfigError("--set expects key=value, got: " + ov);
            cfg.set(ov.substr(0, eq), ov.substr(eq + 1));
        }
        std::string study = cfg.require_str("study");
        std::string dir = iwbl::resolve_output_dir(cfg);
        std::printf("iwbl %s: study %s -> %s\n", iwbl::kVersion, study.c_str(),
                    dir.c_str());
        iwbl::run_study(cfg);
        std::printf("done: %s\n", dir.c_str());
        return 0;
    } catch (const iwbl::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const iwbl::DivergedError& e) {
        std::fprintf(stderr, "diverged: %s\n", e.what());
        return 3;
    } catch (const iwbl::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 4;
    }
}
