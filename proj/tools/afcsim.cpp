#include "afc/config.hpp"
#include "afc/csv.hpp"
#include "afc/presets.hpp"
#include "afc/runner.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

enum Exit { kOk = 0, kInternal = 1, kConfig = 2, kNumerical = 3, kIo = 4 };

constexpr const char* kOutEnv = "AFCSIM_OUT";

struct Options {
    std::string target;
    std::string out;
    std::size_t grid_points = 0;
    bool quiet = false;
};

afc::RunConfig load(const Options& o) {
    if (const auto* p = afc::find_preset(o.target))
        return afc::parse_config_text(std::string(p->text), "preset " + std::string(p->name));
    return afc::parse_config(o.target);
}

std::filesystem::path output_dir(const Options& o, const afc::RunConfig& cfg) {
    if (!o.out.empty()) return o.out;
    const char* env = std::getenv(kOutEnv);
    const std::filesystem::path base = env && *env ? env : "afcsim-out";
    return base / cfg.name;
}

int run(const Options& o, bool sweep_only) {
    try {
        afc::RunConfig cfg = load(o);
        if (o.grid_points) {
            afc::set_config_value(cfg, "grid.points", std::to_string(o.grid_points));
            afc::validate_config(cfg);
        }
        if (sweep_only && cfg.kind != afc::RunKind::Sweep) {
            std::cerr << "afcsim: " << o.target << ": run.kind = sweep required for the sweep command, got "
                      << afc::to_string(cfg.kind) << '\n';
            return kConfig;
        }
        const auto out = afc::execute(cfg);
        const auto dir = output_dir(o, cfg);
        afc::write_outputs(dir, cfg, out);
        if (!o.quiet) {
            for (const auto& r : out.results) std::cout << r.key << " = " << afc::csv::number(r.value) << '\n';
            std::cout << "flags = " << (out.validity.valid ? "none" : out.validity.note) << '\n';
            std::cout << "wrote " << (out.files.size() + 1) << " file(s) to " << dir.string() << '\n';
        }
        return kOk;
    } catch (const afc::ConfigError& e) {
        std::cerr << "afcsim: configuration error: " << e.what() << '\n';
        return kConfig;
    } catch (const afc::DomainError& e) {
        std::cerr << "afcsim: configuration error: " << e.what() << '\n';
        return kConfig;
    } catch (const afc::NumericalError& e) {
        std::cerr << "afcsim: numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const afc::IoError& e) {
        std::cerr << "afcsim: I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "afcsim: internal error: " << e.what() << '\n';
        return kInternal;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Atomic frequency comb memory simulator"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", o.out, std::string("Output directory (default: $") + kOutEnv + "/<name> or afcsim-out/<name>)");
        sub->add_option("--grid-points", o.grid_points, "Override grid.points (power of two >= 1024)");
        sub->add_flag("--quiet", o.quiet, "Print nothing on success");
    };

    auto* run_cmd = app.add_subcommand("run", "Run a preset or configuration file");
    run_cmd->add_option("target", o.target, "Preset name or path to an INI file")->required();
    add_common(run_cmd);

    auto* sweep_cmd = app.add_subcommand("sweep", "Run a sweep configuration and write sweep.csv");
    sweep_cmd->add_option("path", o.target, "Sweep configuration file or preset")->required();
    add_common(sweep_cmd);

    auto* list_cmd = app.add_subcommand("presets", "List bundled presets");

    std::string shown;
    auto* show_cmd = app.add_subcommand("show", "Print a preset's configuration");
    show_cmd->add_option("name", shown, "Preset name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    if (list_cmd->parsed()) {
        for (const auto& p : afc::presets()) std::cout << p.name << "  " << p.summary << '\n';
        return kOk;
    }
    if (show_cmd->parsed()) {
        const auto* p = afc::find_preset(shown);
        if (!p) {
            std::cerr << "afcsim: unknown preset '" << shown << "'\n";
            return kConfig;
        }
        std::cout << p->text;
        return kOk;
    }
    return run(o, sweep_cmd->parsed());
}
