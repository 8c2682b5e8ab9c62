// zeno_cli: command-line front end
//
//   zeno_cli run       --config spec.json [--out traj.csv] [--engine sector|full] [--seed N] [--threads N]
//   zeno_cli sweep     --config spec.json [--out sweep.csv] ...
//   zeno_cli validate  [--config spec.json]
//   zeno_cli calibrate [--config spec.json] [--out report.txt]
//   zeno_cli figures   --out DIR [--figure fig1a|fig1b|fig2a|fig2b] [--engine ...] [--threads N]
//
// Exit codes: 0 success, 2 invalid input, 3 numeric failure, 1 anything else.

#include "zeno/io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

struct Flags {
    std::string config;
    std::string out;
    std::string engine;
    std::optional<std::uint64_t> seed;
    unsigned threads{1};
    std::string figure;
};

zeno::RunSpec load_spec(const Flags& f) {
    zeno::RunSpec spec = zeno::parse_runspec(zeno::read_file(f.config));
    if (!f.engine.empty()) spec.engine = f.engine == "full" ? zeno::EngineKind::Full : zeno::EngineKind::Sector;
    if (f.seed) spec.seed = *f.seed;
    if (!f.out.empty()) spec.output = f.out;
    // overrides go back through the validator
    return zeno::parse_runspec(zeno::to_json(spec));
}

void write_or_print(const std::string& path, const std::string& bytes) {
    if (path.empty() || path == "-")
        std::cout << bytes;
    else
        zeno::write_file(path, bytes);
}

int cmd_run(const Flags& f, bool sweep_only) {
    const zeno::RunSpec spec = load_spec(f);
    if (sweep_only && spec.schedule.kind != zeno::ScheduleKind::Sweep)
        throw zeno::ValidationError(std::vector<zeno::FieldError>{{"schedule.kind", "the sweep command needs a schedule of kind \"sweep\""}});
    for (const auto& w : spec.system.warnings()) std::fprintf(stderr, "warning: %s\n", w.c_str());
    if (spec.channel.kind == zeno::ChannelKind::Gradient && spec.channel.gradient.weak_dephasing())
        std::fprintf(stderr, "warning: gradient dephasing is weak (%.3g cycles across the sample)\n",
                     spec.channel.gradient.dephasing_cycles());
    const zeno::Trajectory traj = zeno::execute(spec, f.threads, true);
    write_or_print(spec.output, zeno::format_csv(traj));
    return kExitOk;
}

int cmd_validate(const Flags& f) {
    zeno::SystemConfig cfg = f.config.empty() ? zeno::figure1_config() : load_spec(f).system;
    bool ok = true;
    auto report = [&](const char* what, double err, double tol) {
        const bool pass = err <= tol;
        ok = ok && pass;
        std::printf("%-40s max error %.3e (tolerance %.0e) %s\n", what, err, tol, pass ? "ok" : "FAIL");
    };
    if (cfg.N <= 5) {
        for (auto c : {zeno::Coupling::XX, zeno::Coupling::RW, zeno::Coupling::CR, zeno::Coupling::ISO}) {
            zeno::SystemConfig v = cfg;
            v.coupling = c;
            const std::string label = std::string("sector vs full engine, ") + zeno::to_string(c);
            report(label.c_str(), zeno::compare_engines(v, zeno::Schedule::periodic_then_free(0.7, 6, 6.0)), 1e-10);
        }
    } else {
        std::printf("sector vs full engine: skipped (N = %d > 5)\n", cfg.N);
    }
    const auto a = zeno::compare_analytics(cfg, 1.0, 100, 20.0);
    report("free evolution vs closed form (RW)", a.free_error, 1e-9);
    report("measured evolution vs closed form (RW)", a.measured_error, 1e-9);
    return ok ? kExitOk : kExitNumeric;
}

int cmd_calibrate(const Flags& f) {
    const zeno::SystemConfig cfg = f.config.empty() ? zeno::figure1_config() : load_spec(f).system;
    const auto result = zeno::calibrate_angular_convention(cfg);
    std::string text = "convention,plateau_ms,final_pol_ratio\n";
    for (const auto& e : result.entries)
        text += std::string(zeno::to_string(e.convention)) + "," + zeno::format_double(e.plateau_ms, "%.6g") + "," +
                zeno::format_double(e.final_ratio, "%.6g") + "\n";
    text += std::string("chosen,") + zeno::to_string(result.chosen) + "\n";
    write_or_print(f.out, text);
    return kExitOk;
}

int cmd_figures(const Flags& f) {
    if (f.out.empty()) throw zeno::ValidationError(std::vector<zeno::FieldError>{{"--out", "an output directory is required"}});
    std::filesystem::create_directories(f.out);
    const auto engine = f.engine == "full" ? zeno::EngineKind::Full : zeno::EngineKind::Sector;
    for (const auto& name : zeno::figure_names()) {
        if (!f.figure.empty() && f.figure != name) continue;
        for (const auto& series : zeno::figure_datasets(name, engine, f.threads)) {
            const std::string path = (std::filesystem::path(f.out) / (series.name + ".csv")).string();
            zeno::emit_csv(series.data, path);
            std::printf("%s\n", path.c_str());
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Central-spin Zeno/anti-Zeno simulator"};
    app.require_subcommand(1);
    Flags f;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* c = sub->add_option("--config", f.config, "run spec (JSON)")->check(CLI::ExistingFile);
        if (config_required) c->required();
        sub->add_option("--out", f.out, "output path");
        sub->add_option("--engine", f.engine, "sector or full")->check(CLI::IsMember({"sector", "full"}));
        sub->add_option("--seed", f.seed, "RNG seed for gradient draws");
        sub->add_option("--threads", f.threads, "worker threads for sweeps")->check(CLI::Range(1U, 1024U));
    };
    auto* run = app.add_subcommand("run", "simulate one run spec and write its trajectory CSV");
    add_common(run, true);
    auto* sweep = app.add_subcommand("sweep", "run a tau sweep spec and write ε_S(nτ) per τ");
    add_common(sweep, true);
    auto* validate = app.add_subcommand("validate", "cross-check engines and closed forms");
    add_common(validate, false);
    auto* calibrate = app.add_subcommand("calibrate", "select the angular-frequency convention");
    add_common(calibrate, false);
    auto* figures = app.add_subcommand("figures", "write the canonical figure datasets");
    add_common(figures, false);
    figures->add_option("--figure", f.figure, "restrict to one figure")
        ->check(CLI::IsMember({"fig1a", "fig1b", "fig2a", "fig2b"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (run->parsed()) return cmd_run(f, false);
        if (sweep->parsed()) return cmd_run(f, true);
        if (validate->parsed()) return cmd_validate(f);
        if (calibrate->parsed()) return cmd_calibrate(f);
        if (figures->parsed()) return cmd_figures(f);
    } catch (const zeno::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const zeno::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const zeno::InvalidArgument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const zeno::NumericFailure& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return kExitNumeric;
    } catch (const zeno::InconsistentState& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitOther;
    }
    return kExitOther;
}
