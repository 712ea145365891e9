// lanfa: run experiment configs, figure presets, the (kappa, q) sweep and the
// verification suites.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lanfa/harness.hpp"

namespace {

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

lanfa::SweepConfig sweep_config(const std::string& qs, const std::string& kappas, const std::string& methods) {
    lanfa::SweepConfig cfg;
    if (!qs.empty()) {
        cfg.qs.clear();
        for (const auto& s : split(qs)) {
            std::size_t pos = 0;
            const int q = std::stoi(s, &pos);
            if (pos != s.size() || q < 1) throw lanfa::ConfigError("--qs: expected positive integers, got '" + s + "'");
            cfg.qs.push_back(static_cast<unsigned>(q));
        }
    }
    if (!kappas.empty()) {
        cfg.kappas.clear();
        for (const auto& s : split(kappas)) cfg.kappas.push_back(lanfa::real_from_string(s));
    }
    if (!methods.empty()) {
        cfg.methods.clear();
        for (const auto& m : split(methods)) {
            if (m == "lanczos_fa") {
                cfg.methods.push_back(lanfa::Method::LanczosFA);
            } else if (m == "lanczos_or") {
                cfg.methods.push_back(lanfa::Method::LanczosOR);
            } else {
                throw lanfa::ConfigError("--methods: expected lanczos_fa and/or lanczos_or, got '" + m + "'");
            }
        }
    }
    return cfg;
}

int print_checks(const std::vector<lanfa::CheckResult>& checks) {
    int failed = 0;
    for (const auto& c : checks) {
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.suite << "/" << c.name << ": " << c.detail << "\n";
        failed += !c.pass;
    }
    return failed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lanczos-FA experiments in extended precision"};
    app.set_version_flag("--version", lanfa::library_version());
    app.require_subcommand(1);

    std::string config_path, out_dir;
    auto* run = app.add_subcommand("run", "Run a JSON experiment config");
    run->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "Output directory")->required();

    int fig_id = 0;
    std::string fig_out;
    auto* fig = app.add_subcommand("fig", "Reproduce a figure (3 is the kappa/q sweep)");
    fig->add_option("--id", fig_id, "Figure id")->required()->check(CLI::Range(1, 5));
    fig->add_option("--out", fig_out, "Output directory")->required();

    std::string suite;
    auto* verify = app.add_subcommand("verify", "Run an invariant suite; exits nonzero on failure");
    verify->add_option("--suite", suite, "lemmas, bounds, indefinite, hard_instance or all")->required();

    std::string func = "inv_power", qs, kappas, methods, sweep_out;
    std::size_t budget = 40, d = 100;
    std::uint64_t seed = 0;
    auto* sw = app.add_subcommand("sweep", "Adversarial worst-ratio sweep over (kappa, q)");
    sw->add_option("--func", func, "Function family (inv_power)")->check(CLI::IsMember({"inv_power"}));
    sw->add_option("--qs", qs, "Comma-separated powers, default 1,2,4,8,16,32,64");
    sw->add_option("--kappas", kappas, "Comma-separated condition numbers, default 1e2,...,1e6");
    sw->add_option("--methods", methods, "lanczos_fa,lanczos_or (default both)");
    sw->add_option("--budget", budget, "Objective evaluations per cell")->check(CLI::PositiveNumber);
    sw->add_option("--seed", seed, "Search seed");
    sw->add_option("--d", d, "Dimension")->check(CLI::Range(2, 100000));
    sw->add_option("--out", sweep_out, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            lanfa::run(lanfa::load_config(config_path), out_dir);
        } else if (*fig) {
            if (fig_id == 3) {
                lanfa::sweep(lanfa::SweepConfig{}, fig_out);
            } else {
                lanfa::run(lanfa::figure_config(fig_id), fig_out);
            }
        } else if (*verify) {
            lanfa::PrecisionScope scope(lanfa::resolve_precision(256));
            std::vector<std::string> names;
            if (suite == "all") {
                names.assign(std::begin(lanfa::kSuites), std::end(lanfa::kSuites));
            } else {
                names.push_back(suite);
            }
            int failed = 0;
            for (const auto& n : names) failed += print_checks(lanfa::verify(n));
            return failed == 0 ? 0 : 1;
        } else if (*sw) {
            auto cfg = sweep_config(qs, kappas, methods);
            cfg.budget = budget;
            cfg.seed = seed;
            cfg.d = d;
            cfg.k_max = d;
            lanfa::sweep(cfg, sweep_out);
        }
    } catch (const lanfa::Error& e) {
        std::cerr << "lanfa: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "lanfa: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
