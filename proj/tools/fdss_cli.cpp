// Experiment runner: one subcommand per sweep, YAML config in, CSV/JSON out.
#include <functional>
#include <iostream>
#include <map>

#include "CLI11.hpp"

#include "fdss/experiments.hpp"
#include "fdss/version.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

using Runner = std::function<fdss::exp::RunOutput(const fdss::exp::ExperimentConfig&)>;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectrally shaped DFT-s-OFDM experiment runner"};
    app.set_version_flag("--version", std::string(fdss::kVersion));
    app.require_subcommand(1);

    std::string config_path;
    fdss::exp::CliOverrides overrides;
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    std::string out_dir;
    unsigned threads = 0;

    const std::map<std::string, std::pair<std::string, Runner>> commands{
        {"papr-ccdf", {"PAPR / CM CCDF over an optional ne, L or ripple sweep", fdss::exp::run_papr_ccdf}},
        {"bound-sweep", {"U, GU, QAM-approximate and corrected PAPR bounds per grid point", fdss::exp::run_bound_sweep}},
        {"se-opt", {"Optimal spectrum-extension size by bound, Monte Carlo or capacity", fdss::exp::run_se_opt}},
        {"rate-sweep", {"Mean achievable rate over channel realizations", fdss::exp::run_rate_sweep}},
        {"ber", {"Simulated and theoretical BER with MRC/MMSE reception", fdss::exp::run_ber}},
        {"window-dump", {"Window coefficients", fdss::exp::run_window_dump}},
    };
    std::map<CLI::App*, const Runner*> runners;
    for (const auto& [name, entry] : commands) {
        auto* sub = app.add_subcommand(name, entry.first);
        sub->add_option("--config", config_path, "YAML experiment config")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "Master seed");
        sub->add_option("--trials", trials, "Trial count (symbols, channel draws or blocks)");
        sub->add_option("--out", out_dir, "Output directory");
        sub->add_option("--threads", threads, "Worker threads (0: hardware concurrency)");
        runners[sub] = &entry.second;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    CLI::App* chosen = app.get_subcommands().front();
    if (chosen->count("--seed")) overrides.seed = seed;
    if (chosen->count("--trials")) overrides.trials = trials;
    if (chosen->count("--out")) overrides.out_dir = out_dir;
    if (chosen->count("--threads")) overrides.threads = threads;

    try {
        auto cfg = fdss::exp::load_config(config_path);
        fdss::exp::apply_overrides(cfg, overrides);
        cfg.validate();
        const auto output = (*runners.at(chosen))(cfg);
        for (const auto& path : fdss::exp::write_outputs(output, cfg.out_dir)) std::cout << path.string() << '\n';
        return 0;
    } catch (const fdss::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
