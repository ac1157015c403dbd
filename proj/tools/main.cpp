// rispr: command-line front end for the three experiments.
//
//   rispr spectrum    [--config f.json] [--seed n] [--out dir]
//   rispr mse-sweep   [--config f.json] [--seed n] [--out dir] [--parallel n]
//   rispr beampattern [--config f.json] [--seed n] [--out dir]
//
// Each subcommand starts from its preset, applies the config file, then the flags.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "rispr/config_io.hpp"
#include "rispr/experiment.hpp"

namespace {

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<unsigned> parallel;
    bool print_config = false;
};

void add_common(CLI::App* sub, CommonFlags& f)
{
    sub->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", f.seed, "master seed (u64)");
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--parallel", f.parallel, "worker threads (0 = all cores)");
    sub->add_flag("--print-config", f.print_config, "print the resolved config and exit");
}

rispr::ExperimentConfig resolve(const rispr::ExperimentConfig& preset, const CommonFlags& f)
{
    rispr::ExperimentConfig cfg = f.config.empty() ? preset : rispr::load_config(f.config, preset);
    if (f.seed) cfg.seed = *f.seed;
    if (!f.out.empty()) cfg.output_dir = f.out;
    if (f.parallel) {
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        cfg.parallel = *f.parallel == 0 ? hw : *f.parallel;
    }
    cfg.validate();
    return cfg;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_spectrum(const rispr::ExperimentConfig& cfg)
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto run = rispr::run_spectrum(cfg);
    rispr::write_spectrum_artifacts(run, cfg, cfg.output_dir);
    std::printf("detected %zu peak(s):", run.result.detected_count());
    for (double p : run.result.peaks)
        std::printf(" %.1f", p);
    std::printf("\nnoise variance %.4g, wrote %s (%.2f s)\n", run.noise_variance,
                cfg.output_dir.c_str(), seconds_since(t0));
    return 0;
}

int cmd_sweep(const rispr::ExperimentConfig& cfg)
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = rispr::run_mse_sweep(cfg);
    rispr::write_sweep_artifacts(res, cfg, cfg.output_dir);
    std::printf("%-12s %4s", "method", "M");
    for (double s : cfg.snr_db)
        std::printf(" %8.0f", s);
    std::printf("\n");
    for (int m : cfg.m_values)
        for (auto method : cfg.methods) {
            std::printf("%-12s %4d", rispr::to_string(method).c_str(), m);
            for (const auto& p : res.curve(method, m))
                std::printf(" %8.3g", p.mse);
            std::printf("\n");
        }
    std::printf("wrote %s (%.1f s)\n", cfg.output_dir.c_str(), seconds_since(t0));
    return 0;
}

int cmd_beampattern(const rispr::ExperimentConfig& cfg)
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = rispr::run_beampattern(cfg);
    rispr::write_beampattern_artifacts(res, cfg, cfg.output_dir);
    for (const auto& c : res.curves)
        std::printf("AP at %6.1f deg: notch %6.2f dB, off-notch median %6.2f dB\n", c.ap_aoa_deg,
                    c.notch_db, c.off_notch_median_db);
    std::printf("wrote %s (%.2f s)\n", cfg.output_dir.c_str(), seconds_since(t0));
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"RIS-assisted passive radar localization experiments"};
    app.require_subcommand(1);

    CommonFlags spectrum_flags, sweep_flags, beam_flags;
    auto* spectrum = app.add_subcommand("spectrum", "NLMS spectrum of a single scene");
    auto* sweep = app.add_subcommand("mse-sweep", "Monte-Carlo AoA MSE versus SNR");
    auto* beam = app.add_subcommand("beampattern", "RIS beampattern for several AP placements");
    add_common(spectrum, spectrum_flags);
    add_common(sweep, sweep_flags);
    add_common(beam, beam_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help and --version exit 0; usage errors exit 2
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        auto dispatch = [](const rispr::ExperimentConfig& preset, const CommonFlags& f, auto&& run) {
            const auto cfg = resolve(preset, f);
            if (f.print_config) {
                std::cout << rispr::dump_config(cfg) << '\n';
                return 0;
            }
            return run(cfg);
        };
        if (spectrum->parsed())
            return dispatch(rispr::spectrum_preset(), spectrum_flags, cmd_spectrum);
        if (sweep->parsed())
            return dispatch(rispr::mse_sweep_preset(), sweep_flags, cmd_sweep);
        return dispatch(rispr::beampattern_preset(), beam_flags, cmd_beampattern);
    } catch (const std::exception& e) {
        std::cerr << "rispr: " << e.what() << '\n';
        return 1;
    }
}
