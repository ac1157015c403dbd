#pragma once

// End-to-end runners behind the `rispr` CLI: single spectrum, Monte-Carlo MSE
// sweep and RIS beampattern tabulation.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rispr/benchmarks.hpp"
#include "rispr/localizer.hpp"
#include "rispr/signal_model.hpp"

namespace rispr {

struct ExperimentConfig {
    SceneSpec scene;
    ArraySpec ris{64, 0.5};
    ArraySpec pr{8, 0.5};
    LocalizerConfig localizer;
    int n_epoch = 100;
    int samples = 100;  // L
    WaveformKind waveform = WaveformKind::Gaussian;

    /// SNR points in dB. `spectrum` uses the first entry; when the list is
    /// empty it uses `noise_variance` directly.
    std::vector<double> snr_db;
    double noise_variance = 0.0;
    /// SNR points are realized at this fixed noise variance: after sigma^2 is
    /// derived from the SNR, every path gain is scaled by one common factor so
    /// that sigma^2 equals the floor. Unset keeps the configured gains as they are.
    std::optional<double> noise_floor = 1.0;

    std::size_t trials = 200;
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    unsigned parallel = 1;

    /// mse-sweep: RIS sizes and estimators to evaluate.
    std::vector<int> m_values{16, 32, 64};
    std::vector<Method> methods{Method::NlmsRis, Method::MusicRis, Method::NlmsNoRis};

    /// beampattern: AP placements theta_AP^RIS and the evaluation grid.
    AngleList ap_placements{-30.0, -10.0, 10.0, 30.0};
    AngleList beampattern_grid = default_grid();
    /// |theta - theta_AP| beyond which a grid point counts as off-notch.
    double notch_exclusion_deg = 5.0;

    /// Optional PR null directions for the receive beamformer (empty = matched weight).
    AngleList null_directions;

    void validate() const;
};

/// Presets used by the shipped config files and the acceptance suite.
ExperimentConfig spectrum_preset();     // K=4 at 20/30/40/50, M=64, N_epoch=L=100
ExperimentConfig mse_sweep_preset();    // K=2, M in {16,32,64}, 12 SNR points
ExperimentConfig beampattern_preset();  // M=64, N_PR=16, L=90, four AP placements

/// Default scene template: path gains, Rician factors and integer-sample delays
/// for `k` targets. Angles are left to the caller.
SceneSpec default_scene(std::size_t k);

/// Seed streams. Every random quantity of a trial comes from
/// derive_seed(trial_seed, stream, index), and trial seeds from
/// derive_seed(master, Stream::Trial, p).
enum class Stream : std::uint64_t {
    Trial = 1,
    Scene = 2,
    Waveform = 3,
    Phases = 4,
    Channels = 5,
    Noise = 6,
    Beampattern = 7,
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t parent, Stream stream, std::uint64_t index = 0);

struct SpectrumRun {
    SceneConfig scene;
    PhaseShiftMatrix phases;
    BeamformedData z;
    SpectrumResult result;
    double noise_variance = 0.0;
    std::optional<double> snr_db;
};

SpectrumRun run_spectrum(const ExperimentConfig& cfg);
/// spectrum.csv, phases.csv, z.csv and summary.json under `dir`.
void write_spectrum_artifacts(const SpectrumRun& run, const ExperimentConfig& cfg,
                              const std::string& dir);

struct SweepPoint {
    double snr_db = 0.0;
    Method method = Method::NlmsRis;
    int m_elements = 0;
    double mse = 0.0;
    double flagged_fraction = 0.0;
    double mean_detected = 0.0;
    std::size_t trials = 0;
};

struct SweepResult {
    std::vector<TrialReport> trials;  // ordered by (trial, M, SNR, method)
    std::vector<SweepPoint> points;   // ordered by (M, method, SNR)

    /// Curve of one (method, M) pair in SNR order.
    std::vector<SweepPoint> curve(Method method, int m_elements) const;
};

/// One Monte-Carlo trial across every M, SNR and method of the config.
std::vector<TrialReport> run_sweep_trial(const ExperimentConfig& cfg, std::size_t trial);
SweepResult run_mse_sweep(const ExperimentConfig& cfg);
/// trials.csv, sweep.csv and summary.json under `dir`.
void write_sweep_artifacts(const SweepResult& result, const ExperimentConfig& cfg,
                           const std::string& dir);

struct BeampatternCurve {
    double ap_aoa_deg = 0.0;
    RVector pattern;        // linear B(theta)
    RVector normalized_db;  // 10 log10(B / max B)
    double notch_db = 0.0;  // normalized level at the grid point nearest theta_AP
    double off_notch_median_db = 0.0;
    double residual_db = 0.0;  // 10 log10(mean_n |v_n^T a_hat|^2 / M), a_hat unit norm
};

struct BeampatternResult {
    AngleList grid;
    std::vector<BeampatternCurve> curves;
};

BeampatternResult run_beampattern(const ExperimentConfig& cfg);
/// beampattern.csv and summary.json under `dir`.
void write_beampattern_artifacts(const BeampatternResult& result, const ExperimentConfig& cfg,
                                 const std::string& dir);

}  // namespace rispr
