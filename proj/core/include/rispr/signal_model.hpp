#pragma once

// Narrowband multi-hop model: AP -> targets -> RIS -> PR, with the direct
// AP -> RIS, AP -> PR and target -> PR paths.

#include <cstdint>
#include <optional>
#include <vector>

#include "rispr/phase_shift_matrix.hpp"
#include "rispr/types.hpp"

namespace rispr {

/// How propagation delays enter the sampled data.
///  - SampleShift: s(t_l - tau) is the waveform shifted by round(tau * fs) samples,
///    times the carrier phase exp(-j 2 pi fc tau).
///  - PhaseOnly: no time shift, only the carrier phase.
enum class DelayModel { SampleShift, PhaseOnly };

/// Propagation delays in seconds. Per-target lists are either empty (all zero) or length K.
struct PathDelays {
    double ap_ris = 0.0;
    double ris_pr = 0.0;
    double ap_pr = 0.0;
    std::vector<double> ap_target;
    std::vector<double> target_ris;
    std::vector<double> target_pr;

    double ap_target_at(std::size_t k) const { return ap_target.empty() ? 0.0 : ap_target[k]; }
    double target_ris_at(std::size_t k) const { return target_ris.empty() ? 0.0 : target_ris[k]; }
    double target_pr_at(std::size_t k) const { return target_pr.empty() ? 0.0 : target_pr[k]; }
};

/// Realized scene: geometry in degrees, complex path gains, Rician factors and delays.
struct SceneConfig {
    AngleList target_aoas_ris;
    AngleList target_aoas_pr;
    double aoa_ap_ris = -10.0;
    double aoa_ris_pr = -40.0;
    double aod_ris_pr = 40.0;
    double aoa_ap_pr = 0.0;

    std::vector<Complex> gain_targets;     // alpha_k, AP -> target -> RIS
    Complex gain_ap_ris{0.0, 0.0};         // alpha_0
    Complex gain_ris_pr{1.0, 0.0};         // rho_RIS^PR
    Complex gain_ap_pr{0.0, 0.0};          // rho_AP^PR
    std::vector<Complex> gain_targets_pr;  // rho_k

    double rician_ap_pr = 0.0;
    std::vector<double> rician_targets_pr;

    PathDelays delays;
    double carrier_hz = 2.4e9;
    double sample_rate_hz = 20e6;
    DelayModel delay_model = DelayModel::SampleShift;

    std::size_t target_count() const { return target_aoas_ris.size(); }
    void validate() const;
};

/// Path gain given as magnitude in dB plus an optional pinned phase.
/// Without a pinned phase, each realization draws it uniformly on [0, 2pi).
struct GainSpec {
    double db = 0.0;
    std::optional<double> phase_deg;

    Complex realize(Rng& rng) const;
    static GainSpec pinned(Complex value);
    /// Gain that realizes to exactly zero.
    static GainSpec off();
    bool is_off() const;
};

/// Scene template: geometry, Rician factors and delays from `base`, gains from the GainSpecs.
struct SceneSpec {
    SceneConfig base;
    std::vector<GainSpec> gain_targets;
    GainSpec gain_ap_ris = GainSpec::off();
    GainSpec gain_ris_pr{0.0, 0.0};
    GainSpec gain_ap_pr = GainSpec::off();
    std::vector<GainSpec> gain_targets_pr;

    /// Draws unpinned phases in a fixed order: targets, AP-RIS, RIS-PR, AP-PR, targets-PR.
    SceneConfig realize(Rng& rng) const;
    /// Template whose every gain is pinned to the realized values of `scene`.
    static SceneSpec pinned(const SceneConfig& scene);
};

enum class WaveformKind { Gaussian, Qpsk };

/// Transmitted sequence s(t_1..t_L). `history` extra leading samples hold s at
/// instants before t_1 so that shifted replicas stay defined.
struct Waveform {
    std::vector<Complex> samples;
    std::size_t history = 0;

    std::size_t length() const { return samples.size() - history; }
    /// Mean squared magnitude over the L observed samples.
    double power() const;
    /// s(t_l - lag samples), l is 0-based.
    Complex at(std::size_t l, std::size_t lag = 0) const;
};

Waveform generate_waveform(std::size_t length, Rng& rng,
                           WaveformKind kind = WaveformKind::Gaussian,
                           std::size_t history = 0);

/// ULA response: element m (0-based) = exp(j 2 pi spacing m sin(angle)). Requires |angle| < 90.
CVector steering_vector(const ArraySpec& spec, double angle_deg);
/// Columns are steering vectors on `grid`.
CMatrix steering_matrix(const ArraySpec& spec, const AngleList& grid);

/// sqrt(k/(1+k)) a(los) + sqrt(1/(1+k)) h_bar with h_bar ~ CN(0, I). Infinite kappa is pure LoS.
CVector rician_channel(const ArraySpec& spec, double los_angle_deg, double kappa, Rng& rng);

/// Sample lag implied by a delay under the scene's delay model.
std::size_t lag_samples(const SceneConfig& scene, double tau);
/// Leading waveform history needed to simulate `scene`.
std::size_t required_history(const SceneConfig& scene);
/// Row [s(t_1 - tau) ... s(t_L - tau)] including the carrier phase.
CRowVector delayed_replica(const Waveform& waveform, const SceneConfig& scene, double tau);

/// Incident field at the RIS, M x L. `extra_delay` is added to every path
/// (simulate_epochs passes tau_RIS^PR so the reflected rows arrive delayed at the PR).
CMatrix ris_incident(const SceneConfig& scene, const Waveform& waveform, const ArraySpec& ris,
                     double extra_delay = 0.0);

/// x_n = b^T(aod) diag(v_n) incident. Throws InvariantError if |v_n| entries deviate from 1 by > 1e-9.
CRowVector ris_reflect(const CMatrix& incident, const CRowVector& phases_row, double aod_ris_pr_deg,
                       const ArraySpec& ris);

/// Rician channels of the direct AP -> PR and target -> PR paths.
struct PrChannels {
    CVector ap_pr;
    std::vector<CVector> targets_pr;
};

PrChannels draw_pr_channels(const SceneConfig& scene, const ArraySpec& pr, Rng& rng);

/// Y_n = rho_RIS a(theta_RIS^PR) x_n + rho_AP h_AP s_AP + sum_k rho_k h_k s_k + E_n.
/// Noise is drawn from `noise_rng` whether or not the variance is zero.
CMatrix pr_received(const SceneConfig& scene, const Waveform& waveform, const CRowVector& x_n,
                    const ArraySpec& pr, const PrChannels& channels, double noise_variance,
                    Rng& noise_rng);

/// Noise per complex sample. When `snr_db` is set the variance is derived from
/// the realized RIS path: sigma^2 = |rho_RIS^PR|^2 mean|x_n|^2 / 10^(snr/10).
/// `seed` drives a dedicated noise stream.
struct NoiseModel {
    double variance = 0.0;
    std::optional<double> snr_db;
    std::uint64_t seed = 0;
};

double noise_variance_for_snr(const SceneConfig& scene, const CMatrix& reflected, double snr_db);

struct SnapshotTensor {
    std::vector<CMatrix> per_epoch;  // N_epoch matrices, N_PR x L
    CMatrix stacked;                 // N_PR * N_epoch x L
    CMatrix reflected;               // N_epoch x L, row n = x_n
    double noise_variance = 0.0;

    std::size_t epochs() const { return per_epoch.size(); }
};

/// Evaluates the incident field once, then reflection and reception per epoch.
/// PR direct-path channels are drawn once and held across epochs.
SnapshotTensor simulate_epochs(const SceneConfig& scene, const Waveform& waveform,
                               const PhaseShiftMatrix& phases, const ArraySpec& pr,
                               const ArraySpec& ris, const NoiseModel& noise, Rng& rng);

}  // namespace rispr
