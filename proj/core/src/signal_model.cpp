#include "rispr/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rispr {

namespace {

void require_len(std::size_t got, std::size_t k, const char* what)
{
    if (got != 0 && got != k)
        throw DomainError(std::string("SceneConfig: ") + what + " must be empty or have K entries");
}

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

void SceneConfig::validate() const
{
    const std::size_t k = target_aoas_ris.size();
    if (target_aoas_pr.size() != k)
        throw DomainError("SceneConfig: target_aoas_pr must have K entries");
    if (gain_targets.size() != k || gain_targets_pr.size() != k)
        throw DomainError("SceneConfig: per-target gain lists must have K entries");
    if (rician_targets_pr.size() != k)
        throw DomainError("SceneConfig: rician_targets_pr must have K entries");
    require_len(delays.ap_target.size(), k, "delays.ap_target");
    require_len(delays.target_ris.size(), k, "delays.target_ris");
    require_len(delays.target_pr.size(), k, "delays.target_pr");

    if (!(rician_ap_pr >= 0.0))
        throw DomainError("SceneConfig: rician_ap_pr must be >= 0");
    for (double kappa : rician_targets_pr)
        if (!(kappa >= 0.0))
            throw DomainError("SceneConfig: rician_targets_pr entries must be >= 0");

    for (Complex g : gain_targets)
        if (!finite(g)) throw DomainError("SceneConfig: non-finite target gain");
    for (Complex g : gain_targets_pr)
        if (!finite(g)) throw DomainError("SceneConfig: non-finite target-PR gain");
    if (!finite(gain_ap_ris) || !finite(gain_ris_pr) || !finite(gain_ap_pr))
        throw DomainError("SceneConfig: non-finite path gain");
    if (!(sample_rate_hz > 0.0))
        throw DomainError("SceneConfig: sample_rate_hz must be positive");
}

Complex GainSpec::realize(Rng& rng) const
{
    if (is_off())
        return {0.0, 0.0};
    double phase;
    if (phase_deg) {
        phase = deg2rad(*phase_deg);
    } else {
        std::uniform_real_distribution<double> uniform(0.0, 2.0 * kPi);
        phase = uniform(rng);
    }
    return std::polar(db_to_amplitude(db), phase);
}

GainSpec GainSpec::pinned(Complex value)
{
    if (std::abs(value) == 0.0)
        return off();
    return {20.0 * std::log10(std::abs(value)), std::arg(value) * 180.0 / kPi};
}

GainSpec GainSpec::off() { return {-std::numeric_limits<double>::infinity(), 0.0}; }

bool GainSpec::is_off() const { return std::isinf(db) && db < 0.0; }

SceneConfig SceneSpec::realize(Rng& rng) const
{
    SceneConfig scene = base;
    const std::size_t k = base.target_count();
    if (gain_targets.size() != k || gain_targets_pr.size() != k)
        throw DomainError("SceneSpec: per-target gain lists must have K entries");
    scene.gain_targets.clear();
    for (const auto& g : gain_targets)
        scene.gain_targets.push_back(g.realize(rng));
    scene.gain_ap_ris = gain_ap_ris.realize(rng);
    scene.gain_ris_pr = gain_ris_pr.realize(rng);
    scene.gain_ap_pr = gain_ap_pr.realize(rng);
    scene.gain_targets_pr.clear();
    for (const auto& g : gain_targets_pr)
        scene.gain_targets_pr.push_back(g.realize(rng));
    scene.validate();
    return scene;
}

SceneSpec SceneSpec::pinned(const SceneConfig& scene)
{
    SceneSpec spec;
    spec.base = scene;
    for (Complex g : scene.gain_targets)
        spec.gain_targets.push_back(GainSpec::pinned(g));
    spec.gain_ap_ris = GainSpec::pinned(scene.gain_ap_ris);
    spec.gain_ris_pr = GainSpec::pinned(scene.gain_ris_pr);
    spec.gain_ap_pr = GainSpec::pinned(scene.gain_ap_pr);
    for (Complex g : scene.gain_targets_pr)
        spec.gain_targets_pr.push_back(GainSpec::pinned(g));
    return spec;
}

double Waveform::power() const
{
    double acc = 0.0;
    for (std::size_t l = 0; l < length(); ++l)
        acc += std::norm(samples[history + l]);
    return acc / static_cast<double>(length());
}

Complex Waveform::at(std::size_t l, std::size_t lag) const
{
    if (lag > history)
        throw DomainError("Waveform: lag exceeds available history");
    return samples[history + l - lag];
}

Waveform generate_waveform(std::size_t length, Rng& rng, WaveformKind kind, std::size_t history)
{
    if (length == 0)
        throw DomainError("generate_waveform: length must be >= 1");
    Waveform w;
    w.history = history;
    w.samples.reserve(length + history);
    const double r = 1.0 / std::sqrt(2.0);
    std::bernoulli_distribution bit(0.5);
    for (std::size_t i = 0; i < length + history; ++i) {
        if (kind == WaveformKind::Gaussian) {
            w.samples.push_back(complex_gaussian(rng, 1.0));
        } else {
            const double re = bit(rng) ? r : -r;
            const double im = bit(rng) ? r : -r;
            w.samples.emplace_back(re, im);
        }
    }
    return w;
}

CVector steering_vector(const ArraySpec& spec, double angle_deg)
{
    spec.validate();
    if (!(std::abs(angle_deg) < 90.0))
        throw DomainError("steering_vector: |angle| must be < 90 degrees, got " + std::to_string(angle_deg));
    const double phase_step = 2.0 * kPi * spec.spacing * std::sin(deg2rad(angle_deg));
    CVector a(spec.elements);
    for (int m = 0; m < spec.elements; ++m)
        a(m) = std::polar(1.0, phase_step * m);
    return a;
}

CMatrix steering_matrix(const ArraySpec& spec, const AngleList& grid)
{
    CMatrix a(spec.elements, static_cast<Eigen::Index>(grid.size()));
    for (std::size_t g = 0; g < grid.size(); ++g)
        a.col(static_cast<Eigen::Index>(g)) = steering_vector(spec, grid[g]);
    return a;
}

CVector rician_channel(const ArraySpec& spec, double los_angle_deg, double kappa, Rng& rng)
{
    if (!(kappa >= 0.0))
        throw DomainError("rician_channel: kappa must be >= 0");
    const CVector los = steering_vector(spec, los_angle_deg);
    CVector diffuse(spec.elements);
    for (int m = 0; m < spec.elements; ++m)
        diffuse(m) = complex_gaussian(rng, 1.0);
    if (std::isinf(kappa))
        return los;
    return std::sqrt(kappa / (1.0 + kappa)) * los + std::sqrt(1.0 / (1.0 + kappa)) * diffuse;
}

std::size_t lag_samples(const SceneConfig& scene, double tau)
{
    if (!(tau >= 0.0))
        throw DomainError("delays must be non-negative");
    if (scene.delay_model == DelayModel::PhaseOnly)
        return 0;
    return static_cast<std::size_t>(std::llround(tau * scene.sample_rate_hz));
}

std::size_t required_history(const SceneConfig& scene)
{
    const auto& d = scene.delays;
    double worst = std::max(d.ap_ris + d.ris_pr, d.ap_pr);
    for (std::size_t k = 0; k < scene.target_count(); ++k) {
        worst = std::max(worst, d.ap_target_at(k) + d.target_ris_at(k) + d.ris_pr);
        worst = std::max(worst, d.ap_target_at(k) + d.target_pr_at(k));
    }
    return lag_samples(scene, worst);
}

CRowVector delayed_replica(const Waveform& waveform, const SceneConfig& scene, double tau)
{
    const std::size_t lag = lag_samples(scene, tau);
    const Complex carrier = std::polar(1.0, -2.0 * kPi * std::fmod(scene.carrier_hz * tau, 1.0));
    CRowVector row(static_cast<Eigen::Index>(waveform.length()));
    for (std::size_t l = 0; l < waveform.length(); ++l)
        row(static_cast<Eigen::Index>(l)) = carrier * waveform.at(l, lag);
    return row;
}

CMatrix ris_incident(const SceneConfig& scene, const Waveform& waveform, const ArraySpec& ris,
                     double extra_delay)
{
    scene.validate();
    const auto samples = static_cast<Eigen::Index>(waveform.length());
    CMatrix incident = CMatrix::Zero(ris.elements, samples);
    const auto& d = scene.delays;
    for (std::size_t k = 0; k < scene.target_count(); ++k) {
        if (scene.gain_targets[k] == Complex{})
            continue;
        const double tau = d.ap_target_at(k) + d.target_ris_at(k) + extra_delay;
        incident += scene.gain_targets[k] * steering_vector(ris, scene.target_aoas_ris[k]) *
                    delayed_replica(waveform, scene, tau);
    }
    if (scene.gain_ap_ris != Complex{}) {
        incident += scene.gain_ap_ris * steering_vector(ris, scene.aoa_ap_ris) *
                    delayed_replica(waveform, scene, d.ap_ris + extra_delay);
    }
    return incident;
}

CRowVector ris_reflect(const CMatrix& incident, const CRowVector& phases_row, double aod_ris_pr_deg,
                       const ArraySpec& ris)
{
    if (incident.rows() != ris.elements || phases_row.size() != ris.elements)
        throw DomainError("ris_reflect: dimension mismatch with RIS element count");
    for (Eigen::Index m = 0; m < phases_row.size(); ++m)
        if (std::abs(std::abs(phases_row(m)) - 1.0) > 1e-9)
            throw InvariantError("ris_reflect: phase-shift entries must be unit modulus");
    const CVector b = steering_vector(ris, aod_ris_pr_deg);
    // b^T diag(v) = (b .* v^T)^T
    const CRowVector weights = b.transpose().cwiseProduct(phases_row);
    return weights * incident;
}

PrChannels draw_pr_channels(const SceneConfig& scene, const ArraySpec& pr, Rng& rng)
{
    PrChannels ch;
    ch.ap_pr = rician_channel(pr, scene.aoa_ap_pr, scene.rician_ap_pr, rng);
    for (std::size_t k = 0; k < scene.target_count(); ++k)
        ch.targets_pr.push_back(
            rician_channel(pr, scene.target_aoas_pr[k], scene.rician_targets_pr[k], rng));
    return ch;
}

CMatrix pr_received(const SceneConfig& scene, const Waveform& waveform, const CRowVector& x_n,
                    const ArraySpec& pr, const PrChannels& channels, double noise_variance,
                    Rng& noise_rng)
{
    if (!(noise_variance >= 0.0))
        throw DomainError("pr_received: noise variance must be >= 0");
    const auto samples = static_cast<Eigen::Index>(waveform.length());
    if (x_n.size() != samples)
        throw DomainError("pr_received: x_n length differs from waveform length");
    if (channels.targets_pr.size() != scene.target_count())
        throw DomainError("pr_received: channel count differs from target count");

    CMatrix y = CMatrix::Zero(pr.elements, samples);
    if (scene.gain_ris_pr != Complex{})
        y += scene.gain_ris_pr * steering_vector(pr, scene.aoa_ris_pr) * x_n;
    const auto& d = scene.delays;
    if (scene.gain_ap_pr != Complex{})
        y += scene.gain_ap_pr * channels.ap_pr * delayed_replica(waveform, scene, d.ap_pr);
    for (std::size_t k = 0; k < scene.target_count(); ++k) {
        if (scene.gain_targets_pr[k] == Complex{})
            continue;
        y += scene.gain_targets_pr[k] * channels.targets_pr[k] *
             delayed_replica(waveform, scene, d.ap_target_at(k) + d.target_pr_at(k));
    }
    for (Eigen::Index l = 0; l < samples; ++l)
        for (Eigen::Index r = 0; r < pr.elements; ++r)
            y(r, l) += complex_gaussian(noise_rng, noise_variance);
    return y;
}

double noise_variance_for_snr(const SceneConfig& scene, const CMatrix& reflected, double snr_db)
{
    const double mean_power = reflected.size() > 0
                                  ? reflected.squaredNorm() / static_cast<double>(reflected.size())
                                  : 0.0;
    return std::norm(scene.gain_ris_pr) * mean_power / std::pow(10.0, snr_db / 10.0);
}

SnapshotTensor simulate_epochs(const SceneConfig& scene, const Waveform& waveform,
                               const PhaseShiftMatrix& phases, const ArraySpec& pr,
                               const ArraySpec& ris, const NoiseModel& noise, Rng& rng)
{
    pr.validate();
    ris.validate();
    if (phases.epochs() < 1)
        throw DomainError("simulate_epochs: phase-shift matrix has no epochs");
    if (phases.elements() != ris.elements)
        throw DomainError("simulate_epochs: phase-shift matrix width differs from RIS size");

    const CMatrix incident = ris_incident(scene, waveform, ris, scene.delays.ris_pr);
    const auto epochs = phases.epochs();
    const auto samples = static_cast<Eigen::Index>(waveform.length());

    SnapshotTensor out;
    out.reflected.resize(epochs, samples);
    for (Eigen::Index n = 0; n < epochs; ++n)
        out.reflected.row(n) = ris_reflect(incident, phases.row(n), scene.aod_ris_pr, ris);

    out.noise_variance = noise.snr_db ? noise_variance_for_snr(scene, out.reflected, *noise.snr_db)
                                      : noise.variance;
    if (!(out.noise_variance >= 0.0))
        throw DomainError("simulate_epochs: noise variance must be >= 0");

    const PrChannels channels = draw_pr_channels(scene, pr, rng);
    Rng noise_rng(noise.seed);
    out.stacked.resize(pr.elements * epochs, samples);
    out.per_epoch.reserve(static_cast<std::size_t>(epochs));
    for (Eigen::Index n = 0; n < epochs; ++n) {
        out.per_epoch.push_back(pr_received(scene, waveform, out.reflected.row(n), pr, channels,
                                            out.noise_variance, noise_rng));
        out.stacked.middleRows(n * pr.elements, pr.elements) = out.per_epoch.back();
    }
    return out;
}

}  // namespace rispr
