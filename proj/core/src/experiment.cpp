#include "rispr/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <thread>

#include "json.hpp"
#include "rispr/config_io.hpp"
#include "rispr/csv.hpp"
#include "rispr/pr_beamformer.hpp"
#include "rispr/ris_optimizer.hpp"

namespace rispr {
namespace {

using nlohmann::json;

std::string join(const std::string& dir, const char* name)
{
    return (std::filesystem::path(dir) / name).string();
}

void write_json(const std::string& path, const json& j)
{
    write_file(path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

double median(std::vector<double> v)
{
    if (v.empty())
        return std::nan("");
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double hi = v[mid];
    if (v.size() % 2)
        return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

/// Runs body(i) for i in [0, n) on `workers` threads. Results must be written
/// by index; the first exception (lowest index) is rethrown.
template <typename F>
void parallel_for(std::size_t n, unsigned workers, F&& body)
{
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    std::vector<std::exception_ptr> errors(n);
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        body(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        for (auto& th : pool)
            th.join();
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

/// Scaling every path gain by `s` scales the noiseless part of the data by `s`;
/// with the noise drawn at s^2 sigma^2 the whole tensor scales by `s`.
void scale_tensor(SnapshotTensor& t, double s)
{
    for (auto& y : t.per_epoch)
        y *= s;
    t.stacked *= s;
    t.reflected *= s;
    t.noise_variance *= s * s;
}

/// Common gain factor that moves the realized noise variance onto the floor.
double floor_scale(const ExperimentConfig& cfg, double noise_variance, bool snr_driven)
{
    if (!snr_driven || !cfg.noise_floor || !(noise_variance > 0.0))
        return 1.0;
    return std::sqrt(*cfg.noise_floor / noise_variance);
}

double trial_mse(const AngleList& truth, const AngleList& est, bool* flagged)
{
    if (truth.empty()) {
        if (flagged) *flagged = false;
        return 0.0;
    }
    return trial_squared_error(truth, est, flagged) / static_cast<double>(truth.size());
}

}  // namespace

void ExperimentConfig::validate() const
{
    ris.validate();
    pr.validate();
    localizer.validate();
    if (n_epoch < 1) throw DomainError("config: n_epoch must be >= 1");
    if (samples < 1) throw DomainError("config: samples must be >= 1");
    if (trials < 1) throw DomainError("config: trials must be >= 1");
    if (!(noise_variance >= 0.0)) throw DomainError("config: noise_variance must be >= 0");
    if (noise_floor && !(*noise_floor > 0.0)) throw DomainError("config: noise_floor must be > 0");
    if (parallel < 1) throw DomainError("config: parallel must be >= 1");
    for (int m : m_values)
        if (m < 1) throw DomainError("config: m_values entries must be >= 1");
    if (!(notch_exclusion_deg >= 0.0)) throw DomainError("config: notch_exclusion_deg must be >= 0");
    const std::size_t k = scene.base.target_count();
    if (scene.base.target_aoas_pr.size() != k || scene.gain_targets.size() != k ||
        scene.gain_targets_pr.size() != k || scene.base.rician_targets_pr.size() != k)
        throw DomainError("config: per-target scene entries must all have K = " + std::to_string(k) +
                          " entries");
}

SceneSpec default_scene(std::size_t k)
{
    SceneSpec s;
    SceneConfig& b = s.base;
    b.target_aoas_ris.assign(k, 0.0);
    b.target_aoas_pr.assign(k, 0.0);
    b.rician_ap_pr = 10.0;
    b.rician_targets_pr.assign(k, 10.0);

    // Integer-sample delays at 20 MHz; every AP -> PR path gets a distinct lag.
    const double ts = 1.0 / b.sample_rate_hz;
    b.delays.ap_ris = 2 * ts;
    b.delays.ris_pr = 1 * ts;
    b.delays.ap_pr = 4 * ts;
    for (std::size_t i = 0; i < k; ++i) {
        b.delays.ap_target.push_back(static_cast<double>(3 + 2 * i) * ts);
        b.delays.target_ris.push_back(1 * ts);
        b.delays.target_pr.push_back(3 * ts);
    }

    s.gain_targets.assign(k, GainSpec{-40.0, std::nullopt});
    s.gain_ap_ris = GainSpec{-40.0, std::nullopt};
    s.gain_ris_pr = GainSpec{0.0, 0.0};
    s.gain_ap_pr = GainSpec{-60.0, std::nullopt};
    s.gain_targets_pr.assign(k, GainSpec{-60.0, std::nullopt});
    return s;
}

ExperimentConfig spectrum_preset()
{
    ExperimentConfig c;
    c.scene = default_scene(4);
    c.scene.base.target_aoas_ris = {20.0, 30.0, 40.0, 50.0};
    c.scene.base.target_aoas_pr = {5.0, 15.0, 25.0, 35.0};
    c.ris = {64, 0.5};
    c.pr = {8, 0.5};
    c.n_epoch = 100;
    c.samples = 100;
    c.snr_db = {-10.0};
    c.trials = 10;
    c.output_dir = "out/spectrum";
    return c;
}

ExperimentConfig mse_sweep_preset()
{
    ExperimentConfig c;
    c.scene = default_scene(2);
    c.scene.base.target_aoas_ris = {20.0, 40.0};
    c.scene.base.target_aoas_pr = {10.0, 45.0};
    c.ris = {64, 0.5};
    c.pr = {8, 0.5};
    c.n_epoch = 100;
    c.samples = 100;
    c.snr_db.clear();
    for (int s = -33; s <= 0; s += 3)
        c.snr_db.push_back(s);
    c.trials = 200;
    c.m_values = {16, 32, 64};
    c.output_dir = "out/mse-sweep";
    return c;
}

ExperimentConfig beampattern_preset()
{
    ExperimentConfig c;
    c.scene = default_scene(0);
    c.ris = {64, 0.5};
    c.pr = {16, 0.5};
    c.n_epoch = 100;
    c.samples = 90;
    c.trials = 1;
    c.ap_placements = {-30.0, -10.0, 10.0, 30.0};
    c.output_dir = "out/beampattern";
    return c;
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, Stream stream, std::uint64_t index)
{
    return splitmix64(splitmix64(parent ^ (static_cast<std::uint64_t>(stream) << 56)) + index);
}

// ---- spectrum ---------------------------------------------------------------

SpectrumRun run_spectrum(const ExperimentConfig& cfg)
{
    cfg.validate();
    SpectrumRun run;
    Rng scene_rng(derive_seed(cfg.seed, Stream::Scene));
    run.scene = cfg.scene.realize(scene_rng);
    const SceneConfig& scene = run.scene;

    Rng phase_rng(derive_seed(cfg.seed, Stream::Phases));
    run.phases = solve_phase_shifts(suppression_target(cfg.ris, scene.aoa_ap_ris, scene.aod_ris_pr),
                                    cfg.n_epoch, phase_rng);

    Rng wave_rng(derive_seed(cfg.seed, Stream::Waveform));
    const Waveform wave = generate_waveform(static_cast<std::size_t>(cfg.samples), wave_rng,
                                            cfg.waveform, required_history(scene));

    NoiseModel noise{cfg.noise_variance, std::nullopt, derive_seed(cfg.seed, Stream::Noise)};
    if (!cfg.snr_db.empty())
        noise.snr_db = cfg.snr_db.front();
    run.snr_db = noise.snr_db;

    Rng chan_rng(derive_seed(cfg.seed, Stream::Channels));
    SnapshotTensor tensor = simulate_epochs(scene, wave, run.phases, cfg.pr, cfg.ris, noise, chan_rng);
    scale_tensor(tensor, floor_scale(cfg, tensor.noise_variance, noise.snr_db.has_value()));
    run.noise_variance = tensor.noise_variance;

    run.z = beamform(tensor, null_steering_weight(cfg.pr, scene.aoa_ris_pr, cfg.null_directions));
    run.result = spectrum(run.z, cfg.localizer, run.phases, cfg.ris, scene.aod_ris_pr);
    return run;
}

void write_spectrum_artifacts(const SpectrumRun& run, const ExperimentConfig& cfg, const std::string& dir)
{
    write_file(join(dir, "spectrum.csv"), [&](std::ostream& os) { write_spectrum_csv(os, run.result); });
    write_file(join(dir, "phases.csv"), [&](std::ostream& os) { write_phases_csv(os, run.phases); });
    write_file(join(dir, "z.csv"), [&](std::ostream& os) { write_complex_matrix_csv(os, run.z.z); });
    write_file(join(dir, "config.json"), [&](std::ostream& os) { os << dump_config(cfg) << '\n'; });

    json peak_values = json::array();
    for (auto i : run.result.peak_indices)
        peak_values.push_back(run.result.normalized(i));
    json summary{
        {"subcommand", "spectrum"},
        {"seed", cfg.seed},
        {"snr_db", run.snr_db ? json(*run.snr_db) : json(nullptr)},
        {"noise_variance", run.noise_variance},
        {"true_aoas_ris", run.scene.target_aoas_ris},
        {"detected_count", run.result.detected_count()},
        {"peaks_deg", run.result.peaks},
        {"peak_normalized", peak_values},
        {"zero_spectrum", run.result.zero_spectrum},
    };
    write_json(join(dir, "summary.json"), summary);
}

// ---- mse sweep --------------------------------------------------------------

std::vector<TrialReport> run_sweep_trial(const ExperimentConfig& cfg, std::size_t trial)
{
    const std::uint64_t tseed = derive_seed(cfg.seed, Stream::Trial, trial);
    Rng scene_rng(derive_seed(tseed, Stream::Scene));
    const SceneConfig scene = cfg.scene.realize(scene_rng);
    const std::size_t k = scene.target_count();

    Rng wave_rng(derive_seed(tseed, Stream::Waveform));
    const Waveform wave = generate_waveform(static_cast<std::size_t>(cfg.samples), wave_rng,
                                            cfg.waveform, required_history(scene));
    const CVector w = null_steering_weight(cfg.pr, scene.aoa_ris_pr, cfg.null_directions);

    SceneConfig no_ris = scene;
    no_ris.gain_ris_pr = {0.0, 0.0};

    auto has = [&](Method m) { return std::find(cfg.methods.begin(), cfg.methods.end(), m) != cfg.methods.end(); };
    const bool ris_methods = has(Method::NlmsRis) || has(Method::MusicRis);
    const LocalizerConfig& loc = cfg.localizer;

    std::vector<TrialReport> out;
    for (int m : cfg.m_values) {
        const ArraySpec ris{m, cfg.ris.spacing};
        Rng phase_rng(derive_seed(tseed, Stream::Phases, static_cast<std::uint64_t>(m)));
        const PhaseShiftMatrix phases =
            solve_phase_shifts(suppression_target(ris, scene.aoa_ap_ris, scene.aod_ris_pr), cfg.n_epoch, phase_rng);
        CMatrix dict;
        if (ris_methods)
            dict = scan_matrix(loc.grid, phases, ris, scene.aod_ris_pr, loc.include_b);

        for (double snr : cfg.snr_db) {
            // Common random numbers: channels and noise repeat across SNR points.
            Rng chan_rng(derive_seed(tseed, Stream::Channels));
            const NoiseModel noise{0.0, snr, derive_seed(tseed, Stream::Noise)};
            SnapshotTensor tensor = simulate_epochs(scene, wave, phases, cfg.pr, ris, noise, chan_rng);
            const double sigma2 = tensor.noise_variance;
            const double scale = floor_scale(cfg, sigma2, true);
            scale_tensor(tensor, scale);
            BeamformedData z;
            if (ris_methods)
                z = beamform(tensor, w);

            for (Method method : cfg.methods) {
                TrialReport r;
                r.trial = trial;
                r.method = method;
                r.snr_db = snr;
                r.m_elements = m;
                if (method == Method::NlmsRis) {
                    r.true_aoas = scene.target_aoas_ris;
                    const CMatrix est = nlms_estimates(z.z, dict, loc);
                    const SpectrumResult s =
                        make_spectrum(loc.grid, est.colwise().squaredNorm().transpose(), loc.threshold);
                    r.detected_count = s.detected_count();
                    r.estimated_aoas = s.top_k(k);
                } else if (method == Method::MusicRis) {
                    r.true_aoas = scene.target_aoas_ris;
                    if (k > 0)
                        r.estimated_aoas = largest_peaks(music_pseudospectrum(z.z, dict, k), loc.grid, k);
                    r.detected_count = r.estimated_aoas.size();
                } else {
                    r.true_aoas = scene.target_aoas_pr;
                    Rng chan0(derive_seed(tseed, Stream::Channels));
                    // same noise level as the RIS-aided run at this SNR
                    const NoiseModel noise0{sigma2, std::nullopt, derive_seed(tseed, Stream::Noise, 1)};
                    SnapshotTensor y0 = simulate_epochs(no_ris, wave, PhaseShiftMatrix::ones(1, m),
                                                        cfg.pr, ris, noise0, chan0);
                    scale_tensor(y0, scale);
                    const SpectrumResult s = no_ris_localize(y0, loc, cfg.pr);
                    r.detected_count = s.detected_count();
                    r.estimated_aoas = s.top_k(k);
                }
                r.mse = trial_mse(r.true_aoas, r.estimated_aoas, &r.flagged);
                out.push_back(std::move(r));
            }
        }
    }
    return out;
}

std::vector<SweepPoint> SweepResult::curve(Method method, int m_elements) const
{
    std::vector<SweepPoint> out;
    for (const auto& p : points)
        if (p.method == method && p.m_elements == m_elements)
            out.push_back(p);
    return out;
}

SweepResult run_mse_sweep(const ExperimentConfig& cfg)
{
    cfg.validate();
    if (cfg.snr_db.empty())
        throw DomainError("mse-sweep: snr_db list must be non-empty");
    if (cfg.m_values.empty() || cfg.methods.empty())
        throw DomainError("mse-sweep: m_values and methods must be non-empty");

    std::vector<std::vector<TrialReport>> per_trial(cfg.trials);
    parallel_for(cfg.trials, cfg.parallel, [&](std::size_t p) { per_trial[p] = run_sweep_trial(cfg, p); });

    SweepResult res;
    for (auto& t : per_trial)
        for (auto& r : t)
            res.trials.push_back(std::move(r));

    for (int m : cfg.m_values)
        for (Method method : cfg.methods)
            for (double snr : cfg.snr_db) {
                SweepPoint pt;
                pt.snr_db = snr;
                pt.method = method;
                pt.m_elements = m;
                double mse = 0.0, detected = 0.0;
                std::size_t flagged = 0;
                for (const auto& r : res.trials) {
                    if (r.method != method || r.m_elements != m || r.snr_db != snr)
                        continue;
                    ++pt.trials;
                    mse += r.mse;
                    detected += static_cast<double>(r.detected_count);
                    flagged += r.flagged ? 1 : 0;
                }
                if (pt.trials) {
                    const double n = static_cast<double>(pt.trials);
                    pt.mse = mse / n;
                    pt.mean_detected = detected / n;
                    pt.flagged_fraction = static_cast<double>(flagged) / n;
                }
                res.points.push_back(pt);
            }
    return res;
}

void write_sweep_artifacts(const SweepResult& result, const ExperimentConfig& cfg, const std::string& dir)
{
    write_file(join(dir, "trials.csv"), [&](std::ostream& os) { write_trials_csv(os, result.trials); });
    write_file(join(dir, "sweep.csv"), [&](std::ostream& os) { write_sweep_csv(os, result.points); });
    write_file(join(dir, "config.json"), [&](std::ostream& os) { os << dump_config(cfg) << '\n'; });

    json curves = json::array();
    for (int m : cfg.m_values)
        for (Method method : cfg.methods) {
            json mse = json::array(), flagged = json::array();
            for (const auto& p : result.curve(method, m)) {
                mse.push_back(p.mse);
                flagged.push_back(p.flagged_fraction);
            }
            curves.push_back({{"method", to_string(method)}, {"m_elements", m}, {"mse_deg2", mse},
                              {"flagged_fraction", flagged}});
        }
    json summary{
        {"subcommand", "mse-sweep"},
        {"seed", cfg.seed},
        {"trials", cfg.trials},
        {"snr_db", cfg.snr_db},
        {"curves", curves},
    };
    write_json(join(dir, "summary.json"), summary);
}

// ---- beampattern ------------------------------------------------------------

BeampatternResult run_beampattern(const ExperimentConfig& cfg)
{
    cfg.validate();
    if (cfg.ap_placements.empty())
        throw DomainError("beampattern: ap_placements must be non-empty");
    if (cfg.beampattern_grid.empty())
        throw DomainError("beampattern: grid must be non-empty");

    BeampatternResult res;
    res.grid = cfg.beampattern_grid;
    const double aod = cfg.scene.base.aod_ris_pr;
    for (std::size_t i = 0; i < cfg.ap_placements.size(); ++i) {
        BeampatternCurve c;
        c.ap_aoa_deg = cfg.ap_placements[i];
        const CVector a_tilde = suppression_target(cfg.ris, c.ap_aoa_deg, aod);
        Rng rng(derive_seed(cfg.seed, Stream::Beampattern, i));
        const PhaseShiftMatrix phases = solve_phase_shifts(a_tilde, cfg.n_epoch, rng);
        c.pattern = beampattern(phases, aod, cfg.ris, res.grid);
        c.normalized_db = normalized_db(c.pattern);

        std::size_t nearest = 0;
        std::vector<double> off;
        for (std::size_t g = 0; g < res.grid.size(); ++g) {
            const double d = std::abs(res.grid[g] - c.ap_aoa_deg);
            if (d < std::abs(res.grid[nearest] - c.ap_aoa_deg))
                nearest = g;
            if (d > cfg.notch_exclusion_deg)
                off.push_back(c.normalized_db(static_cast<Eigen::Index>(g)));
        }
        c.notch_db = c.normalized_db(static_cast<Eigen::Index>(nearest));
        c.off_notch_median_db = median(std::move(off));
        c.residual_db = power_to_db(mean_residual_power(phases, a_tilde.normalized()) /
                                    static_cast<double>(cfg.ris.elements));
        res.curves.push_back(std::move(c));
    }
    return res;
}

void write_beampattern_artifacts(const BeampatternResult& result, const ExperimentConfig& cfg,
                                 const std::string& dir)
{
    write_file(join(dir, "beampattern.csv"), [&](std::ostream& os) { write_beampattern_csv(os, result); });
    write_file(join(dir, "config.json"), [&](std::ostream& os) { os << dump_config(cfg) << '\n'; });
    json placements = json::array();
    for (const auto& c : result.curves)
        placements.push_back({{"ap_aoa_deg", c.ap_aoa_deg},
                              {"notch_db", c.notch_db},
                              {"off_notch_median_db", c.off_notch_median_db},
                              {"residual_db", c.residual_db}});
    json summary{
        {"subcommand", "beampattern"},
        {"seed", cfg.seed},
        {"ris_elements", cfg.ris.elements},
        {"n_epoch", cfg.n_epoch},
        {"placements", placements},
    };
    write_json(join(dir, "summary.json"), summary);
}

}  // namespace rispr
