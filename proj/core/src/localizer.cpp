#include "rispr/localizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rispr/signal_model.hpp"

namespace rispr {

void LocalizerConfig::validate() const
{
    if (!(mu > 0.0))
        throw DomainError("LocalizerConfig: mu must be > 0");
    if (!(threshold > 0.0 && threshold < 1.0))
        throw DomainError("LocalizerConfig: threshold must lie in (0, 1)");
    if (!(epsilon >= 0.0))
        throw DomainError("LocalizerConfig: epsilon must be >= 0");
    if (grid.empty())
        throw DomainError("LocalizerConfig: grid must be non-empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw DomainError("LocalizerConfig: grid must be strictly increasing");
}

AngleList SpectrumResult::top_k(std::size_t k) const
{
    std::vector<Eigen::Index> order = peak_indices;
    std::stable_sort(order.begin(), order.end(),
                     [this](Eigen::Index a, Eigen::Index b) { return normalized(a) > normalized(b); });
    if (order.size() > k)
        order.resize(k);
    AngleList out;
    for (auto i : order)
        out.push_back(grid[static_cast<std::size_t>(i)]);
    std::sort(out.begin(), out.end());
    return out;
}

CVector scan_vector(double theta_deg, const PhaseShiftMatrix& phases, const ArraySpec& ris,
                    double aod_ris_pr_deg, bool include_b)
{
    CVector a = steering_vector(ris, theta_deg);
    if (include_b)
        a = a.cwiseProduct(steering_vector(ris, aod_ris_pr_deg));
    return phases.values() * a;
}

CMatrix scan_matrix(const AngleList& grid, const PhaseShiftMatrix& phases, const ArraySpec& ris,
                    double aod_ris_pr_deg, bool include_b)
{
    if (phases.elements() != ris.elements)
        throw DomainError("scan_matrix: phase-shift matrix width differs from RIS size");
    CMatrix a = steering_matrix(ris, grid);
    if (include_b)
        a = steering_vector(ris, aod_ris_pr_deg).asDiagonal() * a;
    return phases.values() * a;
}

CMatrix nlms_estimates(const CMatrix& data, const CMatrix& dictionary, const LocalizerConfig& cfg)
{
    if (data.rows() != dictionary.rows())
        throw DomainError("nlms: data and dictionary dimensions differ");
    if (data.cols() < 1)
        throw DomainError("nlms: need at least one snapshot");

    // p_l(theta) = d(theta)^H z_l for every look direction and snapshot
    const CMatrix beam = dictionary.adjoint() * data;  // G x L
    CMatrix est = CMatrix::Zero(dictionary.rows(), dictionary.cols());
    CVector err(dictionary.cols());
    for (Eigen::Index l = 0; l < data.cols(); ++l) {
        const auto z = data.col(l);
        err.noalias() = beam.col(l) - est.adjoint() * z;
        const double norm = cfg.normalization == NlmsNormalization::InputNorm ? z.norm()
                                                                              : z.squaredNorm();
        const double step = cfg.mu / (norm + cfg.epsilon);
        // a_hat += step * conj(e) * z, column by column
        est.noalias() += step * z * err.adjoint();
    }
    return est;
}

CVector nlms_run(const BeamformedData& z, double theta_deg, const LocalizerConfig& cfg,
                 const PhaseShiftMatrix& phases, const ArraySpec& ris, double aod_ris_pr_deg)
{
    const CVector d = scan_vector(theta_deg, phases, ris, aod_ris_pr_deg, cfg.include_b);
    return nlms_estimates(z.z, d, cfg).col(0);
}

std::vector<Eigen::Index> detect_peak_indices(const RVector& values, double phi)
{
    std::vector<Eigen::Index> out;
    const Eigen::Index n = values.size();
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
        if (!(values(i) > values(i - 1)) || !(values(i) > phi))
            continue;
        Eigen::Index j = i + 1;
        while (j < n && values(j) == values(i))
            ++j;
        // plateau running into the last sample is an endpoint, not a peak
        if (j < n && values(j) < values(i))
            out.push_back(i);
    }
    return out;
}

AngleList detect_peaks(const RVector& normalized, const AngleList& grid, double phi)
{
    if (static_cast<std::size_t>(normalized.size()) != grid.size())
        throw DomainError("detect_peaks: value and grid sizes differ");
    AngleList out;
    for (auto i : detect_peak_indices(normalized, phi))
        out.push_back(grid[static_cast<std::size_t>(i)]);
    return out;
}

SpectrumResult make_spectrum(AngleList grid, RVector power, double threshold)
{
    SpectrumResult r;
    r.grid = std::move(grid);
    r.power = std::move(power);
    const double peak = r.power.size() ? r.power.maxCoeff() : 0.0;
    if (!(peak > 0.0)) {
        r.zero_spectrum = true;
        r.normalized = r.power;
        return r;
    }
    r.normalized = r.power / peak;
    r.peak_indices = detect_peak_indices(r.normalized, threshold);
    for (auto i : r.peak_indices)
        r.peaks.push_back(r.grid[static_cast<std::size_t>(i)]);
    r.estimates = r.peaks;
    return r;
}

SpectrumResult spectrum(const BeamformedData& z, const LocalizerConfig& cfg,
                        const PhaseShiftMatrix& phases, const ArraySpec& ris,
                        double aod_ris_pr_deg)
{
    cfg.validate();
    const CMatrix dict = scan_matrix(cfg.grid, phases, ris, aod_ris_pr_deg, cfg.include_b);
    const CMatrix est = nlms_estimates(z.z, dict, cfg);
    return make_spectrum(cfg.grid, est.colwise().squaredNorm().transpose(), cfg.threshold);
}

}  // namespace rispr
