#pragma once

// Batch NLMS localization: per look direction, an NLMS filter adapts a steering
// estimate a_hat(theta) against the beamformer output p_l(theta); the power
// ||a_hat_L(theta)||^2 forms a spectrum whose thresholded peaks give both the
// number of targets and their angles.

#include <vector>

#include "rispr/phase_shift_matrix.hpp"
#include "rispr/pr_beamformer.hpp"
#include "rispr/types.hpp"

namespace rispr {

/// Step normalization. InputNorm divides by ||z_l|| (as in the batch algorithm),
/// InputEnergy by ||z_l||^2 (textbook NLMS).
enum class NlmsNormalization { InputNorm, InputEnergy };

struct LocalizerConfig {
    double mu = 0.1;
    AngleList grid = default_grid();
    double threshold = 0.5;
    double epsilon = 1e-12;
    /// Scan with V diag(b) a(theta) (true) or the literal V a(theta) (false).
    bool include_b = true;
    NlmsNormalization normalization = NlmsNormalization::InputNorm;

    void validate() const;
};

struct SpectrumResult {
    AngleList grid;
    RVector power;
    RVector normalized;
    std::vector<Eigen::Index> peak_indices;  // ascending grid order
    AngleList peaks;
    AngleList estimates;
    /// Set when the spectrum is identically zero; normalized then equals power.
    bool zero_spectrum = false;

    std::size_t detected_count() const { return peaks.size(); }
    /// The `k` strongest peaks by normalized value, returned in ascending angle order.
    AngleList top_k(std::size_t k) const;
};

/// V a(theta) or V diag(b(aod)) a(theta), length N_epoch.
CVector scan_vector(double theta_deg, const PhaseShiftMatrix& phases, const ArraySpec& ris,
                    double aod_ris_pr_deg, bool include_b);
/// Columns are scan vectors on `grid` (N_epoch x G).
CMatrix scan_matrix(const AngleList& grid, const PhaseShiftMatrix& phases, const ArraySpec& ris,
                    double aod_ris_pr_deg, bool include_b);

/// Runs the recursion for every column of `dictionary` at once and returns
/// the final estimates, one column per look direction. `data` is dim x L and
/// `dictionary` is dim x G.
CMatrix nlms_estimates(const CMatrix& data, const CMatrix& dictionary, const LocalizerConfig& cfg);

/// a_hat_L(theta) for a single look direction.
CVector nlms_run(const BeamformedData& z, double theta_deg, const LocalizerConfig& cfg,
                 const PhaseShiftMatrix& phases, const ArraySpec& ris, double aod_ris_pr_deg);

/// Indices i with v[i] > v[i-1], v[i] > phi and a strict drop after any plateau
/// starting at i; endpoints are never peaks.
std::vector<Eigen::Index> detect_peak_indices(const RVector& values, double phi);
AngleList detect_peaks(const RVector& normalized, const AngleList& grid, double phi);

/// Normalizes `power` by its maximum and detects peaks.
SpectrumResult make_spectrum(AngleList grid, RVector power, double threshold);

/// Full NLMS spectrum over cfg.grid.
SpectrumResult spectrum(const BeamformedData& z, const LocalizerConfig& cfg,
                        const PhaseShiftMatrix& phases, const ArraySpec& ris,
                        double aod_ris_pr_deg);

}  // namespace rispr
