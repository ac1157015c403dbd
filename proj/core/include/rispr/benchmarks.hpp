#pragma once

// Reference estimators and the Monte-Carlo error metric: MUSIC with known
// target count, the NLMS localizer without a RIS, and the AoA MSE.

#include <optional>
#include <string>
#include <vector>

#include "rispr/localizer.hpp"
#include "rispr/signal_model.hpp"

namespace rispr {

enum class Method { NlmsRis, NlmsNoRis, MusicRis };

std::string to_string(Method m);
Method method_from_string(const std::string& name);

/// squared error charged for each missing estimate
constexpr double kMissPenaltyDeg2 = 90.0 * 90.0;

struct TrialReport {
    std::size_t trial = 0;
    Method method = Method::NlmsRis;
    double snr_db = 0.0;
    int m_elements = 0;
    AngleList true_aoas;
    AngleList estimated_aoas;
    double mse = 0.0;  // degrees^2, averaged over the K targets of this trial
    std::size_t detected_count = 0;
    bool flagged = false;  // fewer than K estimates, padded with kMissPenaltyDeg2
};

/// MUSIC pseudospectrum 1 / ||E_n^H d_hat(theta)||^2 for the columns of `dictionary`
/// (each normalized to unit norm). `data` is dim x L.
RVector music_pseudospectrum(const CMatrix& data, const CMatrix& dictionary, std::size_t k_true);

/// The `k_true` largest pseudospectrum peaks on `grid`, ascending. Grid endpoints
/// count when they exceed their one neighbour. Falls back to the largest remaining
/// grid values if fewer maxima exist.
AngleList music_estimate(const BeamformedData& z, std::size_t k_true, const AngleList& grid,
                         const PhaseShiftMatrix& phases, const ArraySpec& ris,
                         double aod_ris_pr_deg, bool include_b = true);
/// Peak picking shared by music_estimate; exposed for dictionary-level callers.
AngleList largest_peaks(const RVector& values, const AngleList& grid, std::size_t k);

/// NLMS localization on a single PR snapshot matrix (N_PR x L) with PR steering vectors.
SpectrumResult no_ris_localize(const CMatrix& y, const LocalizerConfig& cfg, const ArraySpec& pr);
/// Same, using epoch 0 of the tensor.
SpectrumResult no_ris_localize(const SnapshotTensor& tensor, const LocalizerConfig& cfg,
                               const ArraySpec& pr);

/// Squared-error sum of one trial with order-preserving pairing. Truth and
/// estimates are sorted internally. With fewer estimates than truths, the
/// cheapest order-preserving subset pairing is used and every unmatched truth
/// costs kMissPenaltyDeg2; `flagged` is set.
double trial_squared_error(AngleList truth, AngleList estimates, bool* flagged = nullptr);

struct MseSummary {
    double mse = 0.0;
    std::size_t flagged_trials = 0;
    std::size_t trials = 0;

    double flagged_fraction() const
    {
        return trials ? static_cast<double>(flagged_trials) / static_cast<double>(trials) : 0.0;
    }
};

/// (1 / (P K)) sum_p sum_k (theta_k - theta_hat_k)^2. A trial with more than K
/// estimates is a DomainError (callers reduce to the top-K peaks first).
MseSummary compute_mse(const AngleList& true_aoas, const std::vector<AngleList>& estimates_per_trial);

}  // namespace rispr
