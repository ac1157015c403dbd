#include "rispr/benchmarks.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace rispr {

std::string to_string(Method m)
{
    switch (m) {
    case Method::NlmsRis: return "nlms_ris";
    case Method::NlmsNoRis: return "nlms_no_ris";
    case Method::MusicRis: return "music_ris";
    }
    return "unknown";
}

Method method_from_string(const std::string& name)
{
    if (name == "nlms_ris") return Method::NlmsRis;
    if (name == "nlms_no_ris") return Method::NlmsNoRis;
    if (name == "music_ris") return Method::MusicRis;
    throw DomainError("unknown method '" + name + "'");
}

RVector music_pseudospectrum(const CMatrix& data, const CMatrix& dictionary, std::size_t k_true)
{
    const Eigen::Index dim = data.rows();
    if (k_true < 1 || static_cast<Eigen::Index>(k_true) >= dim)
        throw DomainError("music: need 1 <= k_true < N_epoch");
    if (dictionary.rows() != dim)
        throw DomainError("music: dictionary and data dimensions differ");

    CMatrix cov = data * data.adjoint() / static_cast<double>(data.cols());
    const double loading = 1e-10 * cov.trace().real() / static_cast<double>(dim);
    cov.diagonal().array() += loading;

    // eigenvalues ascending: the first dim - k columns span the noise subspace
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(cov);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("music: eigendecomposition failed");
    const auto noise = eig.eigenvectors().leftCols(dim - static_cast<Eigen::Index>(k_true));

    const RVector norms = dictionary.colwise().norm().transpose();
    const CMatrix proj = noise.adjoint() * dictionary;
    RVector out(dictionary.cols());
    for (Eigen::Index g = 0; g < dictionary.cols(); ++g) {
        const double denom = proj.col(g).squaredNorm() / (norms(g) * norms(g));
        out(g) = 1.0 / std::max(denom, std::numeric_limits<double>::min());
    }
    return out;
}

AngleList largest_peaks(const RVector& values, const AngleList& grid, std::size_t k)
{
    std::vector<Eigen::Index> peaks =
        detect_peak_indices(values, -std::numeric_limits<double>::infinity());
    // A source on the first or last grid point shows up as a one-sided maximum.
    const Eigen::Index n = values.size();
    if (n >= 2 && values(0) > values(1))
        peaks.push_back(0);
    if (n >= 2 && values(n - 1) > values(n - 2))
        peaks.push_back(n - 1);
    std::stable_sort(peaks.begin(), peaks.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return values(a) > values(b); });
    if (peaks.size() > k)
        peaks.resize(k);
    if (peaks.size() < k) {
        std::vector<Eigen::Index> rest(static_cast<std::size_t>(values.size()));
        std::iota(rest.begin(), rest.end(), Eigen::Index{0});
        std::stable_sort(rest.begin(), rest.end(),
                         [&](Eigen::Index a, Eigen::Index b) { return values(a) > values(b); });
        for (auto i : rest) {
            if (peaks.size() == k) break;
            if (std::find(peaks.begin(), peaks.end(), i) == peaks.end())
                peaks.push_back(i);
        }
    }
    AngleList out;
    for (auto i : peaks)
        out.push_back(grid[static_cast<std::size_t>(i)]);
    std::sort(out.begin(), out.end());
    return out;
}

AngleList music_estimate(const BeamformedData& z, std::size_t k_true, const AngleList& grid,
                         const PhaseShiftMatrix& phases, const ArraySpec& ris,
                         double aod_ris_pr_deg, bool include_b)
{
    if (grid.empty())
        throw DomainError("music_estimate: grid must be non-empty");
    const CMatrix dict = scan_matrix(grid, phases, ris, aod_ris_pr_deg, include_b);
    return largest_peaks(music_pseudospectrum(z.z, dict, k_true), grid, k_true);
}

SpectrumResult no_ris_localize(const CMatrix& y, const LocalizerConfig& cfg, const ArraySpec& pr)
{
    cfg.validate();
    if (y.rows() != pr.elements)
        throw DomainError("no_ris_localize: data rows differ from PR element count");
    const CMatrix est = nlms_estimates(y, steering_matrix(pr, cfg.grid), cfg);
    return make_spectrum(cfg.grid, est.colwise().squaredNorm().transpose(), cfg.threshold);
}

SpectrumResult no_ris_localize(const SnapshotTensor& tensor, const LocalizerConfig& cfg,
                               const ArraySpec& pr)
{
    if (tensor.per_epoch.empty())
        throw DomainError("no_ris_localize: empty tensor");
    return no_ris_localize(tensor.per_epoch.front(), cfg, pr);
}

double trial_squared_error(AngleList truth, AngleList estimates, bool* flagged)
{
    std::sort(truth.begin(), truth.end());
    std::sort(estimates.begin(), estimates.end());
    const std::size_t k = truth.size();
    const std::size_t j = estimates.size();
    if (j > k)
        throw DomainError("trial_squared_error: more estimates than targets");
    if (flagged)
        *flagged = j < k;

    // dp[a][b]: first a truths against first b estimates, order preserved
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> dp(k + 1, std::vector<double>(j + 1, inf));
    dp[0][0] = 0.0;
    for (std::size_t a = 1; a <= k; ++a) {
        for (std::size_t b = 0; b <= std::min(a, j); ++b) {
            double best = dp[a - 1][b] + kMissPenaltyDeg2;
            if (b > 0) {
                const double diff = truth[a - 1] - estimates[b - 1];
                best = std::min(best, dp[a - 1][b - 1] + diff * diff);
            }
            dp[a][b] = best;
        }
    }
    return dp[k][j];
}

MseSummary compute_mse(const AngleList& true_aoas, const std::vector<AngleList>& estimates_per_trial)
{
    MseSummary out;
    out.trials = estimates_per_trial.size();
    if (true_aoas.empty() || estimates_per_trial.empty())
        return out;
    double total = 0.0;
    for (const auto& est : estimates_per_trial) {
        bool flagged = false;
        total += trial_squared_error(true_aoas, est, &flagged);
        if (flagged)
            ++out.flagged_trials;
    }
    out.mse = total / (static_cast<double>(out.trials) * static_cast<double>(true_aoas.size()));
    return out;
}

}  // namespace rispr
