#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "rispr/benchmarks.hpp"
#include "rispr/ris_optimizer.hpp"

using namespace rispr;

namespace {

CMatrix noise(Eigen::Index r, Eigen::Index c, Rng& rng, double var)
{
    CMatrix m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i)
        m.data()[i] = complex_gaussian(rng, var);
    return m;
}

/// Noiseless data from independent sources at the given dictionary columns.
CMatrix sources(const CMatrix& dict, const std::vector<int>& cols, int samples, Rng& rng)
{
    CMatrix z = CMatrix::Zero(dict.rows(), samples);
    for (int c : cols)
        z += dict.col(c) * noise(1, samples, rng, 1.0);
    return z;
}

}  // namespace

TEST_CASE("method names round-trip")
{
    for (Method m : {Method::NlmsRis, Method::NlmsNoRis, Method::MusicRis})
        CHECK(method_from_string(to_string(m)) == m);
    CHECK_THROWS_AS(method_from_string("esprit"), DomainError);
}

TEST_CASE("MUSIC single source gives a pole at the true angle")
{
    const ArraySpec ris{16, 0.5};
    Rng rng(1);
    const PhaseShiftMatrix v = solve_phase_shifts(suppression_target(ris, -10.0, 40.0), 10, rng);
    const AngleList grid = default_grid();
    const CMatrix dict = scan_matrix(grid, v, ris, 40.0, true);
    const int truth = static_cast<int>(oracle::nearest(grid, 27.0));
    const RVector p = music_pseudospectrum(sources(dict, {truth}, 40, rng), dict, 1);
    Eigen::Index arg = 0;
    p.maxCoeff(&arg);
    CHECK(arg == truth);
    CHECK(p(arg) > 1e6);
    CHECK(p.minCoeff() >= 1.0 - 1e-9);
}

TEST_CASE("MUSIC noiseless two sources within one grid step")
{
    const ArraySpec ris{32, 0.5};
    Rng rng(2);
    const PhaseShiftMatrix v = solve_phase_shifts(suppression_target(ris, -10.0, 40.0), 12, rng);
    BeamformedData z;
    const CVector d1 = scan_vector(18.2, v, ris, 40.0, true), d2 = scan_vector(-33.7, v, ris, 40.0, true);
    z.z = d1 * noise(1, 60, rng, 1.0) + d2 * noise(1, 60, rng, 1.0);
    const AngleList est = music_estimate(z, 2, default_grid(), v, ris, 40.0);
    REQUIRE(est.size() == 2);
    CHECK(std::abs(est[0] + 33.7) <= 0.5);
    CHECK(std::abs(est[1] - 18.2) <= 0.5);
}

TEST_CASE("MUSIC agrees with an exhaustive subspace fit")
{
    const AngleList grid = make_grid(-85.0, 85.0, 5.0);
    Rng rng(3);
    int checked = 0;
    for (int epochs : {4, 6, 8}) {
        const ArraySpec ris{16, 0.5};
        for (int t = 0; t < 4; ++t) {
            const PhaseShiftMatrix v = solve_phase_shifts(suppression_target(ris, -10.0, 40.0), epochs, rng);
            const CMatrix dict = scan_matrix(grid, v, ris, 40.0, true);
            const int a = 3 + 5 * t, b = a + 9;
            const CMatrix z = sources(dict, {a, b}, 50, rng) + noise(dict.rows(), 50, rng, 1e-8);
            const auto fit = oracle::exhaustive_subspace_fit(z, dict, 2);
            const AngleList music = largest_peaks(music_pseudospectrum(z, dict, 2), grid, 2);
            REQUIRE(music.size() == 2);
            CHECK(fit == std::vector<int>{a, b});
            CHECK(music[0] == grid[static_cast<std::size_t>(fit[0])]);
            CHECK(music[1] == grid[static_cast<std::size_t>(fit[1])]);
            ++checked;
        }
    }
    CHECK(checked == 12);
}

TEST_CASE("MUSIC preconditions and scale invariance")
{
    Rng rng(4);
    const CMatrix dict = noise(5, 20, rng, 1.0);
    const CMatrix z = noise(5, 30, rng, 1.0);
    CHECK_THROWS_AS(music_pseudospectrum(z, dict, 5), DomainError);
    CHECK_THROWS_AS(music_pseudospectrum(z, dict, 0), DomainError);
    const RVector p = music_pseudospectrum(z, dict, 2);
    const RVector q = music_pseudospectrum(Complex(-7.0, 2.0) * z, dict, 2);
    CHECK((p - q).cwiseAbs().maxCoeff() <= 1e-8 * p.maxCoeff());
}

TEST_CASE("largest peaks: endpoints and fill")
{
    const AngleList grid{0.0, 1.0, 2.0, 3.0, 4.0};
    RVector v(5);
    v << 0.1, 0.5, 0.2, 0.3, 0.9;
    // maxima: interior 1, one-sided endpoint 4
    CHECK(largest_peaks(v, grid, 1) == AngleList{4.0});
    CHECK(largest_peaks(v, grid, 2) == AngleList{1.0, 4.0});
    // no third maximum: fill with the largest remaining value
    CHECK(largest_peaks(v, grid, 3) == AngleList{1.0, 3.0, 4.0});
    RVector falling(3);
    falling << 0.9, 0.5, 0.1;
    CHECK(largest_peaks(falling, {0.0, 1.0, 2.0}, 1) == AngleList{0.0});
}

TEST_CASE("no-RIS localization of a line-of-sight source")
{
    const ArraySpec pr{8, 0.5};
    Rng rng(5);
    const CVector a = steering_vector(pr, -22.0);
    const CMatrix y = (0.3 / (0.1 * a.norm())) * a * noise(1, 100, rng, 1.0);
    LocalizerConfig cfg;
    const SpectrumResult r = no_ris_localize(y, cfg, pr);
    Eigen::Index arg = 0;
    r.power.maxCoeff(&arg);
    CHECK(static_cast<std::size_t>(arg) == oracle::nearest(cfg.grid, -22.0));

    const SpectrumResult zero = no_ris_localize(CMatrix::Zero(8, 10), cfg, pr);
    CHECK(zero.zero_spectrum);
    CHECK(zero.peaks.empty());
}

TEST_CASE("MSE examples")
{
    CHECK(compute_mse({20.0, 40.0}, {{20.0, 40.0}}).mse == 0.0);
    CHECK(compute_mse({20.0, 40.0}, {{21.0, 39.0}}).mse == doctest::Approx(1.0));
    CHECK(compute_mse({20.0, 40.0}, {{39.0, 21.0}}).mse == doctest::Approx(1.0));
    CHECK(compute_mse({20.0, 40.0}, {{20.0, 40.0}, {22.0, 40.0}}).mse == doctest::Approx(1.0));
    const MseSummary s = compute_mse({20.0, 40.0}, {{20.0}});
    CHECK(s.flagged_trials == 1);
    CHECK(s.mse == doctest::Approx(kMissPenaltyDeg2 / 2.0));
    CHECK_THROWS_AS(compute_mse({20.0}, {{20.0, 30.0}}), DomainError);
    CHECK(compute_mse({10.0, 20.0}, {{}}).mse == doctest::Approx(kMissPenaltyDeg2));
}

TEST_CASE("sorted pairing equals the best assignment for separated truths")
{
    Rng rng(6);
    std::uniform_real_distribution<double> u(-80.0, 80.0), jitter(-2.4, 2.4);
    std::size_t cases = 0;
    while (cases < 200) {
        const std::size_t k = 2 + cases % 4;
        AngleList truth;
        for (std::size_t i = 0; i < k; ++i)
            truth.push_back(u(rng));
        std::sort(truth.begin(), truth.end());
        bool separated = true;
        for (std::size_t i = 1; i < k; ++i)
            separated = separated && truth[i] - truth[i - 1] > 5.0;
        if (!separated)
            continue;
        AngleList est;
        for (double t : truth)
            est.push_back(t + jitter(rng));
        std::shuffle(est.begin(), est.end(), rng);
        bool flagged = true;
        CHECK(trial_squared_error(truth, est, &flagged) ==
              doctest::Approx(oracle::brute_force_assignment(truth, est)).epsilon(1e-12));
        CHECK(!flagged);
        ++cases;
    }
}

TEST_CASE("missing estimates pair with the nearest truths")
{
    bool flagged = false;
    // 41 pairs with 40 at cost 1, 20 is unmatched
    CHECK(trial_squared_error({20.0, 40.0}, {41.0}, &flagged) == doctest::Approx(1.0 + kMissPenaltyDeg2));
    CHECK(flagged);
}
