#pragma once

// Phase shifts that null the AP -> RIS -> PR path, and the resulting RIS beampattern.

#include "rispr/phase_shift_matrix.hpp"
#include "rispr/types.hpp"

namespace rispr {

/// a_tilde = diag(b_M(aod_ris_pr)) a_M(aoa_ap_ris): the AP-RIS-PR signature that
/// every v_n should be (bilinearly) orthogonal to.
CVector suppression_target(const ArraySpec& ris, double aoa_ap_ris_deg, double aod_ris_pr_deg);

/// I - a a^H / ||a||^2. Throws DomainError for a zero vector.
CMatrix orthogonal_projector(const CVector& a_tilde);

/// Projected random phases: Gamma ~ CN(0,1)^{M x N_epoch}, U = P_perp Gamma, and
/// row n of V is conj(exp(j angle(U[:, n])))^T, so that v_n^T a_tilde =
/// conj(a_tilde^H u_hat_n) with u_n orthogonal to a_tilde. angle(0) is taken as 0.
PhaseShiftMatrix solve_phase_shifts(const CVector& a_tilde, Eigen::Index n_epoch, Rng& rng);

/// B(theta) = sum_n |b^T diag(v_n) a(theta)|^2 on `grid` (linear power, not normalized).
RVector beampattern(const PhaseShiftMatrix& phases, double aod_ris_pr_deg, const ArraySpec& ris,
                    const AngleList& grid);

/// 10 log10(B / max B). An all-zero pattern maps to 0 dB everywhere.
RVector normalized_db(const RVector& pattern);

/// Mean over epochs of |v_n^T a_tilde|^2.
double mean_residual_power(const PhaseShiftMatrix& phases, const CVector& a_tilde);

}  // namespace rispr
