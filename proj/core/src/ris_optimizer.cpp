#include "rispr/ris_optimizer.hpp"

#include <cmath>

#include "rispr/signal_model.hpp"

namespace rispr {

PhaseShiftMatrix PhaseShiftMatrix::from_values(CMatrix values, double tol)
{
    for (Eigen::Index i = 0; i < values.size(); ++i)
        if (std::abs(std::abs(values.data()[i]) - 1.0) > tol)
            throw InvariantError("PhaseShiftMatrix: entries must be unit modulus");
    return PhaseShiftMatrix(std::move(values));
}

PhaseShiftMatrix PhaseShiftMatrix::from_phases(const Eigen::MatrixXd& beta)
{
    CMatrix v(beta.rows(), beta.cols());
    for (Eigen::Index i = 0; i < beta.size(); ++i)
        v.data()[i] = std::polar(1.0, beta.data()[i]);
    return PhaseShiftMatrix(std::move(v));
}

PhaseShiftMatrix PhaseShiftMatrix::ones(Eigen::Index epochs, Eigen::Index elements)
{
    return PhaseShiftMatrix(CMatrix::Ones(epochs, elements));
}

Eigen::MatrixXd PhaseShiftMatrix::phases() const
{
    return values_.unaryExpr([](const Complex& z) { return std::arg(z); }).real();
}

double PhaseShiftMatrix::max_modulus_error() const
{
    double worst = 0.0;
    for (Eigen::Index i = 0; i < values_.size(); ++i)
        worst = std::max(worst, std::abs(std::abs(values_.data()[i]) - 1.0));
    return worst;
}

CVector suppression_target(const ArraySpec& ris, double aoa_ap_ris_deg, double aod_ris_pr_deg)
{
    return steering_vector(ris, aod_ris_pr_deg).cwiseProduct(steering_vector(ris, aoa_ap_ris_deg));
}

CMatrix orthogonal_projector(const CVector& a_tilde)
{
    const double energy = a_tilde.squaredNorm();
    if (a_tilde.size() == 0 || !(energy > 0.0))
        throw DomainError("orthogonal_projector: vector must be non-zero");
    const auto m = a_tilde.size();
    return CMatrix::Identity(m, m) - (a_tilde * a_tilde.adjoint()) / energy;
}

PhaseShiftMatrix solve_phase_shifts(const CVector& a_tilde, Eigen::Index n_epoch, Rng& rng)
{
    if (n_epoch < 1)
        throw DomainError("solve_phase_shifts: n_epoch must be >= 1");
    const CMatrix projector = orthogonal_projector(a_tilde);
    const auto m = a_tilde.size();

    CMatrix gamma(m, n_epoch);
    for (Eigen::Index n = 0; n < n_epoch; ++n)
        for (Eigen::Index i = 0; i < m; ++i)
            gamma(i, n) = complex_gaussian(rng, 1.0);

    const CMatrix projected = projector * gamma;
    Eigen::MatrixXd beta(n_epoch, m);
    for (Eigen::Index n = 0; n < n_epoch; ++n)
        for (Eigen::Index i = 0; i < m; ++i) {
            const Complex u = projected(i, n);
            // conjugate transpose: row n carries -angle(u)
            beta(n, i) = (u == Complex{}) ? 0.0 : -std::arg(u);
        }
    return PhaseShiftMatrix::from_phases(beta);
}

RVector beampattern(const PhaseShiftMatrix& phases, double aod_ris_pr_deg, const ArraySpec& ris,
                    const AngleList& grid)
{
    if (grid.empty())
        throw DomainError("beampattern: grid must be non-empty");
    if (phases.elements() != ris.elements)
        throw DomainError("beampattern: phase-shift matrix width differs from RIS size");
    const CVector b = steering_vector(ris, aod_ris_pr_deg);
    // column g of V diag(b) A holds b^T diag(v_n) a(theta_g) for every epoch n
    const CMatrix response = phases.values() * b.asDiagonal() * steering_matrix(ris, grid);
    return response.cwiseAbs2().colwise().sum().transpose();
}

RVector normalized_db(const RVector& pattern)
{
    const double peak = pattern.size() ? pattern.maxCoeff() : 0.0;
    RVector out(pattern.size());
    for (Eigen::Index i = 0; i < pattern.size(); ++i)
        out(i) = peak > 0.0 ? power_to_db(pattern(i) / peak) : 0.0;
    return out;
}

double mean_residual_power(const PhaseShiftMatrix& phases, const CVector& a_tilde)
{
    return (phases.values() * a_tilde).squaredNorm() / static_cast<double>(phases.epochs());
}

}  // namespace rispr
