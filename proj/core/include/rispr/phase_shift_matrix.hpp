#pragma once

#include "rispr/types.hpp"

namespace rispr {

/// RIS configuration over all epochs: N_epoch x M, entry (n, m) = exp(j*beta_m^(n)).
/// Row n is the vector v_n^T applied during epoch n.
class PhaseShiftMatrix {
public:
    static constexpr double kUnitModulusTol = 1e-12;

    PhaseShiftMatrix() = default;

    /// Wraps explicit values; throws InvariantError if any |V_nm| deviates from 1 by more than `tol`.
    static PhaseShiftMatrix from_values(CMatrix values, double tol = kUnitModulusTol);
    /// Builds exp(j*beta) from phases in radians.
    static PhaseShiftMatrix from_phases(const Eigen::MatrixXd& beta);
    static PhaseShiftMatrix ones(Eigen::Index epochs, Eigen::Index elements);

    Eigen::Index epochs() const { return values_.rows(); }
    Eigen::Index elements() const { return values_.cols(); }
    const CMatrix& values() const { return values_; }
    CRowVector row(Eigen::Index n) const { return values_.row(n); }
    Eigen::MatrixXd phases() const;

    /// Largest | |V_nm| - 1 | over all entries.
    double max_modulus_error() const;

private:
    explicit PhaseShiftMatrix(CMatrix values) : values_(std::move(values)) {}
    CMatrix values_;
};

}  // namespace rispr
