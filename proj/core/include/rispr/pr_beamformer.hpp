#pragma once

#include "rispr/signal_model.hpp"
#include "rispr/types.hpp"

namespace rispr {

/// Beamformed data matrix Z (N_epoch x L); row n is w^H Y_n, column l is z_l.
struct BeamformedData {
    CMatrix z;

    Eigen::Index epochs() const { return z.rows(); }
    Eigen::Index samples() const { return z.cols(); }
};

/// w = a(theta_RIS^PR) / ||a||^2, so that w^H a = 1.
CVector matched_weight(const ArraySpec& pr, double aoa_ris_pr_deg);

/// Distortionless weight with nulls: w = P a / (a^H P a), P projecting out the
/// steering vectors of `null_directions`. Empty list gives matched_weight.
CVector null_steering_weight(const ArraySpec& pr, double aoa_ris_pr_deg,
                             const AngleList& null_directions);

BeamformedData beamform(const SnapshotTensor& tensor, const CVector& w);

}  // namespace rispr
