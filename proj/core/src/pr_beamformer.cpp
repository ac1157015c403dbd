#include "rispr/pr_beamformer.hpp"

#include <Eigen/QR>

namespace rispr {

CVector matched_weight(const ArraySpec& pr, double aoa_ris_pr_deg)
{
    const CVector a = steering_vector(pr, aoa_ris_pr_deg);
    return a / a.squaredNorm();
}

CVector null_steering_weight(const ArraySpec& pr, double aoa_ris_pr_deg,
                             const AngleList& null_directions)
{
    if (null_directions.empty())
        return matched_weight(pr, aoa_ris_pr_deg);
    if (static_cast<int>(null_directions.size()) >= pr.elements)
        throw DomainError("null_steering_weight: need fewer nulls than PR elements");

    const CVector a = steering_vector(pr, aoa_ris_pr_deg);
    const CMatrix nulls = steering_matrix(pr, null_directions);
    // Orthonormal basis of the null span; P = I - Q Q^H.
    Eigen::HouseholderQR<CMatrix> qr(nulls);
    const CMatrix q = qr.householderQ() * CMatrix::Identity(pr.elements, nulls.cols());
    const CVector pa = a - q * (q.adjoint() * a);
    const Complex gain = a.dot(pa);  // a^H P a
    if (std::abs(gain) < 1e-12)
        throw DomainError("null_steering_weight: look direction lies in the null span");
    return pa / std::conj(gain);
}

BeamformedData beamform(const SnapshotTensor& tensor, const CVector& w)
{
    BeamformedData out;
    if (tensor.per_epoch.empty())
        return out;
    const auto samples = tensor.per_epoch.front().cols();
    out.z.resize(static_cast<Eigen::Index>(tensor.epochs()), samples);
    for (std::size_t n = 0; n < tensor.epochs(); ++n) {
        const CMatrix& y = tensor.per_epoch[n];
        if (y.rows() != w.size())
            throw DomainError("beamform: weight length differs from PR element count");
        out.z.row(static_cast<Eigen::Index>(n)) = w.adjoint() * y;
    }
    return out;
}

}  // namespace rispr
