#pragma once

// Independent reference implementations used as test oracles. They are written
// with plain loops and std::complex on purpose and share no code with the
// library beyond the container typedefs.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <vector>

#include "rispr/types.hpp"

namespace oracle {

using cd = std::complex<double>;
using rispr::CMatrix;
using rispr::CVector;

inline double pi() { return std::acos(-1.0); }

/// exp(j 2 pi d m sin(theta)) element by element.
inline CVector steering(int elements, double spacing, double theta_deg)
{
    CVector v(elements);
    const double s = std::sin(theta_deg * pi() / 180.0);
    for (int m = 0; m < elements; ++m)
        v(m) = std::polar(1.0, 2.0 * pi() * spacing * m * s);
    return v;
}

/// Per-angle NLMS recursion transcribed line by line, one look direction:
///   a_hat <- 0
///   for l: p = d^H z_l ; e = p - a_hat^H z_l ; a_hat <- a_hat + mu/(||z_l|| + eps) * conj(e) * z_l
inline CVector nlms_literal(const CMatrix& z, const CVector& d, double mu, double eps, bool energy = false)
{
    const auto n = z.rows();
    std::vector<cd> a(static_cast<std::size_t>(n), cd{0.0, 0.0});
    for (Eigen::Index l = 0; l < z.cols(); ++l) {
        cd p{0.0, 0.0}, y{0.0, 0.0};
        double nn = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            p += std::conj(d(i)) * z(i, l);
            y += std::conj(a[static_cast<std::size_t>(i)]) * z(i, l);
            nn += std::norm(z(i, l));
        }
        const double norm = energy ? nn : std::sqrt(nn);
        const cd e = p - y;
        for (Eigen::Index i = 0; i < n; ++i)
            a[static_cast<std::size_t>(i)] += mu / (norm + eps) * std::conj(e) * z(i, l);
    }
    CVector out(n);
    for (Eigen::Index i = 0; i < n; ++i)
        out(i) = a[static_cast<std::size_t>(i)];
    return out;
}

/// Minimum over all permutations of sum (t_i - e_pi(i))^2 (|t| == |e|).
inline double brute_force_assignment(const std::vector<double>& truth, const std::vector<double>& est)
{
    std::vector<std::size_t> perm(est.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double best = std::numeric_limits<double>::infinity();
    do {
        double cost = 0.0;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            const double d = truth[i] - est[perm[i]];
            cost += d * d;
        }
        best = std::min(best, cost);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

/// Residual energy of the columns of `data` outside span(cols) via modified
/// Gram-Schmidt.
inline double subspace_residual(const CMatrix& data, const std::vector<CVector>& cols)
{
    std::vector<CVector> q;
    for (const auto& c : cols) {
        CVector v = c;
        for (const auto& u : q)
            v -= u * u.dot(v);
        const double nv = v.norm();
        if (nv > 1e-12)
            q.push_back(v / nv);
    }
    double res = 0.0;
    for (Eigen::Index l = 0; l < data.cols(); ++l) {
        CVector r = data.col(l);
        for (const auto& u : q)
            r -= u * u.dot(r);
        res += r.squaredNorm();
    }
    return res;
}

/// Exhaustive search over all k-subsets of dictionary columns for the one
/// whose span best contains the data. Returns grid indices, ascending.
inline std::vector<int> exhaustive_subspace_fit(const CMatrix& data, const CMatrix& dict, int k)
{
    const int g = static_cast<int>(dict.cols());
    std::vector<int> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<int> best;
    double best_res = std::numeric_limits<double>::infinity();
    while (true) {
        std::vector<CVector> cols;
        for (int i : idx)
            cols.push_back(dict.col(i));
        const double r = subspace_residual(data, cols);
        if (r < best_res) {
            best_res = r;
            best = idx;
        }
        int pos = k - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == g - k + pos)
            --pos;
        if (pos < 0)
            break;
        ++idx[static_cast<std::size_t>(pos)];
        for (int j = pos + 1; j < k; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    return best;
}

/// Nearest grid index to `theta`.
inline std::size_t nearest(const std::vector<double>& grid, double theta)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (std::abs(grid[i] - theta) < std::abs(grid[best] - theta))
            best = i;
    return best;
}

}  // namespace oracle
