#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rispr {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CRowVector = Eigen::RowVectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// Random engine used throughout. Every stochastic function takes one by
/// reference; there is no global engine.
using Rng = std::mt19937_64;

/// Precondition on an input value failed (bad angle, negative variance, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A structural invariant of a data object was found broken.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Uniform linear array. Spacing is in wavelengths.
struct ArraySpec {
    int elements = 1;
    double spacing = 0.5;

    void validate() const;
};

/// Angles in degrees on an increasing grid.
using AngleList = std::vector<double>;

/// Inclusive arithmetic grid start, start+step, ... <= stop (+1e-9 slack).
AngleList make_grid(double start, double stop, double step);

/// Default scan grid: (-90, 90) exclusive in 0.5 degree steps.
AngleList default_grid();

constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }

/// Circular complex Gaussian with E|x|^2 = variance.
Complex complex_gaussian(Rng& rng, double variance = 1.0);

double db_to_amplitude(double db);
double power_to_db(double power);

}  // namespace rispr
