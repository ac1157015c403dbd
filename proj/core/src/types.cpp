#include "rispr/types.hpp"

#include <cmath>
#include <limits>

namespace rispr {

void ArraySpec::validate() const
{
    if (elements < 1)
        throw DomainError("ArraySpec: elements must be >= 1, got " + std::to_string(elements));
    if (!(spacing > 0.0) || !std::isfinite(spacing))
        throw DomainError("ArraySpec: spacing must be positive");
}

AngleList make_grid(double start, double stop, double step)
{
    if (!(step > 0.0))
        throw DomainError("make_grid: step must be positive");
    if (stop < start)
        throw DomainError("make_grid: stop < start");
    AngleList grid;
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    grid.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        grid.push_back(start + static_cast<double>(i) * step);
    return grid;
}

AngleList default_grid() { return make_grid(-89.5, 89.5, 0.5); }

Complex complex_gaussian(Rng& rng, double variance)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    const double scale = std::sqrt(variance / 2.0);
    const double re = normal(rng);
    const double im = normal(rng);
    return {scale * re, scale * im};
}

double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }

double power_to_db(double power)
{
    if (power <= 0.0)
        return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(power);
}

}  // namespace rispr
