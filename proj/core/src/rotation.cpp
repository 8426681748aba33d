#include "caseq/error.hpp"
#include "caseq/factorlab.hpp"
#include "caseq/seqforge.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace caseq::seqforge {

RotationSolution solve_rotation(std::span<const std::uint64_t> parts, double epsilon) {
    if (!factorlab::satisfies_restriction_a(parts))
        throw InfeasibleError(
            "phase rotation needs at least 3 parts with the largest below half the total "
            "(no cyclic polygon exists otherwise)");
    if (!(epsilon > 0)) throw DomainError("rotation accuracy epsilon must be positive");

    const double two_pi = 2.0 * std::numbers::pi;
    const std::size_t count = parts.size();
    RotationSolution sol;
    sol.epsilon = epsilon;
    sol.arc_angles.assign(count, 0.0);

    // Bisection on the central angle of the first side; the circumscribed
    // radius follows from it and fixes every other central angle.
    double lo = 0.0;
    double hi = two_pi;
    constexpr int kMaxIterations = 200;
    for (int it = 1; it <= kMaxIterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double radius = static_cast<double>(parts[0]) / (2.0 * std::sin(0.5 * mid));
        double total = mid;
        sol.arc_angles[0] = mid;
        for (std::size_t r = 1; r < count; ++r) {
            double side = static_cast<double>(parts[r]);
            double c = 1.0 - side * side / (2.0 * radius * radius);
            sol.arc_angles[r] = std::acos(std::max(-1.0, std::min(1.0, c)));
            total += sol.arc_angles[r];
        }
        sol.radius_estimate = radius;
        sol.iterations = it;
        if (std::abs(total - two_pi) <= epsilon) break;
        if (total < two_pi)
            lo = mid;
        else
            hi = mid;
    }

    sol.theta.assign(count, 0.0);
    for (std::size_t r = 1; r < count; ++r)
        sol.theta[r] = sol.theta[r - 1] + 0.5 * (sol.arc_angles[r - 1] + sol.arc_angles[r]);

    std::complex<double> acc{0.0, 0.0};
    for (std::size_t r = 0; r < count; ++r)
        acc += static_cast<double>(parts[r]) * std::polar(1.0, sol.theta[r]);
    sol.residual = std::abs(acc);
    return sol;
}

}  // namespace caseq::seqforge
