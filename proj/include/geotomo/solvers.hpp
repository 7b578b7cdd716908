#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace geotomo {

/// Simulated annealing schedule. initial_temperature <= 0 means "use the
/// objective value at the start point".
struct AnnealConfig {
    double initial_temperature = 0.0;
    double cooling_factor = 0.95;
    int steps_per_temperature = 50;
    double min_temperature_fraction = 1e-3;  // floor as a fraction of T0
    double step_scale = 1.0;                 // proposal std in coordinate units
    uint64_t seed = 0;
};

using Objective = std::function<double(const std::vector<double>&)>;

/// Metropolis annealing with Gaussian single-coordinate proposals whose std
/// is step_scale * (T / T0), geometric cooling, followed by a coordinate
/// descent polish with shrinking step (stops below 1e-6 relative
/// improvement). Returns the best point seen; never worse than x0.
/// Deterministic given cfg.seed.
std::vector<double> anneal_minimize(const Objective& objective, std::vector<double> x0,
                                    const AnnealConfig& cfg);

/// Least squares onto the cone of consistent support-function vectors:
/// minimize ||y - h||^2 subject to, for every cyclically consecutive sorted
/// triple of direction angles (a, b, c),
///   y_b sin(c - a) <= y_a sin(c - b) + y_c sin(b - a).
struct ConstrainedLsqProblem {
    std::vector<double> targets;     // measured support values h_i
    std::vector<double> angles_deg;  // strictly sorted in [0, 360)
};

/// Active-set solve; the result satisfies every constraint to 1e-9 and the
/// KKT conditions to 1e-7. Throws when fewer than 3 directions are given,
/// when the directions span at most a halfplane, or on failure to converge.
std::vector<double> constrained_lsq(const ConstrainedLsqProblem& p);

/// Least-squares polynomial fit with the abscissa affinely rescaled to
/// [-1, 1] for conditioning. eval() maps back from the original units.
struct Polynomial {
    std::vector<double> coeffs;  // in the rescaled variable, degree order
    double x_lo = -1.0;
    double x_hi = 1.0;

    double eval(double x) const;
};

/// Fits samples (x_i, value_i) with a polynomial of the given degree.
/// Throws when there are fewer than degree+1 samples or the system is rank
/// deficient.
Polynomial polyfit_ls(const std::vector<std::array<double, 2>>& samples, int degree);

/// Strict local minima of the polynomial inside [lo, hi]: dense evaluation
/// at 0.1 steps followed by ternary refinement to 0.01. Boundary points are
/// not reported.
std::vector<double> poly_local_minima(const Polynomial& poly, double lo, double hi);

}  // namespace geotomo
