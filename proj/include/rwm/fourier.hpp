#pragma once

// Characteristic function f(theta) = sum f_n e^{i n theta} of a lifetime
// distribution and the diagnostics built on it near theta = 0.

#include "rwm/renewal_core.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace rwm {

struct CharValue {
    std::complex<double> value;
    /// |f(theta) - value| <= truncation_bound (= c_{terms+1}).
    double truncation_bound;
    std::size_t terms;
};

/// Truncated at `terms` masses; 0 means the stored prefix.
CharValue char_function(const LifetimeDistribution& f, double theta, std::size_t terms = 0);

/// 1 - f(theta) evaluated as c_{N+1} + sum f_n (2 sin^2(n theta/2) - i sin(n theta)),
/// which avoids cancellation near theta = 0. Same truncation bound as char_function.
CharValue one_minus_char(const LifetimeDistribution& f, double theta, std::size_t terms = 0);

/// max |f(theta)| over a uniform grid of eps <= theta <= pi (symmetric in theta).
double aperiodicity_gap(const LifetimeDistribution& f, double eps, std::size_t points);

std::vector<double> log_grid(double lo, double hi, std::size_t points);

struct FourierBoundRow {
    double theta;
    double one_minus_f;       // |1 - f_N(theta)|
    double one_minus_f_lower; // |1 - f_N(theta)| - truncation bound
    double cutoff;            // x = 2/(pi theta)
    double mean_below;        // M(floor x)
    double tail_above;        // c_{ceil x}
    double rhs;               // (2/pi) theta M(floor x) - sqrt5 c_{ceil x}
    double margin;            // one_minus_f_lower - rhs
    double eta;               // rhs / ((2/pi) theta M(floor x))
    bool holds;
};

struct FourierBoundReport {
    std::vector<FourierBoundRow> rows;
    bool all_hold;
    double min_margin;
    std::vector<FourierBoundRow> violations;
};

/// Checks |1 - f(theta)| >= (2/pi)|theta| M(floor x) - sqrt5 c_{ceil x},
/// x = 2/(pi |theta|), at each grid point (0 < theta < pi/2).
FourierBoundReport fourier_lower_bound_check(const LifetimeDistribution& f,
                                             std::span<const double> thetas);

struct IntegralEstimate {
    double value;
    std::size_t evaluated;
    std::size_t skipped; // |1 - f(theta)| under the precision floor
};

/// Midpoint rule on a log-spaced grid for the integral of
/// theta^2 / |1 - f(theta)|^2 over [theta_min, theta_max]. The interval must
/// not contain 0; a negative interval is handled through |theta|.
IntegralEstimate integral_criterion(const LifetimeDistribution& f, double theta_min,
                                    double theta_max, std::size_t cells);

struct ParsevalCheck {
    double quadrature; // (1/2pi) int 4 sin^2(theta/2)/|1-f|^2 - 1 - (1 - u_1)^2
    double series;     // sum_{k>=1} (u_k - u_{k+1})^2 over the stored horizon
    double relative_difference;
};

/// Diagnostic only; uniform midpoint rule with `cells` points on (0, pi).
ParsevalCheck parseval_check(const LifetimeDistribution& f, const RenewalSequence<double>& u,
                             std::size_t cells);

} // namespace rwm
