#include "rwm/fourier.hpp"

#include "rwm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace rwm {

namespace {

std::size_t resolve_terms(const LifetimeDistribution& f, std::size_t terms) {
    if (terms == 0) terms = f.prefix_size();
    if (terms == 0) throw InvalidArgument("characteristic function needs at least one term");
    return terms;
}

} // namespace

CharValue char_function(const LifetimeDistribution& f, double theta, std::size_t terms) {
    terms = resolve_terms(f, terms);
    double re = 0.0;
    double im = 0.0;
    for (std::size_t n = 1; n <= terms; ++n) {
        const double m = f.mass(n);
        if (m == 0.0) continue;
        const double angle = static_cast<double>(n) * theta;
        re += m * std::cos(angle);
        im += m * std::sin(angle);
    }
    return {{re, im}, f.tail_mass(terms + 1), terms};
}

CharValue one_minus_char(const LifetimeDistribution& f, double theta, std::size_t terms) {
    terms = resolve_terms(f, terms);
    const double tail = f.tail_mass(terms + 1);
    double re = tail;
    double im = 0.0;
    for (std::size_t n = 1; n <= terms; ++n) {
        const double m = f.mass(n);
        if (m == 0.0) continue;
        const double angle = static_cast<double>(n) * theta;
        const double half = std::sin(0.5 * angle);
        re += 2.0 * m * half * half;
        im -= m * std::sin(angle);
    }
    return {{re, im}, tail, terms};
}

double aperiodicity_gap(const LifetimeDistribution& f, double eps, std::size_t points) {
    if (!(eps > 0.0 && eps <= std::numbers::pi)) throw InvalidArgument("gap needs 0 < eps <= pi");
    if (points < 2) throw InvalidArgument("gap grid needs at least two points");
    double worst = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        const double theta = eps + (std::numbers::pi - eps) * static_cast<double>(i) /
                                       static_cast<double>(points - 1);
        const auto v = char_function(f, theta);
        worst = std::max(worst, std::abs(v.value) + v.truncation_bound);
    }
    return worst;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
    if (!(lo > 0.0 && hi > lo)) throw InvalidArgument("log grid needs 0 < lo < hi");
    if (points < 2) return {lo};
    std::vector<double> grid(points);
    const double step = std::log(hi / lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) grid[i] = lo * std::exp(step * static_cast<double>(i));
    grid.back() = hi;
    return grid;
}

FourierBoundReport fourier_lower_bound_check(const LifetimeDistribution& f,
                                             std::span<const double> thetas) {
    using std::numbers::pi;
    const double sqrt5 = std::sqrt(5.0);
    FourierBoundReport report{{}, true, std::numeric_limits<double>::infinity(), {}};
    if (thetas.empty()) return report;

    double smallest = pi;
    for (double t : thetas) {
        if (!(t > 0.0 && t < pi / 2)) throw InvalidArgument("Fourier bound grid must lie in (0, pi/2)");
        smallest = std::min(smallest, t);
    }
    // M(m) for m up to floor(2/(pi * smallest)).
    const auto m_max = static_cast<std::size_t>(std::floor(2.0 / (pi * smallest)));
    std::vector<double> mean(m_max + 1, 0.0);
    for (std::size_t n = 1; n <= m_max; ++n) mean[n] = mean[n - 1] + static_cast<double>(n) * f.mass(n);

    for (double theta : thetas) {
        FourierBoundRow row{};
        row.theta = theta;
        const auto omf = one_minus_char(f, theta);
        row.one_minus_f = std::abs(omf.value);
        row.one_minus_f_lower = row.one_minus_f - omf.truncation_bound;
        row.cutoff = 2.0 / (pi * theta);
        const auto below = static_cast<std::size_t>(std::floor(row.cutoff));
        const auto above = static_cast<std::size_t>(std::ceil(row.cutoff));
        row.mean_below = mean[below];
        row.tail_above = f.tail_mass(above);
        const double main = (2.0 / pi) * theta * row.mean_below;
        row.rhs = main - sqrt5 * row.tail_above;
        row.margin = row.one_minus_f_lower - row.rhs;
        row.eta = main > 0.0 ? row.rhs / main : 0.0;
        row.holds = row.margin > 0.0;
        report.min_margin = std::min(report.min_margin, row.margin);
        if (!row.holds) {
            report.all_hold = false;
            report.violations.push_back(row);
        }
        report.rows.push_back(row);
    }
    return report;
}

IntegralEstimate integral_criterion(const LifetimeDistribution& f, double theta_min,
                                    double theta_max, std::size_t cells) {
    if (!(theta_max > theta_min)) throw InvalidArgument("integral needs theta_min < theta_max");
    if (cells < 1) throw InvalidArgument("integral needs at least one cell");
    double sign = 1.0;
    double lo = theta_min;
    double hi = theta_max;
    if (theta_max <= 0.0) {
        sign = -1.0;
        lo = -theta_max;
        hi = -theta_min;
    }
    if (!(lo > 0.0)) throw InvalidArgument("integration interval must not contain 0");
    const auto edges = log_grid(lo, hi, cells + 1);
    constexpr double floor = 1e-13;
    IntegralEstimate est{0.0, 0, 0};
    for (std::size_t i = 0; i < cells; ++i) {
        const double a = edges[i];
        const double b = edges[i + 1];
        const double mid = 0.5 * (a + b);
        const double denom = std::abs(one_minus_char(f, sign * mid).value);
        if (!(denom > floor)) {
            ++est.skipped;
            continue;
        }
        est.value += (b - a) * mid * mid / (denom * denom);
        ++est.evaluated;
    }
    return est;
}

ParsevalCheck parseval_check(const LifetimeDistribution& f, const RenewalSequence<double>& u,
                             std::size_t cells) {
    using std::numbers::pi;
    if (cells < 1) throw InvalidArgument("Parseval check needs at least one cell");
    if (u.horizon() < 2) throw InvalidArgument("Parseval check needs u_1 and u_2");
    const double h = pi / static_cast<double>(cells);
    double integral = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
        const double theta = (static_cast<double>(i) + 0.5) * h;
        const double s = std::sin(0.5 * theta);
        const double denom = std::norm(one_minus_char(f, theta).value);
        if (denom > 0.0) integral += h * 4.0 * s * s / denom;
    }
    // Symmetric in theta: (1/2pi) * 2 * integral over (0, pi).
    const double first = 1.0 - u.u(1);
    const double quadrature = integral / pi - 1.0 - first * first;
    double series = 0.0;
    for (std::size_t k = 1; k < u.horizon(); ++k) {
        const double d = u.u(k) - u.u(k + 1);
        series += d * d;
    }
    const double scale = std::max(std::abs(series), 1e-300);
    return {quadrature, series, std::abs(quadrature - series) / scale};
}

} // namespace rwm
