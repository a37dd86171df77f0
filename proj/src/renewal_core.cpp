#include "rwm/renewal_core.hpp"

#include "rwm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rwm {

namespace {

bool exceeds_one(double v) { return v > 1.0 + 1e-12; }
bool exceeds_one(const Rational& v) { return v > 1; }

} // namespace

template <class T>
RenewalSequence<T>::RenewalSequence(std::vector<T> values) : u_(std::move(values)) {
    if (u_.empty() || u_.front() != 1) throw InvalidArgument("renewal sequence needs u_0 = 1");
    a_.assign(u_.size(), T(0));
    for (std::size_t n = 1; n < u_.size(); ++n) {
        if (u_[n] < 0 || exceeds_one(u_[n])) {
            throw InvalidArgument("renewal value u_" + std::to_string(n) + " outside [0,1]");
        }
        a_[n] = a_[n - 1] + u_[n];
    }
}

template <class T>
const T& RenewalSequence<T>::u(std::size_t n) const {
    if (n >= u_.size()) {
        throw OutOfRange("renewal index " + std::to_string(n) + " beyond horizon " +
                         std::to_string(horizon()));
    }
    return u_[n];
}

template <class T>
const T& RenewalSequence<T>::partial_sum(std::size_t n) const {
    if (n >= a_.size()) {
        throw OutOfRange("renewal index " + std::to_string(n) + " beyond horizon " +
                         std::to_string(horizon()));
    }
    return a_[n];
}

template class RenewalSequence<double>;
template class RenewalSequence<Rational>;

RenewalSequence<double> renewal_from_lifetime(const LifetimeDistribution& f, std::size_t horizon) {
    const std::size_t width = f.has_tail() ? horizon : std::min(horizon, f.prefix_size());
    const std::vector<double> masses = f.dense_masses(width);
    std::vector<double> u(horizon + 1, 0.0);
    u[0] = 1.0;
    for (std::size_t n = 1; n <= horizon; ++n) {
        const std::size_t terms = std::min(n, width);
        // u_n = sum_{k=1}^{terms} f_k u_{n-k}; four partial sums keep the
        // dependency chain short.
        const double* fk = masses.data();
        const double* back = u.data() + n - 1;
        double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
        std::size_t k = 0;
        for (; k + 4 <= terms; k += 4) {
            s0 += fk[k] * back[-static_cast<std::ptrdiff_t>(k)];
            s1 += fk[k + 1] * back[-static_cast<std::ptrdiff_t>(k + 1)];
            s2 += fk[k + 2] * back[-static_cast<std::ptrdiff_t>(k + 2)];
            s3 += fk[k + 3] * back[-static_cast<std::ptrdiff_t>(k + 3)];
        }
        for (; k < terms; ++k) s0 += fk[k] * back[-static_cast<std::ptrdiff_t>(k)];
        u[n] = std::min(1.0, (s0 + s1) + (s2 + s3));
    }
    return RenewalSequence<double>(std::move(u));
}

RenewalSequence<Rational> renewal_from_lifetime(const ExactLifetime& f, std::size_t horizon) {
    const std::size_t width = std::min(horizon, f.support_bound());
    std::vector<Rational> u(horizon + 1, Rational(0));
    u[0] = 1;
    for (std::size_t n = 1; n <= horizon; ++n) {
        Rational acc = 0;
        for (std::size_t k = 1; k <= std::min(n, width); ++k) {
            if (f.masses()[k - 1] != 0) acc += f.masses()[k - 1] * u[n - k];
        }
        u[n] = acc;
    }
    return RenewalSequence<Rational>(std::move(u));
}

namespace {

template <class T, class IsNegative>
LifetimeRecovery<T> recover(const RenewalSequence<T>& seq, IsNegative is_negative) {
    const auto& u = seq.values();
    LifetimeRecovery<T> out;
    out.masses.assign(seq.horizon(), T(0));
    for (std::size_t n = 1; n <= seq.horizon(); ++n) {
        T value = u[n];
        for (std::size_t k = 1; k < n; ++k) value -= out.masses[k - 1] * u[n - k];
        if (!out.first_negative && is_negative(value)) out.first_negative = n;
        out.masses[n - 1] = value;
    }
    return out;
}

} // namespace

LifetimeRecovery<double> lifetime_from_renewal(const RenewalSequence<double>& u, double tolerance) {
    return recover(u, [tolerance](double v) { return v < -tolerance; });
}

LifetimeRecovery<Rational> lifetime_from_renewal(const RenewalSequence<Rational>& u) {
    return recover(u, [](const Rational& v) { return v < 0; });
}

namespace {

template <class T>
TailStats<T> build_tail_stats(const std::vector<T>& masses, T tail_after) {
    // masses = f_1..f_B, tail_after = f([B+1, infinity)).
    TailStats<T> s;
    const std::size_t bound = masses.size();
    s.bound = bound;
    s.c.assign(bound + 2, T(0));
    s.L.assign(bound + 1, T(0));
    s.M.assign(bound + 1, T(0));
    s.V.assign(bound + 1, T(0));
    s.c[bound + 1] = tail_after;
    for (std::size_t N = bound; N >= 1; --N) s.c[N] = s.c[N + 1] + masses[N - 1];
    for (std::size_t N = 1; N <= bound; ++N) {
        const T n(static_cast<long>(N));
        s.L[N] = s.L[N - 1] + s.c[N];
        s.M[N] = s.M[N - 1] + n * masses[N - 1];
        s.V[N] = s.V[N - 1] + n * n * masses[N - 1];
    }
    return s;
}

} // namespace

TailStats<double> tail_stats(const LifetimeDistribution& f, std::size_t bound) {
    return build_tail_stats(f.dense_masses(bound), f.tail_mass(bound + 1));
}

TailStats<Rational> tail_stats(const ExactLifetime& f, std::size_t bound) {
    std::vector<Rational> masses(bound);
    for (std::size_t n = 1; n <= bound; ++n) masses[n - 1] = f.mass(n);
    Rational tail = 0;
    for (std::size_t n = bound + 1; n <= f.support_bound(); ++n) tail += f.mass(n);
    return build_tail_stats(masses, tail);
}

double tail_identity_defect(const TailStats<double>& s) {
    double worst = 0.0;
    for (std::size_t N = 1; N <= s.bound; ++N) {
        const double n = static_cast<double>(N);
        const double defect = std::abs(s.L[N] - s.M[N] - n * s.c[N + 1]);
        worst = std::max(worst, defect / std::max(1.0, s.L[N]));
    }
    return worst;
}

bool tail_identity_exact(const TailStats<Rational>& s) {
    for (std::size_t N = 1; N <= s.bound; ++N) {
        if (s.L[N] != s.M[N] + Rational(static_cast<long>(N)) * s.c[N + 1]) return false;
    }
    return true;
}

namespace {

std::size_t window_begin(std::size_t bound, double window_fraction) {
    if (!(window_fraction > 0.0 && window_fraction <= 1.0)) {
        throw InvalidArgument("limsup window fraction must be in (0,1]");
    }
    const auto width = static_cast<std::size_t>(std::ceil(window_fraction * static_cast<double>(bound)));
    return bound - std::max<std::size_t>(width, 1) + 1;
}

} // namespace

PointinghandReport pointinghand_ratios(const TailStats<double>& s, double window_fraction) {
    if (s.bound == 0) throw InvalidArgument("tail statistics are empty");
    PointinghandReport r;
    r.ratios.resize(s.bound);
    for (std::size_t N = 1; N <= s.bound; ++N) {
        if (!(s.L[N] > 0.0)) throw InvalidArgument("L(N) must be positive");
        r.ratios[N - 1] = static_cast<double>(N) * s.c[N] / s.L[N];
    }
    r.window_start = window_begin(s.bound, window_fraction);
    r.limsup_estimate = *std::max_element(r.ratios.begin() + static_cast<std::ptrdiff_t>(r.window_start - 1),
                                          r.ratios.end());
    r.threshold = pointinghand_threshold;
    r.holds = r.limsup_estimate < r.threshold;
    return r;
}

BicycleReport bicycle_ratio(const TailStats<double>& s, double window_fraction) {
    const auto pointing = pointinghand_ratios(s, window_fraction);
    BicycleReport r;
    r.ratios.resize(s.bound);
    for (std::size_t N = 1; N <= s.bound; ++N) {
        r.ratios[N - 1] = static_cast<double>(N) * s.c[N] / s.M[N];
    }
    r.window_start = pointing.window_start;
    const auto first = r.ratios.begin() + static_cast<std::ptrdiff_t>(r.window_start - 1);
    r.limsup_estimate = *std::max_element(first, r.ratios.end());
    r.fitted_r = pointing.limsup_estimate;
    r.r_bound = r.fitted_r < 1.0 ? r.fitted_r / (1.0 - r.fitted_r)
                                 : std::numeric_limits<double>::infinity();
    r.bound_holds_in_window = true;
    for (std::size_t N = r.window_start; N <= s.bound; ++N) {
        // small relative slack for rounding in c and M
        if (static_cast<double>(N) * s.c[N] > r.r_bound * s.M[N] * (1.0 + 1e-12)) {
            r.bound_holds_in_window = false;
            break;
        }
    }
    r.threshold = bicycle_threshold;
    r.below_threshold = r.r_bound < r.threshold;
    return r;
}

std::vector<SmoothnessPoint> smoothness_ratio(const RenewalSequence<double>& u,
                                              std::span<const std::size_t> checkpoints) {
    if (checkpoints.empty()) return {};
    const std::size_t last = *std::max_element(checkpoints.begin(), checkpoints.end());
    if (last + 1 > u.horizon()) {
        throw OutOfRange("smoothness ratio at n = " + std::to_string(last) + " needs horizon " +
                         std::to_string(last + 1));
    }
    std::vector<double> variation(last + 1, 0.0);
    for (std::size_t k = 1; k <= last; ++k) {
        variation[k] = variation[k - 1] + std::abs(u.u(k) - u.u(k + 1));
    }
    std::vector<SmoothnessPoint> out;
    out.reserve(checkpoints.size());
    for (std::size_t n : checkpoints) {
        if (n < 1) throw InvalidArgument("smoothness checkpoints start at 1");
        const double a = u.partial_sum(n);
        out.push_back({n, variation[n], a, a > 0.0 ? variation[n] / a : 0.0});
    }
    return out;
}

SquaredVariation squared_variation(const RenewalSequence<double>& u, std::size_t n) {
    if (n + 1 > u.horizon()) {
        throw OutOfRange("squared variation to n = " + std::to_string(n) + " needs horizon " +
                         std::to_string(n + 1));
    }
    SquaredVariation out;
    out.partial_sums.resize(n);
    double acc = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double d = u.u(k) - u.u(k + 1);
        acc += d * d;
        out.partial_sums[k - 1] = acc;
    }
    out.total = acc;
    const std::size_t decade = n / 10;
    const double before = decade >= 1 ? out.partial_sums[decade - 1] : 0.0;
    out.last_decade_increment = n >= 1 ? acc - before : 0.0;
    out.relative_increment = acc > 0.0 ? out.last_decade_increment / acc : 0.0;
    return out;
}

namespace {

template <class T, class Recover, class LogConvex>
KaluzaVerdict kaluza_impl(const RenewalSequence<T>& seq, Recover recover_f, LogConvex log_convex) {
    const auto& u = seq.values();
    for (std::size_t n = 1; n < u.size(); ++n) {
        if (!(u[n] > 0)) {
            throw InvalidArgument("Kaluza check needs u_n > 0 (fails at n = " + std::to_string(n) + ")");
        }
    }
    KaluzaVerdict v{true, std::nullopt, false, std::nullopt};
    for (std::size_t n = 1; n + 1 < u.size(); ++n) {
        if (!log_convex(u[n - 1], u[n], u[n + 1])) {
            v.kaluza = false;
            v.first_violation = n;
            return v;
        }
    }
    const auto f = recover_f(seq);
    v.first_negative_mass = f.first_negative;
    v.derived_nonnegative = f.is_renewal();
    return v;
}

} // namespace

KaluzaVerdict kaluza_check(const RenewalSequence<double>& u, double tolerance) {
    return kaluza_impl(
        u, [tolerance](const auto& s) { return lifetime_from_renewal(s, tolerance); },
        [tolerance](double prev, double cur, double next) {
            return cur * cur <= prev * next * (1.0 + tolerance);
        });
}

KaluzaVerdict kaluza_check(const RenewalSequence<Rational>& u) {
    return kaluza_impl(
        u, [](const auto& s) { return lifetime_from_renewal(s); },
        [](const Rational& prev, const Rational& cur, const Rational& next) {
            return cur * cur <= prev * next;
        });
}

RenewalSequence<double> kaluza_sequence(KaluzaRule rule, std::size_t horizon, double beta) {
    if (rule == KaluzaRule::power && !(beta > 0.0)) throw InvalidArgument("power rule needs beta > 0");
    std::vector<double> u(horizon + 1, 1.0);
    for (std::size_t n = 1; n <= horizon; ++n) {
        const double m = static_cast<double>(n + 1);
        switch (rule) {
        case KaluzaRule::harmonic: u[n] = 1.0 / m; break;
        case KaluzaRule::constant: u[n] = 1.0; break;
        case KaluzaRule::power: u[n] = std::pow(m, -beta); break;
        }
    }
    return RenewalSequence<double>(std::move(u));
}

RenewalSequence<Rational> kaluza_sequence_exact(KaluzaRule rule, std::size_t horizon) {
    if (rule == KaluzaRule::power) throw Unsupported("power Kaluza rule has no exact form");
    std::vector<Rational> u(horizon + 1, Rational(1));
    if (rule == KaluzaRule::harmonic) {
        for (std::size_t n = 1; n <= horizon; ++n) u[n] = Rational(1, static_cast<unsigned long>(n + 1));
    }
    return RenewalSequence<Rational>(std::move(u));
}

} // namespace rwm
