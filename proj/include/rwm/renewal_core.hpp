#pragma once

// Lifetime distributions f on {1, 2, ...}, the renewal sequences they
// generate (u_0 = 1, u_n = f_1 u_{n-1} + ... + f_n u_0), tail statistics,
// and the numerical diagnostics for smoothness of u.
//
// Two precisions run side by side: double for long horizons and exact
// rationals (Rational) for short ones, where results are oracle quality.

#include "rwm/numeric.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace rwm {

/// f_n = n^-exponent / normalizer for n past the stored prefix.
struct PowerLawTail {
    double exponent;
    double normalizer;
};

/// f_n = p (1-p)^(n-1) for n past the stored prefix.
struct GeometricTail {
    double p;
};

using TailModel = std::variant<std::monostate, PowerLawTail, GeometricTail>;

/// sum_{n >= first} n^-s for s > 1 (Hurwitz zeta at an integer offset).
double power_tail_sum(double s, std::uint64_t first);

class LifetimeDistribution {
public:
    /// Stored masses f_1..f_P plus an optional analytic tail for n > P.
    /// Rejects negative masses and total mass off 1 by more than tolerance.
    LifetimeDistribution(std::vector<double> prefix, TailModel tail, double tolerance = 1e-12);

    static LifetimeDistribution from_masses(std::vector<double> masses, double tolerance = 1e-12) {
        return LifetimeDistribution(std::move(masses), std::monostate{}, tolerance);
    }

    /// f_n for n >= 1.
    double mass(std::size_t n) const;
    /// c_N = f([N, infinity)); tail_mass(1) is the total mass.
    double tail_mass(std::size_t first) const;

    std::size_t prefix_size() const { return prefix_.size(); }
    const std::vector<double>& prefix() const { return prefix_; }
    const TailModel& tail() const { return tail_; }
    bool has_tail() const { return !std::holds_alternative<std::monostate>(tail_); }

    /// gcd of the support (1 whenever an analytic tail is present).
    std::size_t support_gcd() const;
    bool aperiodic() const { return support_gcd() == 1; }

    /// f_1..f_count, pulling from the tail model past the prefix.
    std::vector<double> dense_masses(std::size_t count) const;

private:
    double analytic_tail_from(std::size_t first) const;
    double analytic_mass(std::size_t n) const;

    std::vector<double> prefix_;
    std::vector<double> suffix_; // suffix_[i] = f_{i+1} + ... + f_P
    TailModel tail_;
};

LifetimeDistribution delta_lifetime(std::size_t n);
/// f_n = p (1-p)^(n-1).
LifetimeDistribution geometric_lifetime(double p);

struct PowerLawLifetime {
    LifetimeDistribution f;
    double alpha;
    double normalizer;   // zeta(1 + alpha)
    double prefix_mass;  // sum_{n <= N} f_n
};

/// f_n = n^-(1+alpha) / zeta(1+alpha), masses stored for n <= prefix.
PowerLawLifetime powerlaw_lifetime(double alpha, std::size_t prefix);

/// CSV with columns n, f_n (header row optional). Missing n get mass 0.
LifetimeDistribution load_lifetime_csv(const std::filesystem::path& path);

/// Finitely supported lifetime with exact rational masses summing to 1.
class ExactLifetime {
public:
    explicit ExactLifetime(std::vector<Rational> masses);

    Rational mass(std::size_t n) const;
    std::size_t support_bound() const { return masses_.size(); }
    const std::vector<Rational>& masses() const { return masses_; }
    LifetimeDistribution to_double() const;

private:
    std::vector<Rational> masses_; // f_1..f_P
};

template <class T>
class RenewalSequence {
public:
    /// values = (u_0, u_1, ..., u_M); u_0 must be 1 and 0 <= u_n <= 1.
    explicit RenewalSequence(std::vector<T> values);

    std::size_t horizon() const { return u_.size() - 1; }
    const T& u(std::size_t n) const;
    /// a_n = u_1 + ... + u_n, a_0 = 0.
    const T& partial_sum(std::size_t n) const;
    const std::vector<T>& values() const { return u_; }

private:
    std::vector<T> u_;
    std::vector<T> a_;
};

extern template class RenewalSequence<double>;
extern template class RenewalSequence<Rational>;

RenewalSequence<double> renewal_from_lifetime(const LifetimeDistribution& f, std::size_t horizon);
RenewalSequence<Rational> renewal_from_lifetime(const ExactLifetime& f, std::size_t horizon);

template <class T>
struct LifetimeRecovery {
    std::vector<T> masses; // f_1..f_M
    std::optional<std::size_t> first_negative;
    bool is_renewal() const { return !first_negative.has_value(); }
};

/// Inverts the renewal recursion: f_n = u_n - sum_{k<n} f_k u_{n-k}.
/// Masses below -tolerance flag the input as not a renewal sequence.
LifetimeRecovery<double> lifetime_from_renewal(const RenewalSequence<double>& u,
                                               double tolerance = 1e-12);
LifetimeRecovery<Rational> lifetime_from_renewal(const RenewalSequence<Rational>& u);

/// Index N runs 1..bound; entry 0 of each array is unused (zero). c also
/// stores c_{bound+1} so that L(N) = M(N) + N c_{N+1} can be checked at N = bound.
template <class T>
struct TailStats {
    std::size_t bound = 0;
    std::vector<T> c; // f([N, infinity)), size bound + 2
    std::vector<T> L; // c_1 + ... + c_N
    std::vector<T> M; // sum_{n<=N} n f_n
    std::vector<T> V; // sum_{n<=N} n^2 f_n
};

TailStats<double> tail_stats(const LifetimeDistribution& f, std::size_t bound);
TailStats<Rational> tail_stats(const ExactLifetime& f, std::size_t bound);

/// max_N |L(N) - M(N) - N c_{N+1}| / max(1, L(N)).
double tail_identity_defect(const TailStats<double>& stats);
bool tail_identity_exact(const TailStats<Rational>& stats);

/// 1/(sqrt5 + 1)
inline const double pointinghand_threshold = 0.30901699437494742;
/// 1/sqrt5
inline const double bicycle_threshold = 0.44721359549995793;

struct PointinghandReport {
    std::vector<double> ratios; // ratios[N-1] = N c_N / L(N)
    std::size_t window_start;   // first N of the limsup window
    double limsup_estimate;     // max of the ratios over the window
    double threshold;
    bool holds;                 // limsup_estimate < threshold
};

/// The window is the final window_fraction of 1..bound.
PointinghandReport pointinghand_ratios(const TailStats<double>& stats,
                                       double window_fraction = 0.5);

struct BicycleReport {
    std::vector<double> ratios; // N c_N / M(N)
    std::size_t window_start;
    double limsup_estimate;
    double fitted_r;            // limsup estimate of N c_N / L(N)
    double r_bound;             // R / (1 - R)
    bool bound_holds_in_window; // N c_N <= R/(1-R) M(N) across the window
    double threshold;
    bool below_threshold;       // R/(1-R) < 1/sqrt5
};

BicycleReport bicycle_ratio(const TailStats<double>& stats, double window_fraction = 0.5);

struct SmoothnessPoint {
    std::size_t n;
    double variation;   // sum_{k<=n} |u_k - u_{k+1}|
    double partial_sum; // a_n
    double ratio;
};

/// Requires horizon >= max checkpoint + 1.
std::vector<SmoothnessPoint> smoothness_ratio(const RenewalSequence<double>& u,
                                              std::span<const std::size_t> checkpoints);

struct SquaredVariation {
    std::vector<double> partial_sums; // partial_sums[k-1] = sum_{j<=k} (u_j - u_{j+1})^2
    double total;
    double last_decade_increment;     // contribution of k in (n/10, n]
    double relative_increment;
};

SquaredVariation squared_variation(const RenewalSequence<double>& u, std::size_t n);

struct KaluzaVerdict {
    bool kaluza;
    std::optional<std::size_t> first_violation; // n with u_n^2 > u_{n-1} u_{n+1}
    bool derived_nonnegative;                   // only meaningful when kaluza
    std::optional<std::size_t> first_negative_mass;
};

/// Log-convexity u_n^2 <= u_{n-1} u_{n+1}; on success also recovers f and
/// checks it is non-negative. Requires u_0 = 1 and u_n > 0.
KaluzaVerdict kaluza_check(const RenewalSequence<double>& u, double tolerance = 1e-12);
KaluzaVerdict kaluza_check(const RenewalSequence<Rational>& u);

enum class KaluzaRule {
    harmonic, // u_n = 1/(n+1)
    constant, // u_n = 1
    power,    // u_n = (n+1)^-beta
};

RenewalSequence<double> kaluza_sequence(KaluzaRule rule, std::size_t horizon, double beta = 1.0);
/// Exact variant; the power rule is not available here.
RenewalSequence<Rational> kaluza_sequence_exact(KaluzaRule rule, std::size_t horizon);

} // namespace rwm
