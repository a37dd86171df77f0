#pragma once

// The product of a Markov shift S (seen only through its return sequence
// u_n = nu(A ∩ S^-n A), required to be Kaluza) with a dyadic tower T.

#include "rwm/odometer_tower.hpp"
#include "rwm/renewal_core.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace rwm {

class ProductModel {
public:
    /// Throws KaluzaViolation if markov_u is not log-convex (or its derived
    /// lifetime goes negative).
    ProductModel(RenewalSequence<double> markov_u, CorrelationSequence tower_corr);

    const RenewalSequence<double>& markov_u() const { return markov_u_; }
    const CorrelationSequence& tower_corr() const { return tower_; }
    const GrowthSequence& growth() const { return tower_.growth(); }
    /// Largest n at which both factors are stored.
    std::int64_t horizon() const;

private:
    RenewalSequence<double> markov_u_;
    CorrelationSequence tower_;
};

/// u_n * m(Omega ∩ T^-n Omega).
double product_correlation(const ProductModel& pm, std::int64_t n);

struct CodeSums {
    double full;        // sum over positive codes with N_eps <= n of u_{N_eps} 2^-||eps||
    double restricted;  // same, eps_1 = 0 only
};

CodeSums product_return_sequence(const ProductModel& pm, std::int64_t n);

/// D_n / a_n with D_n = sum_{k<=n} u_k |tower(k) - tower(k+q_1)| and a_n the
/// full code sum; nullopt while a_n = 0.
std::optional<double> difference_sum_ratio(const ProductModel& pm, std::int64_t n);

struct ProductRow {
    std::int64_t n;
    double markov_u;
    double tower;
    double product;
    double code_sum;
    double restricted_sum;
    double difference_sum;
    std::optional<double> ratio;
};

/// All rows for 1..n_max in one pass (code sums accumulated from the sorted
/// positive-code stream). Needs tower horizon >= n_max + q_1.
std::vector<ProductRow> product_series(const ProductModel& pm, std::int64_t n_max);

struct ZeroTypeWindow {
    std::int64_t lo; // inclusive
    std::int64_t hi; // exclusive
    double max_correlation;
};

struct ZeroTypeReport {
    std::vector<ZeroTypeWindow> windows;
    bool monotone_decreasing;
    /// Heuristic for a null-recurrent factor: u_M < u_{ceil(M/10)} / 2.
    bool markov_u_decays;
};

/// Windows [checkpoints[i], checkpoints[i+1]) clipped to 1..horizon; empty
/// windows report 0. With no checkpoints the tower scales q_k are used.
ZeroTypeReport zero_type_report(const ProductModel& pm, std::vector<std::int64_t> checkpoints = {});

} // namespace rwm
