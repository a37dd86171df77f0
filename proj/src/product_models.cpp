#include "rwm/product_models.hpp"

#include "rwm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rwm {

ProductModel::ProductModel(RenewalSequence<double> markov_u, CorrelationSequence tower_corr)
    : markov_u_(std::move(markov_u)), tower_(std::move(tower_corr)) {
    for (std::size_t n = 1; n <= markov_u_.horizon(); ++n) {
        if (!(markov_u_.u(n) > 0.0)) {
            throw KaluzaViolation("Markov return sequence vanishes at n = " + std::to_string(n) +
                                      "; a Kaluza sequence is positive",
                                  n);
        }
    }
    const auto verdict = kaluza_check(markov_u_);
    if (!verdict.kaluza) {
        throw KaluzaViolation("Markov return sequence is not Kaluza: u_n^2 > u_{n-1} u_{n+1} at n = " +
                                  std::to_string(*verdict.first_violation),
                              *verdict.first_violation);
    }
    if (!verdict.derived_nonnegative) {
        throw KaluzaViolation("Markov return sequence yields a negative lifetime mass at n = " +
                                  std::to_string(*verdict.first_negative_mass),
                              *verdict.first_negative_mass);
    }
}

std::int64_t ProductModel::horizon() const {
    return std::min<std::int64_t>(static_cast<std::int64_t>(markov_u_.horizon()), tower_.horizon());
}

namespace {

void require_horizon(const ProductModel& pm, std::int64_t n) {
    if (n < 1 || n > pm.horizon()) {
        throw OutOfRange("product index " + std::to_string(n) + " outside 1.." +
                         std::to_string(pm.horizon()));
    }
}

std::int64_t first_term(const ProductModel& pm) { return pm.growth().term(1).get_si(); }

} // namespace

double product_correlation(const ProductModel& pm, std::int64_t n) {
    require_horizon(pm, n);
    return pm.markov_u().u(static_cast<std::size_t>(n)) * pm.tower_corr().at(n).to_double();
}

CodeSums product_return_sequence(const ProductModel& pm, std::int64_t n) {
    if (n < 1) return {0.0, 0.0};
    require_horizon(pm, n);
    CodeSums sums{0.0, 0.0};
    for (const auto& pc : enumerate_positive_codes(pm.growth(), BigInt(static_cast<long>(n)))) {
        const double weight = pm.markov_u().u(pc.value.get_ui()) *
                              std::ldexp(1.0, -static_cast<int>(pc.code.norm()));
        sums.full += weight;
        if (pc.code.digit(1) == 0) sums.restricted += weight;
    }
    return sums;
}

std::optional<double> difference_sum_ratio(const ProductModel& pm, std::int64_t n) {
    if (n < 1) return std::nullopt;
    require_horizon(pm, n + first_term(pm));
    double d = 0.0;
    const std::int64_t shift = first_term(pm);
    for (std::int64_t k = 1; k <= n; ++k) {
        const double gap = (pm.tower_corr().at(k) - pm.tower_corr().at(k + shift)).to_double();
        d += pm.markov_u().u(static_cast<std::size_t>(k)) * std::abs(gap);
    }
    const double a = product_return_sequence(pm, n).full;
    if (a <= 0.0) return std::nullopt;
    return d / a;
}

std::vector<ProductRow> product_series(const ProductModel& pm, std::int64_t n_max) {
    if (n_max < 1) return {};
    const std::int64_t shift = first_term(pm);
    require_horizon(pm, n_max + shift);
    const auto codes = enumerate_positive_codes(pm.growth(), BigInt(static_cast<long>(n_max)));
    std::vector<ProductRow> rows;
    rows.reserve(static_cast<std::size_t>(n_max));
    std::size_t next_code = 0;
    double full = 0.0;
    double restricted = 0.0;
    double diff = 0.0;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        const double un = pm.markov_u().u(static_cast<std::size_t>(n));
        while (next_code < codes.size() && codes[next_code].value == n) {
            const auto& pc = codes[next_code++];
            const double weight = un * std::ldexp(1.0, -static_cast<int>(pc.code.norm()));
            full += weight;
            if (pc.code.digit(1) == 0) restricted += weight;
        }
        const double tower = pm.tower_corr().at(n).to_double();
        diff += un * std::abs((pm.tower_corr().at(n) - pm.tower_corr().at(n + shift)).to_double());
        std::optional<double> ratio;
        if (full > 0.0) ratio = diff / full;
        rows.push_back({n, un, tower, un * tower, full, restricted, diff, ratio});
    }
    return rows;
}

ZeroTypeReport zero_type_report(const ProductModel& pm, std::vector<std::int64_t> checkpoints) {
    const std::int64_t horizon = pm.horizon();
    if (checkpoints.empty()) {
        for (const auto& t : pm.growth().terms()) {
            if (t > horizon) break;
            checkpoints.push_back(t.get_si());
        }
        checkpoints.push_back(horizon + 1);
    }
    std::sort(checkpoints.begin(), checkpoints.end());
    ZeroTypeReport report{{}, true, false};
    for (std::size_t i = 0; i + 1 < checkpoints.size(); ++i) {
        const std::int64_t lo = std::max<std::int64_t>(checkpoints[i], 1);
        const std::int64_t hi = std::min<std::int64_t>(checkpoints[i + 1], horizon + 1);
        double best = 0.0;
        for (std::int64_t n = lo; n < hi; ++n) best = std::max(best, product_correlation(pm, n));
        if (!report.windows.empty() && !(best < report.windows.back().max_correlation)) {
            report.monotone_decreasing = false;
        }
        report.windows.push_back({checkpoints[i], checkpoints[i + 1], best});
    }
    const std::size_t m = pm.markov_u().horizon();
    if (m >= 10) {
        const std::size_t early = (m + 9) / 10;
        report.markov_u_decays = pm.markov_u().u(m) < 0.5 * pm.markov_u().u(early);
    }
    return report;
}

} // namespace rwm
