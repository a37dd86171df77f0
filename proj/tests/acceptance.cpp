// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "rwm/errors.hpp"
#include "rwm/fourier.hpp"
#include "rwm/growth_codes.hpp"
#include "rwm/odometer_tower.hpp"
#include "rwm/product_models.hpp"
#include "rwm/renewal_core.hpp"

#include "support/gen.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

using namespace rwm;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

GrowthSequence peres3(std::size_t length) {
    const std::vector<std::int64_t> a(length, 3);
    return make_peres_sequence(a, 1, length).q;
}

GrowthSequence powers_of_three(std::size_t length) {
    std::vector<BigInt> q{1};
    while (q.size() < length) q.push_back(q.back() * 3);
    return GrowthSequence(std::move(q));
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

Outcome criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    std::size_t compared = 0;
    bool equal = true;
    for (const auto& q : {peres3(7), powers_of_three(7)}) {
        const auto exact = correlation_exact_sequence(200, q);
        const auto brute = correlation_bruteforce(200, q, 7);
        for (std::int64_t n = 1; n <= 200; ++n, ++compared) equal = equal && exact.at(n) == brute.at(n);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {equal && secs < 10.0, std::to_string(compared) + " values equal: " + (equal ? "yes" : "no") +
                                      ", depth 7, " + fmt(secs) + " s (limit 10 s)"};
}

Outcome criterion_2() {
    const GrowthSequence q(std::vector<BigInt>{1, 4, 13, 40});
    std::map<long, std::vector<std::map<std::size_t, int>>> by_value;
    for (int c = 0; c < 81; ++c) {
        std::map<std::size_t, int> digits;
        long value = 0;
        int x = c;
        for (std::size_t k = 1; k <= 4; ++k) {
            const int d = x % 3 - 1;
            x /= 3;
            digits[k] = d;
            value += d * q.term(k).get_si();
        }
        by_value[value].push_back(digits);
    }
    std::size_t collisions = 0;
    for (const auto& [v, codes] : by_value) collisions += codes.size() - 1;
    std::size_t agree = 0;
    for (long n = -58; n <= 58; ++n) {
        const auto enc = encode_value(BigInt(n), q);
        const auto it = by_value.find(n);
        const bool ok = it == by_value.end() ? !enc.has_value()
                                             : enc.has_value() && *enc == SignedCode(it->second.front());
        agree += ok ? 1 : 0;
    }
    return {agree == 117 && collisions == 0, std::to_string(agree) + "/117 values agree with the 81-code enumeration, " +
                                                 std::to_string(collisions) + " collisions"};
}

Outcome criterion_3() {
    const auto q = peres3(12);
    const auto rows = smiley_series(10000, q);
    const Dyadic eighth = Dyadic::inverse_power_of_two(3);
    const Dyadic sixteenth = Dyadic::inverse_power_of_two(4);
    bool checkpoints_ok = true;
    std::string values;
    for (std::size_t K = 2; K <= 6; ++K) {
        const auto& r = rows[q.prefix_sum(K).get_ui() - 1];
        checkpoints_ok = checkpoints_ok && r.ratio >= eighth;
        values += (values.empty() ? "" : ", ") + r.ratio.fraction();
    }
    Dyadic floor = rows[q.term(2).get_ui() - 1].ratio;
    for (std::size_t n = q.term(2).get_ui(); n <= 10000; ++n) floor = std::min(floor, rows[n - 1].ratio);
    return {checkpoints_ok && floor >= sixteenth,
            "checkpoint ratios " + values + " (>= 1/8); floor over [q_2, 10^4] = " + floor.fraction() +
                " (>= 1/16)"};
}

Outcome criterion_4() {
    const auto rows = return_sequence_report(10000, peres3(12));
    Dyadic lo = rows.front().ratio, hi = rows.front().ratio;
    for (const auto& r : rows) {
        lo = std::min(lo, r.ratio);
        hi = std::max(hi, r.ratio);
    }
    const bool ok = lo >= Dyadic::inverse_power_of_two(3) && hi <= Dyadic(2);
    return {ok, "a_n / 2^c(n) over n <= 10^4 in [" + lo.decimal() + ", " + hi.decimal() + "] within [1/8, 2]"};
}

Outcome criterion_5() {
    const auto geo = renewal_from_lifetime(geometric_lifetime(0.5), 10000);
    double worst = 0.0;
    for (std::size_t n = 1; n <= 10000; ++n) worst = std::max(worst, std::abs(geo.u(n) - 0.5));

    bool delta_ok = true;
    const auto d = renewal_from_lifetime(delta_lifetime(1), 10000);
    for (std::size_t n = 0; n <= 10000; ++n) delta_ok = delta_ok && d.u(n) == 1.0;
    const auto dx = renewal_from_lifetime(ExactLifetime({Rational(1)}), 500);
    for (std::size_t n = 0; n <= 500; ++n) delta_ok = delta_ok && dx.u(n) == 1;

    testing::Gen gen(20261016);
    std::size_t roundtrips = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const ExactLifetime f(gen.rational_lifetime(50));
        const std::size_t M = f.support_bound() + 10;
        const auto back = lifetime_from_renewal(renewal_from_lifetime(f, M));
        bool same = back.is_renewal();
        for (std::size_t n = 1; n <= M; ++n) same = same && back.masses[n - 1] == f.mass(n);
        roundtrips += same ? 1 : 0;
    }
    return {worst < 1e-12 && delta_ok && roundtrips == 50,
            "geometric(1/2) max |u_n - 1/2| = " + fmt(worst) + " (< 1e-12); delta_1 u_n = 1: " +
                (delta_ok ? "yes" : "no") + "; exact roundtrips " + std::to_string(roundtrips) + "/50"};
}

Outcome criterion_6() {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t N = 100000;
    const auto r08 = pointinghand_ratios(tail_stats(powerlaw_lifetime(0.8, N).f, N));
    const auto r05 = pointinghand_ratios(tail_stats(powerlaw_lifetime(0.5, N).f, N));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = std::abs(r08.limsup_estimate - 0.2) <= 0.02 && r08.limsup_estimate < pointinghand_threshold &&
                    std::abs(r05.limsup_estimate - 0.5) <= 0.02 && r05.limsup_estimate > pointinghand_threshold &&
                    secs < 30.0;
    return {ok, "alpha 0.8: " + fmt(r08.limsup_estimate) + " (" + (r08.holds ? "holds" : "fails") +
                    "), alpha 0.5: " + fmt(r05.limsup_estimate) + " (" + (r05.holds ? "holds" : "fails") +
                    "), threshold 1/(sqrt5+1) = " + fmt(pointinghand_threshold) + ", " + fmt(secs) +
                    " s (limit 30 s)"};
}

Outcome criterion_7(const RenewalSequence<double>& u) {
    const std::vector<std::size_t> cps{1000, 10000, 100000};
    const auto pts = smoothness_ratio(u, cps);
    const bool decreasing = pts[0].ratio > pts[1].ratio && pts[1].ratio > pts[2].ratio;
    const auto sq = squared_variation(u, 100000);
    return {decreasing && sq.relative_increment < 0.01,
            "smoothness ratio " + fmt(pts[0].ratio) + " > " + fmt(pts[1].ratio) + " > " + fmt(pts[2].ratio) +
                "; squared-variation last-decade share " + fmt(sq.relative_increment) + " (< 0.01)"};
}

Outcome criterion_8(const LifetimeDistribution& f) {
    const auto report = fourier_lower_bound_check(f, log_grid(1e-4, 1e-1, 200));
    return {report.all_hold && report.min_margin > 0.0 && report.rows.size() == 200,
            std::to_string(report.rows.size() - report.violations.size()) + "/200 grid points hold, min margin " +
                fmt(report.min_margin)};
}

Outcome criterion_9() {
    const auto harmonic = kaluza_check(kaluza_sequence_exact(KaluzaRule::harmonic, 300));
    const RenewalSequence<Rational> crafted({1, Rational(1, 2), Rational(2, 5), Rational(1, 10)});
    const auto bad = kaluza_check(crafted);
    const auto bad_d = kaluza_check(RenewalSequence<double>({1.0, 0.5, 0.4, 0.1}));
    std::optional<std::size_t> rejected_at;
    try {
        ProductModel(RenewalSequence<double>({1.0, 0.5, 0.4, 0.1}), correlation_exact_sequence(3, peres3(4)));
    } catch (const KaluzaViolation& e) {
        rejected_at = e.index;
    }
    const bool ok = harmonic.kaluza && harmonic.derived_nonnegative && !bad.kaluza && bad.first_violation == 2u &&
                    bad_d.first_violation == 2u && rejected_at == 2u;
    return {ok, std::string("u_n = 1/(n+1): Kaluza ") + (harmonic.kaluza ? "yes" : "no") + ", derived f >= 0 " +
                    (harmonic.derived_nonnegative ? "yes" : "no") + " (exact, n <= 300); (1, 1/2, 2/5, 1/10) " +
                    "rejected at n = " + (bad.first_violation ? std::to_string(*bad.first_violation) : "none") +
                    " (expected 2)"};
}

Outcome criterion_10() {
    const auto q = peres3(12);
    const ProductModel pm(kaluza_sequence(KaluzaRule::harmonic, 10001), correlation_exact_sequence(10001, q));
    const auto rows = product_series(pm, 10000);
    double floor = INFINITY;
    for (const auto& r : rows) {
        if (r.ratio) floor = std::min(floor, *r.ratio);
    }
    const auto zt = zero_type_report(pm);
    std::string maxima;
    for (const auto& w : zt.windows) maxima += (maxima.empty() ? "" : ", ") + fmt(w.max_correlation);
    return {floor > 0.0 && std::isfinite(floor) && zt.monotone_decreasing,
            "difference-ratio floor " + fmt(floor) + " over n <= 10^4; maxima on [q_k, q_{k+1}) windows " + maxima +
                (zt.monotone_decreasing ? " (decreasing)" : " (not decreasing)")};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome criterion_11() {
    const auto root = fs::temp_directory_path() / "rwm_acceptance_determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    for (const char* run : {"a", "b"}) {
        const std::string cmd = std::string(RWM_CLI_PATH) + " all --out " + (root / run).string() + " > " +
                                (root / (std::string(run) + ".log")).string() + " 2>&1";
        const int status = std::system(cmd.c_str());
        if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
            return {false, std::string("`rwm all` run ") + run + " exited with status " + std::to_string(status)};
        }
    }
    std::size_t files = 0, identical = 0, bytes = 0;
    for (const auto& entry : fs::directory_iterator(root / "a")) {
        ++files;
        const auto a = slurp(entry.path());
        const auto b = slurp(root / "b" / entry.path().filename());
        bytes += a.size();
        identical += a == b ? 1 : 0;
    }
    std::size_t files_b = 0;
    for ([[maybe_unused]] const auto& entry : fs::directory_iterator(root / "b")) ++files_b;
    fs::remove_all(root);
    return {files > 0 && identical == files && files_b == files,
            std::to_string(identical) + "/" + std::to_string(files) + " output files byte-identical (" +
                std::to_string(bytes) + " bytes), default configuration"};
}

} // namespace

int main() {
    int failures = 0;
    auto report = [&failures](int id, const std::string& title, const std::function<Outcome()>& fn) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failures;
        std::printf("[%s] %2d %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
    };

    report(1, "tower correlations, closed form vs brute force", criterion_1);
    report(2, "signed-digit encode/decode vs enumeration", criterion_2);
    report(3, "smiley ratio floor", criterion_3);
    report(4, "return-sequence comparability", criterion_4);
    report(5, "renewal oracles", criterion_5);
    report(6, "pointinghand verdicts", criterion_6);

    // criteria 7 and 8 share the alpha = 0.8 power law
    const auto f = powerlaw_lifetime(0.8, 100000).f;
    std::optional<RenewalSequence<double>> u;
    report(7, "smoothness evidence", [&] {
        u.emplace(renewal_from_lifetime(f, 100001));
        return criterion_7(*u);
    });
    report(8, "Fourier lower bound", [&] { return criterion_8(f); });
    report(9, "Kaluza gate", criterion_9);
    report(10, "product witness", criterion_10);
    report(11, "determinism of `rwm all`", criterion_11);

    std::printf("%d/11 criteria passed\n", 11 - failures);
    return failures == 0 ? 0 : 1;
}
