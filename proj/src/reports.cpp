#include "rwm/reports.hpp"

#include "rwm/errors.hpp"
#include "rwm/fourier.hpp"
#include "rwm/growth_codes.hpp"
#include "rwm/odometer_tower.hpp"
#include "rwm/product_models.hpp"
#include "rwm/renewal_core.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace rwm {

using nlohmann::json;

namespace {

std::string d(double x) { return format_double(x); }

class Writer {
public:
    Writer(const RunConfig& cfg, const CommandOptions& opts) : cfg_(cfg), dir_(opts.out_dir) {
        std::filesystem::create_directories(dir_);
    }

    // `body` starts with the header row.
    void csv(const std::string& name, const std::string& body) const {
        write(name, "# config_crc32=" + cfg_.hash + "\n" + body);
    }

    void json_doc(const std::string& name, json doc) const {
        doc["config"] = {{"crc32", cfg_.hash}, {"settings", cfg_.echo}};
        write(name, doc.dump(2) + "\n");
    }

    std::filesystem::path path(const std::string& name) const { return dir_ / name; }

private:
    void write(const std::string& name, const std::string& text) const {
        std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
        out << text;
        if (!out) throw std::runtime_error("write failed for " + (dir_ / name).string());
    }

    const RunConfig& cfg_;
    std::filesystem::path dir_;
};

struct BuiltGrowth {
    GrowthSequence q;
    std::vector<double> inverse_square_partials; // empty unless peres
};

BuiltGrowth build_growth(const GrowthSpec& spec) {
    if (spec.kind == GrowthSpec::Kind::explicit_terms) {
        validate_class(spec.terms);
        return {GrowthSequence(spec.terms), {}};
    }
    std::vector<std::int64_t> a = spec.multipliers;
    while (a.size() + 1 < spec.length) a.push_back(a.back());
    auto peres = make_peres_sequence(a, spec.q1, spec.length);
    return {std::move(peres.q), std::move(peres.inverse_square_partials)};
}

const GrowthSequence& super_growth_or_throw(const GrowthSequence& q) {
    if (!q.is_super_growth()) {
        throw Unsupported("tower reports need a super-growth sequence; this one is " +
                          std::string(to_string(q.growth_class())));
    }
    return q;
}

std::vector<Rational> exact_masses(const LifetimeSpec& spec) {
    switch (spec.kind) {
    case LifetimeSpec::Kind::delta: {
        std::vector<Rational> m(spec.delta_at, Rational(0));
        m.back() = 1;
        return m;
    }
    case LifetimeSpec::Kind::masses: return spec.masses;
    default:
        throw ConfigError("exact precision needs a finitely supported rational lifetime "
                          "(delta or masses) or a harmonic/constant Kaluza rule");
    }
}

LifetimeDistribution build_lifetime(const LifetimeSpec& spec) {
    switch (spec.kind) {
    case LifetimeSpec::Kind::powerlaw: return powerlaw_lifetime(spec.alpha, spec.prefix).f;
    case LifetimeSpec::Kind::delta: return delta_lifetime(spec.delta_at);
    case LifetimeSpec::Kind::geometric: return geometric_lifetime(spec.p.get_d());
    case LifetimeSpec::Kind::masses: {
        std::vector<double> m;
        for (const auto& x : spec.masses) m.push_back(x.get_d());
        return LifetimeDistribution::from_masses(std::move(m));
    }
    case LifetimeSpec::Kind::csv: return load_lifetime_csv(spec.csv_path);
    case LifetimeSpec::Kind::kaluza: break;
    }
    throw ConfigError("lifetime '" + spec.name + "' is a Kaluza rule, not a distribution");
}

RenewalSequence<double> markov_sequence(const LifetimeSpec& spec, std::size_t horizon) {
    if (spec.kind == LifetimeSpec::Kind::kaluza) return kaluza_sequence(spec.rule, horizon, spec.beta);
    return renewal_from_lifetime(build_lifetime(spec), horizon);
}

template <class T>
TailStats<double> to_double_stats(const TailStats<T>& s) {
    TailStats<double> out;
    out.bound = s.bound;
    auto conv = [](const std::vector<T>& v) {
        std::vector<double> r;
        r.reserve(v.size());
        for (const auto& x : v) {
            if constexpr (std::is_same_v<T, double>) {
                r.push_back(x);
            } else {
                r.push_back(x.get_d());
            }
        }
        return r;
    };
    out.c = conv(s.c);
    out.L = conv(s.L);
    out.M = conv(s.M);
    out.V = conv(s.V);
    return out;
}

json kaluza_json(const KaluzaVerdict& v) {
    json j{{"kaluza", v.kaluza}, {"derived_nonnegative", v.derived_nonnegative}};
    j["first_violation"] = v.first_violation ? json(*v.first_violation) : json(nullptr);
    j["first_negative_mass"] = v.first_negative_mass ? json(*v.first_negative_mass) : json(nullptr);
    return j;
}

const char* holds(bool ok) { return ok ? "HOLDS" : "FAILS"; }

} // namespace

void cmd_growth(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log) {
    const Writer out(cfg, opts);
    const auto built = build_growth(cfg.growth);
    const auto& q = built.q;
    const std::size_t K = q.size();

    std::vector<std::vector<Rational>> g2;
    for (const auto& t : cfg.growth.g2_t) g2.push_back(g2_partial_sums(q, t, K));

    std::ostringstream csv;
    csv << "k,q_k,prefix_sum,c_range_lo,c_range_hi,inverse_square_partial";
    for (const auto& t : cfg.growth.g2_t) csv << ",g2_t=" << to_string(t);
    csv << '\n';
    for (std::size_t k = 1; k <= K; ++k) {
        // c(n) = k exactly for q_{k-1} < n <= q_k
        const BigInt lo = k == 1 ? BigInt(1) : BigInt(q.term(k - 1) + 1);
        csv << k << ',' << to_string(q.term(k)) << ',' << to_string(q.prefix_sum(k)) << ','
            << to_string(lo) << ',' << to_string(q.term(k)) << ',';
        if (k >= 2 && k - 2 < built.inverse_square_partials.size()) {
            csv << d(built.inverse_square_partials[k - 2]);
        }
        for (const auto& sums : g2) csv << ',' << to_string(sums[k - 1]);
        csv << '\n';
    }
    out.csv("growth.csv", csv.str());

    json doc;
    doc["class"] = std::string(to_string(q.growth_class()));
    doc["terms"] = to_json(q);
    doc["length"] = K;
    doc["total"] = to_string(q.total());
    json g2j = json::array();
    for (std::size_t i = 0; i < g2.size(); ++i) {
        json sums = json::array();
        for (const auto& s : g2[i]) sums.push_back(to_string(s));
        g2j.push_back({{"t", to_string(cfg.growth.g2_t[i])}, {"partial_sums", sums}});
    }
    doc["g2_partial_sums"] = g2j;

    std::string divergence = "not applicable";
    if (cfg.growth.kind == GrowthSpec::Kind::peres) {
        const auto& p = built.inverse_square_partials;
        divergence = "inconclusive";
        if (p.size() >= 2) {
            const std::size_t half = p.size() / 2;
            const double first = p[half - 1];
            const double second = p.back() - first;
            if (second >= first / 4) divergence = "consistent with divergence";
        }
        std::vector<std::int64_t> used;
        for (std::size_t n = 1; n < K; ++n) {
            used.push_back(cfg.growth.multipliers[std::min(n - 1, cfg.growth.multipliers.size() - 1)]);
        }
        doc["peres"] = {{"multipliers_used", used},
                        {"inverse_square_partials", p},
                        {"divergence", divergence}};
    }
    out.json_doc("growth.json", doc);

    log << "growth: K = " << K << ", class = " << to_string(q.growth_class())
        << ", q_K = " << to_string(q.term(K)) << ", total = " << to_string(q.total()) << '\n';
    if (cfg.growth.kind == GrowthSpec::Kind::peres && !built.inverse_square_partials.empty()) {
        log << "growth: sum 1/a_n^2 over " << built.inverse_square_partials.size()
            << " multipliers = " << d(built.inverse_square_partials.back()) << " (" << divergence
            << ")\n";
    }
}

void cmd_tower(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log) {
    const Writer out(cfg, opts);
    const auto built = build_growth(cfg.growth);
    const auto& q = super_growth_or_throw(built.q);
    const std::int64_t n_max = cfg.tower.n_max;

    const auto exact = correlation_exact_sequence(n_max, q);
    const unsigned auto_l = auto_depth(n_max, q);
    const unsigned depth = cfg.tower.depth.value_or(auto_l);
    if (depth < auto_l && !opts.force) {
        throw ConfigError("depth L = " + std::to_string(depth) + " is below the auto rule c(n_max) + 2 = " +
                          std::to_string(auto_l) + "; pass --force to run anyway");
    }
    if (depth > 40) throw ConfigError("depth L = " + std::to_string(depth) + " is too large to enumerate");
    const auto brute = correlation_bruteforce(n_max, q, depth);

    std::optional<std::int64_t> mismatch;
    for (std::int64_t n = 1; n <= n_max && !mismatch; ++n) {
        if (!(exact.at(n) == brute.at(n))) mismatch = n;
    }

    out.csv("correlations.csv", exact.to_csv());
    json corr = exact.to_json();
    corr["bruteforce_depth"] = depth;
    corr["oracle_match"] = !mismatch.has_value();
    out.json_doc("correlations.json", corr);

    const std::int64_t series_n = cfg.tower.series_n_max;
    const auto returns = return_sequence_report(series_n, q);
    const auto smiley = smiley_series(series_n, q);

    std::ostringstream rcsv;
    rcsv << "n,partial_sum,c,ratio,ratio_decimal\n";
    Dyadic rmin, rmax;
    for (std::size_t i = 0; i < returns.size(); ++i) {
        const auto& r = returns[i];
        rcsv << r.n << ',' << r.partial_sum.fraction() << ',' << r.c << ',' << r.ratio.fraction() << ','
             << r.ratio.decimal() << '\n';
        if (i == 0 || r.ratio < rmin) rmin = r.ratio;
        if (i == 0 || r.ratio > rmax) rmax = r.ratio;
    }
    out.csv("returns.csv", rcsv.str());

    std::ostringstream scsv;
    scsv << "n,difference_sum,c,ratio,ratio_decimal\n";
    const std::int64_t floor_from = q.size() >= 2 ? q.term(2).get_si() : 1;
    std::optional<Dyadic> floor;
    std::int64_t floor_n = 0;
    for (const auto& s : smiley) {
        scsv << s.n << ',' << s.difference_sum.fraction() << ',' << s.c << ',' << s.ratio.fraction()
             << ',' << s.ratio.decimal() << '\n';
        if (s.n >= floor_from && (!floor || s.ratio < *floor)) {
            floor = s.ratio;
            floor_n = s.n;
        }
    }
    out.csv("smiley.csv", scsv.str());

    json checkpoints = json::array();
    for (std::size_t k = 2; k <= std::min<std::size_t>(6, q.size()); ++k) {
        const BigInt& n = q.prefix_sum(k);
        if (n > series_n) break;
        const auto& row = smiley[n.get_si() - 1];
        checkpoints.push_back({{"K", k}, {"n", row.n}, {"ratio", row.ratio.fraction()},
                               {"ratio_decimal", row.ratio.decimal()}});
    }

    json doc;
    doc["growth"] = to_json(q);
    doc["n_max"] = n_max;
    doc["depth"] = depth;
    doc["auto_depth"] = auto_l;
    doc["oracle_match"] = !mismatch.has_value();
    if (mismatch) doc["first_mismatch"] = *mismatch;
    doc["series_n_max"] = series_n;
    doc["returns"] = {{"ratio_min", rmin.fraction()}, {"ratio_max", rmax.fraction()},
                      {"ratio_min_decimal", rmin.decimal()}, {"ratio_max_decimal", rmax.decimal()}};
    json sj{{"window_start", floor_from}, {"checkpoints", checkpoints}};
    if (floor) {
        sj["floor"] = floor->fraction();
        sj["floor_decimal"] = floor->decimal();
        sj["floor_n"] = floor_n;
    }
    doc["smiley"] = sj;
    out.json_doc("tower.json", doc);

    log << "tower: exact vs brute force (depth " << depth << ") for n <= " << n_max << ": "
        << (mismatch ? "MISMATCH at n = " + std::to_string(*mismatch) : std::string("match")) << '\n';
    log << "tower: a_n / 2^c(n) over n <= " << series_n << " in [" << rmin.decimal() << ", "
        << rmax.decimal() << "]\n";
    if (floor) {
        log << "tower: smiley floor over n in [" << floor_from << ", " << series_n << "] = "
            << floor->fraction() << " = " << floor->decimal() << " at n = " << floor_n << '\n';
    }
    if (mismatch) {
        throw OracleMismatch("closed-form and brute-force correlations differ at n = " +
                             std::to_string(*mismatch));
    }
}

void cmd_renewal(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log) {
    const Writer out(cfg, opts);
    const auto& rs = cfg.renewal;
    const auto& spec = cfg.lifetime(rs.lifetime);
    const std::size_t M = rs.horizon;
    const bool exact = cfg.precision == Precision::exact;

    json doc;
    doc["lifetime"] = rs.lifetime;
    doc["precision"] = to_string(cfg.precision);
    doc["horizon"] = M;

    std::optional<LifetimeDistribution> f;
    std::optional<RenewalSequence<double>> u;
    std::vector<std::string> f_col(M + 1), u_col(M + 1), a_col(M + 1);
    std::optional<TailStats<double>> tails;
    std::optional<TailStats<Rational>> exact_tails;
    std::optional<std::size_t> roundtrip_mismatch;

    if (spec.kind == LifetimeSpec::Kind::kaluza) {
        if (exact) {
            if (spec.rule == KaluzaRule::power) {
                throw ConfigError("the power Kaluza rule has no exact form; use double precision");
            }
            const auto ux = kaluza_sequence_exact(spec.rule, M);
            const auto verdict = kaluza_check(ux);
            doc["kaluza"] = kaluza_json(verdict);
            const auto rec = lifetime_from_renewal(ux);
            std::vector<double> ud;
            for (std::size_t n = 0; n <= M; ++n) {
                ud.push_back(ux.u(n).get_d());
                u_col[n] = to_string(ux.u(n));
                a_col[n] = to_string(ux.partial_sum(n));
                if (n >= 1) f_col[n] = to_string(rec.masses[n - 1]);
            }
            u.emplace(std::move(ud));
        } else {
            u.emplace(kaluza_sequence(spec.rule, M, spec.beta));
            const auto verdict = kaluza_check(*u);
            doc["kaluza"] = kaluza_json(verdict);
            const auto rec = lifetime_from_renewal(*u);
            for (std::size_t n = 1; n <= M; ++n) f_col[n] = d(rec.masses[n - 1]);
        }
        doc["tails"] = "skipped: a Kaluza rule defines u only, not a lifetime distribution";
    } else if (exact) {
        const ExactLifetime fx(exact_masses(spec));
        const auto ux = renewal_from_lifetime(fx, M);
        const auto rec = lifetime_from_renewal(ux);
        for (std::size_t n = 1; n <= M && !roundtrip_mismatch; ++n) {
            if (rec.masses[n - 1] != fx.mass(n)) roundtrip_mismatch = n;
        }
        std::vector<double> ud;
        for (std::size_t n = 0; n <= M; ++n) {
            ud.push_back(ux.u(n).get_d());
            u_col[n] = to_string(ux.u(n));
            a_col[n] = to_string(ux.partial_sum(n));
            if (n >= 1) f_col[n] = to_string(fx.mass(n));
        }
        u.emplace(std::move(ud));
        f.emplace(fx.to_double());
        exact_tails = tail_stats(fx, rs.tail_bound);
        tails = to_double_stats(*exact_tails);
        doc["roundtrip_exact"] = !roundtrip_mismatch.has_value();
        doc["tail_identity_exact"] = tail_identity_exact(*exact_tails);
    } else {
        f.emplace(build_lifetime(spec));
        u.emplace(renewal_from_lifetime(*f, M));
        tails = tail_stats(*f, rs.tail_bound);
        for (std::size_t n = 1; n <= M; ++n) f_col[n] = d(f->mass(n));
        doc["tail_identity_defect"] = tail_identity_defect(*tails);
    }
    if (!exact) {
        for (std::size_t n = 0; n <= M; ++n) {
            u_col[n] = d(u->u(n));
            a_col[n] = d(u->partial_sum(n));
        }
    }

    {
        std::ostringstream csv;
        csv << "n,f_n,u_n,a_n\n";
        for (std::size_t n = 1; n <= M; ++n) {
            csv << n << ',' << f_col[n] << ',' << u_col[n] << ',' << a_col[n] << '\n';
        }
        out.csv("renewal.csv", csv.str());
    }

    if (f) {
        doc["aperiodic"] = f->aperiodic();
        doc["support_gcd"] = f->support_gcd();
    }

    if (tails) {
        const auto ph = pointinghand_ratios(*tails, rs.window);
        const auto bc = bicycle_ratio(*tails, rs.window);
        std::ostringstream csv;
        csv << "N,c_N,L_N,M_N,V_N,pointinghand_ratio,bicycle_ratio\n";
        for (std::size_t N = 1; N <= tails->bound; ++N) {
            csv << N << ',';
            if (exact_tails) {
                csv << to_string(exact_tails->c[N]) << ',' << to_string(exact_tails->L[N]) << ','
                    << to_string(exact_tails->M[N]) << ',' << to_string(exact_tails->V[N]);
            } else {
                csv << d(tails->c[N]) << ',' << d(tails->L[N]) << ',' << d(tails->M[N]) << ','
                    << d(tails->V[N]);
            }
            csv << ',' << d(ph.ratios[N - 1]) << ',' << d(bc.ratios[N - 1]) << '\n';
        }
        out.csv("tails.csv", csv.str());

        doc["pointinghand"] = {{"window_start", ph.window_start}, {"window_end", tails->bound},
                               {"limsup_estimate", ph.limsup_estimate},
                               {"threshold", ph.threshold}, {"threshold_text", "1/(sqrt5+1)"},
                               {"holds", ph.holds}};
        doc["bicycle"] = {{"window_start", bc.window_start}, {"limsup_estimate", bc.limsup_estimate},
                          {"fitted_r", bc.fitted_r}, {"r_bound", bc.r_bound},
                          {"bound_holds_in_window", bc.bound_holds_in_window},
                          {"threshold", bc.threshold}, {"threshold_text", "1/sqrt5"},
                          {"below_threshold", bc.below_threshold}};
        log << "renewal: pointinghand limsup of N c_N / L(N) over N in [" << ph.window_start << ", "
            << tails->bound << "] = " << d(ph.limsup_estimate) << ", threshold 1/(sqrt5+1) = "
            << d(ph.threshold) << ": " << holds(ph.holds) << '\n';
        log << "renewal: bicycle R/(1-R) = " << d(bc.r_bound) << " with R = " << d(bc.fitted_r)
            << ", threshold 1/sqrt5 = " << d(bc.threshold) << ": " << holds(bc.below_threshold)
            << "; N c_N <= R/(1-R) M(N) across the window: "
            << (bc.bound_holds_in_window ? "yes" : "no") << '\n';
    }

    {
        std::vector<std::size_t> cps;
        for (std::size_t n : rs.checkpoints) {
            if (n + 1 <= M) cps.push_back(n);
        }
        std::sort(cps.begin(), cps.end());
        cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
        const auto points = smoothness_ratio(*u, cps);
        std::optional<SquaredVariation> sq;
        if (!cps.empty()) sq = squared_variation(*u, cps.back());

        std::ostringstream csv;
        csv << "n,variation,partial_sum,smoothness_ratio,squared_variation\n";
        bool decreasing = true;
        json pj = json::array();
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto& p = points[i];
            const double sqv = sq->partial_sums[p.n - 1];
            csv << p.n << ',' << d(p.variation) << ',' << d(p.partial_sum) << ',' << d(p.ratio) << ','
                << d(sqv) << '\n';
            if (i > 0 && !(p.ratio < points[i - 1].ratio)) decreasing = false;
            pj.push_back({{"n", p.n}, {"variation", p.variation}, {"partial_sum", p.partial_sum},
                          {"ratio", p.ratio}, {"squared_variation", sqv}});
        }
        out.csv("smoothness.csv", csv.str());
        json sj{{"checkpoints", pj}, {"ratio_strictly_decreasing", decreasing}};
        if (sq) {
            sj["squared_variation"] = {{"n", cps.back()}, {"total", sq->total},
                                       {"last_decade_increment", sq->last_decade_increment},
                                       {"relative_increment", sq->relative_increment}};
        }
        doc["smoothness"] = sj;
        if (!points.empty()) {
            log << "renewal: smoothness ratio at";
            for (const auto& p : points) log << " n=" << p.n << ": " << d(p.ratio);
            log << " (" << (decreasing ? "strictly decreasing" : "not decreasing") << ")\n";
            log << "renewal: squared variation to n = " << cps.back() << " = " << d(sq->total)
                << ", last-decade share " << d(sq->relative_increment) << '\n';
        }
    }

    if (f) {
        const auto thetas = log_grid(rs.theta_min, rs.theta_max, rs.theta_points);
        const auto fb = fourier_lower_bound_check(*f, thetas);
        std::ostringstream csv;
        csv << "theta,one_minus_f,one_minus_f_lower,cutoff,mean_below,tail_above,rhs,margin,eta,holds\n";
        for (const auto& r : fb.rows) {
            csv << d(r.theta) << ',' << d(r.one_minus_f) << ',' << d(r.one_minus_f_lower) << ','
                << d(r.cutoff) << ',' << d(r.mean_below) << ',' << d(r.tail_above) << ',' << d(r.rhs)
                << ',' << d(r.margin) << ',' << d(r.eta) << ',' << (r.holds ? 1 : 0) << '\n';
        }
        out.csv("fourier.csv", csv.str());
        const auto integral = integral_criterion(*f, rs.theta_min, rs.theta_max, rs.integral_cells);
        const auto parseval = parseval_check(*f, *u, rs.integral_cells);
        doc["fourier"] = {{"points", fb.rows.size()}, {"all_hold", fb.all_hold},
                          {"min_margin", fb.min_margin}, {"violations", fb.violations.size()}};
        doc["integral_criterion"] = {{"value", integral.value}, {"evaluated", integral.evaluated},
                                     {"skipped", integral.skipped}};
        doc["parseval"] = {{"quadrature", parseval.quadrature}, {"series", parseval.series},
                           {"relative_difference", parseval.relative_difference}};
        log << "renewal: Fourier lower bound on " << fb.rows.size() << " points in ["
            << d(rs.theta_min) << ", " << d(rs.theta_max) << "]: " << holds(fb.all_hold)
            << ", min margin " << d(fb.min_margin) << '\n';
    }

    out.json_doc("renewal.json", doc);
    if (doc.contains("kaluza")) {
        log << "renewal: Kaluza check: " << (doc["kaluza"]["kaluza"].get<bool>() ? "pass" : "FAIL")
            << '\n';
    }
    if (roundtrip_mismatch) {
        throw OracleMismatch("exact roundtrip f -> u -> f differs at n = " +
                             std::to_string(*roundtrip_mismatch));
    }
}

void cmd_product(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log) {
    const Writer out(cfg, opts);
    if (cfg.product.lifetime.empty()) throw ConfigError("[product] needs a lifetime spec name");
    const auto& spec = cfg.lifetime(cfg.product.lifetime);
    const auto built = build_growth(cfg.growth);
    const auto& q = super_growth_or_throw(built.q);
    const std::int64_t n_max = cfg.product.n_max;
    const std::int64_t H = n_max + q.term(1).get_si();

    auto tower = correlation_exact_sequence(H, q);
    const ProductModel pm(markov_sequence(spec, static_cast<std::size_t>(H)), std::move(tower));
    const auto rows = product_series(pm, n_max);
    const auto zt = zero_type_report(pm);

    std::ostringstream csv;
    csv << "n,markov_u,tower,product,code_sum,restricted_sum,difference_sum,difference_ratio\n";
    std::optional<double> floor;
    std::int64_t floor_n = 0;
    std::optional<double> cmp_min, cmp_max;
    for (const auto& r : rows) {
        csv << r.n << ',' << d(r.markov_u) << ',' << d(r.tower) << ',' << d(r.product) << ','
            << d(r.code_sum) << ',' << d(r.restricted_sum) << ',' << d(r.difference_sum) << ','
            << (r.ratio ? d(*r.ratio) : std::string()) << '\n';
        if (r.ratio && (!floor || *r.ratio < *floor)) {
            floor = *r.ratio;
            floor_n = r.n;
        }
        if (r.code_sum > 0) {
            const double c = r.restricted_sum / r.code_sum;
            if (!cmp_min || c < *cmp_min) cmp_min = c;
            if (!cmp_max || c > *cmp_max) cmp_max = c;
        }
    }
    out.csv("product.csv", csv.str());

    const bool zero_type = zt.monotone_decreasing && zt.markov_u_decays;
    const std::string note = zero_type ? "window maxima decrease; consistent with zero type"
                                       : "NOT zero type: window maxima do not decay";
    json windows = json::array();
    for (const auto& w : zt.windows) {
        windows.push_back({{"lo", w.lo}, {"hi", w.hi}, {"max_correlation", w.max_correlation}});
    }
    json doc;
    doc["lifetime"] = cfg.product.lifetime;
    doc["n_max"] = n_max;
    doc["growth"] = to_json(q);
    doc["difference_ratio"] = floor ? json{{"floor", *floor}, {"floor_n", floor_n}} : json(nullptr);
    doc["comparability"] = cmp_min ? json{{"restricted_over_full_min", *cmp_min},
                                           {"restricted_over_full_max", *cmp_max}}
                                   : json(nullptr);
    doc["zero_type"] = {{"windows", windows}, {"monotone_decreasing", zt.monotone_decreasing},
                        {"markov_u_decays", zt.markov_u_decays}, {"note", note}};
    out.json_doc("product.json", doc);

    if (floor) {
        log << "product: difference-ratio floor over n <= " << n_max << " = " << d(*floor)
            << " at n = " << floor_n << '\n';
    } else {
        log << "product: difference ratio undefined (code sums vanish)\n";
    }
    log << "product: window maxima";
    for (const auto& w : zt.windows) log << " [" << w.lo << "," << w.hi << "):" << d(w.max_correlation);
    log << "\nproduct: " << note << '\n';
}

void cmd_all(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log) {
    cmd_growth(cfg, opts, log);
    cmd_tower(cfg, opts, log);
    cmd_renewal(cfg, opts, log);
    cmd_product(cfg, opts, log);
}

int run_command(const std::string& name, const RunConfig& cfg, const CommandOptions& opts,
                std::ostream& log, std::ostream& err) {
    try {
        if (name == "growth") {
            cmd_growth(cfg, opts, log);
        } else if (name == "tower") {
            cmd_tower(cfg, opts, log);
        } else if (name == "renewal") {
            cmd_renewal(cfg, opts, log);
        } else if (name == "product") {
            cmd_product(cfg, opts, log);
        } else if (name == "all") {
            cmd_all(cfg, opts, log);
        } else {
            err << "rwm: unknown command '" << name << "'\n";
            return exit_config;
        }
        return exit_ok;
    } catch (const OracleMismatch& e) {
        err << "rwm: oracle mismatch: " << e.what() << '\n';
        return exit_oracle;
    } catch (const ConfigError& e) {
        err << "rwm: config error: " << e.what() << '\n';
        return exit_config;
    } catch (const KaluzaViolation& e) {
        err << "rwm: rejected: " << e.what() << " (violation index " << e.index << ")\n";
        return exit_config;
    } catch (const InvalidArgument& e) {
        err << "rwm: invalid input: " << e.what() << '\n';
        return exit_config;
    } catch (const Unsupported& e) {
        err << "rwm: unsupported: " << e.what() << '\n';
        return exit_config;
    } catch (const OutOfRange& e) {
        err << "rwm: out of range: " << e.what() << '\n';
        return exit_range;
    } catch (const DepthError& e) {
        err << "rwm: depth error: " << e.what() << '\n';
        return exit_range;
    } catch (const std::exception& e) {
        err << "rwm: error: " << e.what() << '\n';
        return exit_failure;
    }
}

} // namespace rwm
