#include "rwm/errors.hpp"
#include "rwm/renewal_core.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

namespace rwm {

double power_tail_sum(double s, std::uint64_t first) {
    if (!(s > 1.0)) throw InvalidArgument("power tail needs exponent > 1");
    if (first < 1) throw InvalidArgument("power tail starts at n >= 1");
    // A few terms directly, then Euler-Maclaurin from a = first + 16.
    constexpr std::uint64_t direct = 16;
    double head = 0.0;
    for (std::uint64_t n = first + direct; n-- > first;) head += std::pow(static_cast<double>(n), -s);
    const double a = static_cast<double>(first + direct);
    const double g = std::pow(a, -s);
    double em = a * g / (s - 1.0) + 0.5 * g;
    em += s * g / (12.0 * a);
    em -= s * (s + 1) * (s + 2) * g / (720.0 * a * a * a);
    em += s * (s + 1) * (s + 2) * (s + 3) * (s + 4) * g / (30240.0 * std::pow(a, 5));
    em -= s * (s + 1) * (s + 2) * (s + 3) * (s + 4) * (s + 5) * (s + 6) * g / (1209600.0 * std::pow(a, 7));
    return em + head;
}

LifetimeDistribution::LifetimeDistribution(std::vector<double> prefix, TailModel tail,
                                           double tolerance)
    : prefix_(std::move(prefix)), tail_(tail) {
    if (const auto* pl = std::get_if<PowerLawTail>(&tail_)) {
        if (!(pl->exponent > 1.0) || !(pl->normalizer > 0.0)) {
            throw InvalidArgument("power-law tail needs exponent > 1 and positive normalizer");
        }
    }
    if (const auto* geo = std::get_if<GeometricTail>(&tail_)) {
        if (!(geo->p > 0.0 && geo->p <= 1.0)) throw InvalidArgument("geometric p must be in (0,1]");
    }
    for (std::size_t i = 0; i < prefix_.size(); ++i) {
        if (!(prefix_[i] >= 0.0) || !std::isfinite(prefix_[i])) {
            throw InvalidArgument("lifetime mass f_" + std::to_string(i + 1) +
                                  " is negative or not finite");
        }
    }
    suffix_.assign(prefix_.size() + 1, 0.0);
    for (std::size_t i = prefix_.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] + prefix_[i];
    const double total = tail_mass(1);
    if (std::abs(total - 1.0) > tolerance) {
        throw InvalidArgument("lifetime masses sum to " + format_double(total) + ", not 1");
    }
    if (!has_tail() && total <= 0.0) throw InvalidArgument("lifetime has no mass");
}

double LifetimeDistribution::analytic_mass(std::size_t n) const {
    if (const auto* pl = std::get_if<PowerLawTail>(&tail_)) {
        return std::pow(static_cast<double>(n), -pl->exponent) / pl->normalizer;
    }
    if (const auto* geo = std::get_if<GeometricTail>(&tail_)) {
        return geo->p * std::pow(1.0 - geo->p, static_cast<double>(n - 1));
    }
    return 0.0;
}

double LifetimeDistribution::analytic_tail_from(std::size_t first) const {
    if (const auto* pl = std::get_if<PowerLawTail>(&tail_)) {
        return power_tail_sum(pl->exponent, first) / pl->normalizer;
    }
    if (const auto* geo = std::get_if<GeometricTail>(&tail_)) {
        return std::pow(1.0 - geo->p, static_cast<double>(first - 1));
    }
    return 0.0;
}

double LifetimeDistribution::mass(std::size_t n) const {
    if (n == 0) throw InvalidArgument("lifetime masses start at n = 1");
    if (n <= prefix_.size()) return prefix_[n - 1];
    return analytic_mass(n);
}

double LifetimeDistribution::tail_mass(std::size_t first) const {
    if (first == 0) first = 1;
    if (first <= prefix_.size()) return suffix_[first - 1] + analytic_tail_from(prefix_.size() + 1);
    return analytic_tail_from(first);
}

std::size_t LifetimeDistribution::support_gcd() const {
    if (has_tail()) return 1;
    std::size_t g = 0;
    for (std::size_t i = 0; i < prefix_.size(); ++i) {
        if (prefix_[i] > 0.0) g = std::gcd(g, i + 1);
    }
    return g;
}

std::vector<double> LifetimeDistribution::dense_masses(std::size_t count) const {
    std::vector<double> out(count);
    for (std::size_t n = 1; n <= count; ++n) out[n - 1] = mass(n);
    return out;
}

LifetimeDistribution delta_lifetime(std::size_t n) {
    if (n < 1) throw InvalidArgument("delta lifetime needs n >= 1");
    std::vector<double> masses(n, 0.0);
    masses.back() = 1.0;
    return LifetimeDistribution::from_masses(std::move(masses));
}

LifetimeDistribution geometric_lifetime(double p) {
    if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("geometric p must be in (0,1]");
    std::vector<double> masses;
    double weight = p;
    // Store the bulk explicitly; the analytic tail covers the rest.
    while (masses.size() < 4096 && (masses.empty() || weight > 1e-18)) {
        masses.push_back(weight);
        weight *= 1.0 - p;
    }
    return LifetimeDistribution(std::move(masses), GeometricTail{p});
}

PowerLawLifetime powerlaw_lifetime(double alpha, std::size_t prefix) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("power-law alpha must be in (0,1)");
    if (prefix < 1) throw InvalidArgument("power-law prefix must be >= 1");
    const double s = 1.0 + alpha;
    const double z = power_tail_sum(s, 1);
    std::vector<double> masses(prefix);
    for (std::size_t n = 1; n <= prefix; ++n) masses[n - 1] = std::pow(static_cast<double>(n), -s) / z;
    LifetimeDistribution f(std::move(masses), PowerLawTail{s, z});
    const double prefix_mass = 1.0 - f.tail_mass(prefix + 1);
    return {std::move(f), alpha, z, prefix_mass};
}

LifetimeDistribution load_lifetime_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open lifetime CSV " + path.string());
    std::vector<double> masses;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw InvalidArgument(path.string() + ":" + std::to_string(line_no) + ": expected n,f_n");
        }
        std::size_t n = 0;
        double value = 0.0;
        try {
            n = std::stoul(line.substr(0, comma));
            value = std::stod(line.substr(comma + 1));
        } catch (const std::exception&) {
            if (line_no == 1) continue; // header row
            throw InvalidArgument(path.string() + ":" + std::to_string(line_no) + ": bad number");
        }
        if (n < 1) throw InvalidArgument(path.string() + ": lifetime index must be >= 1");
        if (masses.size() < n) masses.resize(n, 0.0);
        masses[n - 1] = value;
    }
    return LifetimeDistribution::from_masses(std::move(masses), 1e-9);
}

ExactLifetime::ExactLifetime(std::vector<Rational> masses) : masses_(std::move(masses)) {
    Rational total = 0;
    for (std::size_t i = 0; i < masses_.size(); ++i) {
        masses_[i].canonicalize();
        if (masses_[i] < 0) {
            throw InvalidArgument("lifetime mass f_" + std::to_string(i + 1) + " is negative");
        }
        total += masses_[i];
    }
    if (total != 1) throw InvalidArgument("exact lifetime masses sum to " + to_string(total) + ", not 1");
}

Rational ExactLifetime::mass(std::size_t n) const {
    if (n == 0) throw InvalidArgument("lifetime masses start at n = 1");
    return n <= masses_.size() ? masses_[n - 1] : Rational(0);
}

LifetimeDistribution ExactLifetime::to_double() const {
    std::vector<double> masses;
    masses.reserve(masses_.size());
    for (const auto& m : masses_) masses.push_back(m.get_d());
    return LifetimeDistribution::from_masses(std::move(masses));
}

} // namespace rwm
