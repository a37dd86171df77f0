#pragma once

// Run configuration: flat key = value text in [sections].
//
//   [run]       precision
//   [growth]    kind = peres|explicit, multipliers, q1, length, terms, g2_t
//   [lifetime]  the spec used by `renewal`; further specs as [lifetime:NAME]
//               kind = powerlaw|delta|geometric|kaluza|masses|csv
//   [tower]     n_max, depth (auto or integer), series_n_max
//   [renewal]   lifetime, horizon, tail_bound, checkpoints, window,
//               theta_min, theta_max, theta_points, integral_cells
//   [product]   lifetime (required), n_max
//
// Unknown sections or keys are rejected.

#include "rwm/numeric.hpp"
#include "rwm/renewal_core.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rwm {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Precision { double_precision, exact };

struct GrowthSpec {
    enum class Kind { peres, explicit_terms } kind = Kind::peres;
    std::vector<std::int64_t> multipliers{3}; // last value repeats
    BigInt q1 = 1;
    std::size_t length = 12;
    std::vector<BigInt> terms;
    std::vector<Rational> g2_t;
};

struct LifetimeSpec {
    enum class Kind { powerlaw, delta, geometric, kaluza, masses, csv } kind = Kind::powerlaw;
    std::string name;
    double alpha = 0.8;
    std::size_t prefix = 100000;
    std::size_t delta_at = 1;
    Rational p{1, 2};
    KaluzaRule rule = KaluzaRule::harmonic;
    double beta = 1.0;
    std::vector<Rational> masses;
    std::filesystem::path csv_path;
};

struct TowerSpec {
    std::int64_t n_max = 200;
    std::optional<unsigned> depth; // nullopt = auto
    std::int64_t series_n_max = 10000;
};

struct RenewalSpec {
    std::string lifetime = "lifetime";
    std::size_t horizon = 100001;
    std::size_t tail_bound = 100000;
    std::vector<std::size_t> checkpoints{1000, 10000, 100000};
    double window = 0.5;
    double theta_min = 1e-4;
    double theta_max = 1e-1;
    std::size_t theta_points = 200;
    std::size_t integral_cells = 400;
};

struct ProductSpec {
    std::string lifetime;
    std::int64_t n_max = 10000;
};

struct RunConfig {
    Precision precision = Precision::double_precision;
    GrowthSpec growth;
    std::map<std::string, LifetimeSpec> lifetimes;
    TowerSpec tower;
    RenewalSpec renewal;
    ProductSpec product;

    /// Resolved settings as sorted "section.key" -> value; echoed into reports.
    std::map<std::string, std::string> echo;
    /// CRC-32 of the echo, as 8 hex digits.
    std::string hash;

    const LifetimeSpec& lifetime(const std::string& name) const;
};

/// Text of the configuration used when no file is given.
std::string default_config_text();

/// Throws ConfigError on malformed input. relative csv paths resolve against base_dir.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Re-derives echo and hash after a command-line override.
void set_precision(RunConfig& cfg, Precision precision);

std::string to_string(Precision precision);
std::string to_string(KaluzaRule rule);

} // namespace rwm
