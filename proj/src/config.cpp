#include "rwm/config.hpp"

#include "rwm/errors.hpp"

#include <boost/crc.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace rwm {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <class T, class Convert>
std::vector<T> parse_list(const std::string& where, const std::string& s, Convert convert) {
    std::vector<T> out;
    for (const auto& item : split_list(s)) {
        try {
            out.push_back(convert(item));
        } catch (const std::exception&) {
            throw ConfigError(where + ": cannot parse '" + item + "'");
        }
    }
    return out;
}

class Section {
public:
    Section(std::string name, const pt::ptree* tree, std::set<std::string> allowed)
        : name_(std::move(name)), tree_(tree) {
        if (!tree_) return;
        for (const auto& [key, child] : *tree_) {
            if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in [" + name_ + "]");
        }
    }

    std::optional<std::string> raw(const std::string& key) const {
        if (!tree_) return std::nullopt;
        const auto it = tree_->find(key);
        if (it == tree_->not_found()) return std::nullopt;
        return trim(it->second.data());
    }

    std::string where(const std::string& key) const { return "[" + name_ + "] " + key; }

    template <class Convert>
    auto get(const std::string& key, Convert convert) const -> std::optional<decltype(convert(""))> {
        const auto value = raw(key);
        if (!value) return std::nullopt;
        try {
            return convert(*value);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError(where(key) + ": cannot parse '" + *value + "'");
        }
    }

private:
    std::string name_;
    const pt::ptree* tree_;
};

std::size_t to_size(const std::string& s) {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size() || v < 0) throw std::invalid_argument(s);
    return static_cast<std::size_t>(v);
}

std::int64_t to_int(const std::string& s) {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
}

double to_real(const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += items[i];
    }
    return out;
}

template <class T, class Render>
std::string join_with(const std::vector<T>& items, Render render) {
    std::vector<std::string> parts;
    for (const auto& item : items) parts.push_back(render(item));
    return join(parts);
}

std::string lifetime_kind_name(LifetimeSpec::Kind kind) {
    switch (kind) {
    case LifetimeSpec::Kind::powerlaw: return "powerlaw";
    case LifetimeSpec::Kind::delta: return "delta";
    case LifetimeSpec::Kind::geometric: return "geometric";
    case LifetimeSpec::Kind::kaluza: return "kaluza";
    case LifetimeSpec::Kind::masses: return "masses";
    case LifetimeSpec::Kind::csv: return "csv";
    }
    return "";
}

LifetimeSpec parse_lifetime(const std::string& name, const std::string& section_name,
                            const pt::ptree& tree, const std::filesystem::path& base_dir) {
    Section s(section_name, &tree,
              {"kind", "alpha", "prefix", "n", "p", "rule", "beta", "masses", "path"});
    LifetimeSpec spec;
    spec.name = name;
    const auto kind = s.raw("kind");
    if (!kind) throw ConfigError("[" + section_name + "] needs kind");
    static const std::map<std::string, LifetimeSpec::Kind> kinds{
        {"powerlaw", LifetimeSpec::Kind::powerlaw}, {"delta", LifetimeSpec::Kind::delta},
        {"geometric", LifetimeSpec::Kind::geometric}, {"kaluza", LifetimeSpec::Kind::kaluza},
        {"masses", LifetimeSpec::Kind::masses},       {"csv", LifetimeSpec::Kind::csv}};
    const auto it = kinds.find(*kind);
    if (it == kinds.end()) throw ConfigError(s.where("kind") + ": unknown lifetime kind '" + *kind + "'");
    spec.kind = it->second;
    if (auto v = s.get("alpha", to_real)) spec.alpha = *v;
    if (auto v = s.get("prefix", to_size)) spec.prefix = *v;
    if (auto v = s.get("n", to_size)) spec.delta_at = *v;
    if (auto v = s.get("p", [](const std::string& x) { return parse_rational(x); })) spec.p = *v;
    if (auto v = s.get("beta", to_real)) spec.beta = *v;
    if (auto rule = s.raw("rule")) {
        if (*rule == "harmonic") {
            spec.rule = KaluzaRule::harmonic;
        } else if (*rule == "constant") {
            spec.rule = KaluzaRule::constant;
        } else if (*rule == "power") {
            spec.rule = KaluzaRule::power;
        } else {
            throw ConfigError(s.where("rule") + ": unknown Kaluza rule '" + *rule + "'");
        }
    }
    if (auto v = s.raw("masses")) {
        spec.masses = parse_list<Rational>(s.where("masses"), *v,
                                           [](const std::string& x) { return parse_rational(x); });
    }
    if (auto v = s.raw("path")) {
        spec.csv_path = *v;
        if (spec.csv_path.is_relative() && !base_dir.empty()) spec.csv_path = base_dir / spec.csv_path;
    }
    switch (spec.kind) {
    case LifetimeSpec::Kind::powerlaw:
        if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) throw ConfigError(s.where("alpha") + " must be in (0,1)");
        if (spec.prefix < 1) throw ConfigError(s.where("prefix") + " must be positive");
        break;
    case LifetimeSpec::Kind::delta:
        if (spec.delta_at < 1) throw ConfigError(s.where("n") + " must be >= 1");
        break;
    case LifetimeSpec::Kind::geometric:
        if (!(spec.p > 0 && spec.p <= 1)) throw ConfigError(s.where("p") + " must be in (0,1]");
        break;
    case LifetimeSpec::Kind::masses:
        if (spec.masses.empty()) throw ConfigError("[" + section_name + "] needs masses");
        break;
    case LifetimeSpec::Kind::csv:
        if (spec.csv_path.empty()) throw ConfigError("[" + section_name + "] needs path");
        if (!std::filesystem::exists(spec.csv_path)) {
            throw ConfigError(s.where("path") + ": file not found: " + spec.csv_path.string());
        }
        break;
    case LifetimeSpec::Kind::kaluza:
        if (spec.rule == KaluzaRule::power && !(spec.beta > 0.0)) {
            throw ConfigError(s.where("beta") + " must be positive");
        }
        break;
    }
    return spec;
}

void render_echo(RunConfig& cfg) {
    auto& e = cfg.echo;
    e.clear();
    e["run.precision"] = to_string(cfg.precision);
    const auto& g = cfg.growth;
    if (g.kind == GrowthSpec::Kind::peres) {
        e["growth.kind"] = "peres";
        e["growth.multipliers"] = join_with(g.multipliers, [](std::int64_t a) { return std::to_string(a); });
        e["growth.q1"] = to_string(g.q1);
        e["growth.length"] = std::to_string(g.length);
    } else {
        e["growth.kind"] = "explicit";
        e["growth.terms"] = join_with(g.terms, [](const BigInt& t) { return to_string(t); });
    }
    e["growth.g2_t"] = join_with(g.g2_t, [](const Rational& t) { return to_string(t); });

    for (const auto& [name, spec] : cfg.lifetimes) {
        const std::string p = "lifetime:" + name + ".";
        e[p + "kind"] = lifetime_kind_name(spec.kind);
        switch (spec.kind) {
        case LifetimeSpec::Kind::powerlaw:
            e[p + "alpha"] = format_double(spec.alpha);
            e[p + "prefix"] = std::to_string(spec.prefix);
            break;
        case LifetimeSpec::Kind::delta: e[p + "n"] = std::to_string(spec.delta_at); break;
        case LifetimeSpec::Kind::geometric: e[p + "p"] = to_string(spec.p); break;
        case LifetimeSpec::Kind::kaluza:
            e[p + "rule"] = to_string(spec.rule);
            if (spec.rule == KaluzaRule::power) e[p + "beta"] = format_double(spec.beta);
            break;
        case LifetimeSpec::Kind::masses:
            e[p + "masses"] = join_with(spec.masses, [](const Rational& m) { return to_string(m); });
            break;
        case LifetimeSpec::Kind::csv: e[p + "path"] = spec.csv_path.filename().string(); break;
        }
    }

    e["tower.n_max"] = std::to_string(cfg.tower.n_max);
    e["tower.depth"] = cfg.tower.depth ? std::to_string(*cfg.tower.depth) : "auto";
    e["tower.series_n_max"] = std::to_string(cfg.tower.series_n_max);

    const auto& r = cfg.renewal;
    e["renewal.lifetime"] = r.lifetime;
    e["renewal.horizon"] = std::to_string(r.horizon);
    e["renewal.tail_bound"] = std::to_string(r.tail_bound);
    e["renewal.checkpoints"] = join_with(r.checkpoints, [](std::size_t n) { return std::to_string(n); });
    e["renewal.window"] = format_double(r.window);
    e["renewal.theta_min"] = format_double(r.theta_min);
    e["renewal.theta_max"] = format_double(r.theta_max);
    e["renewal.theta_points"] = std::to_string(r.theta_points);
    e["renewal.integral_cells"] = std::to_string(r.integral_cells);

    e["product.lifetime"] = cfg.product.lifetime;
    e["product.n_max"] = std::to_string(cfg.product.n_max);

    std::string canonical;
    for (const auto& [k, v] : e) canonical += k + "=" + v + "\n";
    boost::crc_32_type crc;
    crc.process_bytes(canonical.data(), canonical.size());
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%08x", static_cast<unsigned>(crc.checksum()));
    cfg.hash = buf;
}

} // namespace

std::string to_string(Precision precision) {
    return precision == Precision::exact ? "exact" : "double";
}

std::string to_string(KaluzaRule rule) {
    switch (rule) {
    case KaluzaRule::harmonic: return "harmonic";
    case KaluzaRule::constant: return "constant";
    case KaluzaRule::power: return "power";
    }
    return "";
}

const LifetimeSpec& RunConfig::lifetime(const std::string& name) const {
    const auto it = lifetimes.find(name);
    if (it == lifetimes.end()) throw ConfigError("missing lifetime spec '" + name + "'");
    return it->second;
}

std::string default_config_text() {
    return R"(# Default run: Peres growth sequence with a_n = 3, power-law lifetime
# with alpha = 0.8, harmonic Kaluza sequence for the product.
[run]
precision = double

[growth]
kind = peres
multipliers = 3
q1 = 1
length = 12
g2_t = 0, 1/3, 1/2

[lifetime]
kind = powerlaw
alpha = 0.8
prefix = 100000

[lifetime:markov]
kind = kaluza
rule = harmonic

[tower]
n_max = 200
depth = auto
series_n_max = 10000

[renewal]
lifetime = lifetime
horizon = 100001
tail_bound = 100000
checkpoints = 1000, 10000, 100000
window = 0.5
theta_min = 1e-4
theta_max = 1e-1
theta_points = 200
integral_cells = 400

[product]
lifetime = markov
n_max = 10000
)";
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config syntax: ") + e.what());
    }

    RunConfig cfg;
    static const std::set<std::string> fixed{"run", "growth", "tower", "renewal", "product"};
    for (const auto& [name, section] : tree) {
        if (section.empty() && !section.data().empty()) {
            throw ConfigError("key '" + name + "' outside of any section");
        }
        if (name == "lifetime") {
            cfg.lifetimes.emplace("lifetime", parse_lifetime("lifetime", name, section, base_dir));
        } else if (name.rfind("lifetime:", 0) == 0) {
            const std::string label = name.substr(9);
            if (label.empty()) throw ConfigError("empty lifetime spec name");
            cfg.lifetimes.emplace(label, parse_lifetime(label, name, section, base_dir));
        } else if (!fixed.count(name)) {
            throw ConfigError("unknown section [" + name + "]");
        }
    }

    auto child = [&tree](const std::string& name) -> const pt::ptree* {
        const auto it = tree.find(name);
        return it == tree.not_found() ? nullptr : &it->second;
    };

    Section run("run", child("run"), {"precision"});
    if (auto p = run.raw("precision")) {
        if (*p == "double") {
            cfg.precision = Precision::double_precision;
        } else if (*p == "exact") {
            cfg.precision = Precision::exact;
        } else {
            throw ConfigError(run.where("precision") + " must be double or exact");
        }
    }

    Section growth("growth", child("growth"), {"kind", "multipliers", "q1", "length", "terms", "g2_t"});
    auto& g = cfg.growth;
    if (auto kind = growth.raw("kind")) {
        if (*kind == "peres") {
            g.kind = GrowthSpec::Kind::peres;
        } else if (*kind == "explicit") {
            g.kind = GrowthSpec::Kind::explicit_terms;
        } else {
            throw ConfigError(growth.where("kind") + " must be peres or explicit");
        }
    }
    if (auto v = growth.raw("multipliers")) g.multipliers = parse_list<std::int64_t>(growth.where("multipliers"), *v, to_int);
    if (auto v = growth.get("q1", [](const std::string& x) { return parse_bigint(x); })) g.q1 = *v;
    if (auto v = growth.get("length", to_size)) g.length = *v;
    if (auto v = growth.raw("terms")) {
        g.terms = parse_list<BigInt>(growth.where("terms"), *v, [](const std::string& x) { return parse_bigint(x); });
    }
    if (auto v = growth.raw("g2_t")) {
        g.g2_t = parse_list<Rational>(growth.where("g2_t"), *v, [](const std::string& x) { return parse_rational(x); });
    }
    if (g.kind == GrowthSpec::Kind::peres) {
        if (g.multipliers.empty()) throw ConfigError("[growth] multipliers must not be empty");
        if (g.length < 1) throw ConfigError("[growth] length must be positive");
    } else if (g.terms.empty()) {
        throw ConfigError("[growth] explicit kind needs terms");
    }

    Section tower("tower", child("tower"), {"n_max", "depth", "series_n_max"});
    if (auto v = tower.get("n_max", to_int)) cfg.tower.n_max = *v;
    if (auto v = tower.raw("depth"); v && *v != "auto") {
        cfg.tower.depth = static_cast<unsigned>(tower.get("depth", to_size).value());
    }
    if (auto v = tower.get("series_n_max", to_int)) cfg.tower.series_n_max = *v;
    if (cfg.tower.n_max < 1) throw ConfigError("[tower] n_max must be positive");

    Section renewal("renewal", child("renewal"),
                    {"lifetime", "horizon", "tail_bound", "checkpoints", "window", "theta_min",
                     "theta_max", "theta_points", "integral_cells"});
    auto& r = cfg.renewal;
    if (auto v = renewal.raw("lifetime")) r.lifetime = *v;
    if (auto v = renewal.get("horizon", to_size)) r.horizon = *v;
    if (auto v = renewal.get("tail_bound", to_size)) r.tail_bound = *v;
    if (auto v = renewal.raw("checkpoints")) r.checkpoints = parse_list<std::size_t>(renewal.where("checkpoints"), *v, to_size);
    if (auto v = renewal.get("window", to_real)) r.window = *v;
    if (auto v = renewal.get("theta_min", to_real)) r.theta_min = *v;
    if (auto v = renewal.get("theta_max", to_real)) r.theta_max = *v;
    if (auto v = renewal.get("theta_points", to_size)) r.theta_points = *v;
    if (auto v = renewal.get("integral_cells", to_size)) r.integral_cells = *v;
    if (r.horizon < 2) throw ConfigError("[renewal] horizon must be at least 2");
    if (r.tail_bound < 1) throw ConfigError("[renewal] tail_bound must be positive");
    if (!(r.window > 0.0 && r.window <= 1.0)) throw ConfigError("[renewal] window must be in (0,1]");
    if (!(r.theta_min > 0.0 && r.theta_max > r.theta_min)) {
        throw ConfigError("[renewal] need 0 < theta_min < theta_max");
    }
    for (std::size_t n : r.checkpoints) {
        if (n < 1 || n + 1 > r.horizon) {
            throw ConfigError("[renewal] checkpoint " + std::to_string(n) + " needs 1 <= n < horizon");
        }
    }

    Section product("product", child("product"), {"lifetime", "n_max"});
    if (auto v = product.raw("lifetime")) cfg.product.lifetime = *v;
    if (auto v = product.get("n_max", to_int)) cfg.product.n_max = *v;
    if (cfg.product.n_max < 1) throw ConfigError("[product] n_max must be positive");

    render_echo(cfg);
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path.parent_path());
}

void set_precision(RunConfig& cfg, Precision precision) {
    cfg.precision = precision;
    render_echo(cfg);
}

} // namespace rwm
