#include "config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

namespace vircli {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"grid", {"n"}},
        {"potential", {"spec"}},
        {"solver", {"tol", "max_iter", "fd_step", "min_slope"}},
        {"run", {"seed"}},
        {"output", {"dir"}},
        {"simulate", {"steps", "velocity", "Omega"}},
        {"continuum", {"mode", "field", "A", "t0", "eps", "dt"}},
        {"pde", {"alpha", "beta", "b", "initial", "T", "dt", "frames", "svg"}},
        {"oracle", {"trials", "amplitude"}},
    };
    return keys;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& text, const std::string& what) {
    const std::string s = trim(text);
    T value{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw ConfigError(what + ": cannot parse '" + text + "' as a number");
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) throw ConfigError(what + ": value must be finite");
    }
    return value;
}

bool parse_bool(const std::string& text, const std::string& what) {
    const std::string s = trim(text);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError(what + ": expected true or false, got '" + text + "'");
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        out.push_back(parse_number<double>(item, what));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

void check_keys(const pt::ptree& tree) {
    for (const auto& [section, body] : tree) {
        const auto it = known_keys().find(section);
        if (it == known_keys().end()) throw ConfigError("unknown config section [" + section + "]");
        if (!body.data().empty()) throw ConfigError("config section [" + section + "] must hold key = value lines");
        for (const auto& [key, _] : body) {
            if (!it->second.contains(key)) throw ConfigError("unknown config key " + section + "." + key);
        }
    }
}

void apply_override(pt::ptree& tree, const std::string& assignment) {
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
        throw ConfigError("--set expects section.key=value, got '" + assignment + "'");
    }
    const std::string section = trim(assignment.substr(0, dot));
    const std::string key = trim(assignment.substr(dot + 1, eq - dot - 1));
    tree.put(pt::ptree::path_type(section + "/" + key, '/'), trim(assignment.substr(eq + 1)));
}

std::vector<std::string> split_terms(const std::string& spec) {
    // '+' separates terms only when a profile name follows, so "1e+2" survives.
    std::vector<std::string> terms;
    std::size_t start = 0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        if (spec[i] == '+' && i + 1 < spec.size() && std::isalpha(static_cast<unsigned char>(spec[i + 1]))) {
            terms.push_back(trim(spec.substr(start, i - start)));
            start = i + 1;
        }
    }
    terms.push_back(trim(spec.substr(start)));
    return terms;
}

}  // namespace

ExperimentConfig load_config(const std::filesystem::path& path, const Overrides& overrides) {
    pt::ptree tree;
    if (!path.empty()) {
        if (!std::filesystem::exists(path)) throw ConfigError("config file " + path.string() + " does not exist");
        try {
            pt::ini_parser::read_ini(path.string(), tree);
        } catch (const pt::ini_parser_error& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
    }
    for (const auto& a : overrides.assignments) apply_override(tree, a);
    check_keys(tree);

    ExperimentConfig cfg;
    auto get = [&](const char* section, const char* key) -> std::optional<std::string> {
        const auto v = tree.get_optional<std::string>(pt::ptree::path_type(std::string(section) + "/" + key, '/'));
        return v ? std::optional<std::string>(*v) : std::nullopt;
    };
    auto real = [&](const char* s, const char* k, double& dst) {
        if (auto v = get(s, k)) dst = parse_number<double>(*v, std::string(s) + "." + k);
    };
    auto integer = [&](const char* s, const char* k, auto& dst) {
        if (auto v = get(s, k)) dst = parse_number<std::remove_reference_t<decltype(dst)>>(*v, std::string(s) + "." + k);
    };
    auto text = [&](const char* s, const char* k, std::string& dst) {
        if (auto v = get(s, k)) dst = trim(*v);
    };

    integer("grid", "n", cfg.n);
    text("potential", "spec", cfg.potential);
    real("solver", "tol", cfg.solver.tol);
    integer("solver", "max_iter", cfg.solver.max_iter);
    real("solver", "fd_step", cfg.solver.fd_step);
    real("solver", "min_slope", cfg.solver.min_slope);
    integer("run", "seed", cfg.seed);
    if (auto v = get("output", "dir")) cfg.out_dir = trim(*v);

    integer("simulate", "steps", cfg.steps);
    text("simulate", "velocity", cfg.velocity);
    real("simulate", "Omega", cfg.Omega);

    text("continuum", "mode", cfg.mode);
    text("continuum", "field", cfg.field);
    real("continuum", "A", cfg.A);
    real("continuum", "t0", cfg.t0);
    if (auto v = get("continuum", "eps")) cfg.eps = parse_list(*v, "continuum.eps");
    real("continuum", "dt", cfg.field_dt);

    real("pde", "alpha", cfg.pde.alpha);
    real("pde", "beta", cfg.pde.beta);
    real("pde", "b", cfg.pde.b);
    text("pde", "initial", cfg.initial);
    real("pde", "T", cfg.T);
    real("pde", "dt", cfg.dt);
    integer("pde", "frames", cfg.frames);
    if (auto v = get("pde", "svg")) cfg.svg = parse_bool(*v, "pde.svg");

    integer("oracle", "trials", cfg.trials);
    real("oracle", "amplitude", cfg.amplitude);
    return cfg;
}

void validate_common(const ExperimentConfig& cfg, bool needs_output) {
    if (!vir::is_valid_grid_size(cfg.n)) {
        throw ConfigError("grid.n must be a power of two >= 16, got " + std::to_string(cfg.n));
    }
    try {
        cfg.solver.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!needs_output) return;
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + cfg.out_dir.string() + ": " + ec.message());
    const auto probe = cfg.out_dir / ".write_probe";
    {
        std::ofstream out(probe);
        if (!out) throw ConfigError("output directory " + cfg.out_dir.string() + " is not writable");
    }
    std::filesystem::remove(probe, ec);
}

vir::Potential load_potential(const std::string& spec) {
    try {
        if (spec.starts_with("builtin:")) return vir::parse_builtin_potential(spec);
        if (spec.starts_with("file:")) {
            const std::filesystem::path file = spec.substr(5);
            if (!std::filesystem::exists(file)) throw ConfigError("potential file " + file.string() + " does not exist");
            pt::ptree tree;
            pt::ini_parser::read_ini(file.string(), tree);
            std::map<std::string, std::string> exprs;
            std::string kind;
            for (const auto& [key, body] : tree) {
                if (!body.empty()) throw ConfigError("potential file " + file.string() + ": sections are not allowed");
                if (key == "kind") {
                    kind = trim(body.data());
                } else {
                    exprs[key] = body.data();
                }
            }
            if (kind == "V") return vir::PotentialV::from_expressions(exprs);
            if (kind == "U") return vir::GeneralPotentialU::from_expressions(exprs);
            throw ConfigError("potential file " + file.string() + ": kind must be V or U");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("potential file: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("potential spec must be builtin:p,q,s or file:<path>, got '" + spec + "'");
}

vir::PeriodicField parse_profile(const std::string& spec, std::size_t n) {
    vir::PeriodicField total = vir::PeriodicField::zeros(n);
    for (const std::string& term : split_terms(spec)) {
        const auto colon = term.find(':');
        if (colon == std::string::npos) throw ConfigError("profile term '" + term + "' lacks ':'");
        const std::string name = trim(term.substr(0, colon));
        const std::vector<double> args = parse_list(term.substr(colon + 1), "profile " + name);
        auto need = [&](std::size_t count) {
            if (args.size() != count) {
                throw ConfigError("profile " + name + " takes " + std::to_string(count) + " arguments");
            }
        };
        if (name == "sine" || name == "cosine") {
            need(2);
            const double a = args[0];
            const double k = args[1];
            if (k != std::round(k) || k < 0) throw ConfigError("profile " + name + ": wavenumber must be a whole number");
            total += vir::PeriodicField::sample(
                n, [=](double x) { return a * (name == "sine" ? std::sin(k * x) : std::cos(k * x)); });
        } else if (name == "soliton") {
            need(2);
            if (!(args[0] > 0)) throw ConfigError("profile soliton: kappa must be positive");
            total += vir::kdv_soliton(n, args[0], args[1], 0.0);
        } else if (name == "constant") {
            need(1);
            total += args[0];
        } else {
            throw ConfigError("unknown profile '" + name + "' (expected sine, cosine, soliton, constant)");
        }
    }
    return total;
}

}  // namespace vircli
