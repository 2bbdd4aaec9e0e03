#pragma once

#include "virasoro/ch_family.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace vircli {

/// Raised for any invalid configuration; maps to exit code 1.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Everything a subcommand may read. Loaded from an INI file, then
/// overridden by command-line flags, then validated as a whole.
struct ExperimentConfig {
    std::size_t n = 128;
    std::string potential = "builtin:1,1,0";
    vir::SolverOptions solver;
    std::uint64_t seed = 1;
    std::filesystem::path out_dir = "out";

    // simulate
    int steps = 20;
    std::string velocity = "sine:0.05,1";
    double Omega = 0.1;

    // continuum-check
    std::string mode = "generic";  // generic | pde | generic-u
    std::string field = "sine:1,1+cosine:0.3,2";
    double A = 0.25;
    double t0 = 0.0;
    std::vector<double> eps = {1e-2, 7.5e-3, 5e-3, 2.5e-3, 1e-3};
    double field_dt = 1e-4;

    // pde
    vir::CHParams pde{1.0, 1.0, 0.0};
    std::string initial = "sine:0.3,1";
    double T = 1.0;
    double dt = 1e-4;
    int frames = 50;
    bool svg = true;

    // el-oracle
    int trials = 10;
    double amplitude = 0.05;
};

/// "section.key=value" pairs applied on top of the file.
struct Overrides {
    std::vector<std::string> assignments;
};

/// Reads `path` (if non-empty) and applies the overrides. Unknown sections or
/// keys and malformed values raise ConfigError.
ExperimentConfig load_config(const std::filesystem::path& path, const Overrides& overrides);

/// Checks invariants shared by every subcommand and creates out_dir.
void validate_common(const ExperimentConfig& cfg, bool needs_output);

/// A potential spec: "builtin:p,q,s" or "file:<path>". Files hold
/// `kind = V` or `kind = U` and one expression per partial.
vir::Potential load_potential(const std::string& spec);

/// Initial-condition profile: terms "sine:a,k", "cosine:a,k",
/// "soliton:kappa,x0", "constant:c", joined by '+'.
vir::PeriodicField parse_profile(const std::string& spec, std::size_t n);

}  // namespace vircli
