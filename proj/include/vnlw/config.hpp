#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "vnlw/solver.hpp"

namespace vnlw {

/// All problems found in one configuration text.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const { return errors_; }

private:
    std::vector<std::string> errors_;
};

struct GridConfig {
    std::size_t n_points = 256;
    double side_length = 32.0;
};

/// Analytic profiles:
///   gaussian   A exp(-|x - c|^2 / (2 w^2)) centred in the box
///   bubble     gaussian envelope times cos(mode * dk * x)
///   cosine     A cos(mode * dk * x)
///   power_law  random phases, |F| ~ <xi>^{-exponent}, scaled to ||u0||_{H^s} = A
///   zero
///   snapshot   StatePair read from data.snapshot
/// The velocity component is the same shape scaled by velocity_amplitude.
struct DataConfig {
    std::string profile = "gaussian";
    double amplitude = 1.0;
    double width = 1.5;
    double mode = 1.0;
    double exponent = 1.0;
    double velocity_amplitude = 0.0;
    std::string snapshot;
    /// Regularity index used for reporting and for power_law scaling.
    double sobolev_index = 0.0;
    std::uint64_t phase_seed = 1;
};

struct RandomizationConfig {
    /// gaussian, bernoulli or none
    std::string kind = "gaussian";
    std::uint64_t seed = 1;
    std::size_t ensemble = 1;
};

struct ExperimentConfig {
    double T = 0.5;
    double T0 = 0.1;
    std::size_t lambda_points = 40;
    double C0 = 1.0;
    double q = 5.2;
    double r = 10.0;
    double alpha = 0.0;
    double lebesgue_p = 2.0;
    double lebesgue_q = 2.0;
    double s1 = 0.55;
    /// Truncation cutoffs; empty means Nyquist / {8, 4, 2}.
    std::vector<double> cutoffs;
    std::vector<double> epsilons{0.25, 0.5, 1.0};
    /// Mode numbers for the norm-inflation frequency sweep; empty uses the data profile as is.
    std::vector<double> frequencies;
    std::size_t time_samples = 12;
};

struct RunConfig {
    GridConfig grid;
    DataConfig data;
    RandomizationConfig randomization;
    SolverParams solver;
    ExperimentConfig experiment;
    std::string output_directory = "vnlw-out";

    Grid make_grid() const { return Grid(grid.n_points, grid.side_length); }
};

/// Flat "section.key = value" text; '#' starts a comment. Unknown keys and range
/// violations are collected and thrown together as ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical text listing every key in a fixed order; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

/// Semantic equality through the canonical form.
bool operator==(const RunConfig& a, const RunConfig& b);

/// Validates a config assembled in code; throws ConfigError.
void validate_config(const RunConfig& config);

/// Builds the (deterministic) data pair described by config.data on config's grid.
StatePair build_data(const RunConfig& config);

}  // namespace vnlw
