#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vnlw/config.hpp"

namespace vnlw {

inline constexpr const char* kCodeVersion = "vnlw 0.1.0";

struct ManifestEntry {
    std::string path;  ///< relative to the output directory
    std::uintmax_t bytes = 0;
};

struct OutputManifest {
    std::string subcommand;
    std::string config_digest;
    std::string code_version = kCodeVersion;
    std::uint64_t master_seed = 0;
    std::string seed_mix;
    std::size_t replicas = 0;
    std::size_t failed_replicas = 0;
    bool complete = true;
    bool blow_up = false;
    std::string status = "ok";
    std::vector<ManifestEntry> files;
    double wall_clock_seconds = 0.0;

    /// key = value text; the wall_clock line is the only nondeterministic one.
    std::string to_text() const;
};

/// Checks that every listed file exists with the recorded length; returns the problems.
std::vector<std::string> verify_manifest(const std::filesystem::path& directory, const OutputManifest& manifest);

struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> replicas;
    std::optional<std::string> output_directory;
    /// 0 means VNLW_WORKERS or the hardware concurrency.
    std::size_t workers = 0;
};

/// solve, mc-tail, energy, schauder, norm-inflation, truncation, picard.
const std::vector<std::string>& subcommands();

/// Runs one study and writes its CSVs, summary and manifest.txt into the output directory.
OutputManifest run(const std::string& subcommand, const RunConfig& config, const RunOptions& options = {});

struct ReplicaResult {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    double value = 0.0;
    std::string error;
};

struct EnsembleResult {
    std::vector<ReplicaResult> replicas;  ///< in index order
    std::size_t failed = 0;
    /// Values of the successful replicas in index order.
    std::vector<double> values;
    /// Sum over successful replicas, accumulated in sorted order.
    double sum = 0.0;
    double mean() const { return values.empty() ? 0.0 : sum / static_cast<double>(values.size()); }
};

/// Runs fn(index, split_seed(master, index)) for every replica on a worker pool.
/// Thrown exceptions mark the replica failed; the rest still aggregate.
EnsembleResult run_ensemble(std::uint64_t master, std::size_t replicas,
                            const std::function<double(std::size_t, std::uint64_t)>& fn, std::size_t workers = 0);

/// L^q_t L^r_x norm over [0, T] of the linear solution for each randomized replica of the config data.
EnsembleResult ensemble(const RunConfig& config, std::size_t replicas, std::size_t workers = 0);

/// Worker count from VNLW_WORKERS, falling back to the hardware concurrency.
std::size_t default_workers();

}  // namespace vnlw
