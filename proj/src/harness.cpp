#include "vnlw/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <thread>

#include "vnlw/diagnostics.hpp"
#include "vnlw/norms.hpp"
#include "vnlw/seeding.hpp"
#include "vnlw/snapshot.hpp"

namespace vnlw {

namespace fs = std::filesystem;

namespace {

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string hex64(std::uint64_t x)
{
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

std::uint64_t fnv1a(const std::string& text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Collects the artifacts of one run; every file goes through here so the manifest is complete.
class OutputDir {
public:
    explicit OutputDir(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }

    const fs::path& root() const { return root_; }

    void write_text(const std::string& name, const std::string& text)
    {
        std::ofstream out(root_ / name, std::ios::binary);
        out << text;
        if (!out) throw std::runtime_error("cannot write " + (root_ / name).string());
        add(name);
    }

    void write_csv(const std::string& name, const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows)
    {
        std::vector<std::vector<std::string>> cells;
        for (const auto& row : rows) {
            auto& out = cells.emplace_back();
            for (double v : row) out.push_back(fmt(v));
        }
        write_csv(name, header, cells);
    }

    void write_csv(const std::string& name, const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows)
    {
        std::string text;
        for (std::size_t i = 0; i < header.size(); ++i) text += (i ? "," : "") + header[i];
        text += "\r\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) text += (i ? "," : "") + row[i];
            text += "\r\n";
        }
        write_text(name, text);
    }

    void add(const std::string& name)
    {
        if (std::find(names_.begin(), names_.end(), name) == names_.end()) names_.push_back(name);
    }

    std::vector<ManifestEntry> entries() const
    {
        std::vector<std::string> sorted = names_;
        std::sort(sorted.begin(), sorted.end());
        std::vector<ManifestEntry> out;
        for (const auto& name : sorted) out.push_back({name, fs::file_size(root_ / name)});
        return out;
    }

private:
    fs::path root_;
    std::vector<std::string> names_;
};

class Summary {
public:
    void put(const std::string& key, double value) { text_ += key + " = " + fmt(value) + "\n"; }
    void put(const std::string& key, const std::string& value) { text_ += key + " = " + value + "\n"; }
    void put_flag(const std::string& key, bool value) { put(key, value ? std::string("true") : std::string("false")); }
    const std::string& text() const { return text_; }

private:
    std::string text_;
};

RandomizedPair make_pair(const RunConfig& config, const StatePair& data, std::uint64_t seed)
{
    if (config.randomization.kind == "none") return deterministic_pair(data);
    return randomize_pair(data, draw_coefficients(parse_distribution(config.randomization.kind), seed));
}

std::vector<double> linspace(double a, double b, std::size_t n)
{
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
    return out;
}

double linear_space_time_norm(const RandomizedPair& pair, const RunConfig& config)
{
    const LinearSolution z(pair.data, config.solver.model());
    const auto times = linspace(0.0, config.experiment.T, config.experiment.time_samples);
    std::vector<double> norms;
    for (double t : times) norms.push_back(lebesgue_norm(z.z(t), config.experiment.r));
    return time_norm(times, norms, config.experiment.q);
}

struct Context {
    const RunConfig& config;
    OutputDir& out;
    OutputManifest& manifest;
    Summary& summary;
    std::uint64_t master;
    std::size_t replicas;
    std::size_t workers;
};

void flag_blow_up(Context& ctx, const Trajectory& traj)
{
    if (!traj.blow_up) return;
    ctx.manifest.blow_up = true;
    ctx.manifest.complete = false;
    ctx.manifest.status = "blow-up at t=" + fmt(traj.blow_up_time) + ": " + traj.blow_up_reason;
}

void write_energy_csv(Context& ctx, const Trajectory& traj)
{
    const EnergyRecord rec = energy_record(traj);
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < rec.times.size(); ++k) {
        rows.push_back({rec.times[k], rec.energy[k], rec.gradient[k], rec.kinetic[k], rec.potential[k],
                        rec.dissipation[k]});
    }
    ctx.out.write_csv("energy.csv", {"t", "E", "gradient", "kinetic", "potential", "dissipation"}, rows);
}

void run_solve(Context& ctx)
{
    const StatePair data = build_data(ctx.config);
    const RandomizedPair pair = make_pair(ctx.config, data, split_seed(ctx.master, 0));
    const Trajectory traj = evolve_full(pair, ctx.config.experiment.T, ctx.config.solver);
    const double s0 = ctx.config.solver.s0();
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        rows.push_back({traj.times[k], pair_norm(traj.states[k], s0), traj.u(k).max_abs(), traj.linear.z[k].max_abs()});
    }
    ctx.out.write_csv("norms.csv", {"t", "v_pair_norm_s0", "u_sup", "z_sup"}, rows);
    write_energy_csv(ctx, traj);
    if (!traj.states.empty()) {
        write_snapshot(ctx.out.root() / "final_state.bin", traj.states.back());
        ctx.out.add("final_state.bin");
    }
    ctx.summary.put("seed", std::to_string(pair.seed));
    ctx.summary.put("source_digest", hex64(pair.source_digest));
    ctx.summary.put("reality_residue", pair.imaginary_residue);
    ctx.summary.put("steps", static_cast<double>(traj.times.empty() ? 0 : traj.times.size() - 1));
    ctx.summary.put("step", traj.step);
    ctx.summary.put_flag("blow_up", traj.blow_up);
    flag_blow_up(ctx, traj);
}

void run_energy(Context& ctx)
{
    const RunConfig& c = ctx.config;
    const StatePair data = build_data(c);
    const RandomizedPair pair = make_pair(c, data, split_seed(ctx.master, 0));
    const Trajectory traj = evolve_full(pair, c.experiment.T, c.solver);
    write_energy_csv(ctx, traj);
    flag_blow_up(ctx, traj);
    if (traj.blow_up) return;
    const double T0 = c.experiment.T0;
    const double T = traj.times.back();
    const EnergyIncrement inc = energy_increment_decomposition(traj, T0, T);
    ctx.summary.put("T0", inc.T0);
    ctx.summary.put("T", inc.t);
    ctx.summary.put("I", inc.I);
    ctx.summary.put("II", inc.II);
    ctx.summary.put("I1_boundary", inc.I1_boundary);
    ctx.summary.put("I2", inc.I2);
    ctx.summary.put("parts_residual", inc.parts_residual());
    ctx.summary.put("dissipation_integral", inc.dissipation);
    ctx.summary.put("energy_change", inc.energy_change);
    ctx.summary.put("energy_residual", inc.energy_residual());
    if (traj.z_is_zero() && traj.states.size() >= 3) {
        const DissipationReport rep = dissipation_check(traj);
        ctx.summary.put("dissipation_max_discrepancy", rep.max_discrepancy);
        ctx.summary.put("energy_max_increase", rep.max_increase);
    }
    if (T0 > 0.0) {
        const AQuantity a = a_quantity(traj.linear, T0, T, c.experiment.s1);
        const GronwallReport g = gronwall_check(energy_record(traj), a, T0, T);
        ctx.summary.put("A_total", a.total);
        ctx.summary.put("A_z_sup_squared", a.z_sup_squared);
        ctx.summary.put("A_z_l10_tenth", a.z_l10_tenth);
        ctx.summary.put("A_z_sup_l6_sixth", a.z_sup_l6_sixth);
        ctx.summary.put("A_ztilde_l6_sixth", a.ztilde_l6_sixth);
        ctx.summary.put("A_ztilde_smooth_sup", a.ztilde_smooth_sup);
        ctx.summary.put("gronwall_K", g.K);
        ctx.summary.put_flag("gronwall_bound_holds", g.bound_holds);
    }
}

void run_mc_tail(Context& ctx)
{
    const RunConfig& c = ctx.config;
    if (c.randomization.kind == "none") throw ConfigError({"randomization.kind: mc-tail needs a random distribution"});
    const EnsembleResult ens = ensemble(c, ctx.replicas, ctx.workers);
    ctx.manifest.failed_replicas = ens.failed;
    if (ens.failed > 0) {
        std::cerr << "warning: " << ens.failed << " of " << ens.replicas.size() << " replicas failed\n";
    }
    // seeds are full 64-bit integers, so they bypass the double formatter
    std::vector<std::vector<std::string>> replica_rows;
    for (const auto& r : ens.replicas) {
        replica_rows.push_back({std::to_string(r.index), std::to_string(r.seed), r.ok ? fmt(r.value) : "nan", r.ok ? "1" : "0"});
    }
    ctx.out.write_csv("replicas.csv", {"replica", "seed", "norm", "ok"}, replica_rows);

    const StatePair data = build_data(c);
    const double scale = tail_scale(c.experiment.T, c.experiment.q, c.experiment.alpha, pair_norm(data, 0.0));
    ctx.summary.put("scale", scale);
    ctx.summary.put("mean_norm", ens.mean());
    const EventReport ev = randomized_strichartz_event(ens.values, c.experiment.C0);
    ctx.summary.put("event_probability", ev.probability);
    ctx.summary.put("event_standard_error", ev.standard_error);
    if (ens.values.size() < 500) {
        ctx.summary.put("tail_fit", "skipped (fewer than 500 successful replicas)");
        return;
    }
    std::vector<double> sorted = ens.values;
    std::sort(sorted.begin(), sorted.end());
    const auto quantile = [&](double p) { return sorted[static_cast<std::size_t>(p * (sorted.size() - 1))]; };
    const auto lambdas = linspace(quantile(0.5), quantile(0.999), c.experiment.lambda_points);
    const TailFit fit = tail_fit(ens.values, lambdas, scale);
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < fit.lambdas.size(); ++k) {
        rows.push_back({fit.lambdas[k], fit.p_hat[k], fit.lower[k], fit.upper[k], fit.in_window[k] ? 1.0 : 0.0});
    }
    ctx.out.write_csv("tail.csv", {"lambda", "p_hat", "lo", "hi", "in_window"}, rows);
    ctx.summary.put("log_C", fit.log_C);
    ctx.summary.put("c", fit.c);
    ctx.summary.put("c_stderr", fit.c_stderr);
    ctx.summary.put("r_squared", fit.r_squared);
    ctx.summary.put("fit_points", static_cast<double>(fit.fit_points));
    ctx.summary.put_flag("insufficient_tail", fit.insufficient_tail);
}

void run_schauder(Context& ctx)
{
    const ExperimentConfig& x = ctx.config.experiment;
    if (!(x.T0 > 0.0)) throw ConfigError({"experiment.T0: schauder needs T0 > 0 for the time grid"});
    std::vector<double> times(x.time_samples);
    for (std::size_t k = 0; k < times.size(); ++k) {
        times[k] = x.T0 * std::pow(x.T / x.T0, static_cast<double>(k) / static_cast<double>(times.size() - 1));
    }
    const RealField field = riesz_test_field(ctx.config.make_grid());
    const RateFit fit = schauder_rate_fit(field, x.alpha, x.lebesgue_p, x.lebesgue_q, times, ctx.config.solver.model());
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < fit.times.size(); ++k) rows.push_back({fit.times[k], fit.ratios[k]});
    ctx.out.write_csv("rates.csv", {"t", "ratio"}, rows);
    ctx.summary.put("slope", fit.slope);
    ctx.summary.put("expected", fit.expected);
    ctx.summary.put("intercept", fit.intercept);
    ctx.summary.put("r_squared", fit.r_squared);
    ctx.summary.put_flag("degenerate", fit.degenerate);
}

void run_norm_inflation(Context& ctx)
{
    const RunConfig& c = ctx.config;
    std::vector<double> freqs = c.experiment.frequencies;
    const bool sweep = !freqs.empty();
    if (!sweep) freqs.push_back(c.data.mode);
    std::vector<std::vector<double>> rows;
    bool any_inflated = false;
    for (double f : freqs) {
        RunConfig member = c;
        member.data.mode = f;
        const StatePair profile = build_data(member);
        const auto table =
            norm_inflation_probe(profile, c.experiment.epsilons, c.data.sobolev_index, c.experiment.T, c.solver);
        for (const auto& row : table) {
            rows.push_back({f, row.epsilon, row.initial_norm, row.sup_norm, row.ratio,
                            row.inflated_beyond_ceiling ? 1.0 : 0.0});
            any_inflated = any_inflated || row.inflated_beyond_ceiling;
        }
    }
    ctx.out.write_csv("inflation.csv", {"mode", "epsilon", "initial_norm", "sup_norm", "ratio", "inflated_beyond_ceiling"},
                      rows);
    ctx.summary.put("sobolev_index", c.data.sobolev_index);
    ctx.summary.put_flag("any_inflated_beyond_ceiling", any_inflated);
}

void run_truncation(Context& ctx)
{
    const RunConfig& c = ctx.config;
    const Grid g = c.make_grid();
    std::vector<double> cutoffs = c.experiment.cutoffs;
    if (cutoffs.empty()) cutoffs = {g.nyquist() / 8.0, g.nyquist() / 4.0, g.nyquist() / 2.0};
    const StatePair data = build_data(c);
    const RandomizedPair pair = make_pair(c, data, split_seed(ctx.master, 0));
    const Trajectory full = evolve_full(pair, c.experiment.T, c.solver);
    flag_blow_up(ctx, full);
    if (full.blow_up) return;
    const double s0 = c.solver.s0();
    std::vector<std::vector<double>> rows;
    for (double N : cutoffs) {
        const Trajectory trunc = evolve_truncated(pair, N, c.experiment.T, c.solver);
        if (trunc.blow_up) {
            flag_blow_up(ctx, trunc);
            rows.push_back({N, INFINITY});
            continue;
        }
        double dist = 0.0;
        for (std::size_t k = 0; k < std::min(trunc.states.size(), full.states.size()); ++k) {
            dist = std::max(dist, pair_norm(trunc.states[k] - full.states[k], s0));
        }
        rows.push_back({N, dist});
    }
    ctx.out.write_csv("truncation.csv", {"cutoff", "sup_distance_s0"}, rows);
}

void run_picard(Context& ctx)
{
    const RunConfig& c = ctx.config;
    const StatePair data = build_data(c);
    const Grid g = c.make_grid();
    // Without randomization the data seeds v and z = 0; otherwise v starts at rest and z carries the data.
    const bool random = c.randomization.kind != "none";
    const StatePair initial = random ? StatePair::zero(g) : data;
    const LinearSolution z = random ? LinearSolution(make_pair(c, data, split_seed(ctx.master, 0)).data, c.solver.model())
                                    : LinearSolution::zero(g, c.solver.model());
    const PicardResult res = picard_solve_local(initial, z, c.experiment.T, c.solver);
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < res.distances.size(); ++k) {
        const double ratio = k == 0 ? NAN : res.distances[k] / res.distances[k - 1];
        rows.push_back({static_cast<double>(k + 1), res.distances[k], ratio});
    }
    ctx.out.write_csv("picard.csv", {"iteration", "distance", "ratio"}, rows);
    ctx.summary.put("iterations", static_cast<double>(res.iterations));
    ctx.summary.put_flag("converged", res.converged);
    ctx.summary.put_flag("non_contraction", res.non_contraction);
    ctx.summary.put("initial_pair_norm_s0", pair_norm(initial, c.solver.s0()));
}

}  // namespace

std::string OutputManifest::to_text() const
{
    std::string t;
    t += "subcommand = " + subcommand + "\n";
    t += "code_version = " + code_version + "\n";
    t += "config_digest = " + config_digest + "\n";
    t += "master_seed = " + std::to_string(master_seed) + "\n";
    t += "seed_mix = " + seed_mix + "\n";
    t += "replicas = " + std::to_string(replicas) + "\n";
    t += "failed_replicas = " + std::to_string(failed_replicas) + "\n";
    t += std::string("complete = ") + (complete ? "true" : "false") + "\n";
    t += std::string("blow_up = ") + (blow_up ? "true" : "false") + "\n";
    t += "status = " + status + "\n";
    for (std::size_t i = 0; i < files.size(); ++i) {
        t += "file." + std::to_string(i) + " = " + files[i].path + " " + std::to_string(files[i].bytes) + "\n";
    }
    t += "wall_clock = " + fmt(wall_clock_seconds) + "\n";
    return t;
}

std::vector<std::string> verify_manifest(const fs::path& directory, const OutputManifest& manifest)
{
    std::vector<std::string> problems;
    for (const auto& f : manifest.files) {
        const fs::path p = directory / f.path;
        if (!fs::exists(p)) {
            problems.push_back(f.path + ": missing");
        } else if (fs::file_size(p) != f.bytes) {
            problems.push_back(f.path + ": size " + std::to_string(fs::file_size(p)) + " != " + std::to_string(f.bytes));
        }
    }
    return problems;
}

const std::vector<std::string>& subcommands()
{
    static const std::vector<std::string> names = {"solve",          "mc-tail",    "energy", "schauder",
                                                   "norm-inflation", "truncation", "picard"};
    return names;
}

std::size_t default_workers()
{
    if (const char* env = std::getenv("VNLW_WORKERS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0) return static_cast<std::size_t>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

EnsembleResult run_ensemble(std::uint64_t master, std::size_t replicas,
                            const std::function<double(std::size_t, std::uint64_t)>& fn, std::size_t workers)
{
    if (replicas < 1) throw std::invalid_argument("run_ensemble: replicas must be >= 1");
    if (workers == 0) workers = default_workers();
    workers = std::min(workers, replicas);

    EnsembleResult result;
    result.replicas.resize(replicas);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < replicas; i = next++) {
            ReplicaResult& r = result.replicas[i];
            r.index = i;
            r.seed = split_seed(master, i);
            try {
                r.value = fn(i, r.seed);
                r.ok = std::isfinite(r.value);
                if (!r.ok) r.error = "non-finite result";
            } catch (const std::exception& e) {
                r.error = e.what();
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (const auto& r : result.replicas) {
        if (r.ok) result.values.push_back(r.value);
        else ++result.failed;
    }
    std::vector<double> sorted = result.values;
    std::sort(sorted.begin(), sorted.end());
    result.sum = std::accumulate(sorted.begin(), sorted.end(), 0.0);
    return result;
}

EnsembleResult ensemble(const RunConfig& config, std::size_t replicas, std::size_t workers)
{
    const StatePair data = build_data(config);
    return run_ensemble(
        config.randomization.seed, replicas,
        [&](std::size_t, std::uint64_t seed) { return linear_space_time_norm(make_pair(config, data, seed), config); },
        workers);
}

OutputManifest run(const std::string& subcommand, const RunConfig& base, const RunOptions& options)
{
    const auto& names = subcommands();
    if (std::find(names.begin(), names.end(), subcommand) == names.end()) {
        throw ConfigError({"unknown subcommand '" + subcommand + "'"});
    }
    RunConfig config = base;
    if (options.seed) config.randomization.seed = *options.seed;
    if (options.replicas) config.randomization.ensemble = *options.replicas;
    if (options.output_directory) config.output_directory = *options.output_directory;
    validate_config(config);

    const auto start = std::chrono::steady_clock::now();
    // where the artifacts land is not part of the study; leave it out of config.txt and the digest
    RunConfig located = config;
    located.output_directory = RunConfig{}.output_directory;
    const std::string canonical = emit_config(located);
    OutputManifest manifest;
    manifest.subcommand = subcommand;
    manifest.config_digest = hex64(fnv1a(canonical));
    manifest.master_seed = config.randomization.seed;
    manifest.seed_mix = std::string(kSeedMixName);
    manifest.replicas = subcommand == "mc-tail" ? config.randomization.ensemble : 1;

    OutputDir out(config.output_directory);
    out.write_text("config.txt", canonical);
    Summary summary;
    Context ctx{config, out, manifest, summary, config.randomization.seed, config.randomization.ensemble,
                options.workers};
    try {
        if (subcommand == "solve") run_solve(ctx);
        else if (subcommand == "mc-tail") run_mc_tail(ctx);
        else if (subcommand == "energy") run_energy(ctx);
        else if (subcommand == "schauder") run_schauder(ctx);
        else if (subcommand == "norm-inflation") run_norm_inflation(ctx);
        else if (subcommand == "truncation") run_truncation(ctx);
        else run_picard(ctx);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        manifest.complete = false;
        manifest.status = std::string("error: ") + e.what();
    }
    out.write_text("summary.txt", summary.text());
    manifest.files = out.entries();
    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ofstream(out.root() / "manifest.txt", std::ios::binary) << manifest.to_text();
    return manifest;
}

}  // namespace vnlw
