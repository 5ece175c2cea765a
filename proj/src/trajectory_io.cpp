#include "vnlw/trajectory_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "vnlw/snapshot.hpp"

namespace vnlw {

namespace fs = std::filesystem;

namespace {

std::string indexed(const char* prefix, std::size_t k)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%06zu.bin", prefix, k);
    return buf;
}

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

const char* quadrature_name(Quadrature q)
{
    switch (q) {
    case Quadrature::Gauss2: return "gauss2";
    case Quadrature::Trapezoid: return "trapezoid";
    default: return "midpoint";
    }
}

Quadrature parse_quadrature(const std::string& name)
{
    if (name == "gauss2") return Quadrature::Gauss2;
    if (name == "trapezoid") return Quadrature::Trapezoid;
    if (name == "midpoint") return Quadrature::Midpoint;
    throw SnapshotError("unknown quadrature '" + name + "'");
}

}  // namespace

void save_trajectory(const fs::path& directory, const Trajectory& traj)
{
    if (traj.states.size() != traj.times.size() || traj.linear.z.size() != traj.times.size() ||
        traj.linear.z_tilde.size() != traj.times.size()) {
        throw std::invalid_argument("save_trajectory: inconsistent sample counts");
    }
    fs::create_directories(directory);
    std::ofstream out(directory / "trajectory.txt");
    if (!out) throw SnapshotError("cannot write " + (directory / "trajectory.txt").string());
    const SolverParams& p = traj.params;
    out << "format = vnlw-trajectory-1\n";
    out << "params.p = " << p.p << "\n";
    out << "params.mu = " << fmt(p.mu) << "\n";
    out << "params.dt = " << fmt(p.dt) << "\n";
    out << "params.substeps = " << p.substeps << "\n";
    out << "params.quadrature = " << quadrature_name(p.quadrature) << "\n";
    out << "params.padding = " << p.padding << "\n";
    out << "params.picard_tol = " << fmt(p.picard_tol) << "\n";
    out << "params.picard_max_iter = " << p.picard_max_iter << "\n";
    out << "params.snapshot_every = " << p.snapshot_every << "\n";
    out << "params.blowup_factor = " << fmt(p.blowup_factor) << "\n";
    out << "params.delta = " << fmt(p.delta) << "\n";
    out << "params.linear_only = " << (p.linear_only ? 1 : 0) << "\n";
    out << "step = " << fmt(traj.step) << "\n";
    out << "seed = " << traj.linear.seed << "\n";
    out << "kind = " << to_string(traj.linear.kind) << "\n";
    out << "source_digest = " << traj.linear.source_digest << "\n";
    out << "z_zero = " << (traj.linear.zero ? 1 : 0) << "\n";
    out << "blow_up = " << (traj.blow_up ? 1 : 0) << "\n";
    out << "blow_up_time = " << fmt(traj.blow_up_time) << "\n";
    out << "count = " << traj.times.size() << "\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        write_snapshot(directory / indexed("v", k), traj.states[k]);
        write_snapshot(directory / indexed("z", k), traj.linear.z[k]);
        write_snapshot(directory / indexed("z_tilde", k), traj.linear.z_tilde[k]);
        out << "time." << k << " = " << fmt(traj.times[k]) << "\n";
        out << "digest." << k << " = " << digest(traj.states[k]) << "\n";
    }
    if (!out) throw SnapshotError("write failed for " + directory.string());
}

Trajectory load_trajectory(const fs::path& directory)
{
    std::ifstream in(directory / "trajectory.txt");
    if (!in) throw SnapshotError("missing trajectory manifest in " + directory.string());
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) continue;
        kv[line.substr(0, eq)] = line.substr(eq + 3);
    }
    const auto get = [&](const std::string& key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) throw SnapshotError("trajectory manifest lacks '" + key + "'");
        return it->second;
    };
    if (get("format") != "vnlw-trajectory-1") throw SnapshotError("unknown trajectory format");

    Trajectory traj;
    SolverParams& p = traj.params;
    p.p = std::stoi(get("params.p"));
    p.mu = std::stod(get("params.mu"));
    p.dt = std::stod(get("params.dt"));
    p.substeps = std::stoi(get("params.substeps"));
    p.quadrature = parse_quadrature(get("params.quadrature"));
    p.padding = std::stoi(get("params.padding"));
    p.picard_tol = std::stod(get("params.picard_tol"));
    p.picard_max_iter = std::stoi(get("params.picard_max_iter"));
    p.snapshot_every = std::stoi(get("params.snapshot_every"));
    p.blowup_factor = std::stod(get("params.blowup_factor"));
    p.delta = std::stod(get("params.delta"));
    p.linear_only = get("params.linear_only") == "1";
    traj.step = std::stod(get("step"));
    traj.linear.seed = std::stoull(get("seed"));
    traj.linear.kind = parse_distribution(get("kind"));
    traj.linear.source_digest = std::stoull(get("source_digest"));
    traj.linear.zero = get("z_zero") == "1";
    traj.blow_up = get("blow_up") == "1";
    traj.blow_up_time = std::stod(get("blow_up_time"));

    const std::size_t count = std::stoull(get("count"));
    for (std::size_t k = 0; k < count; ++k) {
        const double t = std::stod(get("time." + std::to_string(k)));
        StatePair state = read_state_pair(directory / indexed("v", k));
        if (std::to_string(digest(state)) != get("digest." + std::to_string(k))) {
            throw SnapshotError("digest mismatch for snapshot " + std::to_string(k));
        }
        traj.times.push_back(t);
        traj.states.push_back(std::move(state));
        traj.linear.times.push_back(t);
        traj.linear.z.push_back(read_real_field(directory / indexed("z", k)));
        traj.linear.z_tilde.push_back(read_real_field(directory / indexed("z_tilde", k)));
    }
    return traj;
}

}  // namespace vnlw
