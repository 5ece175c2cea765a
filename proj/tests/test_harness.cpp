#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "vnlw/config.hpp"
#include "vnlw/harness.hpp"
#include "vnlw/seeding.hpp"

using namespace vnlw;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("vnlw_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig small_config(const fs::path& out)
{
    RunConfig c = parse_config(
        "grid.n_points = 32\n"
        "grid.side_length = 12\n"
        "solver.dt = 0.02\n"
        "experiment.T = 0.2\n"
        "experiment.T0 = 0.05\n"
        "experiment.time_samples = 6\n");
    c.output_directory = out.string();
    return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

TEST(Config, DefaultsFilled)
{
    const RunConfig c = parse_config("# nothing but a comment\n\n");
    EXPECT_EQ(c.solver.delta, 0.2);
    EXPECT_EQ(c.experiment.s1, 0.55);
    EXPECT_EQ(c.solver.padding, 3);
    EXPECT_EQ(c.grid.n_points, 256u);
    EXPECT_EQ(c.grid.side_length, 32.0);
    EXPECT_EQ(c.solver.quadrature, Quadrature::Midpoint);
}

TEST(Config, BadPointCountNamesTheField)
{
    try {
        parse_config("grid.n_points = 100\n");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        ASSERT_EQ(e.errors().size(), 1u);
        EXPECT_NE(e.errors()[0].find("grid.n_points"), std::string::npos);
    }
}

TEST(Config, UnknownAndDuplicateKeysRejected)
{
    EXPECT_THROW(parse_config("solver.dtt = 0.1\n"), ConfigError);
    EXPECT_THROW(parse_config("solver.dt = 0.1\nsolver.dt = 0.2\n"), ConfigError);
    EXPECT_THROW(parse_config("solver.dt 0.1\n"), ConfigError);
}

TEST(Config, AllErrorsCollected)
{
    try {
        parse_config("grid.n_points = 100\nsolver.dt = -1\nbogus.key = 3\nsolver.quadrature = euler\n");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.errors().size(), 4u);
        const std::string all = e.what();
        for (const char* key : {"grid.n_points", "solver.dt", "bogus.key", "solver.quadrature"}) {
            EXPECT_NE(all.find(key), std::string::npos) << key;
        }
    }
}

TEST(Config, CanonicalRoundTrip)
{
    RunConfig c = parse_config(
        "grid.n_points = 64\n"
        "data.profile = bubble\n"
        "data.mode = 3\n"
        "solver.quadrature = gauss2\n"
        "solver.dt = 0.003\n"
        "randomization.seed = 18446744073709551615\n"
        "experiment.cutoffs = 1.5, 3, 6\n"
        "experiment.epsilons = 0.1\n");
    const std::string text = emit_config(c);
    const RunConfig again = parse_config(text);
    EXPECT_TRUE(again == c);
    EXPECT_EQ(emit_config(again), text);
    EXPECT_EQ(again.randomization.seed, 18446744073709551615ULL);
    EXPECT_EQ(again.experiment.cutoffs, (std::vector<double>{1.5, 3.0, 6.0}));
    EXPECT_EQ(again.solver.dt, 0.003);
    c.solver.dt = 0.004;
    EXPECT_FALSE(again == c);
}

TEST(Config, MissingSnapshotRejected)
{
    EXPECT_THROW(parse_config("data.profile = snapshot\ndata.snapshot = /nonexistent/x.bin\n"), ConfigError);
}

TEST(Config, ValidateInCode)
{
    RunConfig c;
    c.experiment.time_samples = 2;
    EXPECT_THROW(validate_config(c), ConfigError);
}

// ---------------------------------------------------------------------------
// Runs

TEST(Run, SolveWithZeroData)
{
    const fs::path dir = scratch("zero");
    RunConfig c = small_config(dir);
    c.data.profile = "zero";
    const OutputManifest m = run("solve", c);
    EXPECT_TRUE(m.complete);
    EXPECT_FALSE(m.blow_up);
    std::istringstream energy(slurp(dir / "energy.csv"));
    std::string line;
    std::getline(energy, line);
    EXPECT_EQ(line, "t,E,gradient,kinetic,potential,dissipation\r");
    std::size_t rows = 0;
    while (std::getline(energy, line)) {
        ++rows;
        std::istringstream cells(line);
        std::string cell;
        std::getline(cells, cell, ',');
        while (std::getline(cells, cell, ',')) EXPECT_EQ(std::stod(cell), 0.0) << line;
    }
    EXPECT_EQ(rows, 11u);
    EXPECT_TRUE(verify_manifest(dir, m).empty());
    fs::remove_all(dir);
}

TEST(Run, ManifestListsEveryFile)
{
    const fs::path dir = scratch("manifest");
    const OutputManifest m = run("solve", small_config(dir));
    std::vector<std::string> listed;
    for (const auto& f : m.files) listed.push_back(f.path);
    for (const char* name : {"config.txt", "summary.txt", "norms.csv", "energy.csv", "final_state.bin"}) {
        EXPECT_NE(std::find(listed.begin(), listed.end(), name), listed.end()) << name;
    }
    for (const auto& e : fs::directory_iterator(dir)) {
        const std::string name = e.path().filename().string();
        if (name == "manifest.txt") continue;
        EXPECT_NE(std::find(listed.begin(), listed.end(), name), listed.end()) << name;
    }
    EXPECT_TRUE(verify_manifest(dir, m).empty());
    std::ofstream(dir / "energy.csv", std::ios::app) << "x";
    EXPECT_EQ(verify_manifest(dir, m).size(), 1u);
    fs::remove(dir / "norms.csv");
    EXPECT_EQ(verify_manifest(dir, m).size(), 2u);
    EXPECT_NE(slurp(dir / "manifest.txt").find("seed_mix = " + std::string(kSeedMixName)), std::string::npos);
    fs::remove_all(dir);
}

TEST(Run, EverySubcommandIsDeterministic)
{
    for (const auto& sub : subcommands()) {
        const fs::path a = scratch("det_a"), b = scratch("det_b");
        RunConfig c = small_config(a);
        c.randomization.ensemble = 8;
        c.experiment.epsilons = {0.5};
        if (sub == "picard") {
            c.experiment.T = 0.05;
            c.experiment.T0 = 0.01;
        }
        if (sub == "schauder") c.experiment.T = 1.0;
        const OutputManifest ma = run(sub, c, RunOptions{.seed = 5, .workers = 1});
        c.output_directory = b.string();
        const OutputManifest mb = run(sub, c, RunOptions{.seed = 5, .workers = 3});
        EXPECT_TRUE(ma.complete) << sub << ": " << ma.status;
        ASSERT_EQ(ma.files.size(), mb.files.size()) << sub;
        for (std::size_t i = 0; i < ma.files.size(); ++i) {
            EXPECT_EQ(slurp(a / ma.files[i].path), slurp(b / mb.files[i].path)) << sub << " " << ma.files[i].path;
        }
        auto strip = [](const OutputManifest& m) {
            OutputManifest copy = m;
            copy.wall_clock_seconds = 0.0;
            return copy.to_text();
        };
        EXPECT_EQ(strip(ma), strip(mb)) << sub;
        fs::remove_all(a);
        fs::remove_all(b);
    }
}

TEST(Run, SeedOverrideChangesRandomizedOutput)
{
    const fs::path a = scratch("seed_a"), b = scratch("seed_b");
    RunConfig c = small_config(a);
    run("solve", c, RunOptions{.seed = 1});
    c.output_directory = b.string();
    run("solve", c, RunOptions{.seed = 2});
    EXPECT_NE(slurp(a / "norms.csv"), slurp(b / "norms.csv"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Run, UnknownSubcommandIsAConfigError)
{
    EXPECT_THROW(run("frobnicate", small_config(scratch("unknown"))), ConfigError);
}

TEST(Run, BlowUpIsFlagged)
{
    const fs::path dir = scratch("blowup");
    RunConfig c = small_config(dir);
    c.data.profile = "gaussian";
    c.data.amplitude = 1e40;
    c.randomization.kind = "none";
    const OutputManifest m = run("solve", c);
    EXPECT_TRUE(m.blow_up);
    EXPECT_FALSE(m.complete);
    EXPECT_TRUE(verify_manifest(dir, m).empty());
    fs::remove_all(dir);
}

// ---------------------------------------------------------------------------
// Ensembles

TEST(Ensemble, SeedsAreSplitFromMaster)
{
    const EnsembleResult r = run_ensemble(9, 5, [](std::size_t i, std::uint64_t) { return static_cast<double>(i); }, 2);
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(r.replicas[i].index, i);
        EXPECT_EQ(r.replicas[i].seed, split_seed(9, i));
    }
}

TEST(Ensemble, HandSum)
{
    const std::vector<double> known{0.5, 1e16, -1e16, 3.25, 2.0};
    const EnsembleResult r = run_ensemble(1, known.size(), [&](std::size_t i, std::uint64_t) { return known[i]; }, 4);
    // sorted order: -1e16, 0.5, 2, 3.25, 1e16
    double hand = -1e16;
    hand += 0.5;
    hand += 2.0;
    hand += 3.25;
    hand += 1e16;
    EXPECT_EQ(r.sum, hand);
    EXPECT_EQ(r.values, known);
    EXPECT_EQ(r.failed, 0u);
}

TEST(Ensemble, FailedReplicaIsCounted)
{
    const EnsembleResult r = run_ensemble(
        1, 6,
        [](std::size_t i, std::uint64_t) -> double {
            if (i == 2) throw std::runtime_error("boom");
            if (i == 4) return NAN;
            return 1.0;
        },
        3);
    EXPECT_EQ(r.failed, 2u);
    EXPECT_EQ(r.values.size(), 4u);
    EXPECT_EQ(r.mean(), 1.0);
    EXPECT_EQ(r.replicas[2].error, "boom");
    EXPECT_THROW(run_ensemble(1, 0, [](std::size_t, std::uint64_t) { return 0.0; }), std::invalid_argument);
}

TEST(Ensemble, ParallelEqualsSerial)
{
    RunConfig c = small_config(scratch("ens"));
    const EnsembleResult serial = ensemble(c, 12, 1);
    const EnsembleResult parallel = ensemble(c, 12, 5);
    EXPECT_EQ(serial.values, parallel.values);
    EXPECT_EQ(serial.sum, parallel.sum);
}

TEST(Ensemble, SingleReplicaMatchesSingleRun)
{
    const fs::path a = scratch("one_a"), b = scratch("one_b");
    RunConfig c = small_config(a);
    c.randomization.ensemble = 1;
    run("mc-tail", c);
    const std::string replicas = slurp(a / "replicas.csv");
    const EnsembleResult one = ensemble(c, 1, 1);
    ASSERT_EQ(one.values.size(), 1u);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", one.values[0]);
    EXPECT_NE(replicas.find(std::string(",") + std::to_string(split_seed(c.randomization.seed, 0)) + "," + buf),
              std::string::npos)
        << replicas;

    // the solve subcommand uses the same replica-0 draw
    c.output_directory = b.string();
    run("solve", c);
    const std::string summary = slurp(b / "summary.txt");
    EXPECT_NE(summary.find("seed = " + std::to_string(split_seed(c.randomization.seed, 0))), std::string::npos);
    fs::remove_all(a);
    fs::remove_all(b);
}

// ---------------------------------------------------------------------------
// CLI

namespace {

int cli(const std::string& args)
{
    const std::string cmd = std::string(VNLW_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const fs::path& dir, const std::string& text)
{
    fs::create_directories(dir);
    const fs::path p = dir / "run.cfg";
    std::ofstream(p) << text;
    return p;
}

}  // namespace

TEST(Cli, ExitCodes)
{
    const fs::path dir = scratch("cli");
    const std::string base = "grid.n_points = 16\ngrid.side_length = 8\nsolver.dt = 0.05\nexperiment.T = 0.1\nexperiment.T0 = 0.05\n";
    const fs::path good = write_config(dir, base);
    EXPECT_EQ(cli("solve --config " + good.string() + " --seed 3 --out " + (dir / "out").string()), 0);
    EXPECT_TRUE(fs::exists(dir / "out" / "manifest.txt"));

    const fs::path bad = write_config(dir / "bad", "grid.n_points = 100\n");
    EXPECT_EQ(cli("solve --config " + bad.string()), 2);
    EXPECT_EQ(cli("solve"), 2);
    EXPECT_EQ(cli("solve --config " + (dir / "missing.cfg").string()), 2);

    const fs::path boom =
        write_config(dir / "boom", base + "data.amplitude = 1e40\nrandomization.kind = none\noutput.directory = " +
                                       (dir / "boom_out").string() + "\n");
    EXPECT_EQ(cli("solve --config " + boom.string()), 3);
    fs::remove_all(dir);
}
