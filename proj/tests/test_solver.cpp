#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "vnlw/diagnostics.hpp"
#include "vnlw/fft.hpp"
#include "vnlw/multiplier.hpp"
#include "vnlw/norms.hpp"
#include "vnlw/projectors.hpp"
#include "vnlw/solver.hpp"
#include "vnlw/trajectory_io.hpp"

using namespace vnlw;
using std::numbers::pi;

namespace {

RealField gaussian(const Grid& g, double amp, double width)
{
    const double c = 0.5 * g.side_length();
    return RealField::from_function(g, [&](double x, double y) {
        return amp * std::exp(-((x - c) * (x - c) + (y - c) * (y - c)) / (2 * width * width));
    });
}

StatePair smooth_data(const Grid& g, double amp = 1.0) { return StatePair(gaussian(g, amp, 1.5), gaussian(g, 0.3 * amp, 2.0)); }

double max_diff(const RealField& a, const RealField& b) { return (a - b).max_abs(); }

}  // namespace

TEST(Nonlinearity, ConstantField)
{
    const Grid g(16, 4.0);
    const RealField c = RealField::from_function(g, [](double, double) { return 1.3; });
    const RealField out = nonlinearity(c, RealField(g), 5, 3);
    EXPECT_LT(max_diff(out, std::pow(1.3, 5) * RealField::from_function(g, [](double, double) { return 1.0; })), 1e-12);
}

TEST(Nonlinearity, CosFifthIdentity)
{
    const Grid g(32, 2 * pi);
    const RealField v = RealField::from_function(g, [](double x, double) { return std::cos(2 * x); });
    const RealField expect = RealField::from_function(g, [](double x, double) {
        return (10 * std::cos(2 * x) + 5 * std::cos(6 * x) + std::cos(10 * x)) / 16.0;
    });
    EXPECT_LT(max_diff(nonlinearity(v, RealField(g), 5, 3), expect), 1e-13);
    // splitting v + z does not matter
    EXPECT_LT(max_diff(nonlinearity(0.25 * v, 0.75 * v, 5, 3), expect), 1e-13);
}

TEST(Nonlinearity, PaddingRemovesAliases)
{
    const Grid g(32, 2 * pi);
    const RealField v = RealField::from_function(g, [](double x, double) { return std::cos(5 * x); });
    // cos(25 x) lies beyond the band and is dropped rather than folded onto cos(7 x).
    const RealField truncated = RealField::from_function(g, [](double x, double) {
        return (10 * std::cos(5 * x) + 5 * std::cos(15 * x)) / 16.0;
    });
    const RealField padded = nonlinearity(v, RealField(g), 5, 3);
    const RealField aliased = nonlinearity_aliased(v, RealField(g), 5);
    EXPECT_LT(max_diff(padded, truncated), 1e-13);
    EXPECT_GT(max_diff(padded, aliased), 0.05);
}

TEST(Nonlinearity, ArgumentChecksAndOverflow)
{
    const Grid g(16, 4.0);
    const RealField one = RealField::from_function(g, [](double, double) { return 1.0; });
    EXPECT_THROW(nonlinearity(one, one, 5, 2), std::invalid_argument);
    EXPECT_THROW(nonlinearity(one, one, 4, 3), std::invalid_argument);
    EXPECT_THROW(nonlinearity(one, RealField(Grid(8, 4.0)), 5, 3), GridMismatchError);
    EXPECT_THROW(nonlinearity(1e70 * one, one, 5, 3), BlowUpError);
}

TEST(LinearFlow, SamplesAndErrors)
{
    const Grid g(32, 8.0);
    const StatePair data = smooth_data(g);
    const RandomizedPair pair = deterministic_pair(data);
    const std::vector<double> t0{0.0};
    const LinearTrajectory lt = linear_flow(pair, t0);
    EXPECT_LT(max_diff(lt.z[0], data.position), 1e-14);
    const std::vector<double> bad{-0.1};
    EXPECT_THROW(linear_flow(pair, bad), std::invalid_argument);
    const std::vector<double> ts{0.0, 0.5, 1.0};
    const LinearTrajectory zero = linear_flow(deterministic_pair(StatePair::zero(g)), ts);
    EXPECT_TRUE(zero.zero);
    for (const auto& z : zero.z) EXPECT_TRUE(z.is_zero());
}

TEST(LinearFlow, ZtildeIsSmoothedDerivative)
{
    const Grid g(32, 8.0);
    const LinearSolution z(smooth_data(g));
    const double t = 0.7;
    const auto err = [&](double h) {
        const RealField fd = (1.0 / (2 * h)) * (z.z(t + h) - z.z(t - h));
        return max_diff(bessel_potential(fd, -1.0), z.z_tilde(t));
    };
    EXPECT_GT(err(0.02) / err(0.01), 3.5);
    EXPECT_LT(err(0.01), 1e-4);
}

TEST(DuhamelStep, LinearAndZeroCases)
{
    const Grid g(32, 8.0);
    SolverParams params;
    params.dt = 0.05;
    const StatePair zero = StatePair::zero(g);
    const StatePair out = duhamel_step(zero, 0.0, 0.05, LinearSolution::zero(g), params);
    EXPECT_TRUE(out.is_zero());
    params.linear_only = true;
    const StatePair data = smooth_data(g);
    const StatePair lin = duhamel_step(data, 0.0, 0.05, LinearSolution::zero(g), params);
    const StatePair exact = propagate(0.05, data);
    EXPECT_LT(max_diff(lin.position, exact.position), 1e-13);
    EXPECT_LT(max_diff(lin.velocity, exact.velocity), 1e-13);
    EXPECT_THROW(duhamel_step(data, 0.0, 0.1, LinearSolution::zero(g), params), std::invalid_argument);
}

TEST(DuhamelStep, ConstantForcingInMeanMode)
{
    const Grid g(16, 4.0);
    const double c = 0.5, h = 0.01;
    const RealField cst = RealField::from_function(g, [&](double, double) { return c; });
    const LinearSolution z(StatePair(cst, RealField(g)));
    for (auto quad : {Quadrature::Midpoint, Quadrature::Gauss2}) {
        SolverParams params;
        params.dt = h;
        params.quadrature = quad;
        const StatePair out = duhamel_step(StatePair::zero(g), 0.0, h, z, params);
        const double expect = -std::pow(c, 5) * h * h / 2;
        // next correction is 5 c^9 h^4 / 24, four orders below
        for (double x : out.position.samples()) EXPECT_NEAR(x, expect, 1e-5 * std::abs(expect));
        for (double x : out.velocity.samples()) EXPECT_NEAR(x, -std::pow(c, 5) * h, 1e-5 * std::pow(c, 5) * h);
    }
}

class Convergence : public ::testing::TestWithParam<Quadrature> {};

TEST_P(Convergence, SelfConvergenceOrder)
{
    const Grid g(32, 12.0);
    const RandomizedPair pair = deterministic_pair(smooth_data(g, 1.5));
    const auto final_state = [&](double dt) {
        SolverParams params;
        params.dt = dt;
        params.quadrature = GetParam();
        params.snapshot_every = 1000;
        return evolve_full(pair, 0.5, params).states.back();
    };
    const StatePair a = final_state(0.05), b = final_state(0.025), c = final_state(0.0125);
    const double e1 = sobolev_norm(a.position - b.position, 0.0);
    const double e2 = sobolev_norm(b.position - c.position, 0.0);
    const double order = std::log2(e1 / e2);
    EXPECT_GT(order, 1.8) << "e1=" << e1 << " e2=" << e2;
    if (GetParam() == Quadrature::Gauss2) EXPECT_GT(order, 2.7);
}

INSTANTIATE_TEST_SUITE_P(Quadratures, Convergence,
                         ::testing::Values(Quadrature::Midpoint, Quadrature::Gauss2, Quadrature::Trapezoid));

TEST(Evolve, ZeroDataGivesZero)
{
    const Grid g(16, 4.0);
    SolverParams params;
    params.dt = 0.1;
    const Trajectory traj = evolve_full(deterministic_pair(StatePair::zero(g)), 0.5, params);
    EXPECT_FALSE(traj.blow_up);
    ASSERT_EQ(traj.times.size(), 6u);
    for (std::size_t k = 0; k < traj.times.size(); ++k) EXPECT_TRUE(traj.u(k).is_zero());
}

TEST(Evolve, SnapshotCadenceAndObserver)
{
    const Grid g(16, 4.0);
    SolverParams params;
    params.dt = 0.1;
    params.snapshot_every = 3;
    int calls = 0;
    EvolveOptions opts;
    opts.observer = [&](double, const StatePair&) { ++calls; };
    const Trajectory traj = evolve_full(deterministic_pair(smooth_data(g)), 1.0, params, opts);
    EXPECT_EQ(calls, 11);
    ASSERT_EQ(traj.times.size(), 5u);  // 0, 0.3, 0.6, 0.9, 1.0
    EXPECT_NEAR(traj.times[4], 1.0, 1e-14);
    for (std::size_t k = 1; k < traj.times.size(); ++k) EXPECT_GT(traj.times[k], traj.times[k - 1]);
}

TEST(Evolve, BlowUpIsFlagged)
{
    const Grid g(16, 4.0);
    SolverParams params;
    params.dt = 0.1;
    const Trajectory traj = evolve_full(deterministic_pair(smooth_data(g, 1e70)), 1.0, params);
    EXPECT_TRUE(traj.blow_up);
    EXPECT_TRUE(std::isfinite(traj.blow_up_time));
    for (const auto& s : traj.states) EXPECT_TRUE(s.position.all_finite());

    params.blowup_factor = 1.5;
    EvolveOptions opts;
    opts.initial = smooth_data(g, 1.0);
    const Trajectory ceil = evolve_full(deterministic_pair(smooth_data(g, 30.0)), 1.0, params, opts);
    EXPECT_TRUE(ceil.blow_up);
}

TEST(Evolve, EnergyNonincreasingWithoutZ)
{
    const Grid g(32, 12.0);
    SolverParams params;
    params.dt = 0.01;
    EvolveOptions opts;
    opts.initial = smooth_data(g, 1.0);
    const Trajectory traj = evolve_full(deterministic_pair(StatePair::zero(g)), 1.0, params, opts);
    ASSERT_TRUE(traj.z_is_zero());
    const EnergyRecord rec = energy_record(traj);
    for (std::size_t k = 0; k + 1 < rec.energy.size(); ++k) {
        EXPECT_LE(rec.energy[k + 1], rec.energy[k] + 1e-6 * params.dt * params.dt * rec.energy[0]);
    }
    EXPECT_LT(rec.energy.back(), rec.energy.front());
}

TEST(Evolve, PdeResidualIsSecondOrder)
{
    const Grid g(32, 12.0);
    const StatePair data = smooth_data(g, 1.0);
    const auto residual = [&](double dt) {
        SolverParams params;
        params.dt = dt;
        EvolveOptions opts;
        opts.initial = data;
        const Trajectory tr = evolve_full(deterministic_pair(StatePair::zero(g)), 0.4, params, opts);
        const std::size_t k = tr.times.size() / 2;
        const RealField& vm = tr.states[k - 1].position;
        const RealField& v0 = tr.states[k].position;
        const RealField& vp = tr.states[k + 1].position;
        const RealField vtt = (1.0 / (dt * dt)) * (vp - 2.0 * v0 + vm);
        const RealField vt = (1.0 / (2 * dt)) * (vp - vm);
        const RealField res = vtt + frac_laplacian(v0, 2.0) + frac_laplacian(vt, 1.0) +
                              nonlinearity(v0, RealField(g), 5, 3);
        return sobolev_norm(res, 0.0);
    };
    const double r1 = residual(0.02), r2 = residual(0.01);
    EXPECT_GT(r1 / r2, 3.2) << r1 << " " << r2;
}

TEST(Truncation, AboveNyquistIsIdentity)
{
    const Grid g(16, 4.0);
    SolverParams params;
    params.dt = 0.05;
    const RandomizedPair pair = randomize_pair(smooth_data(g), draw_coefficients(DistributionKind::Gaussian, 4));
    const Trajectory full = evolve_full(pair, 0.3, params);
    const Trajectory trunc = evolve_truncated(pair, g.max_wavenumber() * 1.01, 0.3, params);
    for (std::size_t k = 0; k < full.states.size(); ++k) {
        EXPECT_LE(max_diff(full.states[k].position, trunc.states[k].position), 1e-12);
    }
    EXPECT_THROW(evolve_truncated(pair, 0.0, 0.3, params), std::invalid_argument);
    const Trajectory zero = evolve_truncated(deterministic_pair(StatePair::zero(g)), 1.0, 0.3, params);
    for (const auto& s : zero.states) EXPECT_TRUE(s.is_zero());
}

TEST(Picard, ZeroFixedPoint)
{
    const Grid g(16, 4.0);
    SolverParams params;
    params.dt = 0.01;
    const PicardResult res = picard_solve_local(StatePair::zero(g), LinearSolution::zero(g), 0.05, params);
    EXPECT_TRUE(res.converged);
    EXPECT_EQ(res.iterations, 1);
    EXPECT_EQ(res.distances[0], 0.0);
}

TEST(Picard, ContractsAndMatchesMarch)
{
    const Grid g(32, 12.0);
    SolverParams params;
    params.dt = 0.005;
    params.picard_tol = 1e-12;
    StatePair data = smooth_data(g, 1.0);
    const double scale = 1.0 / pair_norm(data, params.s0());
    data.position *= scale;
    data.velocity *= scale;
    const LinearSolution z(smooth_data(g, 0.5));
    const PicardResult res = picard_solve_local(data, z, 0.05, params);
    ASSERT_TRUE(res.converged);
    ASSERT_GE(res.distances.size(), 4u);
    for (std::size_t k = 1; k < res.distances.size(); ++k) EXPECT_LE(res.distances[k] / res.distances[k - 1], 0.5);

    // the implicit trapezoid march solves the same discrete equations as the Picard mesh map
    params.quadrature = Quadrature::Trapezoid;
    EvolveOptions opts;
    opts.initial = data;
    const Trajectory march = evolve_full(deterministic_pair(smooth_data(g, 0.5)), 0.05, params, opts);
    double diff = 0.0;
    for (std::size_t k = 0; k < march.states.size(); ++k) {
        diff = std::max(diff, pair_norm(march.states[k] - res.trajectory.states[k], params.s0()));
    }
    EXPECT_LE(diff, 10 * params.picard_tol) << diff;
}

TEST(Picard, LargeTimeDoesNotContract)
{
    const Grid g(16, 8.0);
    SolverParams params;
    params.dt = 0.05;
    const PicardResult res = picard_solve_local(smooth_data(g, 6.0), LinearSolution::zero(g), 3.0, params);
    EXPECT_TRUE(res.non_contraction);
    EXPECT_FALSE(res.converged);
}

TEST(TrajectoryIo, RoundTrip)
{
    const Grid g(16, 4.0);
    SolverParams params;
    params.dt = 0.1;
    const RandomizedPair pair = randomize_pair(smooth_data(g), draw_coefficients(DistributionKind::Bernoulli, 8));
    const Trajectory traj = evolve_full(pair, 0.3, params);
    const auto dir = std::filesystem::temp_directory_path() / "vnlw_traj_test";
    std::filesystem::remove_all(dir);
    save_trajectory(dir, traj);
    const Trajectory back = load_trajectory(dir);
    ASSERT_EQ(back.times.size(), traj.times.size());
    EXPECT_EQ(back.linear.seed, 8u);
    EXPECT_EQ(back.linear.kind, DistributionKind::Bernoulli);
    EXPECT_EQ(back.params.dt, 0.1);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        EXPECT_EQ(back.times[k], traj.times[k]);
        EXPECT_EQ(max_diff(back.states[k].velocity, traj.states[k].velocity), 0.0);
        EXPECT_EQ(max_diff(back.linear.z_tilde[k], traj.linear.z_tilde[k]), 0.0);
    }
    EXPECT_EQ(energy(back.states.back()), energy(traj.states.back()));
    std::filesystem::remove_all(dir);
}
