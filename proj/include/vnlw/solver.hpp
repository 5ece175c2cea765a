#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "vnlw/field.hpp"
#include "vnlw/propagators.hpp"
#include "vnlw/randomization.hpp"

namespace vnlw {

enum class Quadrature {
    Midpoint,  ///< exponential midpoint, order 2
    Gauss2,    ///< two Gauss nodes with linear interpolation of F, order 3
    /// Implicit: F linear between the step ends, solved by fixed-point iteration.
    /// Same discrete equations as the Picard mesh map.
    Trapezoid,
};

struct SolverParams {
    int p = 5;
    double mu = 0.5;
    double dt = 0.01;
    /// Each step of length dt is taken as this many quadrature sub-steps.
    int substeps = 1;
    Quadrature quadrature = Quadrature::Midpoint;
    int padding = 3;
    double picard_tol = 1e-10;
    int picard_max_iter = 30;
    int snapshot_every = 1;
    /// Blow-up ceiling as a multiple of the reference H^{s0} pair norm.
    double blowup_factor = 1e6;
    double delta = 0.2;
    /// Drop the nonlinearity (linear viscous wave flow only).
    bool linear_only = false;

    void validate() const;
    LinearModel model() const { return LinearModel{mu}; }
    /// s0 = 1 - 1/(5 + delta) - 2/10.
    double s0() const;
};

/// The nonlinearity or a norm left the representable range.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(const std::string& what, double time)
        : std::runtime_error(what), time_(time) {}
    double time() const { return time_; }

private:
    double time_;
};

/// Exact linear solution z(t) = V(t)(u0, u1), re-evaluated from cached spectra.
class LinearSolution {
public:
    explicit LinearSolution(const StatePair& data, const LinearModel& model = {});

    static LinearSolution zero(const Grid& grid, const LinearModel& model = {});

    const Grid& grid() const { return u0_.grid(); }
    bool is_zero() const { return zero_; }
    const LinearModel& model() const { return model_; }

    SpectralField z_spectrum(double t) const;
    RealField z(double t) const;
    RealField dz(double t) const;
    /// <nabla>^{-1} d_t z(t) = Vtilde(t)(u0, u1).
    RealField z_tilde(double t) const;

    /// Linear solution started from P_{<=N} applied to the data.
    LinearSolution truncated(double cutoff) const;

private:
    LinearSolution(SpectralField u0, SpectralField u1, const LinearModel& model, bool zero)
        : u0_(std::move(u0)), u1_(std::move(u1)), model_(model), zero_(zero) {}

    SpectralField u0_;
    SpectralField u1_;
    LinearModel model_;
    bool zero_;
};

/// Samples of z and z-tilde on a time list.
struct LinearTrajectory {
    std::vector<double> times;
    std::vector<RealField> z;
    std::vector<RealField> z_tilde;
    std::uint64_t seed = 0;
    DistributionKind kind = DistributionKind::Gaussian;
    std::uint64_t source_digest = 0;
    bool zero = false;
};

/// z(t_k) = V(t_k)(u0^w, u1^w) and z-tilde(t_k) on sorted, nonnegative times.
LinearTrajectory linear_flow(const RandomizedPair& pair, std::span<const double> times,
                             const LinearModel& model = {});

/// (v + z)^p evaluated on the zero-padded grid of padding * n points and truncated back.
/// Requires padding >= (p + 1)/2 and odd p >= 3. Throws BlowUpError on overflow.
RealField nonlinearity(const RealField& v, const RealField& z, int p, int padding);

/// Pointwise (v + z)^p on the native grid, aliasing included.
RealField nonlinearity_aliased(const RealField& v, const RealField& z, int p);

/// One step of the Duhamel formula from time t with the linear part exact and
/// F = (v + z)^p handled by the configured exponential quadrature.
StatePair duhamel_step(const StatePair& state, double t, double dt, const LinearSolution& z,
                       const SolverParams& params);

struct Trajectory {
    std::vector<double> times;
    std::vector<StatePair> states;
    LinearTrajectory linear;
    SolverParams params;
    double step = 0.0;
    bool blow_up = false;
    double blow_up_time = std::numeric_limits<double>::quiet_NaN();
    std::string blow_up_reason;

    bool z_is_zero() const { return linear.zero; }
    /// u = z + v at snapshot k.
    RealField u(std::size_t k) const { return linear.z[k] + states[k].position; }
};

using StepObserver = std::function<void(double t, const StatePair& state)>;

struct EvolveOptions {
    /// v data at t = 0; zero when absent.
    std::optional<StatePair> initial;
    StepObserver observer;
};

/// March v over [0, T] with u = z + v. Blow-up is reported through the flag.
Trajectory evolve_full(const RandomizedPair& pair, double T, const SolverParams& params,
                       const EvolveOptions& options = {});

/// Same pipeline with the data, the v data and z truncated by P_{<=N}.
Trajectory evolve_truncated(const RandomizedPair& pair, double cutoff, double T, const SolverParams& params,
                            const EvolveOptions& options = {});

struct PicardResult {
    Trajectory trajectory;
    /// Z(T) distance between successive iterates.
    std::vector<double> distances;
    int iterations = 0;
    bool converged = false;
    bool non_contraction = false;
};

/// Fixed-point iteration v <- Gamma(v) on the time mesh of spacing params.dt over [0, T],
/// starting from the linear part V(t)(v0, v1).
PicardResult picard_solve_local(const StatePair& initial, const LinearSolution& z, double T,
                                const SolverParams& params);

}  // namespace vnlw
