#pragma once

#include <span>
#include <vector>

#include "vnlw/solver.hpp"

namespace vnlw {

// ---------------------------------------------------------------------------
// Energy

struct EnergyParts {
    double gradient = 0.0;   ///< 1/2 ||grad v||^2
    double kinetic = 0.0;    ///< 1/2 ||d_t v||^2
    double potential = 0.0;  ///< ||v||_{p+1}^{p+1} / (p + 1)
    double total() const { return gradient + kinetic + potential; }
};

EnergyParts energy_parts(const StatePair& state, int p = 5);
double energy(const StatePair& state, int p = 5);

/// dE/dt of the unforced flow: -2 mu ||d_t v||^2_{Hdot^{1/2}}.
double dissipation_rate(const StatePair& state, double mu = 0.5);

struct EnergyRecord {
    std::vector<double> times;
    std::vector<double> energy;
    std::vector<double> gradient;
    std::vector<double> kinetic;
    std::vector<double> potential;
    std::vector<double> dissipation;
};

EnergyRecord energy_record(const Trajectory& traj);

struct DissipationReport {
    /// Interior snapshot times with the centered rate and the predicted rate there.
    std::vector<double> times;
    std::vector<double> centered_rate;
    std::vector<double> predicted_rate;
    double max_discrepancy = 0.0;
    /// Largest E(t_{k+1}) - E(t_k); <= 0 for a monotone record.
    double max_increase = 0.0;
};

/// Compares centered differences of E with the dissipation rate. The trajectory must
/// have z = 0 and at least three snapshots.
DissipationReport dissipation_check(const Trajectory& traj);

struct EnergyIncrement {
    double T0 = 0.0;
    double t = 0.0;
    double I = 0.0;          ///< -int int p z v^{p-1} d_t v
    double II = 0.0;         ///< -int int d_t v N(z, v)
    double I1_boundary = 0.0;  ///< [-int z v^p]_{T0}^{t}
    double I2 = 0.0;         ///< int int <nabla> z-tilde v^p
    double dissipation = 0.0;  ///< time integral of the dissipation rate (<= 0)
    double energy_change = 0.0;
    /// I - I1_boundary - I2.
    double parts_residual() const { return I - I1_boundary - I2; }
    /// E(t) - E(T0) - (dissipation + I + II); the exact identity gives 0.
    double energy_residual() const { return energy_change - dissipation - I - II; }
};

/// Trapezoid time integrals over the snapshots in [T0, t].
EnergyIncrement energy_increment_decomposition(const Trajectory& traj, double T0, double t);

// ---------------------------------------------------------------------------
// Mixed norms

/// ||f||_{L^q_t L^r_x} over the samples with time in [a, b] (at least four).
double mixed_norm(std::span<const RealField> fields, std::span<const double> times, double q, double r,
                  double a, double b);
/// v component of a trajectory.
double mixed_norm(const Trajectory& traj, double q, double r, double a, double b);
/// z component of a linear trajectory.
double mixed_norm(const LinearTrajectory& traj, double q, double r, double a, double b);

// ---------------------------------------------------------------------------
// Exponent arithmetic

struct AdmissibilityReport {
    double q = 0.0;
    double r = 0.0;
    double sigma = 0.0;
    int d = 2;
    /// 1/q + d/r = d/2 - s.
    double s = 0.0;
    bool sigma_admissible = false;
};

AdmissibilityReport admissibility(double q, double r, double sigma, int d = 2);
double scaling_regularity(double q, double r, int d = 2);
double critical_exponent(int d, int p);

// ---------------------------------------------------------------------------
// Smoothing rates

struct RateFit {
    std::vector<double> times;
    std::vector<double> ratios;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    /// -alpha - d (1/p - 1/q)
    double expected = 0.0;
    bool degenerate = false;  ///< r_squared < 0.9
};

/// Log-log fit of ||D^alpha P(t) f||_{L^q} / ||f||_{L^p} against t.
RateFit schauder_rate_fit(const RealField& f, double alpha, double p, double q, std::span<const double> t_grid,
                          const LinearModel& model = {});

/// Lattice Riesz kernel with spectrum 1/|xi| and a matched mean, centred at the origin.
/// Its Poisson smoothing decays at the extremal rate for every exponent pair tested.
RealField riesz_test_field(const Grid& grid);

/// Ordinary least squares y = intercept + slope * x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------------------
// Tail fits

struct TailFit {
    std::vector<double> lambdas;
    std::vector<double> p_hat;
    std::vector<double> lower;  ///< 95% Wilson band
    std::vector<double> upper;
    std::vector<bool> in_window;
    double scale = 1.0;
    std::size_t ensemble = 0;
    double log_C = 0.0;
    double c = 0.0;
    double c_stderr = 0.0;
    double r_squared = 0.0;
    std::size_t fit_points = 0;
    bool insufficient_tail = false;
};

/// Exceedance P(X > lambda) with Wilson intervals and a weighted fit of
/// log P = log C - c lambda^2 / scale over P in [0.001, 0.5].
/// Needs at least 500 values; fewer than three usable points sets insufficient_tail.
TailFit tail_fit(std::span<const double> values, std::span<const double> lambdas, double scale);

/// T^{2/q - 2 alpha} ||data||^2.
double tail_scale(double T, double q, double alpha, double data_norm);

// ---------------------------------------------------------------------------
// Energy growth bounds

struct AQuantity {
    double T0 = 0.0;
    double T = 0.0;
    double s1 = 0.55;
    double one = 1.0;
    double z_sup_squared = 0.0;       ///< ||z||^2_{L^inf L^inf}
    double z_l10_tenth = 0.0;         ///< ||z||^10_{L^10 L^10}
    double z_sup_l6_sixth = 0.0;      ///< ||z||^6_{L^inf L^6}
    double ztilde_l6_sixth = 0.0;     ///< ||z-tilde||^6_{L^6 L^6}
    double ztilde_smooth_sup = 0.0;   ///< ||<nabla>^{s1} z-tilde||_{L^inf L^inf}
    double total = 1.0;
};

AQuantity a_quantity(const LinearTrajectory& linear, double T0, double T, double s1 = 0.55);

struct GronwallReport {
    /// Smallest K with E(t) <= K (E(T0) + A + A int_{T0}^t E); 1 when E vanishes.
    double K = 1.0;
    /// E(t) <= K (E(T0) + A) exp(K A (t - T0)) at every sample.
    bool bound_holds = true;
    std::size_t samples = 0;
};

GronwallReport gronwall_check(const EnergyRecord& record, const AQuantity& a, double T0, double T);

// ---------------------------------------------------------------------------
// Probes

struct InflationRow {
    double epsilon = 0.0;
    double initial_norm = 0.0;
    double sup_norm = 0.0;
    double ratio = 0.0;
    bool inflated_beyond_ceiling = false;
};

/// Evolves eps * profile / ||profile||_{H^s} for each eps and records
/// sup_t ||(u, d_t u)(t)||_{H^s} / ||(u, d_t u)(0)||_{H^s}.
std::vector<InflationRow> norm_inflation_probe(const StatePair& profile, std::span<const double> epsilons,
                                               double s, double T_probe, const SolverParams& params);

struct EventReport {
    std::size_t ensemble = 0;
    std::size_t inside = 0;
    double probability = 0.0;   ///< P(||z|| <= C0)
    double complement = 0.0;
    double standard_error = 0.0;
};

/// Empirical probability that the precomputed norms stay below C0.
EventReport randomized_strichartz_event(std::span<const double> norms, double C0);
/// Same, from linear trajectories with the L^q_t L^10_x norm taken over [0, T].
EventReport randomized_strichartz_event(std::span<const LinearTrajectory> ensemble, double C0, double T,
                                        double q = 5.2);

}  // namespace vnlw
