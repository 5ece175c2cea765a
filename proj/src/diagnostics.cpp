#include "vnlw/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "vnlw/fft.hpp"
#include "vnlw/multiplier.hpp"
#include "vnlw/norms.hpp"

namespace vnlw {

namespace {

double ipow(double x, int e)
{
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

double trapezoid(std::span<const double> t, std::span<const double> f)
{
    double acc = 0.0;
    for (std::size_t k = 1; k < t.size(); ++k) acc += 0.5 * (t[k] - t[k - 1]) * (f[k] + f[k - 1]);
    return acc;
}

// Indices of the samples whose time lies in [a, b], allowing round-off at the ends.
std::vector<std::size_t> window(std::span<const double> times, double a, double b)
{
    const double slack = 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] >= a - slack && times[k] <= b + slack) idx.push_back(k);
    }
    return idx;
}

void require_exponent(double x, double lo, const char* name)
{
    if (!(x >= lo)) throw std::invalid_argument(std::string(name) + " out of range");
}

double reciprocal(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

}  // namespace

// ---------------------------------------------------------------------------
// Energy

EnergyParts energy_parts(const StatePair& state, int p)
{
    if (p < 1) throw std::invalid_argument("energy: p must be positive");
    const Grid& g = state.grid();
    const double dA = g.cell_area();
    EnergyParts parts;
    const double grad = homogeneous_norm(state.position, 1.0);
    parts.gradient = 0.5 * grad * grad;
    double kin = 0.0;
    for (double x : state.velocity.samples()) kin += x * x;
    parts.kinetic = 0.5 * kin * dA;
    double pot = 0.0;
    for (double x : state.position.samples()) pot += ipow(x, p + 1);
    parts.potential = pot * dA / (p + 1);
    return parts;
}

double energy(const StatePair& state, int p) { return energy_parts(state, p).total(); }

double dissipation_rate(const StatePair& state, double mu)
{
    const double h = homogeneous_norm(state.velocity, 0.5);
    return -2.0 * mu * h * h;
}

EnergyRecord energy_record(const Trajectory& traj)
{
    EnergyRecord rec;
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const EnergyParts parts = energy_parts(traj.states[k], traj.params.p);
        rec.times.push_back(traj.times[k]);
        rec.energy.push_back(parts.total());
        rec.gradient.push_back(parts.gradient);
        rec.kinetic.push_back(parts.kinetic);
        rec.potential.push_back(parts.potential);
        rec.dissipation.push_back(dissipation_rate(traj.states[k], traj.params.mu));
    }
    return rec;
}

DissipationReport dissipation_check(const Trajectory& traj)
{
    if (!traj.z_is_zero()) throw std::invalid_argument("dissipation_check: trajectory has nonzero z");
    if (traj.states.size() < 3) throw std::invalid_argument("dissipation_check: needs at least three snapshots");
    const EnergyRecord rec = energy_record(traj);
    DissipationReport rep;
    rep.max_increase = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < rec.times.size(); ++k) {
        rep.max_increase = std::max(rep.max_increase, rec.energy[k + 1] - rec.energy[k]);
    }
    for (std::size_t k = 1; k + 1 < rec.times.size(); ++k) {
        const double rate = (rec.energy[k + 1] - rec.energy[k - 1]) / (rec.times[k + 1] - rec.times[k - 1]);
        rep.times.push_back(rec.times[k]);
        rep.centered_rate.push_back(rate);
        rep.predicted_rate.push_back(rec.dissipation[k]);
        rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(rate - rec.dissipation[k]));
    }
    return rep;
}

EnergyIncrement energy_increment_decomposition(const Trajectory& traj, double T0, double t)
{
    if (!(t > T0)) throw std::invalid_argument("energy_increment_decomposition: need T0 < t");
    if (traj.linear.z.size() != traj.states.size() || traj.linear.z_tilde.size() != traj.states.size()) {
        throw std::invalid_argument("energy_increment_decomposition: missing z or z-tilde samples");
    }
    const auto idx = window(traj.times, T0, t);
    if (idx.size() < 2) throw std::invalid_argument("energy_increment_decomposition: fewer than two samples");

    const int p = traj.params.p;
    const double dA = traj.states.front().grid().cell_area();
    std::vector<double> ts, fI, fII, bnd, fI2, diss;
    for (std::size_t k : idx) {
        const StatePair& s = traj.states[k];
        const auto v = s.position.samples();
        const auto vt = s.velocity.samples();
        const auto z = traj.linear.z[k].samples();
        const RealField dz = bessel_potential(traj.linear.z_tilde[k], 1.0);
        const auto zt = dz.samples();
        double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double vp1 = ipow(v[i], p - 1);
            const double vp = vp1 * v[i];
            const double nl = ipow(v[i] + z[i], p) - vp - p * vp1 * z[i];
            a += p * z[i] * vp1 * vt[i];
            b += vt[i] * nl;
            c += z[i] * vp;
            d += zt[i] * vp;
        }
        ts.push_back(traj.times[k]);
        fI.push_back(-a * dA);
        fII.push_back(-b * dA);
        bnd.push_back(-c * dA);
        fI2.push_back(d * dA);
        diss.push_back(dissipation_rate(s, traj.params.mu));
    }
    EnergyIncrement out;
    out.T0 = ts.front();
    out.t = ts.back();
    out.I = trapezoid(ts, fI);
    out.II = trapezoid(ts, fII);
    out.I1_boundary = bnd.back() - bnd.front();
    out.I2 = trapezoid(ts, fI2);
    out.dissipation = trapezoid(ts, diss);
    out.energy_change = energy(traj.states[idx.back()], p) - energy(traj.states[idx.front()], p);
    return out;
}

// ---------------------------------------------------------------------------
// Mixed norms

double mixed_norm(std::span<const RealField> fields, std::span<const double> times, double q, double r, double a,
                  double b)
{
    if (fields.size() != times.size()) throw std::invalid_argument("mixed_norm: size mismatch");
    require_exponent(q, 1.0, "mixed_norm: q");
    require_exponent(r, 1.0, "mixed_norm: r");
    if (!(b > a)) throw std::invalid_argument("mixed_norm: empty interval");
    const auto idx = window(times, a, b);
    if (idx.size() < 4) throw std::invalid_argument("mixed_norm: fewer than four samples in interval");
    std::vector<double> ts, norms;
    for (std::size_t k : idx) {
        ts.push_back(times[k]);
        norms.push_back(lebesgue_norm(fields[k], r));
    }
    return time_norm(ts, norms, q);
}

double mixed_norm(const Trajectory& traj, double q, double r, double a, double b)
{
    std::vector<RealField> v;
    v.reserve(traj.states.size());
    for (const auto& s : traj.states) v.push_back(s.position);
    return mixed_norm(v, traj.times, q, r, a, b);
}

double mixed_norm(const LinearTrajectory& traj, double q, double r, double a, double b)
{
    return mixed_norm(traj.z, traj.times, q, r, a, b);
}

// ---------------------------------------------------------------------------
// Exponent arithmetic

AdmissibilityReport admissibility(double q, double r, double sigma, int d)
{
    require_exponent(q, 2.0, "admissibility: q");
    require_exponent(r, 2.0, "admissibility: r");
    if (!(sigma > 0.0)) throw std::invalid_argument("admissibility: sigma must be > 0");
    if (d < 1) throw std::invalid_argument("admissibility: d must be >= 1");
    AdmissibilityReport rep{q, r, sigma, d, scaling_regularity(q, r, d), false};
    const bool endpoint = q == 2.0 && std::isinf(r) && sigma == 1.0;
    // 2/q + 2 sigma/r <= sigma, cleared of denominators so rational inputs compare exactly
    bool inside;
    if (std::isinf(q) && std::isinf(r)) inside = true;
    else if (std::isinf(q)) inside = 2.0 * sigma <= sigma * r;
    else if (std::isinf(r)) inside = 2.0 <= sigma * q;
    else inside = 2.0 * r + 2.0 * sigma * q <= sigma * q * r;
    rep.sigma_admissible = !endpoint && inside;
    return rep;
}

double scaling_regularity(double q, double r, int d)
{
    require_exponent(q, 2.0, "scaling_regularity: q");
    require_exponent(r, 2.0, "scaling_regularity: r");
    // single rounding: (d q r - 2 r - 2 d q) / (2 q r)
    if (std::isinf(q) && std::isinf(r)) return 0.5 * d;
    if (std::isinf(q)) return (d * r - 2.0 * d) / (2.0 * r);
    if (std::isinf(r)) return (d * q - 2.0) / (2.0 * q);
    return (d * q * r - 2.0 * r - 2.0 * d * q) / (2.0 * q * r);
}

double critical_exponent(int d, int p)
{
    if (d < 1 || p < 2) throw std::invalid_argument("critical_exponent: need d >= 1 and p >= 2");
    return static_cast<double>(d * (p - 1) - 4) / (2.0 * (p - 1));
}

// ---------------------------------------------------------------------------
// Smoothing rates

LineFit fit_line(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need two or more points");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_line: x values are all equal");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : sxy * sxy / (sxx * syy);
    return fit;
}

RateFit schauder_rate_fit(const RealField& f, double alpha, double p, double q, std::span<const double> t_grid,
                          const LinearModel& model)
{
    require_exponent(p, 1.0, "schauder_rate_fit: p");
    if (!(q >= p)) throw std::invalid_argument("schauder_rate_fit: need p <= q");
    if (!(alpha >= 0.0)) throw std::invalid_argument("schauder_rate_fit: alpha must be >= 0");
    if (t_grid.size() < 3) throw std::invalid_argument("schauder_rate_fit: need three or more times");
    const double base = lebesgue_norm(f, p);
    if (!(base > 0.0)) throw std::invalid_argument("schauder_rate_fit: zero test field");
    const SpectralField spectrum = forward_transform(f);

    RateFit fit;
    fit.expected = -alpha - 2.0 * (reciprocal(p) - reciprocal(q));
    std::vector<double> lx, ly;
    for (double t : t_grid) {
        if (!(t > 0.0)) throw std::invalid_argument("schauder_rate_fit: times must be > 0");
        const SpectralField smoothed = apply_radial(spectrum, [&](double k) {
            return (alpha == 0.0 ? 1.0 : std::pow(k, alpha)) * std::exp(-model.decay(k) * t);
        });
        const double ratio = lebesgue_norm(inverse_transform(smoothed), q) / base;
        fit.times.push_back(t);
        fit.ratios.push_back(ratio);
        lx.push_back(std::log(t));
        ly.push_back(std::log(ratio));
    }
    const LineFit line = fit_line(lx, ly);
    fit.slope = line.slope;
    fit.intercept = line.intercept;
    fit.r_squared = line.r_squared;
    fit.degenerate = fit.r_squared < 0.9;
    return fit;
}

RealField riesz_test_field(const Grid& grid)
{
    SpectralField spectrum(grid);
    const double dk = grid.wavenumber_unit();
    for (std::size_t i = 0; i < grid.n(); ++i) {
        for (std::size_t j = 0; j < grid.n(); ++j) {
            const double k = grid.frequency(i, j).norm();
            // The zero mode carries the mass of a disc of radius dk / sqrt(pi) around the origin.
            spectrum.at(i, j) = k == 0.0 ? 2.0 * std::sqrt(std::numbers::pi) / dk : 1.0 / k;
        }
    }
    return inverse_transform(spectrum);
}

// ---------------------------------------------------------------------------
// Tail fits

double tail_scale(double T, double q, double alpha, double data_norm)
{
    if (!(T > 0.0) || !(q >= 1.0)) throw std::invalid_argument("tail_scale: need T > 0 and q >= 1");
    return std::pow(T, 2.0 / q - 2.0 * alpha) * data_norm * data_norm;
}

TailFit tail_fit(std::span<const double> values, std::span<const double> lambdas, double scale)
{
    if (values.size() < 500) throw std::invalid_argument("tail_fit: ensemble must have at least 500 values");
    if (!(scale > 0.0)) throw std::invalid_argument("tail_fit: scale must be > 0");
    if (!std::is_sorted(lambdas.begin(), lambdas.end())) throw std::invalid_argument("tail_fit: lambda grid must be sorted");
    std::vector<double> sorted(values.begin(), values.end());
    for (double x : sorted) {
        if (!std::isfinite(x)) throw std::invalid_argument("tail_fit: non-finite ensemble value");
    }
    std::sort(sorted.begin(), sorted.end());

    TailFit fit;
    fit.scale = scale;
    fit.ensemble = sorted.size();
    const double n = static_cast<double>(sorted.size());
    const double z = 1.959963984540054;
    std::vector<double> x, y, w;
    for (double lam : lambdas) {
        const auto above = static_cast<double>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), lam));
        const double p = above / n;
        const double denom = 1.0 + z * z / n;
        const double centre = (p + z * z / (2.0 * n)) / denom;
        const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
        fit.lambdas.push_back(lam);
        fit.p_hat.push_back(p);
        fit.lower.push_back(std::max(0.0, centre - half));
        fit.upper.push_back(std::min(1.0, centre + half));
        const bool use = above > 0.0 && p >= 0.001 && p <= 0.5;
        fit.in_window.push_back(use);
        if (use) {
            x.push_back(lam * lam / scale);
            y.push_back(std::log(p));
            w.push_back(n * p / (1.0 - p));  // inverse delta-method variance of log p
        }
    }
    fit.fit_points = x.size();
    if (x.size() < 3) {
        fit.insufficient_tail = true;
        fit.c = std::numeric_limits<double>::quiet_NaN();
        fit.c_stderr = std::numeric_limits<double>::quiet_NaN();
        fit.log_C = std::numeric_limits<double>::quiet_NaN();
        return fit;
    }
    double sw = 0.0, mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        mx += w[i] * x[i];
        my += w[i] * y[i];
    }
    mx /= sw;
    my /= sw;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += w[i] * (x[i] - mx) * (x[i] - mx);
        sxy += w[i] * (x[i] - mx) * (y[i] - my);
        syy += w[i] * (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) {
        fit.insufficient_tail = true;
        return fit;
    }
    const double slope = sxy / sxx;
    fit.c = -slope;
    fit.log_C = my - slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.log_C + slope * x[i]);
        rss += w[i] * r * r;
    }
    fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - rss / syy;
    // Residual-scaled: the binomial weights alone ignore the correlation between lambda points.
    const double sigma2 = std::max(1.0, rss / static_cast<double>(x.size() - 2));
    fit.c_stderr = std::sqrt(sigma2 / sxx);
    return fit;
}

// ---------------------------------------------------------------------------
// Energy growth bounds

AQuantity a_quantity(const LinearTrajectory& linear, double T0, double T, double s1)
{
    if (!(T0 > 0.0 && T > T0)) throw std::invalid_argument("a_quantity: need 0 < T0 < T");
    if (!(s1 >= 0.0)) throw std::invalid_argument("a_quantity: s1 must be >= 0");
    if (linear.z_tilde.size() != linear.times.size() || linear.z.size() != linear.times.size()) {
        throw std::invalid_argument("a_quantity: missing z or z-tilde samples");
    }
    const auto idx = window(linear.times, T0, T);
    if (idx.size() < 4) throw std::invalid_argument("a_quantity: fewer than four samples in [T0, T]");

    AQuantity a;
    a.T0 = T0;
    a.T = T;
    a.s1 = s1;
    const double zsup = mixed_norm(linear.z, linear.times, kInfinity, kInfinity, T0, T);
    a.z_sup_squared = zsup * zsup;
    a.z_l10_tenth = ipow(mixed_norm(linear.z, linear.times, 10.0, 10.0, T0, T), 10);
    a.z_sup_l6_sixth = ipow(mixed_norm(linear.z, linear.times, kInfinity, 6.0, T0, T), 6);
    a.ztilde_l6_sixth = ipow(mixed_norm(linear.z_tilde, linear.times, 6.0, 6.0, T0, T), 6);
    double smooth = 0.0;
    for (std::size_t k : idx) smooth = std::max(smooth, bessel_potential(linear.z_tilde[k], s1).max_abs());
    a.ztilde_smooth_sup = smooth;
    a.total = a.one + a.z_sup_squared + a.z_l10_tenth + a.z_sup_l6_sixth + a.ztilde_l6_sixth + a.ztilde_smooth_sup;
    return a;
}

GronwallReport gronwall_check(const EnergyRecord& record, const AQuantity& a, double T0, double T)
{
    const auto idx = window(record.times, T0, T);
    if (idx.size() < 2) throw std::invalid_argument("gronwall_check: fewer than two samples in [T0, T]");
    GronwallReport rep;
    rep.samples = idx.size();
    const double A = a.total;
    const double E0 = record.energy[idx.front()];
    double integral = 0.0;
    double K = 0.0;
    bool finite = true;
    for (std::size_t m = 0; m < idx.size(); ++m) {
        const std::size_t k = idx[m];
        const double E = record.energy[k];
        if (!std::isfinite(E)) {
            finite = false;
            break;
        }
        if (m > 0) {
            const std::size_t j = idx[m - 1];
            integral += 0.5 * (record.times[k] - record.times[j]) * (E + record.energy[j]);
        }
        K = std::max(K, E / (E0 + A + A * integral));
    }
    if (!finite) {
        rep.K = std::numeric_limits<double>::infinity();
        rep.bound_holds = false;
        return rep;
    }
    rep.K = K == 0.0 ? 1.0 : K;
    for (std::size_t k : idx) {
        const double bound = rep.K * (E0 + A) * std::exp(rep.K * A * (record.times[k] - record.times[idx.front()]));
        if (record.energy[k] > bound * (1.0 + 1e-12)) rep.bound_holds = false;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Probes

std::vector<InflationRow> norm_inflation_probe(const StatePair& profile, std::span<const double> epsilons,
                                               double s, double T_probe, const SolverParams& params)
{
    params.validate();
    const double base = pair_norm(profile, s);
    if (!(base > 0.0)) throw std::invalid_argument("norm_inflation_probe: zero profile");
    std::vector<InflationRow> rows;
    for (double eps : epsilons) {
        if (!(eps > 0.0)) throw std::invalid_argument("norm_inflation_probe: epsilon must be > 0");
        RealField u0 = profile.position;
        RealField u1 = profile.velocity;
        u0 *= eps / base;
        u1 *= eps / base;
        const StatePair data(std::move(u0), std::move(u1));
        const LinearSolution z(data, params.model());
        const Trajectory traj = evolve_full(deterministic_pair(data), T_probe, params);

        InflationRow row;
        row.epsilon = eps;
        row.initial_norm = pair_norm(data, s);
        for (std::size_t k = 0; k < traj.states.size(); ++k) {
            const StatePair u(traj.u(k), z.dz(traj.times[k]) + traj.states[k].velocity);
            row.sup_norm = std::max(row.sup_norm, pair_norm(u, s));
        }
        row.inflated_beyond_ceiling = traj.blow_up;
        row.ratio = row.inflated_beyond_ceiling ? std::numeric_limits<double>::infinity()
                                                : row.sup_norm / row.initial_norm;
        rows.push_back(row);
    }
    return rows;
}

EventReport randomized_strichartz_event(std::span<const double> norms, double C0)
{
    if (norms.empty()) throw std::invalid_argument("randomized_strichartz_event: empty ensemble");
    EventReport rep;
    rep.ensemble = norms.size();
    for (double x : norms) {
        if (x <= C0) ++rep.inside;
    }
    const double n = static_cast<double>(rep.ensemble);
    rep.probability = static_cast<double>(rep.inside) / n;
    rep.complement = 1.0 - rep.probability;
    rep.standard_error = std::sqrt(rep.probability * rep.complement / n);
    return rep;
}

EventReport randomized_strichartz_event(std::span<const LinearTrajectory> ensemble, double C0, double T, double q)
{
    std::vector<double> norms;
    norms.reserve(ensemble.size());
    for (const auto& traj : ensemble) norms.push_back(mixed_norm(traj, q, 10.0, 0.0, T));
    return randomized_strichartz_event(norms, C0);
}

}  // namespace vnlw
