#include "vnlw/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "vnlw/fft.hpp"
#include "vnlw/norms.hpp"
#include "vnlw/projectors.hpp"

namespace vnlw {

void SolverParams::validate() const
{
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("solver.p must be an odd integer >= 3");
    if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("solver.mu must lie in (0, 1)");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("solver.dt must be > 0");
    if (substeps < 1) throw std::invalid_argument("solver.substeps must be >= 1");
    if (2 * padding < p + 1) throw std::invalid_argument("solver.padding must be >= (p + 1)/2");
    if (!(picard_tol > 0.0)) throw std::invalid_argument("solver.picard_tol must be > 0");
    if (picard_max_iter < 1) throw std::invalid_argument("solver.picard_max_iter must be >= 1");
    if (snapshot_every < 1) throw std::invalid_argument("solver.snapshot_every must be >= 1");
    if (!(blowup_factor > 1.0)) throw std::invalid_argument("solver.blowup_factor must be > 1");
    if (!(delta > 0.0)) throw std::invalid_argument("solver.delta must be > 0");
}

double SolverParams::s0() const { return 1.0 - 1.0 / (5.0 + delta) - 2.0 / 10.0; }

// ---------------------------------------------------------------------------
// Linear solution

LinearSolution::LinearSolution(const StatePair& data, const LinearModel& model)
    : u0_(forward_transform(data.position)),
      u1_(forward_transform(data.velocity)),
      model_(model),
      zero_(data.is_zero())
{
    model_.validate();
}

LinearSolution LinearSolution::zero(const Grid& grid, const LinearModel& model)
{
    return LinearSolution(SpectralField(grid), SpectralField(grid), model, true);
}

SpectralField LinearSolution::z_spectrum(double t) const
{
    if (zero_) return SpectralField(grid());
    return apply_pair_operator(PairOperator::V, t, u0_, u1_, model_);
}

RealField LinearSolution::z(double t) const
{
    if (zero_) return RealField(grid());
    return inverse_transform(z_spectrum(t));
}

RealField LinearSolution::dz(double t) const
{
    if (zero_) return RealField(grid());
    return inverse_transform(apply_pair_operator(PairOperator::DtV, t, u0_, u1_, model_));
}

RealField LinearSolution::z_tilde(double t) const
{
    if (zero_) return RealField(grid());
    return inverse_transform(apply_pair_operator(PairOperator::Vtilde, t, u0_, u1_, model_));
}

LinearSolution LinearSolution::truncated(double cutoff) const
{
    return LinearSolution(project_leq(u0_, cutoff), project_leq(u1_, cutoff), model_, zero_);
}

LinearTrajectory linear_flow(const RandomizedPair& pair, std::span<const double> times, const LinearModel& model)
{
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!(times[k] >= 0.0)) throw std::invalid_argument("linear_flow: negative time");
        if (k > 0 && times[k] < times[k - 1]) throw std::invalid_argument("linear_flow: times must be sorted");
    }
    const LinearSolution solution(pair.data, model);
    LinearTrajectory out;
    out.seed = pair.seed;
    out.kind = pair.kind;
    out.source_digest = pair.source_digest;
    out.zero = solution.is_zero();
    for (double t : times) {
        out.times.push_back(t);
        out.z.push_back(solution.z(t));
        out.z_tilde.push_back(solution.z_tilde(t));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Nonlinearity

namespace {

void check_power_args(int p, int padding)
{
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("nonlinearity: p must be odd and >= 3");
    if (2 * padding < p + 1) throw std::invalid_argument("nonlinearity: padding must be >= (p + 1)/2");
}

double power_ceiling(int p) { return std::pow(1e300, 1.0 / p); }

void raise_power(std::span<double> values, int p, double t)
{
    const double ceiling = power_ceiling(p);
    for (double& w : values) {
        if (!std::isfinite(w) || std::abs(w) > ceiling) {
            throw BlowUpError("nonlinearity overflow: |v + z| exceeds representable range", t);
        }
        double r = w;
        for (int e = 1; e < p; ++e) r *= w;
        w = r;
    }
}

// Where each coarse mode lands on the fine axis; the Nyquist mode is split in two.
struct AxisMap {
    std::vector<std::size_t> first;
    std::vector<std::size_t> second;  // equals first unless split
    std::vector<double> weight;
};

AxisMap make_axis_map(std::size_t n, std::size_t fine)
{
    AxisMap map;
    map.first.resize(n);
    map.second.resize(n);
    map.weight.resize(n);
    const auto half = static_cast<long>(n / 2);
    for (std::size_t i = 0; i < n; ++i) {
        const long m = static_cast<long>(i) < half ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n);
        const auto to_fine = [fine](long mode) {
            return static_cast<std::size_t>(mode >= 0 ? mode : static_cast<long>(fine) + mode);
        };
        map.first[i] = to_fine(m);
        if (m == -half) {
            map.second[i] = to_fine(half);
            map.weight[i] = 0.5;
        } else {
            map.second[i] = map.first[i];
            map.weight[i] = 1.0;
        }
    }
    return map;
}

// Coarse spectrum of w^p computed on a grid of padding * n points.
SpectralField power_spectrum(const RealField& w, int p, int padding, double t)
{
    const Grid& g = w.grid();
    if (padding == 1) {
        std::vector<double> values(w.samples().begin(), w.samples().end());
        raise_power(values, p, t);
        return forward_transform(RealField(g, std::move(values)));
    }
    const std::size_t n = g.n();
    const std::size_t fine = n * static_cast<std::size_t>(padding);
    const SpectralField coarse = forward_transform(w);
    const AxisMap axis = make_axis_map(n, fine);

    // Unitary scaling: fine coefficient = (fine / n) * coarse coefficient.
    const double up = static_cast<double>(fine) / static_cast<double>(n);
    std::vector<Complex> buf(fine * fine);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const Complex c = coarse(i, j) * (up * axis.weight[i] * axis.weight[j]);
            buf[axis.first[i] * fine + axis.first[j]] += c;
            if (axis.second[j] != axis.first[j]) buf[axis.first[i] * fine + axis.second[j]] += c;
            if (axis.second[i] != axis.first[i]) {
                buf[axis.second[i] * fine + axis.first[j]] += c;
                if (axis.second[j] != axis.first[j]) buf[axis.second[i] * fine + axis.second[j]] += c;
            }
        }
    }
    detail::fft2_inplace(buf, fine, +1);
    const double inv_fine = 1.0 / static_cast<double>(fine);
    std::vector<double> values(fine * fine);
    for (std::size_t k = 0; k < buf.size(); ++k) values[k] = buf[k].real() * inv_fine;
    raise_power(values, p, t);
    for (std::size_t k = 0; k < buf.size(); ++k) buf[k] = Complex(values[k], 0.0);
    detail::fft2_inplace(buf, fine, -1);

    // Back to the coarse lattice; both halves of the split Nyquist mode fold onto one.
    const double down = inv_fine * static_cast<double>(n) / static_cast<double>(fine);
    SpectralField out(g);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Complex c = buf[axis.first[i] * fine + axis.first[j]];
            if (axis.second[j] != axis.first[j]) c += buf[axis.first[i] * fine + axis.second[j]];
            if (axis.second[i] != axis.first[i]) {
                c += buf[axis.second[i] * fine + axis.first[j]];
                if (axis.second[j] != axis.first[j]) c += buf[axis.second[i] * fine + axis.second[j]];
            }
            out.at(i, j) = c * down;
        }
    }
    return out;
}

}  // namespace

RealField nonlinearity(const RealField& v, const RealField& z, int p, int padding)
{
    check_power_args(p, padding);
    require_same_grid(v.grid(), z.grid(), "nonlinearity");
    return inverse_transform(power_spectrum(v + z, p, padding, std::numeric_limits<double>::quiet_NaN()));
}

RealField nonlinearity_aliased(const RealField& v, const RealField& z, int p)
{
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("nonlinearity: p must be odd and >= 3");
    require_same_grid(v.grid(), z.grid(), "nonlinearity_aliased");
    RealField w = v + z;
    raise_power(w.mutable_samples(), p, std::numeric_limits<double>::quiet_NaN());
    return w;
}

// ---------------------------------------------------------------------------
// Exponential Duhamel stepping

namespace {

struct SpectralState {
    SpectralField pos;
    SpectralField vel;
};

SpectralState to_spectral(const StatePair& s) { return {forward_transform(s.position), forward_transform(s.velocity)}; }

StatePair to_real(const SpectralState& s) { return StatePair(inverse_transform(s.pos), inverse_transform(s.vel)); }

// Radial symbols of the one-step update for a fixed step h, tabulated on the lattice.
struct StepTable {
    double h = 0.0;
    std::vector<double> pos, vel, dpos, dvel, k0, k1;

    StepTable(const Grid& g, const LinearModel& m, double step) : h(step)
    {
        const std::size_t size = g.size();
        pos.resize(size);
        vel.resize(size);
        dpos.resize(size);
        dvel.resize(size);
        k0.resize(size);
        k1.resize(size);
        for (std::size_t i = 0; i < g.n(); ++i) {
            for (std::size_t j = 0; j < g.n(); ++j) {
                const std::size_t idx = g.index(i, j);
                const double k = g.frequency(i, j).norm();
                pos[idx] = symbols::position(m, k, h);
                vel[idx] = symbols::propagator_w(m, k, h);
                dpos[idx] = symbols::dt_position(m, k, h);
                dvel[idx] = symbols::dt_w(m, k, h);
                k0[idx] = symbols::w_integral(m, k, h);
                k1[idx] = symbols::w_first_moment(m, k, h);
            }
        }
    }

    // Linear flow over h plus the Duhamel term of the forcing F(t + tau) = a + tau * b.
    SpectralState advance(const SpectralState& s, const SpectralField* a, const SpectralField* b) const
    {
        const Grid& g = s.pos.grid();
        SpectralState out{SpectralField(g), SpectralField(g)};
        auto p_in = s.pos.coefficients();
        auto v_in = s.vel.coefficients();
        auto p_out = out.pos.mutable_coefficients();
        auto v_out = out.vel.mutable_coefficients();
        for (std::size_t idx = 0; idx < p_in.size(); ++idx) {
            Complex np = pos[idx] * p_in[idx] + vel[idx] * v_in[idx];
            Complex nv = dpos[idx] * p_in[idx] + dvel[idx] * v_in[idx];
            if (a != nullptr) {
                const Complex fa = a->coefficients()[idx];
                np -= k0[idx] * fa;
                nv -= vel[idx] * fa;
            }
            if (b != nullptr) {
                const Complex fb = b->coefficients()[idx];
                np -= k1[idx] * fb;
                nv -= k0[idx] * fb;
            }
            p_out[idx] = np;
            v_out[idx] = nv;
        }
        return out;
    }
};

class Stepper {
public:
    Stepper(const LinearSolution& z, const SolverParams& params, double h)
        : z_(z), params_(params), model_(params.model()), h_(h / params.substeps)
    {
        const Grid& g = z.grid();
        full_.emplace_back(g, model_, h_);
        if (params_.linear_only) return;
        if (params_.quadrature == Quadrature::Midpoint) {
            full_.emplace_back(g, model_, 0.5 * h_);
        } else if (params_.quadrature == Quadrature::Gauss2) {
            for (double c : nodes()) {
                full_.emplace_back(g, model_, 0.5 * c * h_);
                full_.emplace_back(g, model_, c * h_);
            }
        }
    }

    SpectralState step(const SpectralState& s, double t) const
    {
        SpectralState cur = s;
        for (int k = 0; k < params_.substeps; ++k) cur = substep(cur, t + k * h_);
        return cur;
    }

private:
    static std::array<double, 2> nodes()
    {
        const double off = std::sqrt(3.0) / 6.0;
        return {0.5 - off, 0.5 + off};
    }

    SpectralField forcing(const SpectralField& pos, double t) const
    {
        RealField w = inverse_transform(pos);
        if (!z_.is_zero()) w += z_.z(t);
        return power_spectrum(w, params_.p, params_.padding, t);
    }

    SpectralState substep(const SpectralState& s, double t) const
    {
        const StepTable& table = full_[0];
        if (params_.linear_only) return table.advance(s, nullptr, nullptr);
        const SpectralField f0 = forcing(s.pos, t);
        if (params_.quadrature == Quadrature::Midpoint) {
            const SpectralState half = full_[1].advance(s, &f0, nullptr);
            const SpectralField f_mid = forcing(half.pos, t + 0.5 * h_);
            return table.advance(s, &f_mid, nullptr);
        }
        if (params_.quadrature == Quadrature::Trapezoid) return trapezoid(s, f0, t);
        const auto c = nodes();
        std::array<SpectralField, 2> f_node{SpectralField(s.pos.grid()), SpectralField(s.pos.grid())};
        for (std::size_t i = 0; i < 2; ++i) {
            // exponential midpoint predictor for v(t + c_i h)
            const SpectralState half = full_[1 + 2 * i].advance(s, &f0, nullptr);
            const SpectralField f_half = forcing(half.pos, t + 0.5 * c[i] * h_);
            const SpectralState node = full_[2 + 2 * i].advance(s, &f_half, nullptr);
            f_node[i] = forcing(node.pos, t + c[i] * h_);
        }
        // F(t + tau) ~ a + tau * b through the two node values
        SpectralField slope = f_node[1] - f_node[0];
        slope *= 1.0 / ((c[1] - c[0]) * h_);
        SpectralField intercept = f_node[0];
        SpectralField shift = slope;
        shift *= c[0] * h_;
        intercept -= shift;
        return table.advance(s, &intercept, &slope);
    }

    SpectralState trapezoid(const SpectralState& s, const SpectralField& f0, double t) const
    {
        const StepTable& table = full_[0];
        SpectralState guess = table.advance(s, &f0, nullptr);
        for (int it = 0; it < 100; ++it) {
            SpectralField slope = forcing(guess.pos, t + h_) - f0;
            slope *= 1.0 / h_;
            SpectralState next = table.advance(s, &f0, &slope);
            double change = 0.0, size = 0.0;
            for (std::size_t k = 0; k < next.pos.coefficients().size(); ++k) {
                change = std::max(change, std::abs(next.pos.coefficients()[k] - guess.pos.coefficients()[k]));
                size = std::max(size, std::abs(next.pos.coefficients()[k]));
            }
            guess = std::move(next);
            if (change <= 1e-15 * std::max(1.0, size)) return guess;
        }
        throw BlowUpError("implicit trapezoid step did not converge", t + h_);
    }

    const LinearSolution& z_;
    SolverParams params_;
    LinearModel model_;
    double h_;
    std::vector<StepTable> full_;
};

double spectral_pair_norm(const SpectralState& s, double sobolev)
{
    const double a = sobolev_norm(s.pos, sobolev);
    const double b = sobolev_norm(s.vel, sobolev - 1.0);
    return std::sqrt(a * a + b * b);
}

std::size_t step_count(double T, double dt)
{
    return static_cast<std::size_t>(std::max(1.0, std::ceil(T / dt - 1e-9)));
}

void record(Trajectory& traj, const LinearSolution& z, double t, StatePair state)
{
    traj.times.push_back(t);
    traj.states.push_back(std::move(state));
    traj.linear.times.push_back(t);
    traj.linear.z.push_back(z.z(t));
    traj.linear.z_tilde.push_back(z.z_tilde(t));
}

Trajectory march(const LinearSolution& z, const RandomizedPair& pair, const StatePair& initial, double T,
                 const SolverParams& params, const StepObserver& observer)
{
    if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("evolve: T must be > 0");
    require_same_grid(initial.grid(), z.grid(), "evolve");

    Trajectory traj;
    traj.params = params;
    traj.linear.seed = pair.seed;
    traj.linear.kind = pair.kind;
    traj.linear.source_digest = pair.source_digest;
    traj.linear.zero = z.is_zero();

    const std::size_t steps = step_count(T, params.dt);
    const double h = T / static_cast<double>(steps);
    traj.step = h;
    const Stepper stepper(z, params, h);

    const double s0 = params.s0();
    const double reference = std::max({1.0, pair_norm(initial, s0), pair_norm(pair.data, s0)});
    const double ceiling = params.blowup_factor * reference;

    SpectralState state = to_spectral(initial);
    record(traj, z, 0.0, initial);
    if (observer) observer(0.0, initial);

    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * h;
        const double t_next = static_cast<double>(k + 1) * h;
        try {
            SpectralState next = stepper.step(state, t);
            const double norm = spectral_pair_norm(next, s0);
            if (!std::isfinite(norm) || norm > ceiling) {
                throw BlowUpError("H^s0 pair norm exceeded the blow-up ceiling", t_next);
            }
            state = std::move(next);
        } catch (const BlowUpError& e) {
            traj.blow_up = true;
            traj.blow_up_time = std::isnan(e.time()) ? t : e.time();
            traj.blow_up_reason = e.what();
            break;
        } catch (const NonFiniteError& e) {
            traj.blow_up = true;
            traj.blow_up_time = t_next;
            traj.blow_up_reason = e.what();
            break;
        }
        const bool snapshot = (k + 1) % static_cast<std::size_t>(params.snapshot_every) == 0 || k + 1 == steps;
        if (snapshot || observer) {
            StatePair real = to_real(state);
            if (observer) observer(t_next, real);
            if (snapshot) record(traj, z, t_next, std::move(real));
        }
    }
    return traj;
}

}  // namespace

StatePair duhamel_step(const StatePair& state, double t, double dt, const LinearSolution& z,
                       const SolverParams& params)
{
    params.validate();
    if (!(dt > 0.0) || dt > params.dt * (1.0 + 1e-12)) {
        throw std::invalid_argument("duhamel_step: dt must be in (0, params.dt]");
    }
    require_same_grid(state.grid(), z.grid(), "duhamel_step");
    const Stepper stepper(z, params, dt);
    return to_real(stepper.step(to_spectral(state), t));
}

Trajectory evolve_full(const RandomizedPair& pair, double T, const SolverParams& params,
                       const EvolveOptions& options)
{
    params.validate();
    const LinearSolution z(pair.data, params.model());
    const StatePair initial = options.initial ? *options.initial : StatePair::zero(pair.data.grid());
    return march(z, pair, initial, T, params, options.observer);
}

Trajectory evolve_truncated(const RandomizedPair& pair, double cutoff, double T, const SolverParams& params,
                            const EvolveOptions& options)
{
    params.validate();
    if (!(cutoff > 0.0)) throw std::invalid_argument("evolve_truncated: cutoff must be > 0");
    const LinearSolution z = LinearSolution(pair.data, params.model()).truncated(cutoff);
    const StatePair initial = options.initial
                                  ? StatePair(project_leq(options.initial->position, cutoff),
                                              project_leq(options.initial->velocity, cutoff))
                                  : StatePair::zero(pair.data.grid());
    return march(z, pair, initial, T, params, options.observer);
}

// ---------------------------------------------------------------------------
// Picard iteration

PicardResult picard_solve_local(const StatePair& initial, const LinearSolution& z, double T,
                                const SolverParams& params)
{
    params.validate();
    if (!(T > 0.0)) throw std::invalid_argument("picard_solve_local: T must be > 0");
    require_same_grid(initial.grid(), z.grid(), "picard_solve_local");

    const Grid& g = z.grid();
    const LinearModel model = params.model();
    const std::size_t steps = step_count(T, params.dt);
    const double h = T / static_cast<double>(steps);
    const double s0 = params.s0();
    const double q = 5.0 + params.delta;
    const StepTable table(g, model, h);

    std::vector<double> times(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) times[k] = static_cast<double>(k) * h;

    const SpectralField v0 = forward_transform(initial.position);
    const SpectralField v1 = forward_transform(initial.velocity);
    std::vector<SpectralState> linear;
    std::vector<RealField> z_samples;
    for (double t : times) {
        linear.push_back({apply_pair_operator(PairOperator::V, t, v0, v1, model),
                          apply_pair_operator(PairOperator::DtV, t, v0, v1, model)});
        z_samples.push_back(z.z(t));
    }

    PicardResult result;
    std::vector<SpectralState> current = linear;
    std::vector<RealField> current_real;
    for (const auto& s : current) current_real.push_back(inverse_transform(s.pos));

    int rising = 0;
    try {
        for (int it = 1; it <= params.picard_max_iter; ++it) {
            std::vector<SpectralField> forcing;
            forcing.reserve(times.size());
            for (std::size_t k = 0; k < times.size(); ++k) {
                forcing.push_back(params.linear_only ? SpectralField(g)
                                                     : power_spectrum(current_real[k] + z_samples[k], params.p,
                                                                      params.padding, times[k]));
            }
            std::vector<SpectralState> next;
            next.reserve(times.size());
            SpectralState duhamel{SpectralField(g), SpectralField(g)};
            next.push_back(linear[0]);
            for (std::size_t k = 0; k < steps; ++k) {
                SpectralField slope = forcing[k + 1] - forcing[k];
                slope *= 1.0 / h;
                duhamel = table.advance(duhamel, &forcing[k], &slope);
                next.push_back({linear[k + 1].pos + duhamel.pos, linear[k + 1].vel + duhamel.vel});
            }

            std::vector<RealField> next_real;
            double sup_energy = 0.0;
            std::vector<double> l10(times.size());
            for (std::size_t k = 0; k < times.size(); ++k) {
                next_real.push_back(inverse_transform(next[k].pos));
                const SpectralState diff{next[k].pos - current[k].pos, next[k].vel - current[k].vel};
                sup_energy = std::max(sup_energy, spectral_pair_norm(diff, s0));
                l10[k] = lebesgue_norm(next_real[k] - current_real[k], 10.0);
            }
            const double distance = sup_energy + time_norm(times, l10, q);
            if (!std::isfinite(distance)) throw BlowUpError("Picard iterate diverged", T);
            result.distances.push_back(distance);
            result.iterations = it;
            current = std::move(next);
            current_real = std::move(next_real);

            if (distance < params.picard_tol) {
                result.converged = true;
                break;
            }
            const std::size_t m = result.distances.size();
            if (m >= 2 && result.distances[m - 1] >= result.distances[m - 2]) {
                if (++rising >= 3) {
                    result.non_contraction = true;
                    break;
                }
            } else {
                rising = 0;
            }
        }
    } catch (const BlowUpError&) {
        result.non_contraction = true;
    } catch (const NonFiniteError&) {
        result.non_contraction = true;
    }

    Trajectory& traj = result.trajectory;
    traj.params = params;
    traj.step = h;
    traj.linear.zero = z.is_zero();
    if (result.non_contraction) return result;
    for (std::size_t k = 0; k < times.size(); ++k) {
        traj.times.push_back(times[k]);
        traj.states.push_back(to_real(current[k]));
        traj.linear.times.push_back(times[k]);
        traj.linear.z.push_back(z_samples[k]);
        traj.linear.z_tilde.push_back(z.z_tilde(times[k]));
    }
    return result;
}

}  // namespace vnlw
