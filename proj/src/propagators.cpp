#include "vnlw/propagators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "vnlw/fft.hpp"

namespace vnlw {

namespace {

void require_nonnegative_time(double t, const char* what)
{
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument(std::string(what) + ": time must be finite and >= 0");
    }
}

// (e^z - 1)/z and (e^z - 1 - z)/z^2, series near the origin.
Complex phi1(Complex z)
{
    if (std::abs(z) < 0.5) {
        Complex term(1.0, 0.0);
        Complex sum = term;
        for (int k = 2; k < 30; ++k) {
            term *= z / static_cast<double>(k);
            sum += term;
        }
        return sum;
    }
    return (std::exp(z) - 1.0) / z;
}

Complex phi2(Complex z)
{
    if (std::abs(z) < 0.5) {
        Complex term(0.5, 0.0);
        Complex sum = term;
        for (int k = 3; k < 30; ++k) {
            term *= z / static_cast<double>(k);
            sum += term;
        }
        return sum;
    }
    return (std::exp(z) - 1.0 - z) / (z * z);
}

}  // namespace

void LinearModel::validate() const
{
    if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("LinearModel: mu must lie in (0, 1)");
}

double LinearModel::omega(double k) const { return std::sqrt(1.0 - mu * mu) * k; }
double LinearModel::ratio() const { return mu / std::sqrt(1.0 - mu * mu); }

namespace symbols {

double poisson(const LinearModel& m, double k, double t) { return std::exp(-m.decay(k) * t); }

double undamped_position(const LinearModel& m, double k, double t)
{
    const double wt = m.omega(k) * t;
    return std::cos(wt) + m.ratio() * std::sin(wt);
}

double undamped_w(const LinearModel& m, double k, double t)
{
    if (k == 0.0) return t;
    const double w = m.omega(k);
    return std::sin(w * t) / w;
}

double position(const LinearModel& m, double k, double t)
{
    return poisson(m, k, t) * undamped_position(m, k, t);
}

double propagator_w(const LinearModel& m, double k, double t)
{
    return poisson(m, k, t) * undamped_w(m, k, t);
}

double dt_position(const LinearModel& m, double k, double t)
{
    if (k == 0.0) return 0.0;
    // -(a^2 + w^2)/w sin(wt) e^{-at} with a^2 + w^2 = k^2
    const double w = m.omega(k);
    return -poisson(m, k, t) * (k * k / w) * std::sin(w * t);
}

double dt_w(const LinearModel& m, double k, double t)
{
    const double wt = m.omega(k) * t;
    return poisson(m, k, t) * (std::cos(wt) - m.ratio() * std::sin(wt));
}

double w_integral(const LinearModel& m, double k, double h)
{
    if (k == 0.0) return 0.5 * h * h;
    // W(s) = Im(e^{lambda s}) / omega with lambda = -a + i omega
    const Complex lambda(-m.decay(k), m.omega(k));
    return (h * phi1(lambda * h)).imag() / m.omega(k);
}

double w_first_moment(const LinearModel& m, double k, double h)
{
    if (k == 0.0) return h * h * h / 6.0;
    const Complex lambda(-m.decay(k), m.omega(k));
    return (h * h * phi2(lambda * h)).imag() / m.omega(k);
}

}  // namespace symbols

SpectralField apply_pair_operator(PairOperator op, double t, const SpectralField& u0, const SpectralField& u1,
                                  const LinearModel& model)
{
    require_nonnegative_time(t, "apply_pair_operator");
    model.validate();
    require_same_grid(u0.grid(), u1.grid(), "apply_pair_operator");
    const Grid& g = u0.grid();
    SpectralField out(g);
    for (std::size_t i = 0; i < g.n(); ++i) {
        for (std::size_t j = 0; j < g.n(); ++j) {
            const Frequency xi = g.frequency(i, j);
            const double k = xi.norm();
            double a = 0.0;
            double b = 0.0;
            switch (op) {
            case PairOperator::V:
                a = symbols::position(model, k, t);
                b = symbols::propagator_w(model, k, t);
                break;
            case PairOperator::DtV:
                a = symbols::dt_position(model, k, t);
                b = symbols::dt_w(model, k, t);
                break;
            case PairOperator::Vtilde: {
                const double inv = 1.0 / xi.bracket();
                a = symbols::dt_position(model, k, t) * inv;
                b = symbols::dt_w(model, k, t) * inv;
                break;
            }
            case PairOperator::U:
                a = symbols::undamped_position(model, k, t);
                b = symbols::undamped_w(model, k, t);
                break;
            case PairOperator::Utilde: {
                // Vtilde symbols with the Poisson factor removed
                const double inv = 1.0 / xi.bracket();
                const double wt = model.omega(k) * t;
                a = k == 0.0 ? 0.0 : -(k * k / model.omega(k)) * std::sin(wt) * inv;
                b = (std::cos(wt) - model.ratio() * std::sin(wt)) * inv;
                break;
            }
            }
            out.at(i, j) = a * u0(i, j) + b * u1(i, j);
        }
    }
    return out;
}

namespace {

RealField pair_operator(PairOperator op, double t, const StatePair& data, const LinearModel& model)
{
    return inverse_transform(
        apply_pair_operator(op, t, forward_transform(data.position), forward_transform(data.velocity), model));
}

}  // namespace

RealField propagator_V(double t, const StatePair& data, const LinearModel& model)
{
    return pair_operator(PairOperator::V, t, data, model);
}

StatePair propagate(double t, const StatePair& data, const LinearModel& model)
{
    const SpectralField u0 = forward_transform(data.position);
    const SpectralField u1 = forward_transform(data.velocity);
    return StatePair(inverse_transform(apply_pair_operator(PairOperator::V, t, u0, u1, model)),
                     inverse_transform(apply_pair_operator(PairOperator::DtV, t, u0, u1, model)));
}

RealField propagator_W(double t, const RealField& f, const LinearModel& model)
{
    require_nonnegative_time(t, "propagator_W");
    model.validate();
    return inverse_transform(
        apply_radial(forward_transform(f), [&](double k) { return symbols::propagator_w(model, k, t); }));
}

RealField time_derivative_W(double t, const RealField& f, const LinearModel& model)
{
    require_nonnegative_time(t, "time_derivative_W");
    model.validate();
    return inverse_transform(apply_radial(forward_transform(f), [&](double k) { return symbols::dt_w(model, k, t); }));
}

RealField propagator_Vtilde(double t, const StatePair& data, const LinearModel& model)
{
    return pair_operator(PairOperator::Vtilde, t, data, model);
}

RealField undamped_U(double t, const StatePair& data, const LinearModel& model)
{
    return pair_operator(PairOperator::U, t, data, model);
}

RealField undamped_Utilde(double t, const StatePair& data, const LinearModel& model)
{
    return pair_operator(PairOperator::Utilde, t, data, model);
}

RealField poisson_smooth(const RealField& f, double t, const LinearModel& model)
{
    require_nonnegative_time(t, "poisson_smooth");
    model.validate();
    if (t == 0.0) return f;
    return inverse_transform(
        apply_radial(forward_transform(f), [&](double k) { return symbols::poisson(model, k, t); }));
}

}  // namespace vnlw
