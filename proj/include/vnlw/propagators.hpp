#pragma once

#include "vnlw/field.hpp"

namespace vnlw {

/// Linear part d_t^2 u - Delta u + 2 mu D d_t u = 0 with 0 < mu < 1.
/// mu = 1/2 is the evolved model; other values rescale the symbols.
struct LinearModel {
    double mu = 0.5;

    void validate() const;
    /// Damping rate per unit |xi| (the Poisson parameter).
    double decay(double k) const { return mu * k; }
    /// Oscillation frequency sqrt(1 - mu^2) |xi|.
    double omega(double k) const;
    /// decay / omega, equal to 1/sqrt(3) at mu = 1/2.
    double ratio() const;
};

/// Scalar symbols of the linear propagators as functions of k = |xi| and t.
/// Removable singularities at k = 0 are returned as their exact limits.
namespace symbols {

double poisson(const LinearModel& m, double k, double t);
/// V(t) acting on u0.
double position(const LinearModel& m, double k, double t);
/// W(t), i.e. V(t) acting on u1.
double propagator_w(const LinearModel& m, double k, double t);
/// d_t V(t) acting on u0.
double dt_position(const LinearModel& m, double k, double t);
/// d_t W(t).
double dt_w(const LinearModel& m, double k, double t);
/// U(t) on u0 and on u1 (V without the Poisson factor).
double undamped_position(const LinearModel& m, double k, double t);
double undamped_w(const LinearModel& m, double k, double t);
/// int_0^h W(s) ds.
double w_integral(const LinearModel& m, double k, double h);
/// int_0^h (h - s) W(s) ds.
double w_first_moment(const LinearModel& m, double k, double h);

}  // namespace symbols

/// Which linear operator to apply to a data pair (u0, u1).
enum class PairOperator {
    V,       ///< V(t)(u0, u1)
    DtV,     ///< d_t V(t)(u0, u1)
    Vtilde,  ///< <nabla>^{-1} d_t V(t)(u0, u1)
    U,       ///< undamped U(t)
    Utilde,  ///< undamped Utilde(t)
};

SpectralField apply_pair_operator(PairOperator op, double t, const SpectralField& u0, const SpectralField& u1,
                                  const LinearModel& model = {});

/// Multiply by a radial symbol k -> fn(k); fn must be finite on the lattice.
template <typename Fn>
SpectralField apply_radial(const SpectralField& spectrum, Fn&& fn)
{
    const Grid& g = spectrum.grid();
    SpectralField out(g);
    for (std::size_t i = 0; i < g.n(); ++i) {
        for (std::size_t j = 0; j < g.n(); ++j) {
            out.at(i, j) = fn(g.frequency(i, j).norm()) * spectrum(i, j);
        }
    }
    return out;
}

RealField propagator_V(double t, const StatePair& data, const LinearModel& model = {});
/// (V(t) data, d_t V(t) data) in one pass.
StatePair propagate(double t, const StatePair& data, const LinearModel& model = {});
RealField propagator_W(double t, const RealField& f, const LinearModel& model = {});
RealField time_derivative_W(double t, const RealField& f, const LinearModel& model = {});
RealField propagator_Vtilde(double t, const StatePair& data, const LinearModel& model = {});
RealField undamped_U(double t, const StatePair& data, const LinearModel& model = {});
RealField undamped_Utilde(double t, const StatePair& data, const LinearModel& model = {});
/// P(t) = e^{-mu D t}; at mu = 1/2 this is e^{-Dt/2}.
RealField poisson_smooth(const RealField& f, double t, const LinearModel& model = {});

}  // namespace vnlw
