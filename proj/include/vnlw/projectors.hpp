#pragma once

#include "vnlw/field.hpp"

namespace vnlw {

/// Radial cutoff profile: 1 on [0, 1], 0 on [2, inf), C^1 cubic in between.
double cutoff_profile(double r);

/// Symbol of P_{<=N}: cutoff_profile(|xi| / N). Identity on |xi| <= N.
double low_pass_symbol(double k, double cutoff);
/// Symbol of the Littlewood-Paley piece Q_M; Q_{1/2} = 0.
double lp_symbol(double k, double dyadic);

RealField project_leq(const RealField& f, double cutoff);
/// Complement Id - P_{<=N}.
RealField project_gt(const RealField& f, double cutoff);
SpectralField project_leq(const SpectralField& f, double cutoff);

/// Q_M f for M in {1/2, 1, 2, 4, ...}; anything else throws.
RealField lp_project(const RealField& f, double dyadic);

}  // namespace vnlw
