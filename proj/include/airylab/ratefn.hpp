#pragma once

#include <functional>
#include <vector>

#include "airylab/measures.hpp"

namespace airylab::ratefn {

struct RateParams {
  double R0 = 1.0;  // interaction window half-width
  double R1 = 10.0;  // kernel floor 1/R1^3
  // Constant entering the x >= 0 branch of psi. No derived value exists for
  // it; 1.0 is a working normalization and results quoting psi/I2 must carry
  // this caveat.
  double c_prop22 = 1.0;
};

void validate(const RateParams& p);

// I_{R0,R1}(mu): minus the double integral of log(max{|x-y|, 1/R1^3}) over
// [-R0,R0]^2 (diagonal included, so atoms self-interact through the floor)
// plus the potential (4/3)|x|^{3/2} over the negative axis. The measure's
// window must cover [-R0, R0].
double rate_I(const measures::SignedMeasure& mu, const RateParams& p);

// Two-branch deviation gauge psi(x, phi); phi = 0 gives 0 on both branches.
double psi_value(double x, double phi, const RateParams& p);

struct PsiTrace {
  std::vector<double> x;
  std::vector<double> psi;
  double i2 = 0.0;
};

// Trace of psi_mu(x) = psi(x, mass(mu, [-R0, x])) over a uniform grid plus
// all atom positions (and their left limits); i2 is the supremum over those
// evaluation points.
PsiTrace psi_and_I2(const measures::SignedMeasure& mu, const RateParams& p,
                    int grid_points = 2048);

// Closed-form lower-tail rate: (4/(15 pi^6))(1 - pi^2 z)^{5/2} - 4/(15 pi^6)
// + (2/(3 pi^4)) z - (1/(2 pi^2)) z^2 for z <= 0.
double phi_minus(double z);

// Off-diagonal log-energy -int log|x-y| dmu dmu (atoms must sit at distinct
// positions); the overload evaluates the same functional for a bare density
// on [a, b].
double log_energy_J(const measures::SignedMeasure& mu);
double log_energy_J(const std::function<double(double)>& rho, double a,
                    double b);

// J plus twice the xi-tilde potential over the negative axis at scale (n, k).
double log_energy_J0(const measures::SignedMeasure& mu, double n, double k);

// Mixed log-energy -int log|x-y| dmu1(x) dmu2(y).
double cross_J(const measures::SignedMeasure& mu1,
               const measures::SignedMeasure& mu2);

// Untruncated energy I_{inf,inf} of a candidate extension: +infinity as soon
// as the extension carries an atom (untruncated self-energy), otherwise the
// density log-energy plus the negative-axis potential.
double i1_upper(const measures::SignedMeasure& extension);

}  // namespace airylab::ratefn
