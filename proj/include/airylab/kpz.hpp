#pragma once

#include <vector>

namespace airylab::kpz {

struct KpzParams {
  double s = 1.0;        // tail depth, >= 0
  double T = 1.0;        // time, > 0
  double epsilon = 0.1;  // in (0, 1/3)
  // C and K are free constants the tail theorems leave unspecified;
  // user-supplied, never derived.
  double C = 1.0;
  double K = 1.0 / 24.0;

  double t13() const;  // T^{1/3}
};

void validate(const KpzParams& p);

struct LaplaceResult {
  double value = 1.0;      // the product, in (0, 1]
  double log_value = 0.0;  // exact even when value underflows
  // Heuristic bound on |log of the omitted tail|, extrapolating the supplied
  // list with its mean gap; +infinity when the list is empty.
  double trunc_bound = 0.0;
};

// prod_k 1/(1 + exp(T^{1/3} (s + a_k))) over the supplied points, summed in
// log space through a stable softplus.  With require_depth the last point
// must satisfy a_K < -s - 40 T^{-1/3} (omitted factors within e^{-40} of 1)
// or a DomainError names the required depth; without it the finite product
// is evaluated as given, which is what the closed-form examples need.
LaplaceResult laplace_product(const std::vector<double>& points_desc, double s,
                              double T, bool require_depth = false);

// Half-space variant prod_k (1 + 4u exp(T^{1/3} a_k))^{-1/2}; depth demand
// a_K < (log(4u) - 40) / T^{1/3}.
LaplaceResult laplace_product_halfspace(const std::vector<double>& points_desc,
                                        double u, double T,
                                        bool require_depth = false);

struct TailBounds {
  double lower = 0.0;
  double upper = 0.0;
  double log_lower = 0.0;
  double log_upper = 0.0;
  // true when either bound reaches 1, i.e. s is below the regime where the
  // tail theorems say anything
  bool degenerate = false;
};

// Full-space lower-tail sandwich: lower = e^{-(4(1+Ce)/15pi) T^{1/3} s^{5/2}}
// + e^{-((1+Ce)/12) s^3}; upper adds e^{-K s^3 - e T^{1/3} s} and flips the
// (1 +- Ce) signs.  Requires C*epsilon < 1.  Sums taken by log-sum-exp.
TailBounds kpz1_bounds(const KpzParams& p);

// Half-space variant: same shape with s^{5/2} coefficient 2/(15pi) and s^3
// denominator 24.
TailBounds kpz2_bounds(const KpzParams& p);

}  // namespace airylab::kpz
