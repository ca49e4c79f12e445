#pragma once

#include <vector>

#include "tempfrac/params.hpp"
#include "tempfrac/quadrature.hpp"

namespace tempfrac {

/// I(t) = ||theta1 Y(t) + theta2 Y(0)||^alpha - ||theta1 Y(t)||^alpha - ||theta2 Y(0)||^alpha
/// for the unit-lag increment noise Y of the process p (alpha-norms include sigma^alpha).
quad::Estimate codifference(const ProcessParams& p, double t, double theta1, double theta2,
                            const QuadratureConfig& q = {});

/// K (e^{-I(t)} - 1) with K = E e^{i theta1 Y(0)} E e^{i theta2 Y(0)}. Symmetric laws only (beta = 0).
double r_fn(const ProcessParams& p, double t, double theta1, double theta2, const QuadratureConfig& q = {});

struct DecayOptions {
  double band = 3.0;        // allowed max/min of the ratio over the upper half of t
  double slope_tol = 0.15;  // allowed |fitted slope - p_used|
};

struct DecayDiagnostic {
  std::vector<double> t_values;
  std::vector<double> I_values;
  std::vector<double> ratio;  // |I(t)| / (e^{-lambda t} t^{p_used})
  std::vector<int> sign;      // sign of I(t)
  double p_used = 0.0;
  double slope = 0.0;         // least-squares slope of log(|I| e^{lambda t}) on log t
  double band_ratio = 0.0;    // max/min of ratio over the upper half of t_values
  bool within_band = false;
  bool slope_ok = false;
};

/// Theoretical exponent: H - 1/alpha - 1 (kind II) or H - 1/alpha (kind I).
double decay_exponent(const ProcessParams& p);

DecayDiagnostic decay_diagnostic(const ProcessParams& p, const std::vector<double>& t_values, double theta1,
                                 double theta2, const DecayOptions& opt = {}, const QuadratureConfig& q = {});

struct LimitRow {
  double b;
  double normalized;  // kind II: norm(b)/b ; kind I: norm(b) (global); b^{-alpha H} norm(b) (local)
  double limit;
  double gap;         // |normalized / limit - 1|
  double error;       // quadrature error of normalized
};

struct LimitTable {
  Kind kind = Kind::II;
  std::vector<LimitRow> rows;
  bool monotone = false;       // gaps non-increasing along b_values (up to quadrature error)
  bool outside_proven_range = false;  // H >= 1: the limits are not established there
};

/// Large-scale limit of the alpha-norms: b^{-1} ||h(b;.)||^alpha -> (lambda^{-k} Gamma(1+k))^alpha
/// for kind II, ||g(b;.)||^alpha -> 2 Gamma(alpha H)/(alpha lambda)^{alpha H} for kind I.
LimitTable global_limit_check(const ProcessParams& p, const std::vector<double>& b_values,
                              const QuadratureConfig& q = {});

/// Small-scale limit b^{-alpha H} ||k(b;.)||^alpha -> ||k_{lambda=0}(1;.)||^alpha, for p.kind.
LimitTable local_limit_check(const ProcessParams& p, const std::vector<double>& b_values,
                             const QuadratureConfig& q = {});

}  // namespace tempfrac
