#pragma once

#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "sdflow/grid.hpp"
#include "sdflow/holder.hpp"

namespace sdflow {

using Rational = boost::rational<long long>;

enum class PairClass { critical, subcritical, violated };
std::string to_string(PairClass c);

struct CriticalPair {
  Rational rho;
  Rational beta_j;
  PairClass cls = PairClass::subcritical;
  int multiplicity = 1;
};

struct WeightSystem {
  Rational mu;
  Rational beta;
  std::vector<CriticalPair> pairs;
  /// Multiplicities of subcritical pairs depend on how terms are grouped.
  bool multiplicity_approximate = false;

  Rational mu_crit() const;
  std::vector<CriticalPair> critical() const;
};

/// Compares rho (beta - mu) + (beta_j - mu) with 1 - mu. rho = 0 is always
/// subcritical. Throws InvalidArgument unless 0 < mu < beta < 1,
/// beta_j in [mu, beta] and rho >= 0.
PairClass classify_pair(Rational rho, Rational beta_j, Rational mu, Rational beta);

/// beta - min over rho > 0 of (1 - beta_j) / rho. Throws InvalidArgument if
/// no pair has rho > 0.
Rational mu_crit(const std::vector<CriticalPair>& pairs, Rational beta);

/// The structural ledger of the surface diffusion nonlinearity with mu = 1/4,
/// beta = 3/4; classified, with multiplicities.
WeightSystem sdflow_ledger();

/// Holder level of the weight theta: E_theta ~ bc^{4 theta + alpha}.
/// Throws InvalidArgument unless 4 theta is an integer in [0, 4].
int holder_level(Rational theta);

/// N_{2+a}(h) / sqrt(N_{1+a}(h) N_{3+a}(h)). Throws InvalidArgument for
/// the zero field.
double interpolation_ratio(const HeightField& h, double alpha, const HolderOptions& opts = {});

struct InterpolationTerms {
  double lhs = 0.0;
  double rhs = 0.0;  // without the constant
  double ratio() const { return lhs / rhs; }
};

/// Both sides of the time-weighted interpolation estimate
///   t^{1-mu} |x|_b^rho |y|_bj
///     <= C t^{(1-mu)(1 - rho a - a_j)} |x|_mu^{rho(1-a)} |t^{1-mu} x|_1^{rho a}
///                                      |y|_mu^{1-a_j}  |t^{1-mu} y|_1^{a_j}
/// with a = (beta - mu)/(1 - mu), a_j = (beta_j - mu)/(1 - mu), and E_theta
/// measured in the discrete norm of bc^{4 theta + alpha}.
InterpolationTerms interpolation_terms(const HeightField& x, const HeightField& y,
                                       const CriticalPair& pair, const WeightSystem& ws,
                                       double t, double alpha,
                                       const HolderOptions& opts = {});

}  // namespace sdflow
