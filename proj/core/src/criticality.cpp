#include "sdflow/criticality.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "sdflow/errors.hpp"

namespace sdflow {

namespace {

double as_double(Rational q) { return boost::rational_cast<double>(q); }

std::string str(Rational q) {
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

}  // namespace

std::string to_string(PairClass c) {
  switch (c) {
    case PairClass::critical: return "critical";
    case PairClass::subcritical: return "subcritical";
    case PairClass::violated: return "violated";
  }
  return "?";
}

PairClass classify_pair(Rational rho, Rational beta_j, Rational mu, Rational beta) {
  if (!(Rational(0) < mu && mu < beta && beta < Rational(1))) {
    throw InvalidArgument("classify_pair: need 0 < mu < beta < 1, got mu = " + str(mu) +
                          ", beta = " + str(beta));
  }
  if (beta_j < mu || beta_j > beta) {
    throw InvalidArgument("classify_pair: beta_j = " + str(beta_j) + " outside [mu, beta]");
  }
  if (rho < Rational(0)) throw InvalidArgument("classify_pair: rho must be non-negative");
  if (rho == Rational(0)) return PairClass::subcritical;
  const Rational lhs = rho * (beta - mu) + (beta_j - mu);
  const Rational rhs = Rational(1) - mu;
  if (lhs == rhs) return PairClass::critical;
  return lhs < rhs ? PairClass::subcritical : PairClass::violated;
}

Rational mu_crit(const std::vector<CriticalPair>& pairs, Rational beta) {
  std::optional<Rational> best;
  for (const CriticalPair& p : pairs) {
    if (p.rho <= Rational(0)) continue;
    const Rational v = (Rational(1) - p.beta_j) / p.rho;
    if (!best || v < *best) best = v;
  }
  if (!best) throw InvalidArgument("mu_crit: no pair with rho > 0");
  return beta - *best;
}

Rational WeightSystem::mu_crit() const { return sdflow::mu_crit(pairs, beta); }

std::vector<CriticalPair> WeightSystem::critical() const {
  std::vector<CriticalPair> out;
  std::copy_if(pairs.begin(), pairs.end(), std::back_inserter(out),
               [](const CriticalPair& p) { return p.cls == PairClass::critical; });
  return out;
}

WeightSystem sdflow_ledger() {
  WeightSystem ws;
  ws.mu = Rational(1, 4);
  ws.beta = Rational(3, 4);
  ws.multiplicity_approximate = true;
  struct Entry {
    Rational rho, beta_j;
    int multiplicity;
  };
  const Entry entries[] = {
      // quadratic term, |tau| = 2; cubic term, all three second order
      {Rational(1), Rational(1, 2), 2},
      {Rational(1, 2), Rational(3, 4), 1},
      {Rational(3, 2), Rational(1, 4), 2},
      // quadratic term, |tau| <= 1
      {Rational(0), Rational(3, 4), 1},
      // cubic term, one second-order factor
      {Rational(1, 2), Rational(1, 4), 1},
      {Rational(0), Rational(1, 2), 1},
      // cubic term, two second-order factors
      {Rational(1), Rational(1, 4), 1},
      {Rational(1, 2), Rational(1, 2), 1},
  };
  for (const Entry& e : entries) {
    ws.pairs.push_back(
        {e.rho, e.beta_j, classify_pair(e.rho, e.beta_j, ws.mu, ws.beta), e.multiplicity});
  }
  return ws;
}

int holder_level(Rational theta) {
  const Rational k = theta * Rational(4);
  if (k.denominator() != 1 || k < Rational(0) || k > Rational(4)) {
    throw InvalidArgument("holder_level: 4 theta must be an integer in [0, 4], theta = " +
                          str(theta));
  }
  return static_cast<int>(k.numerator());
}

double interpolation_ratio(const HeightField& h, double alpha, const HolderOptions& opts) {
  const double n1 = holder_norm(h, 1, alpha, opts).value;
  const double n2 = holder_norm(h, 2, alpha, opts).value;
  const double n3 = holder_norm(h, 3, alpha, opts).value;
  if (!(n1 > 0.0) || !(n3 > 0.0)) throw InvalidArgument("interpolation_ratio: zero field");
  return n2 / std::sqrt(n1 * n3);
}

InterpolationTerms interpolation_terms(const HeightField& x, const HeightField& y,
                                       const CriticalPair& pair, const WeightSystem& ws,
                                       double t, double alpha, const HolderOptions& opts) {
  if (!(t > 0.0)) throw InvalidArgument("interpolation_terms: t must be positive");
  const double mu = as_double(ws.mu);
  const double rho = as_double(pair.rho);
  const double a = as_double((ws.beta - ws.mu) / (Rational(1) - ws.mu));
  const double aj = as_double((pair.beta_j - ws.mu) / (Rational(1) - ws.mu));
  auto norm = [&](const HeightField& f, Rational theta) {
    return holder_norm(f, holder_level(theta), alpha, opts).value;
  };
  const double w = std::pow(t, 1.0 - mu);
  const double x_mu = norm(x, ws.mu), x_1 = norm(x, Rational(1));
  const double y_mu = norm(y, ws.mu), y_1 = norm(y, Rational(1));

  InterpolationTerms terms;
  terms.lhs = w * std::pow(norm(x, ws.beta), rho) * norm(y, pair.beta_j);
  terms.rhs = std::pow(t, (1.0 - mu) * (1.0 - rho * a - aj)) *
              std::pow(x_mu, rho * (1.0 - a)) * std::pow(w * x_1, rho * a) *
              std::pow(y_mu, 1.0 - aj) * std::pow(w * y_1, aj);
  return terms;
}

}  // namespace sdflow
