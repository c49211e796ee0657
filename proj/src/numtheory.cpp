// Copyright 2026 The recurdim Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "recurdim/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include <boost/math/tools/roots.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "recurdim/error.hpp"
#include "recurdim/parallel.hpp"
#include "recurdim/potential.hpp"
#include "recurdim/recurrence.hpp"

namespace recurdim {
namespace {

using Real50 = boost::multiprecision::cpp_bin_float_50;

constexpr double kRefineWindow = 1e-9;

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Real50 root50(const QuadraticSurd& x) {
  const Real50 d = sqrt(Real50(x.discriminant()));
  if (x.B >= 0) return Real50(-2 * x.C) / (Real50(x.B) + d);
  return (Real50(-x.B) + d) / Real50(2 * x.A);
}

Real50 to_real50(const Rational& x) {
  return Real50(numerator(x)) / Real50(denominator(x));
}

// Canonical expansion of a rational in (0, 1); stops after `limit` digits.
CfDigits rational_digits(Rational x, std::size_t limit) {
  CfDigits out;
  while (x > 0 && out.size() < limit) {
    const Rational y = 1 / x;
    const BigInt a = numerator(y) / denominator(y);
    out.push_back(static_cast<std::int64_t>(a));
    x = y - Rational(a);
  }
  return out;
}

void check_reduced(std::int64_t p, std::int64_t q) {
  if (!(p >= 1 && p < q)) {
    throw ContractError("p/q must lie in (0, 1), got " + std::to_string(p) + "/" +
                        std::to_string(q));
  }
  if (std::gcd(p, q) != 1) {
    throw ContractError(std::to_string(p) + "/" + std::to_string(q) + " is not reduced");
  }
}

struct Target {
  double approx;
  std::function<Real50(const QuadraticSurd&)> distance50;
};

std::vector<DtauWitness> dtau_scan(const Target& target, double tau, std::int64_t q_max,
                                   std::uint64_t budget, int workers) {
  if (!(tau >= 0.0)) throw ContractError("tau must be >= 0");
  if (q_max < 1) throw ContractError("q_max must be >= 1");
  const auto q_count = static_cast<std::uint64_t>(q_max);
  if (q_count > budget / q_count) {
    throw BudgetExceeded("dtau scan to q = " + std::to_string(q_max) +
                         " needs about q^2 surds, above budget " + std::to_string(budget));
  }
  std::vector<std::optional<DtauWitness>> slots(static_cast<std::size_t>(q_max));
  parallel_for(slots.size(), workers, [&](std::size_t i) {
    const auto q = static_cast<std::int64_t>(i) + 1;
    const AqSet set = enumerate_Aq(q);
    if (set.members.empty()) return;
    DtauWitness w;
    w.q = q;
    w.threshold = std::pow(static_cast<double>(q), -2.0 * (tau + 1.0));
    std::size_t best = 0;
    double best_d = std::abs(target.approx - set.members[0].root);
    for (std::size_t k = 1; k < set.members.size(); ++k) {
      const double d = std::abs(target.approx - set.members[k].root);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    bool inside = best_d < w.threshold;
    if (std::abs(best_d - w.threshold) <= kRefineWindow) {
      w.refined = true;
      Real50 d50 = target.distance50(set.members[0]);
      best = 0;
      for (std::size_t k = 1; k < set.members.size(); ++k) {
        const Real50 d = target.distance50(set.members[k]);
        if (d < d50) {
          d50 = d;
          best = k;
        }
      }
      inside = d50 < pow(Real50(q), Real50(-2.0 * (tau + 1.0)));
      best_d = static_cast<double>(d50);
    }
    if (!inside) return;
    w.nearest = set.members[best];
    w.distance = best_d;
    slots[i] = w;
  });
  std::vector<DtauWitness> out;
  for (auto& s : slots) {
    if (s) out.push_back(std::move(*s));
  }
  return out;
}

}  // namespace

std::pair<CfDigits, CfDigits> cf_expansions_of_rational(std::int64_t p, std::int64_t q) {
  check_reduced(p, q);
  CfDigits first;
  std::int64_t num = q;
  std::int64_t den = p;
  while (den != 0) {
    first.push_back(num / den);
    const std::int64_t r = num % den;
    num = den;
    den = r;
  }
  CfDigits second = first;
  second.back() -= 1;
  second.push_back(1);
  return {first, second};
}

Rational evaluate_cf(const CfDigits& digits) {
  Rational x = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    if (*it < 1) throw ContractError("partial quotients must be >= 1");
    x = 1 / (Rational(*it) + x);
  }
  return x;
}

std::vector<std::int64_t> cf_denominators(const CfDigits& digits) {
  std::vector<std::int64_t> out;
  std::int64_t prev = 1;
  std::int64_t cur = 0;
  for (std::int64_t a : digits) {
    const std::int64_t next = a * (out.empty() ? 1 : cur) + (out.empty() ? 0 : prev);
    if (!out.empty()) prev = cur;
    cur = next;
    out.push_back(cur);
  }
  return out;
}

bool same_surd(const QuadraticSurd& a, const QuadraticSurd& b) {
  return a.A == b.A && a.B == b.B && a.C == b.C;
}

QuadraticSurd periodic_surd(const CfDigits& period) {
  if (period.empty()) throw ContractError("period must be nonempty");
  Eigen::Matrix<std::int64_t, 2, 2> m = Eigen::Matrix<std::int64_t, 2, 2>::Identity();
  for (std::int64_t a : period) {
    if (a < 1) throw ContractError("partial quotients must be >= 1");
    Eigen::Matrix<std::int64_t, 2, 2> b;
    b << 0, 1, 1, a;
    m = (m * b).eval();
  }
  QuadraticSurd x;
  x.A = m(1, 0);
  x.B = m(1, 1) - m(0, 0);
  x.C = -m(0, 1);
  const std::int64_t g = std::gcd(std::gcd(x.A, x.B), x.C);
  x.A /= g;
  x.B /= g;
  x.C /= g;
  if (x.A < 0) {
    x.A = -x.A;
    x.B = -x.B;
    x.C = -x.C;
  }
  x.period = period;
  const Rational pq = evaluate_cf(period);
  x.p = static_cast<std::int64_t>(numerator(pq));
  x.q = static_cast<std::int64_t>(denominator(pq));
  x.root = static_cast<double>(root50(x));
  if (!(x.root >= 0.0 && x.root <= 1.0)) {
    throw InvariantViolation("periodic surd outside [0, 1]");
  }
  CfDigits twice = period;
  twice.insert(twice.end(), period.begin(), period.end());
  if (surd_cf_digits(x, twice.size()) != twice) {
    throw InvariantViolation("surd expansion is not purely periodic");
  }
  return x;
}

CfDigits surd_cf_digits(const QuadraticSurd& x, std::size_t count) {
  const BigInt D = x.discriminant();
  const BigInt s = sqrt(D);
  if (s * s == D) throw ContractError("discriminant is a perfect square");
  // x = (-B + sqrt D) / 2A, so 1/x = (B + sqrt D) / (-2C).
  BigInt P = x.B;
  BigInt Q = -2 * BigInt(x.C);
  CfDigits out;
  while (out.size() < count) {
    const BigInt a = Q > 0 ? floor_div(P + s, Q) : floor_div(P + s + 1, Q);
    out.push_back(static_cast<std::int64_t>(a));
    P = a * Q - P;
    Q = (D - P * P) / Q;
  }
  return out;
}

double surd_residual(const QuadraticSurd& x) {
  const double r = x.root;
  return (static_cast<double>(x.A) * r + static_cast<double>(x.B)) * r +
         static_cast<double>(x.C);
}

std::pair<QuadraticSurd, QuadraticSurd> induced_quadratics(std::int64_t p, std::int64_t q) {
  const auto [w1, w2] = cf_expansions_of_rational(p, q);
  return {periodic_surd(w1), periodic_surd(w2)};
}

AqSet enumerate_Aq(std::int64_t q) {
  if (q < 1) throw ContractError("q must be >= 1");
  AqSet set;
  set.q = q;
  std::set<std::tuple<std::int64_t, std::int64_t, std::int64_t>> seen;
  for (std::int64_t p = 1; p < q; ++p) {
    if (std::gcd(p, q) != 1) continue;
    auto [x1, x2] = induced_quadratics(p, q);
    for (auto* x : {&x1, &x2}) {
      if (seen.insert({x->A, x->B, x->C}).second) set.members.push_back(std::move(*x));
    }
  }
  if (set.members.size() > static_cast<std::size_t>(2 * q)) {
    throw InvariantViolation("|A_q| exceeds 2q at q = " + std::to_string(q));
  }
  return set;
}

std::string to_csv(const std::vector<AqSet>& sets) {
  std::ostringstream os;
  os.precision(17);
  os << "q,p,period,A,B,C,root\n";
  for (const auto& set : sets) {
    for (const auto& x : set.members) {
      os << set.q << ',' << x.p << ',';
      for (std::size_t i = 0; i < x.period.size(); ++i) os << (i ? " " : "") << x.period[i];
      os << ',' << x.A << ',' << x.B << ',' << x.C << ',' << x.root << '\n';
    }
  }
  return os.str();
}

nlohmann::ordered_json to_json(const AqSet& set) {
  nlohmann::ordered_json members = nlohmann::ordered_json::array();
  for (const auto& x : set.members) {
    members.push_back({{"p", x.p},
                       {"period", x.period},
                       {"A", x.A},
                       {"B", x.B},
                       {"C", x.C},
                       {"root", x.root}});
  }
  return {{"q", set.q}, {"size", set.members.size()}, {"members", members}};
}

std::vector<DtauWitness> dtau_membership(double x, double tau, std::int64_t q_max,
                                         std::uint64_t budget, int workers) {
  if (!(x >= 0.0 && x <= 1.0)) throw ContractError("x must lie in [0, 1]");
  const Real50 x50 = to_real50(exact_from_double(x));
  return dtau_scan({x, [&](const QuadraticSurd& s) { return abs(x50 - root50(s)); }}, tau,
                   q_max, budget, workers);
}

std::vector<DtauWitness> dtau_membership(const QuadraticSurd& x, double tau,
                                         std::int64_t q_max, std::uint64_t budget,
                                         int workers) {
  const Real50 x50 = root50(x);
  Target target{x.root, [&](const QuadraticSurd& s) {
                  return same_surd(s, x) ? Real50(0) : Real50(abs(x50 - root50(s)));
                }};
  return dtau_scan(target, tau, q_max, budget, workers);
}

DtauChain dtau_chain_check(const CfDigits& digits, double tau, double eps) {
  if (digits.empty()) throw ContractError("digit word must be nonempty");
  if (!(tau >= 0.0) || !(eps > 0.0)) throw ContractError("need tau >= 0 and eps > 0");
  const std::int64_t amax = *std::max_element(digits.begin(), digits.end());
  if (*std::min_element(digits.begin(), digits.end()) < 1) {
    throw ContractError("partial quotients must be >= 1");
  }
  const IfsSystem system = build_system("cf:amax=" + std::to_string(std::max<std::int64_t>(amax, 2)));
  Word word;
  for (std::int64_t a : digits) word.push_back(static_cast<Symbol>(a - 1));
  const auto witness = witness_cylinder(system, Potential::logderiv(tau + eps), word);

  DtauChain c;
  c.digits = digits;
  c.n = static_cast<int>(digits.size());
  c.t = witness.t;
  c.tau = tau;
  c.eps = eps;
  c.q_n = cf_denominators(digits).back();
  c.x0 = periodic_surd(digits);
  const auto [w1, w2] = cf_expansions_of_rational(c.x0.p, c.x0.q);
  c.x0_in_Aq = c.x0.q == c.q_n && (digits == w1 || digits == w2);
  const double qn = static_cast<double>(c.q_n);
  c.large_n = std::pow(qn, 2.0 * eps) * (1.0 - 1.0 / (qn * qn)) >= 1.0;

  Word full = word;
  full.insert(full.end(), witness.suffix.begin(), witness.suffix.end());
  const auto cyl = system.exact_word_map(full).image_of_unit();
  const auto tn = system.exact_word_map(word).inverse();
  const Rational radius = exact_from_double(witness.radius);
  const Real50 x0 = root50(c.x0);
  const Real50 q50(c.q_n);
  const Real50 bound = pow(q50, Real50(-2.0 * (1.0 + tau)));
  c.same_q_n = true;
  bool ok = true;
  for (const Rational& x : {cyl.lo, cyl.midpoint(), cyl.hi}) {
    ChainPoint pt;
    pt.x = x;
    const CfDigits head = rational_digits(x, digits.size());
    if (head.size() < digits.size() || cf_denominators(head).back() != c.q_n) c.same_q_n = false;
    const Rational disp = abs(tn(x) - x);
    const Real50 disp50 = to_real50(disp);
    const Real50 dist = abs(to_real50(x) - x0);
    pt.displacement = to_double(disp);
    pt.distance = static_cast<double>(dist);
    pt.recurrence = disp < radius;
    pt.expansion = disp50 >= (q50 * q50 - 1) * dist;
    pt.half_expansion = disp50 >= q50 * q50 * dist / 2;
    pt.approximation = dist <= bound;
    ok = ok && pt.recurrence && pt.expansion && (c.q_n < 2 || pt.half_expansion) &&
         (!c.large_n || pt.approximation);
    c.points.push_back(pt);
  }
  c.holds = ok && c.x0_in_Aq && c.same_q_n;
  return c;
}

MahlerCheck mahler_check(const IfsSystem& system, WordView word, int t) {
  if (t < 0) throw ContractError("t must be a nonnegative integer");
  if (!system.is_affine()) throw ContractError("Mahler check needs an affine system");
  const Rational slope = abs(system.branch(0).exact_map().matrix()(0, 0));
  for (Symbol i = 1; i < system.alphabet_size(); ++i) {
    if (abs(system.branch(i).exact_map().matrix()(0, 0)) != slope) {
      throw ContractError("Mahler check needs a common slope 1/b");
    }
  }
  const Rational inv = 1 / slope;
  if (denominator(inv) != 1) throw ContractError("Mahler check needs an integer base");
  MahlerCheck m;
  m.word.assign(word.begin(), word.end());
  m.n = static_cast<int>(word.size());
  m.t = t;
  m.base = static_cast<std::int64_t>(numerator(inv));
  const auto witness = witness_cylinder(system, Potential::logderiv(t), word);
  Word full = m.word;
  full.insert(full.end(), witness.suffix.begin(), witness.suffix.end());
  const auto cyl = system.exact_word_map(full).image_of_unit();
  const BigInt bn = pow(BigInt(m.base), static_cast<unsigned>(m.n));
  const Rational bound = Rational(1) / Rational(pow(bn, static_cast<unsigned>(t)));
  m.bound = to_double(bound);
  m.holds = true;
  for (const Rational& x : {cyl.lo, cyl.midpoint(), cyl.hi}) {
    const Rational y = Rational(bn - 1) * x;
    const BigInt fl = floor_div(numerator(y), denominator(y));
    const Rational frac = y - Rational(fl);
    const Rational dist = std::min(frac, Rational(1 - frac));
    m.points.push_back(x);
    m.distances.push_back(to_double(dist));
    if (!(dist < bound)) m.holds = false;
  }
  return m;
}

double closed_form_dimension(std::string_view id, double parameter) {
  if (!(parameter >= 0.0)) throw ContractError("closed-form parameter must be >= 0");
  if (id == "badic-const") return 1.0 / (1.0 + parameter);
  if (id == "dtau") return 1.0 / (parameter + 1.0);
  if (id == "cantor-const") return std::log(2.0) / std::log(3.0) / (parameter + 1.0);
  if (id == "dyadic-frequency") {
    const double t = parameter;
    auto g = [t](double s) { return std::exp2(s * (t + 1.0)) - 1.0 - std::exp2(t * s); };
    if (g(1.0) == 0.0) return 1.0;
    auto [lo, hi] = boost::math::tools::bisect(g, 0.0, 1.0,
                                               boost::math::tools::eps_tolerance<double>(53));
    return 0.5 * (lo + hi);
  }
  throw ContractError("unknown closed-form case '" + std::string(id) + "'");
}

}  // namespace recurdim
