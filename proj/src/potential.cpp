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

#include "recurdim/potential.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "recurdim/error.hpp"

namespace recurdim {
namespace {

constexpr int kSampleGrid = 1025;
constexpr int kCylinderSamples = 17;

std::string format_real(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view text, std::string_view key) {
  const std::string s(trim(text));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (...) {
    throw ParseError("expected a real number for '" + std::string(key) + "', got '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) {
    throw ParseError("expected a real number for '" + std::string(key) + "', got '" + s + "'");
  }
  return v;
}

std::size_t count_symbol(WordView word, Symbol s) {
  return static_cast<std::size_t>(std::count(word.begin(), word.end(), s));
}

bool integral(double t) { return t == std::floor(t) && t >= 0.0 && t <= 256.0; }

Rational rational_pow(const Rational& base, long e) {
  Rational out = 1;
  for (long i = 0; i < e; ++i) out *= base;
  return out;
}

}  // namespace

Potential Potential::constant(double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw ContractError("constant potential needs c >= 0");
  Potential p;
  p.kind_ = PotentialKind::constant;
  p.param_ = c;
  p.descriptor_ = "const:c=" + format_real(c);
  return p;
}

Potential Potential::logderiv(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw ContractError("logderiv potential needs t >= 0");
  Potential p;
  p.kind_ = PotentialKind::logderiv;
  p.param_ = t;
  p.descriptor_ = "logderiv:t=" + format_real(t);
  return p;
}

Potential Potential::digit_indicator(double t, Symbol digit, std::optional<double> base) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw ContractError("digitind potential needs t >= 0");
  if (base && !(*base > 1.0)) throw ContractError("digitind base must exceed 1");
  Potential p;
  p.kind_ = PotentialKind::digitind;
  p.param_ = t;
  p.digit_ = digit;
  p.base_ = base;
  p.descriptor_ = "digitind:t=" + format_real(t) + ",digit=" + std::to_string(digit);
  if (base) p.descriptor_ += ",base=" + format_real(*base);
  return p;
}

Potential Potential::callback(std::function<double(double)> f, std::string name) {
  if (!f) throw ContractError("callback potential needs an evaluator");
  Potential p;
  p.kind_ = PotentialKind::callback;
  p.callback_ = std::move(f);
  p.descriptor_ = std::move(name);
  return p;
}

double Potential::log_base(const IfsSystem& system) const {
  if (base_) return std::log(*base_);
  const auto& b = system.branch(digit_);
  if (b.kind() != BranchKind::affine) {
    throw ContractError("digitind on a non-affine branch needs an explicit base=");
  }
  return -std::log(std::abs(b.map().matrix()(0, 0)));
}

double Potential::value(const IfsSystem& system, Symbol first, double z) const {
  switch (kind_) {
    case PotentialKind::constant:
      return param_;
    case PotentialKind::logderiv:
      return param_ == 0.0 ? 0.0 : -param_ * std::log(std::abs(system.branch(first).derivative(z)));
    case PotentialKind::digitind:
      return first == digit_ ? param_ * log_base(system) : 0.0;
    case PotentialKind::callback:
      return callback_(system.branch(first).value(z));
  }
  return 0.0;
}

double Potential::at(const IfsSystem& system, double x) const {
  if (kind_ == PotentialKind::callback) return callback_(x);
  if (kind_ == PotentialKind::constant) return param_;
  for (Symbol i = 0; i < system.alphabet_size(); ++i) {
    const Symbol w[1] = {i};
    if (system.image(w).contains(x)) return value(system, i, system.inverse_apply(w, x));
  }
  throw ContractError("point " + format_real(x) + " lies outside every branch image");
}

double Potential::sup_norm(const IfsSystem& system) const {
  switch (kind_) {
    case PotentialKind::constant:
      return param_;
    case PotentialKind::logderiv:
      return -param_ * std::log(system.eta());
    case PotentialKind::digitind:
      return param_ * log_base(system);
    case PotentialKind::callback: {
      double s = 0.0;
      for (int k = 0; k < kSampleGrid; ++k) {
        s = std::max(s, std::abs(callback_(static_cast<double>(k) / (kSampleGrid - 1))));
      }
      return s;
    }
  }
  return 0.0;
}

double Potential::inf(const IfsSystem& system) const {
  switch (kind_) {
    case PotentialKind::constant:
      return param_;
    case PotentialKind::logderiv:
      return std::max(0.0, -param_ * std::log(system.rho_one_step()));
    case PotentialKind::digitind:
      return 0.0;
    case PotentialKind::callback: {
      double s = std::numeric_limits<double>::infinity();
      for (int k = 0; k < kSampleGrid; ++k) {
        s = std::min(s, callback_(static_cast<double>(k) / (kSampleGrid - 1)));
      }
      return s;
    }
  }
  return 0.0;
}

bool Potential::identically_zero() const {
  return (kind_ != PotentialKind::callback) && param_ == 0.0;
}

bool Potential::strictly_positive(const IfsSystem& system) const {
  if (kind_ == PotentialKind::logderiv) return param_ > 0.0;
  return inf(system) > 0.0;
}

void Potential::validate(const IfsSystem& system) const {
  if (kind_ == PotentialKind::digitind) {
    if (digit_ >= system.alphabet_size()) {
      throw ContractError("digitind digit " + std::to_string(digit_) + " outside alphabet of size " +
                          std::to_string(system.alphabet_size()));
    }
    log_base(system);
  }
  if (kind_ == PotentialKind::callback && inf(system) < 0.0) {
    throw ContractError("potential must be nonnegative");
  }
}

Potential parse_potential(std::string_view descriptor) {
  const std::string_view text = trim(descriptor);
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ParseError("potential descriptor must look like kind:params, got '" + std::string(text) +
                     "'");
  }
  const std::string_view kind = trim(text.substr(0, colon));
  std::map<std::string, std::string, std::less<>> params;
  std::string_view body = text.substr(colon + 1);
  while (!trim(body).empty()) {
    const auto comma = body.find(',');
    const std::string_view part = trim(body.substr(0, comma));
    const auto eq = part.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected key=value in potential descriptor, got '" + std::string(part) + "'");
    }
    params[std::string(trim(part.substr(0, eq)))] = std::string(trim(part.substr(eq + 1)));
    if (comma == std::string_view::npos) break;
    body = body.substr(comma + 1);
  }
  auto take = [&](std::string_view key) -> std::optional<std::string> {
    const auto it = params.find(key);
    if (it == params.end()) return std::nullopt;
    std::string v = it->second;
    params.erase(it);
    return v;
  };
  auto need = [&](std::string_view key) {
    auto v = take(key);
    if (!v) throw ParseError(std::string(kind) + " potential requires '" + std::string(key) + "='");
    return *v;
  };
  auto finish = [&](Potential p) {
    if (!params.empty()) {
      throw ParseError("unknown key '" + params.begin()->first + "' in " + std::string(kind) +
                       " potential");
    }
    return p;
  };
  try {
    if (kind == "const") return finish(Potential::constant(parse_real(need("c"), "c")));
    if (kind == "logderiv") return finish(Potential::logderiv(parse_real(need("t"), "t")));
    if (kind == "digitind") {
      const double t = parse_real(need("t"), "t");
      const double d = parse_real(need("digit"), "digit");
      if (d < 0 || d != std::floor(d)) throw ParseError("digit must be a nonnegative integer");
      std::optional<double> base;
      if (auto b = take("base")) base = parse_real(*b, "base");
      return finish(Potential::digit_indicator(t, static_cast<Symbol>(d), base));
    }
  } catch (const ContractError& e) {
    throw ParseError(e.what());
  }
  throw ParseError("unknown potential kind '" + std::string(kind) + "'");
}

double birkhoff_sum_at(const IfsSystem& system, const Potential& pot, WordView word, double z) {
  if (word.empty()) throw ContractError("Birkhoff sum needs a nonempty word");
  system.validate_word(word);
  double s = 0.0;
  double y = z;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    s += pot.value(system, *it, y);
    y = system.branch(*it).value(y);
  }
  return s;
}

double birkhoff_sum(const IfsSystem& system, const Potential& pot, const CylinderRecord& record) {
  const WordView word = record.word;
  if (word.empty()) throw ContractError("Birkhoff sum needs a nonempty word");
  switch (pot.kind()) {
    case PotentialKind::constant:
      return static_cast<double>(word.size()) * pot.parameter();
    case PotentialKind::logderiv:
      return pot.parameter() == 0.0 ? 0.0 : -pot.parameter() * std::log(record.derivative);
    case PotentialKind::digitind:
      return pot.parameter() * pot.log_base(system) *
             static_cast<double>(count_symbol(word, pot.digit()));
    case PotentialKind::callback:
      return birkhoff_sum_at(system, pot, word, record.fixed_point);
  }
  return 0.0;
}

double birkhoff_sum(const IfsSystem& system, const Potential& pot, WordView word) {
  return birkhoff_sum(system, pot, cylinder_record(system, word));
}

double recurrence_radius(const IfsSystem& system, const Potential& pot,
                         const CylinderRecord& record) {
  switch (pot.kind()) {
    case PotentialKind::constant:
      return std::exp(-static_cast<double>(record.word.size()) * pot.parameter());
    case PotentialKind::logderiv:
      return std::pow(record.derivative, pot.parameter());
    case PotentialKind::digitind: {
      const double base =
          pot.base() ? *pot.base()
                     : 1.0 / std::abs(system.branch(pot.digit()).map().matrix()(0, 0));
      return std::pow(base, -pot.parameter() *
                                static_cast<double>(count_symbol(record.word, pot.digit())));
    }
    case PotentialKind::callback:
      return std::exp(-birkhoff_sum(system, pot, record));
  }
  return 1.0;
}

std::optional<Rational> exact_recurrence_radius(const IfsSystem& system, const Potential& pot,
                                                WordView word) {
  if (!system.is_affine()) return std::nullopt;
  switch (pot.kind()) {
    case PotentialKind::constant:
      if (pot.parameter() == 0.0) return Rational(1);
      return std::nullopt;
    case PotentialKind::logderiv: {
      if (!integral(pot.parameter())) return std::nullopt;
      const Rational d = abs(system.exact_word_map(word).matrix()(0, 0));
      return rational_pow(d, static_cast<long>(pot.parameter()));
    }
    case PotentialKind::digitind: {
      if (!integral(pot.parameter())) return std::nullopt;
      Rational b;
      if (pot.base()) {
        b = exact_from_double(*pot.base());
      } else {
        b = 1 / abs(system.branch(pot.digit()).exact_map().matrix()(0, 0));
      }
      const long e = static_cast<long>(pot.parameter()) *
                     static_cast<long>(count_symbol(word, pot.digit()));
      return 1 / rational_pow(b, e);
    }
    case PotentialKind::callback:
      return std::nullopt;
  }
  return std::nullopt;
}

VariationBound variation_bound(const IfsSystem& system, const Potential& pot, int n,
                               std::uint64_t budget) {
  if (n < 1) throw ContractError("variation bound needs n >= 1");
  VariationBound out{n, 0.0, true};
  if (pot.kind() == PotentialKind::constant || pot.kind() == PotentialKind::digitind) return out;
  if (pot.kind() == PotentialKind::logderiv && (system.is_affine() || pot.parameter() == 0.0)) {
    return out;
  }
  check_budget(system, n, budget);
  if (pot.kind() == PotentialKind::logderiv && system.is_projective()) {
    // |phi_i'| is monotone, so f is monotone on each cylinder.
    enumerate_cylinders(
        system, n,
        [&](const CylinderRecord& r) {
          const Symbol first = r.word.front();
          const auto tail = system.branch(first).map().inverse() * r.map;
          const double a = pot.value(system, first, tail(0.0));
          const double b = pot.value(system, first, tail(1.0));
          out.bound = std::max(out.bound, std::abs(a - b));
        },
        {budget});
    return out;
  }
  out.certified = false;
  enumerate_cylinders(
      system, n,
      [&](const CylinderRecord& r) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (int k = 0; k < kCylinderSamples; ++k) {
          const double x = r.interval.lo + r.interval.length() * k / (kCylinderSamples - 1);
          const double v = pot.at(system, x);
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        out.bound = std::max(out.bound, hi - lo);
      },
      {budget});
  return out;
}

std::optional<int> tempered_threshold(const IfsSystem& system, const Potential& pot, double eps,
                                      int n_max, std::uint64_t budget) {
  if (!(eps > 0.0)) throw ContractError("tempered threshold needs eps > 0");
  double total = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    total += variation_bound(system, pot, n, budget).bound;
    if (total / n <= eps) return n;
  }
  return std::nullopt;
}

}  // namespace recurdim
