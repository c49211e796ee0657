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

#include "recurdim/ifs.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <utility>

#include "recurdim/error.hpp"

namespace recurdim {
namespace {

constexpr int kCallbackGrid = 257;
constexpr int kDistortionMaxDepth = 8;
constexpr std::uint64_t kDistortionSampleCap = 200'000;
constexpr double kImageSlack = 1e-12;

struct DerivativeRange {
  double inf = 0.0;
  double sup = 0.0;
};

// |d/dx| of a projective map is monotone on [0, 1] (no pole), so endpoint
// values bound it. Callback maps are sampled on a grid.
DerivativeRange derivative_range(const IfsSystem& system, WordView word) {
  if (system.is_projective()) {
    const auto map = system.word_map(word);
    const double a = std::abs(map.derivative(0.0));
    const double b = std::abs(map.derivative(1.0));
    return {std::min(a, b), std::max(a, b)};
  }
  DerivativeRange range{std::numeric_limits<double>::infinity(), 0.0};
  for (int k = 0; k < kCallbackGrid; ++k) {
    const double x = static_cast<double>(k) / (kCallbackGrid - 1);
    const double d = std::abs(system.derivative(word, x));
    range.inf = std::min(range.inf, d);
    range.sup = std::max(range.sup, d);
  }
  return range;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      parts.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return parts;
}

long parse_int(std::string_view text, std::string_view what) {
  const std::string s(trim(text));
  std::size_t used = 0;
  long value = 0;
  try {
    value = std::stol(s, &used);
  } catch (...) {
    throw ParseError("expected integer for " + std::string(what) + ", got '" + s + "'");
  }
  if (used != s.size()) {
    throw ParseError("expected integer for " + std::string(what) + ", got '" + s + "'");
  }
  return value;
}

std::map<std::string, std::string, std::less<>> parse_params(std::string_view body,
                                                             std::string_view kind) {
  std::map<std::string, std::string, std::less<>> params;
  if (trim(body).empty()) return params;
  for (auto part : split(body, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected key=value in " + std::string(kind) + " descriptor, got '" +
                       std::string(part) + "'");
    }
    params.emplace(std::string(trim(part.substr(0, eq))), std::string(trim(part.substr(eq + 1))));
  }
  return params;
}

const std::string& require(const std::map<std::string, std::string, std::less<>>& params,
                           std::string_view key, std::string_view kind) {
  const auto it = params.find(key);
  if (it == params.end()) {
    throw ParseError(std::string(kind) + " descriptor requires '" + std::string(key) + "='");
  }
  return it->second;
}

void reject_unknown(const std::map<std::string, std::string, std::less<>>& params,
                    std::initializer_list<std::string_view> known, std::string_view kind) {
  for (const auto& [key, value] : params) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ParseError("unknown key '" + key + "' in " + std::string(kind) + " descriptor");
    }
  }
}

std::vector<BranchSpec> parse_affine_list(std::string_view body) {
  std::string_view s = trim(body);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
    throw ParseError("affine descriptor must look like affine:[(a1,c1),(a2,c2)]");
  }
  s = s.substr(1, s.size() - 2);
  std::vector<BranchSpec> branches;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto open = s.find('(', pos);
    if (open == std::string_view::npos) {
      if (!trim(s.substr(pos)).empty() && trim(s.substr(pos)) != ",") {
        throw ParseError("unexpected text in affine descriptor");
      }
      break;
    }
    const auto close = s.find(')', open);
    if (close == std::string_view::npos) throw ParseError("unbalanced '(' in affine descriptor");
    const auto pair = split(s.substr(open + 1, close - open - 1), ',');
    if (pair.size() != 2) throw ParseError("affine branch must be (slope,offset)");
    branches.push_back(BranchSpec::affine(parse_rational(pair[0]), parse_rational(pair[1])));
    pos = close + 1;
  }
  return branches;
}

}  // namespace

// ---------------------------------------------------------------------------
// BranchSpec

BranchSpec BranchSpec::affine(const Rational& slope, const Rational& offset) {
  BranchSpec b;
  b.kind_ = BranchKind::affine;
  b.exact_ = ProjectiveMap<Rational>::affine(slope, offset);
  b.map_ = b.exact_.cast<double>();
  return b;
}

BranchSpec BranchSpec::affine(double slope, double offset) {
  return affine(exact_from_double(slope), exact_from_double(offset));
}

BranchSpec BranchSpec::moebius(int digit) {
  if (digit < 1) throw ContractError("continued fraction digit must be >= 1");
  BranchSpec b;
  b.kind_ = BranchKind::moebius;
  b.digit_ = digit;
  b.exact_ = ProjectiveMap<Rational>::continued_fraction(Rational(digit));
  b.map_ = ProjectiveMap<double>::continued_fraction(static_cast<double>(digit));
  return b;
}

BranchSpec BranchSpec::callback(CallbackBranch branch) {
  if (!branch.value || !branch.derivative) {
    throw ContractError("callback branch needs value and derivative evaluators");
  }
  BranchSpec b;
  b.kind_ = BranchKind::callback;
  b.callback_ = std::move(branch);
  return b;
}

double BranchSpec::value(double x) const {
  return kind_ == BranchKind::callback ? callback_.value(x) : map_(x);
}

double BranchSpec::derivative(double x) const {
  return kind_ == BranchKind::callback ? callback_.derivative(x) : map_.derivative(x);
}

// ---------------------------------------------------------------------------
// IfsSystem

IfsSystem::IfsSystem(std::vector<BranchSpec> branches, std::string descriptor)
    : branches_(std::move(branches)), descriptor_(std::move(descriptor)) {
  if (branches_.size() < 2) {
    throw ContractError("alphabet size must be at least 2 (got " +
                        std::to_string(branches_.size()) + ")");
  }
  projective_ = std::all_of(branches_.begin(), branches_.end(),
                            [](const BranchSpec& b) { return b.is_projective(); });
  affine_ = std::all_of(branches_.begin(), branches_.end(),
                        [](const BranchSpec& b) { return b.kind() == BranchKind::affine; });

  // Images inside [0, 1], no pole, pairwise interior-disjoint.
  std::vector<Interval> images;
  if (projective_) {
    std::vector<BasicInterval<Rational>> exact_images;
    for (const auto& b : branches_) {
      const auto& m = b.exact_map().matrix();
      const Rational d0 = m(1, 1);
      const Rational d1 = m(1, 0) + m(1, 1);
      if (d0 == 0 || d1 == 0 || (d0 > 0) != (d1 > 0)) {
        throw ContractError("branch has a pole on [0, 1]");
      }
      if (b.exact_map().determinant() == 0) throw ContractError("branch is constant");
      const auto img = b.exact_map().image_of_unit();
      if (img.lo < 0 || img.hi > 1) throw ContractError("branch does not map [0, 1] into itself");
      exact_images.push_back(img);
    }
    std::sort(exact_images.begin(), exact_images.end(),
              [](const auto& a, const auto& b) { return a.lo < b.lo; });
    for (std::size_t i = 1; i < exact_images.size(); ++i) {
      if (exact_images[i].lo < exact_images[i - 1].hi) {
        throw ContractError("branch images overlap (open set condition fails)");
      }
    }
  } else {
    for (const auto& b : branches_) {
      const double a0 = b.value(0.0);
      const double a1 = b.value(1.0);
      const Interval img{std::min(a0, a1), std::max(a0, a1)};
      if (img.lo < -kImageSlack || img.hi > 1.0 + kImageSlack) {
        throw ContractError("branch does not map [0, 1] into itself");
      }
      images.push_back(img);
    }
    std::sort(images.begin(), images.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (std::size_t i = 1; i < images.size(); ++i) {
      if (images[i].lo < images[i - 1].hi - kImageSlack) {
        throw ContractError("branch images overlap (open set condition fails)");
      }
    }
  }

  // Contraction and eta.
  rho_one_step_ = 0.0;
  eta_ = std::numeric_limits<double>::infinity();
  for (Symbol i = 0; i < branches_.size(); ++i) {
    const Symbol w[1] = {i};
    const auto range = derivative_range(*this, w);
    rho_one_step_ = std::max(rho_one_step_, range.sup);
    eta_ = std::min(eta_, range.inf);
  }
  if (!(eta_ > 0.0)) throw ContractError("branch derivative vanishes on [0, 1]");
  if (rho_one_step_ < 1.0) {
    rho_ = rho_one_step_;
    contraction_depth_ = 1;
  } else if (affine_) {
    throw ContractError("non-contracting branch (|slope| >= 1)");
  } else {
    double sup2 = 0.0;
    for (Symbol i = 0; i < branches_.size(); ++i) {
      for (Symbol j = 0; j < branches_.size(); ++j) {
        const Symbol w[2] = {i, j};
        sup2 = std::max(sup2, derivative_range(*this, w).sup);
      }
    }
    if (!(sup2 < 1.0)) throw ContractError("non-contracting system (depth-2 sup |phi'| >= 1)");
    rho_ = std::sqrt(sup2);
    contraction_depth_ = 2;
  }

  // Distortion constant.
  if (affine_) {
    distortion_ = 1.0;
    distortion_certified_ = true;
    return;
  }
  distortion_certified_ = false;
  const std::size_t a = branches_.size();
  const int max_depth = projective_ ? kDistortionMaxDepth : 4;
  std::uint64_t total = 0;
  for (int d = 1; d <= max_depth; ++d) {
    const std::uint64_t c = word_count(a, d);
    total = (c > kDistortionSampleCap || total + c > kDistortionSampleCap) ? kDistortionSampleCap + 1
                                                                            : total + c;
  }
  double worst = 1.0;
  auto account = [&](WordView w) {
    const auto range = derivative_range(*this, w);
    worst = std::max(worst, range.sup / range.inf);
  };
  if (total <= kDistortionSampleCap) {
    for (int d = 1; d <= max_depth; ++d) {
      const std::uint64_t c = word_count(a, d);
      for (std::uint64_t r = 0; r < c; ++r) account(word_from_rank(a, d, r));
    }
  } else {
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_int_distribution<int> depth(1, max_depth);
    std::uniform_int_distribution<Symbol> letter(0, static_cast<Symbol>(a - 1));
    Word w;
    for (std::uint64_t k = 0; k < kDistortionSampleCap; ++k) {
      w.resize(static_cast<std::size_t>(depth(rng)));
      for (auto& s : w) s = letter(rng);
      account(w);
    }
  }
  distortion_ = 2.0 * worst;
}

double IfsSystem::eta_m(int m, std::uint64_t budget) const {
  if (m < 0) throw ContractError("eta_m needs m >= 0");
  if (m == 0) return 1.0;
  {
    std::lock_guard lock(eta_cache_->mutex);
    const auto it = eta_cache_->values.find(m);
    if (it != eta_cache_->values.end()) return it->second;
  }
  double best = std::numeric_limits<double>::infinity();
  enumerate_cylinders(*this, m, [&](const CylinderRecord& r) { best = std::min(best, r.diameter); },
                      {budget});
  std::lock_guard lock(eta_cache_->mutex);
  eta_cache_->values[m] = best;
  return best;
}

void IfsSystem::validate_word(WordView word) const {
  for (const Symbol s : word) {
    if (s >= branches_.size()) {
      throw ContractError("symbol " + std::to_string(s) + " outside alphabet of size " +
                          std::to_string(branches_.size()));
    }
  }
}

ProjectiveMap<double> IfsSystem::word_map(WordView word) const {
  if (!projective_) throw ContractError("word_map needs affine or moebius branches");
  validate_word(word);
  ProjectiveMap<double> map;
  for (const Symbol s : word) map = map * branches_[s].map();
  return map;
}

ProjectiveMap<Rational> IfsSystem::exact_word_map(WordView word) const {
  if (!projective_) throw ContractError("exact_word_map needs affine or moebius branches");
  validate_word(word);
  ProjectiveMap<Rational> map;
  for (const Symbol s : word) map = map * branches_[s].exact_map();
  return map;
}

double IfsSystem::apply(WordView word, double x) const {
  validate_word(word);
  for (auto it = word.rbegin(); it != word.rend(); ++it) x = branches_[*it].value(x);
  return x;
}

double IfsSystem::derivative(WordView word, double x) const {
  validate_word(word);
  double d = 1.0;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    d *= branches_[*it].derivative(x);
    x = branches_[*it].value(x);
  }
  return d;
}

Interval IfsSystem::image(WordView word) const {
  if (projective_) return word_map(word).image_of_unit();
  const double a = apply(word, 0.0);
  const double b = apply(word, 1.0);
  return {std::min(a, b), std::max(a, b)};
}

double IfsSystem::inverse_apply(WordView word, double y) const {
  if (projective_) return word_map(word).inverse()(y);
  // phi_w is monotone on [0, 1]; invert by bisection.
  const double f0 = apply(word, 0.0);
  const double f1 = apply(word, 1.0);
  const bool increasing = f1 > f0;
  double lo = 0.0;
  double hi = 1.0;
  for (int k = 0; k < 200 && hi - lo > 0.0; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double v = apply(word, mid);
    if ((v < y) == increasing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Descriptors

IfsSystem build_system(std::string_view descriptor) {
  const std::string_view text = trim(descriptor);
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ParseError("system descriptor must look like kind:params, got '" + std::string(text) +
                     "'");
  }
  const std::string_view kind = trim(text.substr(0, colon));
  const std::string_view body = text.substr(colon + 1);
  std::vector<BranchSpec> branches;
  if (kind == "badic") {
    const auto params = parse_params(body, kind);
    reject_unknown(params, {"b"}, kind);
    const long b = parse_int(require(params, "b", kind), "b");
    if (b < 1) throw ParseError("badic base must be a positive integer");
    for (long i = 0; i < b; ++i) branches.push_back(BranchSpec::affine(Rational(1, b), Rational(i, b)));
  } else if (kind == "cantor") {
    const auto params = parse_params(body, kind);
    reject_unknown(params, {"b", "digits"}, kind);
    const long b = parse_int(require(params, "b", kind), "b");
    if (b < 2) throw ParseError("cantor base must be >= 2");
    std::vector<long> digits;
    for (auto d : split(require(params, "digits", kind), '|')) {
      const long v = parse_int(d, "digit");
      if (v < 0 || v >= b) throw ParseError("cantor digit outside [0, b)");
      if (std::find(digits.begin(), digits.end(), v) != digits.end()) {
        throw ParseError("repeated cantor digit");
      }
      digits.push_back(v);
    }
    for (long d : digits) branches.push_back(BranchSpec::affine(Rational(1, b), Rational(d, b)));
  } else if (kind == "cf") {
    const auto params = parse_params(body, kind);
    reject_unknown(params, {"amax"}, kind);
    const long amax = parse_int(require(params, "amax", kind), "amax");
    if (amax < 1) throw ParseError("cf amax must be >= 1");
    for (long i = 1; i <= amax; ++i) branches.push_back(BranchSpec::moebius(static_cast<int>(i)));
  } else if (kind == "affine") {
    branches = parse_affine_list(body);
  } else {
    throw ParseError("unknown system kind '" + std::string(kind) + "'");
  }
  return IfsSystem(std::move(branches), std::string(text));
}

// ---------------------------------------------------------------------------
// Cylinders

namespace {

void finish_projective(CylinderRecord& r) {
  r.interval = r.map.image_of_unit();
  r.diameter = r.interval.length();
  const auto x = fixed_point(r.map);
  if (!x) throw InvariantViolation("word map without a fixed point in [0, 1]");
  r.fixed_point = *x;
  r.derivative = std::abs(r.map.derivative(*x));
}

void finish_callback(const IfsSystem& system, CylinderRecord& r) {
  r.interval = system.image(r.word);
  r.diameter = r.interval.length();
  // phi_w(x) - x is >= 0 at 0 and <= 0 at 1.
  double lo = 0.0;
  double hi = 1.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (system.apply(r.word, mid) - mid > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  r.fixed_point = 0.5 * (lo + hi);
  r.derivative = std::abs(system.derivative(r.word, r.fixed_point));
}

}  // namespace

CylinderRecord cylinder_record(const IfsSystem& system, WordView word) {
  if (word.empty()) throw ContractError("cylinder_record needs a nonempty word");
  system.validate_word(word);
  CylinderRecord r;
  r.word.assign(word.begin(), word.end());
  if (system.is_projective()) {
    r.map = system.word_map(word);
    finish_projective(r);
  } else {
    finish_callback(system, r);
  }
  return r;
}

CylinderRecord extend_cylinder(const IfsSystem& system, const CylinderRecord& parent,
                               Symbol symbol) {
  CylinderRecord r;
  r.word = parent.word;
  r.word.push_back(symbol);
  system.validate_word(std::span<const Symbol>(&symbol, 1));
  if (system.is_projective()) {
    r.map = parent.map * system.branch(symbol).map();
    finish_projective(r);
  } else {
    finish_callback(system, r);
  }
  return r;
}

std::uint64_t word_count(std::size_t alphabet, int n) {
  std::uint64_t count = 1;
  for (int i = 0; i < n; ++i) {
    if (count > std::numeric_limits<std::uint64_t>::max() / alphabet) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    count *= alphabet;
  }
  return count;
}

void check_budget(const IfsSystem& system, int n, std::uint64_t budget) {
  const std::uint64_t count = word_count(system.alphabet_size(), n);
  if (count > budget) {
    throw BudgetExceeded("depth " + std::to_string(n) + " needs " + std::to_string(count) +
                         " cylinders, budget is " + std::to_string(budget));
  }
}

void enumerate_cylinders_with_prefix(const IfsSystem& system, WordView prefix, int n,
                                     const std::function<void(const CylinderRecord&)>& visit) {
  if (n < 1) throw ContractError("enumeration depth must be >= 1");
  if (prefix.size() > static_cast<std::size_t>(n)) throw ContractError("prefix longer than depth");
  system.validate_word(prefix);
  const std::size_t a = system.alphabet_size();
  const std::size_t start = prefix.size();
  CylinderRecord record;
  record.word.assign(prefix.begin(), prefix.end());
  record.word.resize(static_cast<std::size_t>(n));

  if (!system.is_projective()) {
    auto rec = [&](auto&& self, std::size_t depth) -> void {
      if (depth == static_cast<std::size_t>(n)) {
        finish_callback(system, record);
        visit(record);
        return;
      }
      for (Symbol s = 0; s < a; ++s) {
        record.word[depth] = s;
        self(self, depth + 1);
      }
    };
    rec(rec, start);
    return;
  }

  std::vector<ProjectiveMap<double>> maps(static_cast<std::size_t>(n) + 1);
  maps[start] = system.word_map(prefix);
  auto rec = [&](auto&& self, std::size_t depth) -> void {
    if (depth == static_cast<std::size_t>(n)) {
      record.map = maps[depth];
      finish_projective(record);
      visit(record);
      return;
    }
    for (Symbol s = 0; s < a; ++s) {
      record.word[depth] = s;
      maps[depth + 1] = maps[depth] * system.branch(s).map();
      self(self, depth + 1);
    }
  };
  rec(rec, start);
}

void enumerate_cylinders(const IfsSystem& system, int n,
                         const std::function<void(const CylinderRecord&)>& visit,
                         const EnumerationOptions& options) {
  if (n < 1) throw ContractError("enumeration depth must be >= 1");
  check_budget(system, n, options.budget);
  enumerate_cylinders_with_prefix(system, {}, n, visit);
}

std::vector<CylinderRecord> cylinders(const IfsSystem& system, int n,
                                      const EnumerationOptions& options) {
  std::vector<CylinderRecord> out;
  enumerate_cylinders(system, n, [&](const CylinderRecord& r) { out.push_back(r); }, options);
  return out;
}

Word word_from_rank(std::size_t alphabet, int n, std::uint64_t rank) {
  Word w(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    w[static_cast<std::size_t>(i)] = static_cast<Symbol>(rank % alphabet);
    rank /= alphabet;
  }
  return w;
}

Word periodic_prefix(WordView word, std::size_t length) {
  if (word.empty()) throw ContractError("periodic word needs a nonempty period");
  Word out(length);
  for (std::size_t i = 0; i < length; ++i) out[i] = word[i % word.size()];
  return out;
}

std::string format_word(WordView word) {
  std::ostringstream os;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) os << ' ';
    os << word[i];
  }
  return os.str();
}

}  // namespace recurdim
