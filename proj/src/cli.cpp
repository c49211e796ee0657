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

#include "recurdim/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "recurdim/cantor.hpp"
#include "recurdim/error.hpp"
#include "recurdim/ifs.hpp"
#include "recurdim/numtheory.hpp"
#include "recurdim/parallel.hpp"
#include "recurdim/potential.hpp"
#include "recurdim/recurrence.hpp"
#include "recurdim/thermo.hpp"
#include "recurdim/verify.hpp"

namespace recurdim {
namespace {

using nlohmann::ordered_json;

struct Common {
  std::string system;
  std::string potential;
  std::uint64_t budget = kDefaultBudget;
  int workers = 0;
  bool csv = false;
  std::string out;
};

struct PressureArgs {
  std::vector<double> s{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<int> depths{10};
};

struct BowenArgs {
  std::vector<int> depths{4, 6, 8, 10, 12};
  double tol = 1e-12;
  double delta = 1e-2;
  bool sup_weights = false;
};

struct CoverArgs {
  int n_min = 1;
  int n_max = 10;
  std::vector<double> s{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
};

struct WitnessArgs {
  int m = 2;
  double eps = 0.1;
  int k_max = 1;
  std::vector<int> ell{1};
  std::optional<int> blocks;
  std::optional<double> s_target;
  std::optional<double> s_eps;
  int start_depth = 1;
  std::uint64_t node_budget = 2'000'000;
};

struct QuadArgs {
  std::int64_t q_max = 10;
  std::optional<double> x;
  std::vector<std::int64_t> period;
  double tau = 2.0;
};

void add_common(CLI::App* cmd, Common& c, bool needs_potential) {
  cmd->add_option("--system", c.system, "system descriptor")->required();
  auto* pot = cmd->add_option("--potential", c.potential, "potential descriptor");
  if (needs_potential) pot->required();
  cmd->add_option("--budget", c.budget, "cylinder evaluation budget")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--workers", c.workers, "worker threads (0: RECURDIM_WORKERS or hardware)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--csv", c.csv, "tabular output as CSV");
  cmd->add_option("--out", c.out, "output file (default stdout)");
}

ordered_json common_config(const Common& c, const IfsSystem& sys, const Potential& pot) {
  return {{"system", sys.descriptor()},
          {"potential", pot.descriptor()},
          {"budget", c.budget},
          {"workers", c.workers}};
}

void emit(const Common& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw ParseError("cannot open output file '" + c.out + "'");
  f << text;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void require_positive_depths(const std::vector<int>& depths) {
  if (depths.empty()) throw ParseError("--depths must be nonempty");
  for (int n : depths) {
    if (n < 1) throw ParseError("depths must be >= 1");
  }
}

int run_pressure(const Common& c, const PressureArgs& a, std::ostream& out) {
  const IfsSystem sys = build_system(c.system);
  const Potential pot = parse_potential(c.potential);
  pot.validate(sys);
  require_positive_depths(a.depths);
  for (double s : a.s) {
    if (!(s >= 0.0)) throw ParseError("pressure needs s >= 0");
  }
  for (int n : a.depths) check_budget(sys, n, c.budget);
  ordered_json j;
  j["command"] = "pressure";
  j["config"] = common_config(c, sys, pot);
  j["config"]["s"] = a.s;
  j["config"]["depths"] = a.depths;
  ordered_json samples = ordered_json::array();
  std::string csv = "s,n,P\n";
  for (int n : a.depths) {
    const PartitionSums sums(sys, pot, n, {c.budget, c.workers, false});
    for (double s : a.s) {
      const double p = sums.log_sum(s) / n;
      samples.push_back({{"s", s}, {"n", n}, {"P", p}});
      csv += fmt(s) + "," + std::to_string(n) + "," + fmt(p) + "\n";
    }
  }
  j["samples"] = samples;
  emit(c, c.csv ? csv : dump(j), out);
  return kExitOk;
}

int run_bowen(const Common& c, const BowenArgs& a, std::ostream& out) {
  const IfsSystem sys = build_system(c.system);
  const Potential pot = parse_potential(c.potential);
  pot.validate(sys);
  require_positive_depths(a.depths);
  if (!(a.tol > 0.0)) throw ParseError("--tol must be positive");
  if (!(a.delta > 0.0)) throw ParseError("--delta must be positive");
  check_budget(sys, *std::max_element(a.depths.begin(), a.depths.end()), c.budget);
  DimensionOptions opts;
  opts.depths = a.depths;
  opts.tol = a.tol;
  opts.delta = a.delta;
  opts.thermo = {c.budget, c.workers, a.sup_weights};
  const BowenReport rep = dimension_report(sys, pot, opts);
  if (c.csv) {
    std::string csv = "n,s_n,residual\n";
    for (const auto& s : rep.samples) {
      csv += std::to_string(s.n) + "," + fmt(s.s) + "," + fmt(s.residual) + "\n";
    }
    emit(c, csv, out);
  } else {
    ordered_json j;
    j["command"] = "bowen";
    const ordered_json body = to_json(rep);
    for (const auto& [k, v] : body.items()) j[k] = v;
    emit(c, dump(j), out);
  }
  return kExitOk;
}

int run_cover(const Common& c, const CoverArgs& a, std::ostream& out) {
  const IfsSystem sys = build_system(c.system);
  const Potential pot = parse_potential(c.potential);
  pot.validate(sys);
  if (a.n_min < 1 || a.n_max < a.n_min) throw ParseError("need 1 <= --n-min <= --n-max");
  if (a.s.empty()) throw ParseError("--s must be nonempty");
  check_budget(sys, a.n_max, c.budget);
  const CoveringReport rep =
      covering_report(sys, pot, a.n_min, a.n_max, a.s, {c.budget, c.workers, false});
  if (c.csv) {
    emit(c, to_csv(rep), out);
  } else {
    ordered_json j;
    j["command"] = "cover";
    const ordered_json body = to_json(rep);
    for (const auto& [k, v] : body.items()) j[k] = v;
    emit(c, dump(j), out);
  }
  return kExitOk;
}

int run_witness(const Common& c, const WitnessArgs& a, std::ostream& out) {
  const IfsSystem sys = build_system(c.system);
  const Potential pot = parse_potential(c.potential);
  pot.validate(sys);
  if (a.m < 1) throw ParseError("--m must be >= 1");
  if (a.blocks && *a.blocks < 1) throw ParseError("--blocks must be >= 1");
  if (a.k_max < 0) throw ParseError("--k-max must be >= 0");
  if (!(a.eps > 0.0)) throw ParseError("--eps must be positive");
  for (int l : a.ell) {
    if (l < 1) throw ParseError("--ell entries must be >= 1");
  }
  if (a.s_eps && !(*a.s_eps > 0.0)) throw ParseError("--s-eps must be positive");
  if (!a.blocks && !pot.strictly_positive(sys)) {
    throw ParseError("witness needs a strictly positive potential unless --blocks is given");
  }
  check_budget(sys, a.m, c.budget);

  CantorTree tree;
  if (a.blocks) {
    tree = build_block_tree(sys, pot, a.m, *a.blocks, a.s_target, a.node_budget, c.budget);
  } else {
    CantorParams p;
    p.m = a.m;
    p.eps = a.eps;
    p.k_max = a.k_max;
    p.ell = a.ell;
    p.node_budget = a.node_budget;
    p.enumeration_budget = c.budget;
    p.s_target = a.s_target;
    tree = build_levels(sys, pot, p);
  }
  assign_measure(tree);
  const double s_eps = a.s_eps ? *a.s_eps : 0.9 * tree.s_target;
  const TreeCheck check = check_tree(sys, pot, tree);
  const HolderReport holder = holder_check(tree, s_eps, a.start_depth);
  if (c.csv) {
    emit(c, to_csv(holder), out);
    return kExitOk;
  }
  ordered_json j;
  j["command"] = "witness";
  j["config"] = common_config(c, sys, pot);
  j["config"]["m"] = a.m;
  j["config"]["eps"] = a.eps;
  j["config"]["k_max"] = a.blocks ? 1 : a.k_max;
  j["config"]["ell"] = a.ell;
  j["config"]["blocks"] = a.blocks ? ordered_json(*a.blocks) : ordered_json(nullptr);
  j["config"]["s_target"] = a.s_target ? ordered_json(*a.s_target) : ordered_json(nullptr);
  j["config"]["s_eps"] = s_eps;
  j["config"]["start_depth"] = a.start_depth;
  j["config"]["node_budget"] = a.node_budget;
  j["tree"] = to_json(tree);
  j["check"] = to_json(check);
  j["holder"] = to_json(holder);
  emit(c, dump(j), out);
  return kExitOk;
}

int run_quad(const Common& c, const QuadArgs& a, std::ostream& out) {
  if (a.q_max < 1) throw ParseError("--q-max must be >= 1");
  if (!(a.tau >= 0.0)) throw ParseError("--tau must be >= 0");
  if (a.x && !a.period.empty()) throw ParseError("--x and --period are exclusive");
  if (a.x && !(*a.x >= 0.0 && *a.x <= 1.0)) throw ParseError("--x must lie in [0, 1]");
  for (auto d : a.period) {
    if (d < 1) throw ParseError("--period digits must be >= 1");
  }
  const auto q_count = static_cast<std::uint64_t>(a.q_max);
  if (q_count > c.budget / q_count) {
    throw BudgetExceeded("q_max " + std::to_string(a.q_max) + " exceeds the budget");
  }
  ordered_json j;
  j["command"] = "quad";
  j["config"] = {{"q_max", a.q_max}, {"budget", c.budget}, {"workers", c.workers}};
  if (a.x || !a.period.empty()) {
    std::vector<DtauWitness> found;
    if (a.x) {
      j["config"]["x"] = *a.x;
      found = dtau_membership(*a.x, a.tau, a.q_max, c.budget, c.workers);
    } else {
      j["config"]["period"] = a.period;
      found = dtau_membership(periodic_surd(a.period), a.tau, a.q_max, c.budget, c.workers);
    }
    j["config"]["tau"] = a.tau;
    ordered_json w = ordered_json::array();
    for (const auto& f : found) {
      w.push_back({{"q", f.q},
                   {"p", f.nearest.p},
                   {"period", f.nearest.period},
                   {"A", f.nearest.A},
                   {"B", f.nearest.B},
                   {"C", f.nearest.C},
                   {"distance", f.distance},
                   {"threshold", f.threshold},
                   {"refined", f.refined}});
    }
    j["witnesses"] = w;
    emit(c, dump(j), out);
    return kExitOk;
  }
  std::vector<AqSet> sets(static_cast<std::size_t>(a.q_max));
  parallel_for(sets.size(), c.workers,
               [&](std::size_t i) { sets[i] = enumerate_Aq(static_cast<std::int64_t>(i) + 1); });
  if (c.csv) {
    emit(c, to_csv(sets), out);
    return kExitOk;
  }
  ordered_json arr = ordered_json::array();
  for (const auto& s : sets) arr.push_back(to_json(s));
  j["sets"] = arr;
  emit(c, dump(j), out);
  return kExitOk;
}

int run_verify(const Common& c, bool json, std::ostream& out) {
  const auto cases = closed_form_suite(c.workers);
  bool all = true;
  for (const auto& k : cases) all = all && k.pass;
  if (json) {
    ordered_json j;
    j["command"] = "verify";
    j["config"] = {{"workers", c.workers}};
    const ordered_json body = to_json(cases);
    for (const auto& [k, v] : body.items()) j[k] = v;
    emit(c, dump(j), out);
  } else {
    std::ostringstream os;
    os.precision(17);
    for (const auto& k : cases) {
      os << (k.pass ? "PASS " : "FAIL ") << k.name << " got=" << k.got
         << " expected=" << k.expected << " tol=" << k.tol << "\n";
    }
    os << (all ? "all " : "not all ") << cases.size() << " cases pass\n";
    emit(c, os.str(), out);
  }
  return all ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Recurrence sets of conformal IFS: pressure, Bowen roots, witnesses"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Common common;
  PressureArgs pa;
  BowenArgs ba;
  CoverArgs ca;
  WitnessArgs wa;
  QuadArgs qa;
  bool verify_json = false;

  auto* pressure = app.add_subcommand("pressure", "depth-n pressure on a grid of s");
  add_common(pressure, common, true);
  pressure->add_option("--s", pa.s, "s values")->delimiter(',')->capture_default_str();
  pressure->add_option("--depths", pa.depths, "depths")->delimiter(',')->capture_default_str();

  auto* bowen = app.add_subcommand("bowen", "Bowen roots s_n and extrapolated dimension");
  add_common(bowen, common, true);
  bowen->add_option("--depths", ba.depths, "depths")->delimiter(',')->capture_default_str();
  bowen->add_option("--tol", ba.tol, "residual tolerance")->capture_default_str();
  bowen->add_option("--delta", ba.delta, "pressure bracket half-width")->capture_default_str();
  bowen->add_flag("--sup-weights", ba.sup_weights, "use sup-derivative weights");

  auto* cover = app.add_subcommand("cover", "covering series of the recurrence set");
  add_common(cover, common, true);
  cover->add_option("--n-min", ca.n_min, "first depth")->capture_default_str();
  cover->add_option("--n-max", ca.n_max, "last depth")->capture_default_str();
  cover->add_option("--s", ca.s, "s grid")->delimiter(',')->capture_default_str();

  auto* witness = app.add_subcommand("witness", "Cantor witness tree, measure, Holder check");
  add_common(witness, common, true);
  witness->add_option("--m", wa.m, "block length")->capture_default_str();
  witness->add_option("--eps", wa.eps, "epsilon")->capture_default_str();
  witness->add_option("--k-max", wa.k_max, "generations")->capture_default_str();
  witness->add_option("--ell", wa.ell, "blocks per generation")->delimiter(',');
  witness->add_option("--blocks", wa.blocks, "single generation of chained blocks, no suffix");
  witness->add_option("--s-target", wa.s_target, "target exponent (default s_m)");
  witness->add_option("--s-eps", wa.s_eps, "Holder exponent (default 0.9 s_target)");
  witness->add_option("--start-depth", wa.start_depth, "first depth of the exponent check")
      ->capture_default_str();
  witness->add_option("--node-budget", wa.node_budget, "maximum tree nodes")->capture_default_str();

  auto* quad = app.add_subcommand("quad", "A_q dump or D(tau) scan");
  quad->add_option("--q-max", qa.q_max, "largest q")->capture_default_str();
  quad->add_option("--x", qa.x, "scan target (real)");
  quad->add_option("--period", qa.period, "scan target (purely periodic surd)")->delimiter(',');
  quad->add_option("--tau", qa.tau, "approximation exponent")->capture_default_str();
  quad->add_option("--budget", common.budget, "surd budget")->capture_default_str();
  quad->add_option("--workers", common.workers, "worker threads");
  quad->add_flag("--csv", common.csv, "A_q dump as CSV");
  quad->add_option("--out", common.out, "output file");

  auto* verify = app.add_subcommand("verify", "closed-form acceptance suite");
  verify->add_option("--workers", common.workers, "worker threads");
  verify->add_flag("--json", verify_json, "JSON report");
  verify->add_option("--out", common.out, "output file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    if (common.workers == 0) common.workers = default_workers();
    if (*pressure) return run_pressure(common, pa, out);
    if (*bowen) return run_bowen(common, ba, out);
    if (*cover) return run_cover(common, ca, out);
    if (*witness) return run_witness(common, wa, out);
    if (*quad) return run_quad(common, qa, out);
    if (*verify) return run_verify(common, verify_json, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const ContractError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const BudgetExceeded& e) {
    err << "budget: " << e.what() << "\n";
    return kExitBudget;
  } catch (const Error& e) {
    err << "failure: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitInvalid;
}

}  // namespace recurdim
