#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "monoroot/bisection.hpp"
#include "monoroot/cake.hpp"
#include "monoroot/discretize.hpp"
#include "monoroot/errors.hpp"
#include "monoroot/instances.hpp"
#include "monoroot/reductions.hpp"
#include "monoroot/root2d.hpp"
#include "monoroot/rootnd.hpp"

using namespace monoroot;
using nlohmann::json;

namespace {

struct Options {
  std::string instance;
  std::string family;
  std::uint64_t seed = 1;
  std::size_t dim = 3;
  std::string delta = "2^-8";
  std::string mode = "diag";
  std::string out;
  std::string format = "json";
  bool trace = false;
  // cake
  std::size_t agents = 3;
  std::vector<std::int64_t> groups;
  std::string r = "2^-10";
  // bench
  std::string delta_from = "2^-4";
  std::string delta_to = "2^-20";
  std::uint64_t repetitions = 1;
  bool deterministic = false;
  // verify
  std::string property = "delta-continuity";
  std::string construction;
  std::vector<std::size_t> negate;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return json::parse(in);
}

RealInstance load_instance(const Options& o) {
  if (!o.construction.empty()) {
    if (o.construction == "dd-insufficient") {
      return make_dd_insufficient_instance(
                 [](const RealVector& x) { return RealVector{(x[0] - x[1]) / 2, (x[1] - x[0]) / 2}; }, o.dim)
          .f;
    }
    if (o.construction == "switching-necessary") {
      return make_switching_necessary_instance([](const RealVector& x) { return RealVector{-x[0]}; }).f;
    }
    throw InputError("unknown construction \"" + o.construction + "\"");
  }
  if (!o.instance.empty()) return instance_from_json(read_json_file(o.instance));
  if (!o.family.empty()) {
    json j{{"family", o.family}, {"seed", o.seed}, {"dim", o.dim}};
    return instance_from_json(j);
  }
  throw InputError("one of --instance, --family or --construction is required");
}

// A discretized instance, optionally with negated components.
struct Problem {
  RealInstance inst;
  DiscreteProblem disc;
  std::vector<std::unique_ptr<RealOracle>> wrappers;
  std::unique_ptr<SignOracle> sign;

  SignOracle& oracle() { return *sign; }
  RealOracle& real() { return wrappers.empty() ? *disc.real : *wrappers.back(); }
};

std::unique_ptr<Problem> make_problem(const Options& o, int delta_exponent) {
  RealInstance inst = load_instance(o);
  DiscreteProblem disc = discretize_instance(inst, delta_exponent);
  auto p = std::make_unique<Problem>(Problem{std::move(inst), std::move(disc), {}, nullptr});
  for (std::size_t i : o.negate) {
    if (i < 1 || i > p->inst.dim) throw InputError("--negate index out of range");
    RealOracle& inner = p->wrappers.empty() ? *p->disc.real : *p->wrappers.back();
    p->wrappers.push_back(std::make_unique<RealOracle>(negate_component(inner, i - 1)));
  }
  p->sign = std::make_unique<SignOracle>(discretize(p->real(), p->disc.epsilon, p->disc.grid));
  return p;
}

json point_json(const GridPoint& p, const GridSpec& g) {
  json coords = json::array();
  for (std::size_t j = 0; j < p.dim(); ++j) coords.push_back(g.coordinate(p, j).to_string());
  return {{"index", p.index}, {"coords", coords}};
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw InputError("cannot write " + o.out);
  f << text;
}

void emit_json(const Options& o, const json& j) { emit(o, j.dump(2) + "\n"); }

json solve_result(Problem& p, const GridPoint& root) {
  const SignVector v = p.oracle()(root);
  // The confirming evaluation is not part of the solver's count.
  return {{"root", point_json(root, p.disc.grid)},
          {"value", v},
          {"delta", format_power_of_two(p.disc.grid.delta_exponent())},
          {"epsilon", p.disc.epsilon},
          {"family", p.inst.family}};
}

int cmd_solve1d(const Options& o) {
  auto p = make_problem(o, parse_power_of_two(o.delta));
  if (p->inst.dim != 1) throw InputError("solve1d needs a one-dimensional instance");
  json steps = json::array();
  BisectionOptions bo;
  if (o.trace) {
    bo.trace = [&](const BisectionStep& s) {
      steps.push_back({{"lo", s.lo}, {"hi", s.hi}, {"probe", s.probe}, {"value", s.value}});
    };
  }
  auto& sign = p->oracle();
  const auto z = bisect_root_1d([&](std::int64_t t) { return sign(GridPoint{{t}})[0]; }, p->disc.grid.cells(0), bo);
  const auto evaluations = sign.evaluations();
  json j = solve_result(*p, GridPoint{{z}});
  j["evaluations"] = evaluations;
  if (o.trace) j["trace"] = steps;
  emit_json(o, j);
  return 0;
}

int cmd_solve2d(const Options& o) {
  auto p = make_problem(o, parse_power_of_two(o.delta));
  if (p->inst.dim != 2) throw InputError("solve2d needs a two-dimensional instance");
  Root2DTrace trace;
  GridPoint root;
  if (o.mode == "diag") {
    root = find_root_diag(p->oracle(), p->disc.grid, &trace);
  } else if (o.mode == "exdiag") {
    root = find_root_exdiag(p->oracle(), p->disc.grid, &trace);
  } else if (o.mode == "sum") {
    root = find_root_sum(p->oracle(), p->disc.grid, &trace);
  } else {
    throw InputError("--mode must be diag, exdiag or sum");
  }
  const auto evaluations = p->oracle().evaluations();
  json j = solve_result(*p, root);
  j["evaluations"] = evaluations;
  j["mode"] = o.mode;
  if (o.trace) j["trace"] = trace.to_json();
  emit_json(o, j);
  return 0;
}

int cmd_solvend(const Options& o) {
  auto p = make_problem(o, parse_power_of_two(o.delta));
  json calls = json::array();
  RecursiveOptions ro;
  ro.one_dimensional_base = o.mode == "bisection";
  if (o.trace) {
    ro.trace = [&](std::size_t t, const std::vector<std::int64_t>& lo, const std::vector<std::int64_t>& hi) {
      calls.push_back({{"t", t}, {"lo", lo}, {"hi", hi}});
    };
  }
  const GridPoint root = find_root_recursive(p->oracle(), p->disc.grid, ro);
  const auto evaluations = p->oracle().evaluations();
  json j = solve_result(*p, root);
  j["evaluations"] = evaluations;
  if (o.trace) j["trace"] = calls;
  emit_json(o, j);
  return 0;
}

int cmd_cake(const Options& o) {
  CakeInstance inst = o.instance.empty()
                          ? random_cake_instance(o.agents, o.groups.empty() ? std::vector<std::int64_t>{1, 1, 1} : o.groups,
                                                 parse_power_of_two(o.r), o.seed)
                          : cake_instance_from_json(read_json_file(o.instance));
  CakeSolveStats stats;
  const Allocation alloc = solve_three_groups(inst, &stats);
  const EnvyReport rep = verify_near_envy_free(alloc, inst);
  json j = alloc.to_json();
  j["verification"] = rep.to_json();
  j["queries"] = stats.queries;
  j["evaluations"] = stats.evaluations;
  j["corners"] = stats.corners;
  j["delta"] = format_power_of_two(stats.delta_exponent);
  j["r"] = format_power_of_two(inst.r_exponent());
  emit_json(o, j);
  return rep.ok ? 0 : 1;
}

int cmd_bench(const Options& o) {
  const int from = parse_power_of_two(o.delta_from);
  const int to = parse_power_of_two(o.delta_to);
  if (from < to) throw InputError("--delta-from must be the coarser delta");
  std::string family = o.family.empty() ? "random-monotone-2d" : o.family;
  std::size_t dim = 2;
  std::string instance_family = family;
  if (family.rfind("recursive-", 0) == 0) {
    dim = static_cast<std::size_t>(std::stoul(family.substr(10)));
    instance_family = "recursive";
  } else if (family != "random-monotone-2d" && family != "exdiag-2d" && family != "sum-2d") {
    throw InputError("unknown bench family \"" + family + "\"");
  }
  json rows = json::array();
  for (std::uint64_t s = o.seed; s < o.seed + o.repetitions; ++s) {
    for (int e = from; e >= to; --e) {
      Options one = o;
      one.instance.clear();
      one.family = instance_family;
      one.seed = s;
      one.dim = dim;
      auto p = make_problem(one, e);
      const auto start = std::chrono::steady_clock::now();
      if (instance_family == "recursive") {
        find_root_recursive(p->oracle(), p->disc.grid);
      } else if (family == "exdiag-2d") {
        find_root_exdiag(p->oracle(), p->disc.grid);
      } else if (family == "sum-2d") {
        find_root_sum(p->oracle(), p->disc.grid);
      } else {
        find_root_diag(p->oracle(), p->disc.grid);
      }
      const double wall =
          o.deterministic ? 0.0 : std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      rows.push_back({{"family", family},
                      {"d", dim},
                      {"delta", format_power_of_two(e)},
                      {"seed", s},
                      {"evaluations", p->oracle().evaluations()},
                      {"wall_time", wall}});
    }
  }
  if (o.format == "json") {
    emit_json(o, rows);
    return 0;
  }
  std::ostringstream csv;
  csv << "family,d,delta,seed,evaluations,wall_time\n";
  for (const auto& r : rows) {
    csv << r["family"].get<std::string>() << ',' << r["d"] << ',' << r["delta"].get<std::string>() << ',' << r["seed"]
        << ',' << r["evaluations"] << ',' << r["wall_time"].get<double>() << '\n';
  }
  emit(o, csv.str());
  return 0;
}

json report_json(const CheckReport& r) {
  json v = json::array();
  for (const auto& x : r.violations) {
    json pts = json::array();
    for (const auto& p : x.points) pts.push_back(p.index);
    v.push_back({{"points", pts}, {"component", x.component + 1}, {"detail", x.detail}});
  }
  json j{{"property", r.property},
         {"passed", r.passed()},
         {"mode", to_string(r.mode)},
         {"points_checked", r.points_checked},
         {"violations", v}};
  if (!r.component_passed.empty()) j["component_passed"] = r.component_passed;
  return j;
}

json profile_json(const MonotoneProfile& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.dim(); ++k) row.push_back(to_string(m.at(i, k)));
    rows.push_back(row);
  }
  return rows;
}

int cmd_verify(const Options& o) {
  auto p = make_problem(o, parse_power_of_two(o.delta));
  auto& sign = p->oracle();
  const GridSpec& g = p->disc.grid;
  json j;
  bool passed = true;
  if (o.property == "delta-continuity") {
    const auto r = check_delta_continuity(sign, g);
    j = report_json(r);
    passed = r.passed();
  } else if (o.property == "positive-switching" || o.property == "strict-switching") {
    const auto r = check_positive_switching(sign, g, o.property == "strict-switching");
    j = report_json(r);
    passed = r.passed();
  } else if (o.property == "sum-switching") {
    const auto r = check_sum_switching(sign, g);
    j = report_json(r);
    passed = r.passed();
  } else if (o.property == "monotonicity") {
    const auto r = check_monotonicity(sign, p->inst.profile, g);
    j = report_json(r);
    passed = r.passed();
  } else if (o.property == "monotone-profile") {
    const MonotoneProfile seen = observed_monotonicity(p->real(), g);
    passed = seen == p->inst.profile;
    j = {{"property", o.property},
         {"passed", passed},
         {"declared", profile_json(p->inst.profile)},
         {"observed", profile_json(seen)},
         {"conditions_holding", seen.declared_count()},
         {"conditions_declared", p->inst.profile.declared_count()}};
  } else if (o.property == "lattice") {
    const LatticeReport r = check_lattice_claims(tarski_map(sign, g));
    passed = r.passed();
    j = {{"property", o.property},
         {"passed", passed},
         {"pairs_checked", r.pairs_checked},
         {"order_violations", r.order_violations.size()},
         {"escapes", r.escapes.size()}};
  } else {
    throw InputError("unknown property \"" + o.property + "\"");
  }
  j["instance"] = p->inst.family;
  j["delta"] = format_power_of_two(g.delta_exponent());
  emit_json(o, j);
  return passed ? 0 : 1;
}

int report_error(const std::string& kind, const std::string& message, int code, const std::string& hypothesis = {}) {
  json e{{"kind", kind}, {"message", message}};
  if (!hypothesis.empty()) e["hypothesis"] = hypothesis;
  std::cout << json{{"error", e}}.dump(2) << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Root finding for switching and monotone sign maps"};
  app.require_subcommand(1);
  Options o;

  auto add_instance = [&](CLI::App* c) {
    c->add_option("--instance", o.instance, "instance JSON file");
    c->add_option("--family", o.family, "generated family instead of a file");
    c->add_option("--seed", o.seed, "generator seed");
    c->add_option("--dim", o.dim, "dimension for the recursive family");
    c->add_option("--delta", o.delta, "grid spacing as 2^-K");
    c->add_option("--out", o.out, "write output here instead of stdout");
    c->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    c->add_option("--negate", o.negate, "negate these components (1-based) before discretizing");
  };

  auto* solve1d = app.add_subcommand("solve1d", "bisection on a 1D instance");
  add_instance(solve1d);
  solve1d->add_flag("--trace", o.trace);

  auto* solve2d = app.add_subcommand("solve2d", "2D solvers");
  add_instance(solve2d);
  solve2d->add_option("--mode", o.mode)->check(CLI::IsMember({"diag", "exdiag", "sum"}));
  solve2d->add_flag("--trace", o.trace);

  auto* solvend = app.add_subcommand("solvend", "recursive solver in any dimension");
  add_instance(solvend);
  solvend->add_option("--mode", o.mode, "exdiag (default) or bisection for the base case");
  solvend->add_flag("--trace", o.trace);

  auto* cake = app.add_subcommand("cake", "near envy-free division for three groups");
  cake->add_option("--instance", o.instance, "cake instance JSON file");
  cake->add_option("--seed", o.seed, "seed for a random instance");
  cake->add_option("--agents", o.agents, "agents in a random instance");
  cake->add_option("--groups", o.groups, "group sizes of a random instance")->delimiter(',');
  cake->add_option("--r", o.r, "approximation as 2^-K for a random instance");
  cake->add_option("--out", o.out);

  auto* bench = app.add_subcommand("bench", "evaluation counts over a delta sweep");
  bench->add_option("--family", o.family, "random-monotone-2d, exdiag-2d, sum-2d or recursive-<d>d");
  bench->add_option("--seed", o.seed);
  bench->add_option("--repetitions", o.repetitions, "consecutive seeds");
  bench->add_option("--delta-from", o.delta_from);
  bench->add_option("--delta-to", o.delta_to);
  bench->add_option("--out", o.out);
  bench->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));
  bench->add_flag("--deterministic", o.deterministic, "write 0 for wall_time");

  auto* verify = app.add_subcommand("verify", "check a property of a discretized instance");
  add_instance(verify);
  verify->add_option("--property", o.property,
                     "delta-continuity, positive-switching, strict-switching, sum-switching, monotonicity, "
                     "monotone-profile or lattice");
  verify->add_option("--construction", o.construction, "dd-insufficient or switching-necessary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*bench && !bench->count("--format")) o.format = "csv";
    if (*solve1d) return cmd_solve1d(o);
    if (*solve2d) return cmd_solve2d(o);
    if (*solvend) {
      if (o.mode == "diag") o.mode = "exdiag";
      return cmd_solvend(o);
    }
    if (*cake) return cmd_cake(o);
    if (*bench) return cmd_bench(o);
    if (*verify) return cmd_verify(o);
  } catch (const HypothesisViolation& e) {
    return report_error("hypothesis_violation", e.what(), 1, to_string(e.which()));
  } catch (const ReductionViolation& e) {
    return report_error("reduction_violation", e.what(), 1);
  } catch (const json::exception& e) {
    return report_error("parse_error", e.what(), 2);
  } catch (const Error& e) {
    return report_error("input_error", e.what(), 2);
  } catch (const std::exception& e) {
    return report_error("input_error", e.what(), 2);
  }
  return 2;
}
