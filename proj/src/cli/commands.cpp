#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "conesynth/cli.hpp"
#include "conesynth/errors.hpp"
#include "conesynth/example_problem.hpp"
#include "conesynth/io.hpp"
#include "conesynth/lattice_sim.hpp"
#include "conesynth/statespace.hpp"
#include "conesynth/synthesis.hpp"

namespace conesynth::cli {

using io::format_number;
using io::Json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnsupportedInnerStructure:
    case ErrorCode::NotRealizableAsLCausal:
    case ErrorCode::IllPosedFeedback:
    case ErrorCode::AlgebraicLoop:
    case ErrorCode::SingularD:
      return kUnsupported;
    default:
      return kInvalidInput;
  }
}

namespace {

constexpr int kDefaultOrder = 200;

struct Range {
  int lo = 0;
  int hi = 6;
};

Range parse_range(const std::string& s) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const int v = std::stoi(s);
      return {v, v};
    }
    const Range r{std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
    if (r.lo < 0 || r.hi < r.lo) throw std::invalid_argument("bad range");
    return r;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidInput, "--m-range", "expected a..b with 0 <= a <= b, got \"" + s + "\"");
  }
}

// Writes to --out when given, else to the command's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(ErrorCode::InvalidInput, "--out", "cannot open " + path);
      os_ = &file_;
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

std::string lambda_series_text(const LambdaSeries& s) {
  std::ostringstream os;
  os << "t0=" << s.temporal_min() << " [";
  for (std::size_t k = 0; k < s.coeffs().size(); ++k) os << (k ? ", " : "") << format_number(s.coeffs()[k]);
  os << "]";
  return os.str();
}

std::string series_text(const BiSeries& s) {
  std::ostringstream os;
  const BiSeries t = s.trimmed();
  bool first = true;
  for (int lt = t.box().temporal_min; lt <= t.box().temporal_max; ++lt) {
    for (int i = t.box().spatial_min; i <= t.box().spatial_max; ++i) {
      if (t(i, lt) == 0.0) continue;
      os << (first ? "" : " ") << "(" << i << "," << lt << ":" << format_number(t(i, lt)) << ")";
      first = false;
    }
  }
  return first ? "0" : os.str();
}

Json synthesis_json(const SynthesisResult& r, const ControllerRealization& cr) {
  Json j;
  j["orders"] = {{"m", r.m}, {"S", r.S}, {"T", r.T}};
  j["inner_delay"] = r.fact.delay_d;
  j["outer"] = io::to_json(r.fact.outer);
  Json eta = Json::array();
  for (int i = -std::min(r.m, r.S); i <= std::min(r.m, r.S); ++i) {
    const LambdaSeries& e = r.eta.at(i);
    Json c = Json::array();
    for (double v : e.coeffs()) c.push_back(io::round12(v));
    eta.push_back({{"i", i}, {"temporal_min", e.temporal_min()}, {"coeffs", c}});
  }
  j["eta"] = eta;
  j["G1"] = io::triples(r.G1);
  j["Q"] = io::to_json(r.Q);
  j["Q_order"] = r.q_order;
  j["K"] = io::to_json(r.K);
  j["J"] = io::round12(r.J.value);
  j["J_tail_bound"] = io::round12(r.J.tail_bound);
  j["J_opt"] = io::round12(r.J_opt);
  j["J_centralized"] = io::round12(r.J_centralized);
  j["truncation_tail_energy"] = io::round12(r.tail_energy);
  j["realization"] = {{"K", io::to_json(cr.K)},
                      {"G1", io::to_json(cr.G1)},
                      {"T2out", io::to_json(cr.T2out)},
                      {"Gyu", io::to_json(cr.Gyu)}};
  return j;
}

void write_synthesis(std::ostream& os, const std::string& format, const SynthesisResult& r,
                     const ControllerRealization& cr) {
  if (format == "json") {
    os << synthesis_json(r, cr).dump(2) << '\n';
  } else if (format == "csv") {
    os << "object,i,t,value\n";
    for (int i = -std::min(r.m, r.S); i <= std::min(r.m, r.S); ++i) {
      const LambdaSeries& e = r.eta.at(i);
      for (int t = e.temporal_min(); t <= e.temporal_max(); ++t)
        os << "eta," << i << ',' << t << ',' << format_number(e(t)) << '\n';
    }
    auto dump = [&](const char* name, const BiSeries& s) {
      const BiSeries t = s.trimmed();
      for (int lt = t.box().temporal_min; lt <= t.box().temporal_max; ++lt)
        for (int i = t.box().spatial_min; i <= t.box().spatial_max; ++i)
          if (t(i, lt) != 0.0) os << name << ',' << i << ',' << lt << ',' << format_number(t(i, lt)) << '\n';
    };
    dump("Q_num", r.Q.num());
    dump("Q_den", r.Q.den());
    dump("K_num", r.K.num());
    dump("K_den", r.K.den());
    os << "J,,," << format_number(r.J.value) << '\n';
    os << "J_tail_bound,,," << format_number(r.J.tail_bound) << '\n';
    os << "J_opt,,," << format_number(r.J_opt) << '\n';
    os << "J_centralized,,," << format_number(r.J_centralized) << '\n';
  } else {
    os << "orders: m=" << r.m << " S=" << r.S << " T=" << r.T << '\n';
    os << "inner factor: lambda^" << r.fact.delay_d << '\n';
    os << "eta~_i:\n";
    for (int i = -std::min(r.m, r.S); i <= std::min(r.m, r.S); ++i)
      os << "  i=" << i << ": " << lambda_series_text(r.eta.at(i)) << '\n';
    os << "G1: " << series_text(r.G1) << '\n';
    os << "Q num: " << series_text(r.Q.num()) << '\n';
    os << "Q den: " << series_text(r.Q.den()) << '\n';
    os << "Q order: " << r.q_order << '\n';
    os << "K num: " << series_text(r.K.num()) << '\n';
    os << "K den: " << series_text(r.K.den()) << '\n';
    os << "K realization: " << cr.K.states() << " states, D=" << format_number(cr.K.D(0, 0)) << '\n';
    os << "J = " << format_number(r.J.value) << " (tail bound " << format_number(r.J.tail_bound) << ", S=" << r.S
       << ", T=" << r.T << ")\n";
    os << "J_opt = " << format_number(r.J_opt) << '\n';
    os << "J_centralized = " << format_number(r.J_centralized) << '\n';
  }
}

struct Orders {
  int m = 1;
  int S = kDefaultOrder;
  int T = kDefaultOrder;
};

Orders resolve_orders(const io::Orders& file, std::optional<int> m, std::optional<int> S, std::optional<int> T) {
  Orders o;
  o.m = m.value_or(file.m.value_or(o.m));
  o.S = S.value_or(file.S.value_or(o.S));
  o.T = T.value_or(file.T.value_or(o.T));
  return o;
}

struct SweepRow {
  int m;
  int q_order;
  double J;
  double tail;
};

struct Sweep {
  std::vector<SweepRow> rows;
  double J_opt = 0.0;
  double J_centralized = 0.0;
  int S = 0;
  int T = 0;
};

Sweep run_sweep(const Problem& prob, Range range, int S, int T) {
  Sweep s;
  s.S = S;
  s.T = T;
  for (int m = range.lo; m <= range.hi; ++m) {
    const SynthesisResult r = synthesize(prob, m, S, T);
    s.rows.push_back({m, r.q_order, r.J.value, r.J.tail_bound});
    s.J_opt = r.J_opt;
    s.J_centralized = r.J_centralized;
  }
  return s;
}

void write_sweep(std::ostream& os, const std::string& format, const Sweep& s) {
  if (format == "json") {
    Json j;
    Json rows = Json::array();
    for (const auto& r : s.rows)
      rows.push_back({{"m", r.m}, {"Q_order", r.q_order}, {"J", io::round12(r.J)}, {"tail_bound", io::round12(r.tail)}});
    j["rows"] = rows;
    j["J_opt"] = io::round12(s.J_opt);
    j["J_centralized"] = io::round12(s.J_centralized);
    j["S"] = s.S;
    j["T"] = s.T;
    os << j.dump(2) << '\n';
  } else if (format == "csv") {
    os << "m,Q_order,J,S,T\n";
    for (const auto& r : s.rows) os << r.m << ',' << r.q_order << ',' << format_number(r.J) << ',' << s.S << ',' << s.T << '\n';
    os << "J_opt,," << format_number(s.J_opt) << ',' << s.S << ',' << s.T << '\n';
    os << "centralized,," << format_number(s.J_centralized) << ',' << s.S << ',' << s.T << '\n';
  } else {
    os << " m | Q order | J\n";
    for (const auto& r : s.rows)
      os << std::setw(2) << r.m << " | " << std::setw(7) << r.q_order << " | " << format_number(r.J) << '\n';
    os << "optimal decentralized: " << format_number(s.J_opt) << '\n';
    os << "centralized: " << format_number(s.J_centralized) << '\n';
    os << "(S=" << s.S << ", T=" << s.T << ")\n";
  }
}

// --- reference design checkpoints -------------------------------------------

class Checkpoints {
 public:
  explicit Checkpoints(std::ostream& os) : os_(os) {}

  void check(const std::string& name, bool ok, const std::string& detail = "") {
    os_ << (ok ? "PASS " : "FAIL ") << name;
    if (!detail.empty()) os_ << "  (" << detail << ")";
    os_ << '\n';
    failures_ += ok ? 0 : 1;
  }
  int failures() const { return failures_; }

 private:
  std::ostream& os_;
  int failures_ = 0;
};

bool lambda_matches(const LambdaSeries& s, int t0, std::initializer_list<double> want, double tol, double* err) {
  double worst = 0.0;
  int t = t0;
  for (double w : want) worst = std::max(worst, std::abs(s(t++) - w));
  *err = worst;
  return worst <= tol;
}

int reference_example(Range range, int S, int T, std::ostream& os) {
  using namespace example;
  const Problem prob = problem();
  Checkpoints cp(os);
  const BiSeries rz = r();
  const BiSeries rhoz = rho();
  double err = 0.0;

  const InnerOuter fact = inner_outer(prob.T2_factors);
  os << "T2in = \u03bb^" << fact.delay_d << '\n';
  cp.check("inner factor is lambda^2", fact.delay_d == 2);
  {
    // tau / ((1 - rho lambda)(1 - r lambda)) built directly
    const BiSeries d1 = sub(BiSeries::delta(), shift_temporal(rhoz, 1));
    const BiSeries d2 = sub(BiSeries::delta(), shift_temporal(rz, 1));
    const RationalTransfer want(BiSeries::delta(), mul(d1, d2));
    err = max_abs_diff(expand(fact.outer, 10, 10), expand(want, 10, 10));
    cp.check("outer factor is 1/((1 - rho lambda)(1 - r lambda))", err <= 1e-12, "max err " + format_number(err));
    cp.check("outer factor passes the unit-circle probe", is_outer(fact.outer));
  }

  const BiSeries R = apply_inner_adjoint(prob.T1, fact.delay_d, S, T);
  {
    // lambda^{-1} + r + lambda r^2 + ...
    double worst = std::abs(R(0, -1) - 1.0);
    BiSeries power = rz;
    for (int t = 0; t <= 6; ++t) {
      for (int i = -t - 1; i <= t + 1; ++i) worst = std::max(worst, std::abs(R(i, t) - power(i, 0)));
      power = mul(power, rz);
    }
    cp.check("T2in* T1 = lambda^-1 / (1 - r lambda)", worst <= 1e-12, "max err " + format_number(worst));
  }
  const ModelMatchingFamily fam = decompose(R, S);
  cp.check("T~_0 = lambda^-1 + 1/4 + 3/32 lambda + 5/128 lambda^2",
           lambda_matches(fam.at(0), -1, {1.0, 0.25, 3.0 / 32, 5.0 / 128}, 1e-12, &err), format_number(err));
  for (int i : {1, -1}) {
    cp.check("T~_" + std::to_string(i) + " = 1/8 + 1/16 lambda + 15/512 lambda^2 + 7/512 lambda^3",
             lambda_matches(fam.at(i), 0, {0.125, 1.0 / 16, 15.0 / 512, 7.0 / 512}, 1e-12, &err), format_number(err));
  }
  cp.check("eta~_0 = 1/4 + 3/32 lambda + 5/128 lambda^2",
           lambda_matches(solve_model_matching(fam.at(0), 0, 2), 0, {0.25, 3.0 / 32, 5.0 / 128}, 1e-12, &err),
           format_number(err));
  for (int i : {1, -1}) {
    cp.check("eta~_" + std::to_string(i) + " = 1/16 + 15/512 lambda + 7/512 lambda^2",
             lambda_matches(solve_model_matching(fam.at(i), i, 2), 0, {1.0 / 16, 15.0 / 512, 7.0 / 512}, 1e-12, &err),
             format_number(err));
  }

  const SynthesisResult m1 = synthesize(prob, 1, S, T);
  {
    const BiSeries& qn = m1.Q.num();
    double worst = std::abs(qn(0, 0) - 0.25);
    const double l1[] = {-1.0 / 96, -5.0 / 96, -1.0 / 96};
    for (int i = -1; i <= 1; ++i) worst = std::max(worst, std::abs(qn(i, 1) - l1[i + 1]));
    cp.check("Q (m=1) = 1/4 - (z + 5 + z^-1) lambda / 96 + ...", m1.Q.has_unit_denominator() && worst <= 1e-12,
             "max err " + format_number(worst));
    const SynthesisResult m2 = synthesize(prob, 2, S, T);
    const double l2[] = {2, 21, 32, 21, 2};
    worst = 0.0;
    for (int i = -2; i <= 2; ++i) worst = std::max(worst, std::abs(m2.Q.num()(i, 2) + l2[i + 2] / 1536));
    cp.check("Q lambda^2 term = -(2z^2 + 21z + 32 + 21z^-1 + 2z^-2)/1536", worst <= 1e-12,
             "m=2, max err " + format_number(worst));
  }
  {
    const RationalTransfer reference(reference_controller_num(), reference_controller_den());
    const BiSeries got = expand(m1.K, 5, 8);
    err = max_abs_diff(got, expand(reference, 5, 8));
    cp.check("K (m=1) matches the reference controller rational", err <= 1e-9, "max err " + format_number(err));
    const ControllerRealization cr = realize_controller(m1, prob);
    err = max_abs_diff(expand_realization(cr.K, 5, 8), got);
    cp.check("K realization expands to K", err <= 1e-9, "max err " + format_number(err));
    cp.check("K realization has 4 states", cr.K.states() == 4, std::to_string(cr.K.states()) + " states");
    cp.check("K realization feedthrough equals K at lambda=0 (-1/4)", std::abs(cr.K.D(0, 0) + 0.25) <= 1e-12,
             "D=" + format_number(cr.K.D(0, 0)));
  }

  const Sweep sweep = run_sweep(prob, range, S, T);
  write_sweep(os, "text", sweep);
  for (const auto& row : sweep.rows) {
    if (row.m < 0 || row.m >= static_cast<int>(kReferenceJ.size())) continue;
    const double want = kReferenceJ[row.m];
    cp.check("J(m=" + std::to_string(row.m) + ") = " + format_number(want), std::abs(row.J - want) <= 1e-3,
             "got " + format_number(row.J));
  }
  cp.check("optimal decentralized norm = " + format_number(kReferenceOptimal),
           std::abs(sweep.J_opt - kReferenceOptimal) <= 5e-4 && std::abs(sweep.J_opt - std::sqrt(1.0 + 2.0 / 63.0)) <= 1e-6,
           "got " + format_number(sweep.J_opt));
  cp.check("centralized norm = 1", std::abs(sweep.J_centralized - kReferenceCentralized) <= 1e-6,
           "got " + format_number(sweep.J_centralized));

  os << (cp.failures() == 0 ? "all checkpoints passed\n" : std::to_string(cp.failures()) + " checkpoint(s) failed\n");
  return cp.failures() == 0 ? kOk : kToleranceFailure;
}

// --- file-driven commands ---------------------------------------------------

bool is_bare_rational(const Json& j) { return j.is_object() && j.contains("num") && !j.contains("mode"); }

const char* kSystems = "T1, T2, Gyu, Q, K or closed-loop";

RationalTransfer pick_rational(const Problem& prob, const std::string& name, int m, int S, int T) {
  if (name == "T1") return prob.T1;
  if (name == "T2") return prob.T2;
  if (name == "Gyu") return prob.Gyu;
  const SynthesisResult r = synthesize(prob, m, S, T);
  if (name == "Q") return r.Q;
  if (name == "K") return r.K;
  if (name == "closed-loop") return rat_sub(prob.T1, rat_mul(prob.T2, r.Q));
  throw Error(ErrorCode::InvalidInput, "--system", "unknown system \"" + name + "\" (expected " + kSystems + ")");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal H2 synthesis for cone-causal spatially invariant systems", "conesynth"};
  app.require_subcommand(1);

  std::string file, format = "text", out_path, m_range = "0..6", system = "K";
  std::optional<int> m, S, T;
  int sites = 512, horizon = 200, impulse_site = 0;

  auto add_orders = [&](CLI::App* c) {
    c->add_option("--eta-order,-m", m, "temporal order m of sum lambda^|i| eta~_i z^i");
    c->add_option("--spatial-order,-S", S, "spatial truncation for expansions");
    c->add_option("--temporal-order,-T", T, "temporal truncation for expansions");
  };

  auto* synth = app.add_subcommand("synth", "synthesize Q, K and their norms");
  synth->add_option("file", file, "problem file")->required();
  add_orders(synth);
  synth->add_option("--format", format)->check(CLI::IsMember({"text", "json", "csv"}));
  synth->add_option("--out", out_path);

  auto* sweep = app.add_subcommand("sweep", "closed-loop norm for a range of m");
  sweep->add_option("file", file, "problem file")->required();
  sweep->add_option("--m-range", m_range, "a..b");
  sweep->add_option("--spatial-order,-S", S);
  sweep->add_option("--temporal-order,-T", T);
  sweep->add_option("--format", format)->check(CLI::IsMember({"text", "json", "csv"}));
  sweep->add_option("--out", out_path);

  auto* example_cmd = app.add_subcommand("paper-example", "run the reference diffusion-lattice design with checkpoints");
  example_cmd->add_option("--m-range", m_range, "a..b");
  example_cmd->add_option("--spatial-order,-S", S);
  example_cmd->add_option("--temporal-order,-T", T);
  example_cmd->add_option("--out", out_path);

  auto* simulate_cmd = app.add_subcommand("simulate", "impulse response on a ring lattice (CSV)");
  simulate_cmd->add_option("file", file, "problem file or bare transfer function")->required();
  simulate_cmd->add_option("--sites", sites);
  simulate_cmd->add_option("--horizon", horizon);
  simulate_cmd->add_option("--impulse-site", impulse_site);
  simulate_cmd->add_option("--system", system, kSystems);
  add_orders(simulate_cmd);
  simulate_cmd->add_option("--out", out_path);

  auto* realize = app.add_subcommand("realize", "l-causal state-space realization (JSON)");
  realize->add_option("file", file, "problem file or bare transfer function")->required();
  add_orders(realize);
  realize->add_option("--out", out_path);

  auto* expand_cmd = app.add_subcommand("expand", "series coefficients (JSON)");
  expand_cmd->add_option("file", file, "problem file or bare transfer function")->required();
  expand_cmd->add_option("--system", system, kSystems);
  add_orders(expand_cmd);
  expand_cmd->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }

  try {
    Sink sink(out_path, out);
    if (example_cmd->parsed()) {
      return reference_example(parse_range(m_range), S.value_or(kDefaultOrder), T.value_or(kDefaultOrder), *sink);
    }

    const Json doc = io::read_file(file);
    if (synth->parsed() || sweep->parsed()) {
      const io::ProblemFile pf = io::problem_from_json(doc);
      const Orders o = resolve_orders(pf.orders, m, S, T);
      if (sweep->parsed()) {
        write_sweep(*sink, format, run_sweep(pf.problem, parse_range(m_range), o.S, o.T));
        return kOk;
      }
      const SynthesisResult r = synthesize(pf.problem, o.m, o.S, o.T);
      const ControllerRealization cr = realize_controller(r, pf.problem);
      if (r.J.tail_loose) err << "warning: TailBoundLoose: tail bound " << format_number(r.J.tail_bound) << '\n';
      write_synthesis(*sink, format, r, cr);
      return kOk;
    }

    if (realize->parsed()) {
      if (is_bare_rational(doc)) {
        *sink << io::to_json(realize_rational(io::rational_from_json(doc))).dump(2) << '\n';
        return kOk;
      }
      const io::ProblemFile pf = io::problem_from_json(doc);
      const Orders o = resolve_orders(pf.orders, m, S, T);
      const SynthesisResult r = synthesize(pf.problem, o.m, o.S, o.T);
      const ControllerRealization cr = realize_controller(r, pf.problem);
      Json j;
      j["orders"] = {{"m", o.m}, {"S", o.S}, {"T", o.T}};
      j["K"] = io::to_json(cr.K);
      j["G1"] = io::to_json(cr.G1);
      j["T2out"] = io::to_json(cr.T2out);
      j["G3"] = io::to_json(cr.G3);
      j["Gyu"] = io::to_json(cr.Gyu);
      *sink << j.dump(2) << '\n';
      return kOk;
    }

    if (expand_cmd->parsed()) {
      const int eS = S.value_or(10), eT = T.value_or(10);
      RationalTransfer r;
      if (is_bare_rational(doc)) {
        r = io::rational_from_json(doc);
      } else {
        const io::ProblemFile pf = io::problem_from_json(doc);
        const Orders o = resolve_orders(pf.orders, m, std::nullopt, std::nullopt);
        r = pick_rational(pf.problem, system, o.m, o.S, o.T);
      }
      *sink << io::to_json(expand(r, eS, eT)).dump(2) << '\n';
      return kOk;
    }

    if (simulate_cmd->parsed()) {
      const LatticeSignal input = LatticeSignal::impulse(sites, horizon, impulse_site);
      LatticeSignal response(sites, horizon);
      if (is_bare_rational(doc)) {
        response = simulate(realize_rational(io::rational_from_json(doc)), input);
      } else {
        const io::ProblemFile pf = io::problem_from_json(doc);
        const Orders o = resolve_orders(pf.orders, m, S, T);
        if (system == "closed-loop" && pf.problem.mode == ProblemMode::disturbance_attenuation) {
          const SynthesisResult r = synthesize(pf.problem, o.m, o.S, o.T);
          const ControllerRealization cr = realize_controller(r, pf.problem);
          response = simulate_disturbance_loop(realize_rational(pf.problem.T1), cr.Gyu, cr.K, input);
        } else if (system == "K") {
          const SynthesisResult r = synthesize(pf.problem, o.m, o.S, o.T);
          response = simulate(realize_controller(r, pf.problem).K, input);
        } else {
          response = simulate(expand(pick_rational(pf.problem, system, o.m, o.S, o.T), horizon, horizon), input);
        }
      }
      write_csv(*sink, response);
      return kOk;
    }
  } catch (const Error& e) {
    err << "error: [" << to_string(e.code()) << "] " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
  return kOk;
}

}  // namespace conesynth::cli
