// specround command-line front end.
//
// Exit status: 0 certified success, 1 input error, 2 certificate violation,
// 3 iteration cap reached.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "specround/concentration.hpp"
#include "specround/error.hpp"
#include "specround/expdesign.hpp"
#include "specround/graph.hpp"
#include "specround/io.hpp"
#include "specround/netdesign.hpp"
#include "specround/rounding.hpp"
#include "specround/signing.hpp"
#include "specround/sparsify.hpp"

using namespace specround;
using io::Json;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kViolation = 2;
constexpr int kIterationCap = 3;

struct Common {
  std::string input;
  std::string output;
  std::string history;
  double eps = 0.0;
  std::uint64_t seed = 0;
  double q_cap = rounding::kDefaultQCap;
  long max_iterations = 0;
};

void emit(const std::string& path, const Json& j) {
  if (path.empty() || path == "-") {
    std::cout << io::dump(j);
  } else {
    io::write_json_file(path, j);
  }
}

void emit_history(const std::string& path, const std::vector<rounding::IterationRecord>& h) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  io::write_history_csv(out, h);
}

rounding::SwapParams swap_params(const Common& c) {
  rounding::SwapParams p;
  p.eps = c.eps;
  p.seed = c.seed;
  p.q_cap = c.q_cap;
  p.max_iterations = c.max_iterations;
  p.record_history = true;
  return p;
}

int cmd_round(const Common& c, bool exact) {
  const VectorInstance inst = io::instance_from_json(io::read_json_file(c.input));
  Json out;
  out["kind"] = exact ? "exact-round" : "round";
  out["input"] = c.input;
  out["params"] = {{"eps", c.eps}, {"seed", c.seed}, {"q_cap", c.q_cap}, {"max_iterations", c.max_iterations}};
  try {
    const auto cert = exact ? rounding::exact_round(inst, swap_params(c)) : rounding::randomized_swap(inst, swap_params(c));
    out["status"] = "certified";
    out["certificate"] = io::to_json(cert);
    emit(c.output, out);
    emit_history(c.history, cert.history);
    return kOk;
  } catch (const rounding::IterationCapExceeded& e) {
    out["status"] = "iteration_cap";
    out["message"] = e.what();
    out["certificate"] = io::to_json(e.partial());
    emit(c.output, out);
    emit_history(c.history, e.partial().history);
    throw;
  }
}

int cmd_sparsify(const Common& c, double q) {
  const graph::Graph g = graph::read_edge_list_file(c.input);
  sparsify::SparsifyParams p;
  p.eps = c.eps;
  p.q = q;
  const auto cert = sparsify::greedy_additive_sparsify(g, p);
  Json out;
  out["kind"] = "sparsify";
  out["input"] = c.input;
  out["params"] = {{"eps", c.eps}, {"q", q}};
  out["status"] = "certified";
  out["certificate"] = io::to_json(cert);
  out["report"] = io::to_json(sparsify::verify_additive(g, cert.edges, c.eps));
  emit(c.output, out);
  return kOk;
}

int cmd_design(const Common& c, int iters, double tol) {
  const Json j = io::read_json_file(c.input);
  bool has_x = false;
  const expdesign::DesignProblem p = io::design_from_json(j, &has_x);
  Json out;
  out["kind"] = "design";
  out["input"] = c.input;
  out["params"] = {{"eps", c.eps}, {"seed", c.seed}, {"q_cap", c.q_cap}, {"max_iterations", c.max_iterations}, {"iters", iters}, {"tol", tol}};
  std::vector<double> x = p.instance.x;
  if (!has_x) {
    const auto relax = expdesign::solve_relaxation(p, {iters, tol});
    out["relaxation"] = io::to_json(relax);
    x = relax.x;
  }
  const auto d = expdesign::round_design(p, x, swap_params(c));
  out["x"] = x;
  out["status"] = "certified";
  out["rounding"] = io::to_json(d);
  emit(c.output, out);
  emit_history(c.history, d.certificate.history);
  return kOk;
}

netdesign::NetworkDesignInstance load_network(const std::string& graph_path, const std::string& sidecar) {
  graph::Graph g = graph::read_edge_list_file(graph_path);
  if (sidecar.empty()) return io::network_from_json(Json::object(), std::move(g));
  return io::network_from_json(io::read_json_file(sidecar), std::move(g));
}

int cmd_netdesign(const Common& c, const std::string& sidecar) {
  const auto nd = load_network(c.input, sidecar);
  const auto sol = netdesign::round_network(nd, swap_params(c));
  Json out;
  out["kind"] = "netdesign";
  out["input"] = c.input;
  out["sidecar"] = sidecar;
  out["params"] = {{"eps", c.eps}, {"seed", c.seed}, {"q_cap", c.q_cap}, {"max_iterations", c.max_iterations}};
  out["status"] = sol.report.pass ? "certified" : "violation";
  out["solution"] = io::to_json(sol);
  emit(c.output, out);
  emit_history(c.history, sol.certificate.history);
  if (!sol.report.pass) throw Error(ErrorKind::CertificateViolation, "implied constraint check failed");
  return kOk;
}

std::vector<int> ints(const Json& j) { return j.get<std::vector<int>>(); }

// Re-checks an emitted result against its input; returns the list of failures.
std::vector<std::string> verify_result(const Json& r, const std::string& input_override, Json& report) {
  std::vector<std::string> fails;
  const std::string kind = r.at("kind").get<std::string>();
  const std::string input = input_override.empty() ? r.value("input", std::string()) : input_override;
  report["kind"] = kind;
  if (kind == "round" || kind == "exact-round") {
    const VectorInstance inst = io::instance_from_json(io::read_json_file(input));
    if (r.value("status", std::string()) != "certified") fails.push_back("result is not certified");
    const Json& cert = r.at("certificate");
    const std::vector<int> sel = ints(cert.at("selected"));
    for (int i : sel)
      if (i < 0 || i >= inst.m()) throw Error(ErrorKind::ParseError, "selected index out of range");
    const double eps = r.at("params").at("eps").get<double>();
    const double lam = linalg::lambda_min(inst.selection_moment(sel));
    const double cost = inst.selection_cost(sel);
    const double need = kind == "round" ? 1.0 - 2.0 * eps - 1e-9 : 1.0 - 1e-7;
    report["lambda_min"] = lam;
    report["required"] = need;
    report["cost"] = cost;
    if (lam < need) fails.push_back("lambda_min below the certified level");
    if (std::abs(cost - cert.at("cost").get<double>()) > 1e-9 * std::max(1.0, cost)) fails.push_back("cost differs from certificate");
    if (std::abs(lam - cert.at("lambda_min").get<double>()) > 1e-8) fails.push_back("lambda_min differs from certificate");
    if (cert.at("regret_slack").get<double>() < -1e-7) fails.push_back("regret slack negative");
  } else if (kind == "sparsify") {
    const graph::Graph g = graph::read_edge_list_file(input);
    const Json& cert = r.at("certificate");
    const std::vector<int> f = ints(cert.at("edges"));
    const double eps = r.at("params").at("eps").get<double>();
    const auto rep = sparsify::verify_additive(g, f, eps);
    report["additive"] = io::to_json(rep);
    if (std::abs(rep.additive_max - cert.at("upper_residual").get<double>()) > 1e-8) fails.push_back("upper residual differs");
    if (std::abs(rep.signless_min - cert.at("lower_residual").get<double>()) > 1e-8) fails.push_back("lower residual differs");
    if (rep.m_tilde != cert.at("m_tilde").get<int>()) fails.push_back("edge count differs");
  } else if (kind == "design") {
    const Json j = io::read_json_file(input);
    const expdesign::DesignProblem p = io::design_from_json(j);
    VectorInstance inst = p.instance;
    inst.x = r.at("x").get<std::vector<double>>();
    const std::vector<int> sel = ints(r.at("rounding").at("selected"));
    const double eps = r.at("params").at("eps").get<double>();
    const double cost = inst.selection_cost(sel);
    const auto map = linalg::whitening_map(inst.moment());
    const double ratio = map.rows() > 0
                             ? linalg::lambda_min(linalg::SymMatrix(map * inst.selection_moment(sel).matrix() * map.transpose()))
                             : 1.0;
    report["cost"] = cost;
    report["budget"] = p.budget;
    report["lambda_ratio"] = ratio;
    if (cost > p.budget) fails.push_back("budget exceeded");
    if (ratio < 1.0 - 4.0 * eps - 1e-7) fails.push_back("lambda ratio below 1 - 4 eps");
  } else if (kind == "netdesign") {
    const auto nd = load_network(input, r.value("sidecar", std::string()));
    const std::vector<int> z = ints(r.at("solution").at("z"));
    const auto rep = netdesign::verify_spectral_implications(nd, std::vector<double>(z.begin(), z.end()), 1e-7);
    report["implications"] = io::to_json(rep);
    if (!rep.pass) fails.push_back("implied constraint check failed");
  } else if (kind == "selection") {
    const VectorInstance inst = io::instance_from_json(io::read_json_file(input));
    const auto rep = signing::verify_two_sided(inst, ints(r.at("z")), r.at("eps").get<double>(), r.value("factor", 8.0));
    report["two_sided"] = io::to_json(rep);
    if (!rep.pass) fails.push_back("two-sided band violated");
  } else {
    throw Error(ErrorKind::ParseError, "unknown result kind '" + kind + "'");
  }
  return fails;
}

int cmd_verify(const Common& c) {
  const Json r = io::read_json_file(c.input);
  Json report;
  std::vector<std::string> fails;
  try {
    fails = verify_result(r, c.history, report);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("result file: ") + e.what());
  }
  report["failures"] = fails;
  report["pass"] = fails.empty();
  emit(c.output, report);
  if (!fails.empty()) throw Error(ErrorKind::CertificateViolation, fails.front());
  return kOk;
}

struct ConcheckOptions {
  concentration::BirthDeathChain chain;
  long trials = 100000;
  std::vector<double> etas{1.0, 2.0, 4.0};
  std::string drift_instance;
};

int cmd_concheck(const Common& c, const ConcheckOptions& o) {
  const auto rep = concentration::simulate_and_check(o.chain, o.etas, o.trials, c.seed);
  std::ostringstream csv;
  concentration::write_report_csv(csv, rep);
  if (c.output.empty() || c.output == "-") {
    std::cout << csv.str();
  } else {
    std::ofstream out(c.output, std::ios::binary);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + c.output);
    out << csv.str();
  }
  bool pass = rep.pass;
  if (!o.drift_instance.empty()) {
    const VectorInstance inst = io::instance_from_json(io::read_json_file(o.drift_instance));
    const auto cert = rounding::randomized_swap(inst, swap_params(c));
    const auto drift = concentration::check_rounding_drift(cert);
    std::cerr << io::to_json(drift).dump() << "\n";
    pass = pass && drift.pass;
  }
  if (!pass) throw Error(ErrorKind::CertificateViolation, "empirical tail exceeds the closed-form bound");
  return kOk;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::IterationCapExceeded: return kIterationCap;
    case ErrorKind::CertificateViolation:
    case ErrorKind::UnluckyRun:
    case ErrorKind::HypothesisViolation: return kViolation;
    default: return kInputError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified spectral rounding toolkit"};
  app.require_subcommand(1);

  Common round_opts, exact_opts, sparsify_opts, design_opts, net_opts, verify_opts, con_opts;
  round_opts.eps = 0.2;
  exact_opts.eps = 0.1;
  sparsify_opts.eps = 0.5;
  design_opts.eps = 0.25;
  net_opts.eps = 0.2;
  double q = 0.1;
  int iters = 500;
  double tol = 1e-6;
  std::string sidecar;
  ConcheckOptions con;

  auto add_common = [](CLI::App* sub, Common& c, bool history) {
    sub->add_option("input", c.input, "input file")->required();
    sub->add_option("-o,--output", c.output, "result path (default stdout)");
    sub->add_option("--seed", c.seed, "64-bit seed");
    if (history) {
      sub->add_option("--q-cap", c.q_cap, "iteration cap multiplier q (cap = q k / eps)");
      sub->add_option("--max-iterations", c.max_iterations, "hard iteration cap overriding --q-cap");
      sub->add_option("--history", c.history, "write per-iteration CSV");
    }
  };

  auto* round = app.add_subcommand("round", "randomized swap to lambda_min >= 1 - 2 eps");
  add_common(round, round_opts, true);
  round->add_option("--eps", round_opts.eps, "eps in (0, 1/2)");

  auto* exact = app.add_subcommand("exact-round", "exact one-sided rounding to lambda_min >= 1");
  add_common(exact, exact_opts, true);
  exact->add_option("--eps", exact_opts.eps, "eps in (0, 1/4)");

  auto* sp = app.add_subcommand("sparsify", "greedy additive sparsifier of an edge list");
  add_common(sp, sparsify_opts, false);
  sp->add_option("--eps", sparsify_opts.eps, "eps in (0, 1]");
  sp->add_option("--q", q, "learning-rate constant q");

  auto* design = app.add_subcommand("design", "budgeted experimental design");
  add_common(design, design_opts, true);
  design->add_option("--eps", design_opts.eps, "eps in (0, 1/2]");
  design->add_option("--iters", iters, "relaxation iterations");
  design->add_option("--tol", tol, "relaxation duality-gap tolerance");

  auto* net = app.add_subcommand("netdesign", "round a fractional network design");
  add_common(net, net_opts, true);
  net->add_option("--eps", net_opts.eps, "eps in (0, 1/4)");
  net->add_option("--sidecar", sidecar, "JSON constraints sidecar");

  auto* verify = app.add_subcommand("verify", "re-verify an emitted result");
  verify->add_option("input", verify_opts.input, "result JSON")->required();
  verify->add_option("-o,--output", verify_opts.output, "report path (default stdout)");
  verify->add_option("--instance", verify_opts.history, "override the input recorded in the result");

  auto* concheck = app.add_subcommand("concheck", "simulate a self-adjusting chain against its tail bounds");
  concheck->add_option("-o,--output", con_opts.output, "CSV path (default stdout)");
  concheck->add_option("--seed", con_opts.seed, "64-bit seed");
  concheck->add_option("--items", con.chain.items, "chain population M");
  concheck->add_option("--p", con.chain.p, "chain rate p");
  concheck->add_option("--k", con.chain.k, "chain normalizer k (gamma = 1/k)");
  concheck->add_option("--boost", con.chain.boost, "chain drift offset B");
  concheck->add_option("--horizon", con.chain.horizon, "steps per trial");
  concheck->add_option("--trials", con.trials, "number of trials");
  concheck->add_option("--eta", con.etas, "tail offsets")->delimiter(',');
  concheck->add_option("--drift", con.drift_instance, "also check the cost drift of a rounding run on this instance");
  concheck->add_option("--eps", con_opts.eps, "eps for --drift")->default_val(0.2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*round) return cmd_round(round_opts, false);
    if (*exact) return cmd_round(exact_opts, true);
    if (*sp) return cmd_sparsify(sparsify_opts, q);
    if (*design) return cmd_design(design_opts, iters, tol);
    if (*net) return cmd_netdesign(net_opts, sidecar);
    if (*verify) return cmd_verify(verify_opts);
    if (*concheck) return cmd_concheck(con_opts, con);
  } catch (const Error& e) {
    std::cerr << "specround: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "specround: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
