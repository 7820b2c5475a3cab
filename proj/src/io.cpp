#include "specround/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "specround/error.hpp"

namespace specround::io {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::vector<double> numbers(const Json& j, const char* what) {
  if (!j.is_array()) parse_error(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) parse_error(std::string(what) + " must contain numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<std::vector<double>> rows_of(const Json& j, const char* what) {
  if (!j.is_array()) parse_error(std::string(what) + " must be an array of rows");
  std::vector<std::vector<double>> out;
  for (const auto& r : j) out.push_back(numbers(r, what));
  return out;
}

std::optional<LinearRows> linear_rows(const Json& j, const char* key, const char* mat, const char* rhs) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  const Json& o = j.at(key);
  LinearRows rows;
  rows.rows = rows_of(field(o, mat), mat);
  rows.rhs = numbers(field(o, rhs), rhs);
  return rows;
}

Json rows_to_json(const LinearRows& r, const char* mat, const char* rhs) {
  Json o;
  o[mat] = r.rows;
  o[rhs] = r.rhs;
  return o;
}

Json residuals_to_json(const std::vector<rounding::RowResidual>& rows) {
  Json a = Json::array();
  for (const auto& r : rows) a.push_back({{"z_value", r.z_value}, {"x_value", r.x_value}, {"rhs", r.rhs}});
  return a;
}

linalg::Matrix matrix_from_rows(const Json& j, const char* what) {
  const auto rows = rows_of(j, what);
  if (rows.empty()) return linalg::Matrix(0, 0);
  linalg::Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) parse_error(std::string(what) + " rows have unequal length");
    for (std::size_t k = 0; k < rows[i].size(); ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  }
  return m;
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    parse_error(path + ": " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  out << dump(j);
}

VectorInstance instance_from_json(const Json& j) {
  try {
    const int n = field(j, "n").get<int>();
    const int m = field(j, "m").get<int>();
    if (n < 1 || m < 0) parse_error("n must be >= 1 and m >= 0");
    const auto vecs = rows_of(field(j, "vectors"), "vectors");
    if (static_cast<int>(vecs.size()) != m) parse_error("vectors must have m rows");
    VectorInstance inst;
    inst.vectors.resize(n, m);
    for (int i = 0; i < m; ++i) {
      if (static_cast<int>(vecs[static_cast<std::size_t>(i)].size()) != n) {
        std::ostringstream os;
        os << "vector " << i << " has " << vecs[static_cast<std::size_t>(i)].size() << " entries, expected " << n;
        parse_error(os.str());
      }
      for (int r = 0; r < n; ++r) inst.vectors(r, i) = vecs[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)];
    }
    inst.x = j.contains("x") ? numbers(j.at("x"), "x") : std::vector<double>(static_cast<std::size_t>(m), 0.0);
    inst.c = j.contains("c") ? numbers(j.at("c"), "c") : std::vector<double>(static_cast<std::size_t>(m), 0.0);
    inst.packing = linear_rows(j, "packing", "A", "a");
    inst.covering = linear_rows(j, "covering", "B", "b");
    return inst;
  } catch (const nlohmann::json::exception& e) {
    parse_error(std::string("instance: ") + e.what());
  }
}

Json instance_to_json(const VectorInstance& inst) {
  Json j;
  j["n"] = inst.n();
  j["m"] = inst.m();
  Json vecs = Json::array();
  for (Eigen::Index i = 0; i < inst.m(); ++i) {
    std::vector<double> v(static_cast<std::size_t>(inst.n()));
    for (Eigen::Index r = 0; r < inst.n(); ++r) v[static_cast<std::size_t>(r)] = inst.vectors(r, i);
    vecs.push_back(v);
  }
  j["vectors"] = vecs;
  j["x"] = inst.x;
  j["c"] = inst.c;
  if (inst.packing) j["packing"] = rows_to_json(*inst.packing, "A", "a");
  if (inst.covering) j["covering"] = rows_to_json(*inst.covering, "B", "b");
  return j;
}

expdesign::DesignProblem design_from_json(const Json& j, bool* has_x) {
  expdesign::DesignProblem p;
  p.instance = instance_from_json(j);
  if (has_x) *has_x = j.contains("x");
  try {
    p.budget = field(j, "budget").get<double>();
    p.tag = expdesign::parse_objective(field(j, "objective").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    parse_error(std::string("design problem: ") + e.what());
  }
  if (j.contains("V") && !j.at("V").is_null()) p.v_rows = matrix_from_rows(j.at("V"), "V");
  return p;
}

netdesign::NetworkDesignInstance network_from_json(const Json& j, graph::Graph g) {
  netdesign::NetworkDesignInstance nd;
  const int n = g.num_vertices();
  nd.g = std::move(g);
  try {
    if (j.contains("uniform_requirement")) nd.requirements = netdesign::uniform_requirements(n, j.at("uniform_requirement").get<double>());
    if (j.contains("requirements"))
      for (const auto& r : j.at("requirements")) nd.requirements.push_back({r.at(0).get<int>(), r.at(1).get<int>(), r.at(2).get<double>()});
    if (j.contains("degree_bounds")) nd.degree_bounds = numbers(j.at("degree_bounds"), "degree_bounds");
    if (j.contains("reff_bounds"))
      for (const auto& r : j.at("reff_bounds")) nd.reff_bounds.push_back({r.at(0).get<int>(), r.at(1).get<int>(), r.at(2).get<double>()});
    if (j.contains("spectral_lower")) nd.spectral_lower = linalg::SymMatrix(matrix_from_rows(j.at("spectral_lower"), "spectral_lower"));
    if (j.contains("algebraic_connectivity")) nd.algebraic_connectivity = j.at("algebraic_connectivity").get<double>();
    nd.packing = linear_rows(j, "packing", "A", "a");
    nd.covering = linear_rows(j, "covering", "B", "b");
  } catch (const nlohmann::json::exception& e) {
    parse_error(std::string("network sidecar: ") + e.what());
  }
  return nd;
}

Json to_json(const rounding::RoundingCertificate& c) {
  Json j;
  j["selected"] = c.selected;
  j["lambda_min"] = c.lambda_min;
  j["cost"] = c.cost;
  j["iterations"] = c.iterations;
  j["regret_slack"] = c.regret_slack;
  j["sum_delta"] = c.sum_delta;
  j["regret_offset"] = c.regret_offset;
  j["big"] = c.big;
  j["range_collapse"] = c.range_collapse;
  j["packing"] = residuals_to_json(c.packing);
  j["covering"] = residuals_to_json(c.covering);
  j["run"] = {{"n", c.run.n},
              {"m", c.run.m},
              {"eps", c.run.eps},
              {"alpha", c.run.alpha},
              {"k", c.run.k},
              {"fractional_cost", c.run.fractional_cost},
              {"max_cost", c.run.max_cost},
              {"iteration_cap", c.run.iteration_cap}};
  return j;
}

Json to_json(const sparsify::SparsifierCertificate& c) {
  Json j;
  j["edges"] = c.edges;
  j["m"] = c.m;
  j["m_tilde"] = c.m_tilde;
  j["scale"] = c.scale;
  j["max_degree"] = c.max_degree;
  j["eps"] = c.eps;
  j["q"] = c.q;
  j["alpha"] = c.alpha;
  j["iterations"] = c.iterations;
  j["upper_residual"] = c.upper_residual;
  j["lower_residual"] = c.lower_residual;
  j["width_constant"] = c.width_constant;
  j["returned_input"] = c.returned_input;
  Json log = Json::array();
  for (const auto& r : c.log)
    log.push_back({{"t", r.t}, {"edge", r.edge}, {"score", r.score}, {"bound", r.bound}, {"width", r.width}});
  j["log"] = log;
  return j;
}

Json to_json(const sparsify::AdditiveReport& r) {
  return {{"m", r.m},
          {"m_tilde", r.m_tilde},
          {"scale", r.scale},
          {"max_degree", r.max_degree},
          {"additive_max", r.additive_max},
          {"additive_min", r.additive_min},
          {"signless_min", r.signless_min},
          {"eps_additive", r.eps_additive},
          {"eps_degree", r.eps_degree},
          {"eps_claimed", r.eps_claimed},
          {"pass_additive", r.pass_additive},
          {"pass_degree", r.pass_degree}};
}

Json to_json(const netdesign::ImplicationReport& r) {
  Json fam = Json::array();
  for (const auto& f : r.families)
    fam.push_back({{"name", f.name}, {"applicable", f.applicable}, {"pass", f.pass}, {"residual", f.residual}, {"detail", f.detail}});
  return {{"eps_band", r.eps_band},
          {"spectral_min", r.spectral_min},
          {"spectral_max", r.spectral_max},
          {"cuts_checked", r.cuts_checked},
          {"exhaustive_cuts", r.exhaustive_cuts},
          {"families", fam},
          {"pass", r.pass}};
}

Json to_json(const netdesign::NetworkSolution& s) {
  return {{"z", s.z},
          {"cost", s.cost},
          {"cost_bound", s.cost_bound},
          {"cost_within_bound", s.cost_within_bound},
          {"certificate", to_json(s.certificate)},
          {"report", to_json(s.report)}};
}

Json to_json(const expdesign::RelaxationResult& r) {
  return {{"x", r.x}, {"objective", r.objective}, {"gap", r.gap}, {"iterations", r.iterations}, {"converged", r.converged}};
}

Json to_json(const expdesign::DesignRounding& d) {
  return {{"selected", d.selected},
          {"cost", d.cost},
          {"budget", d.budget},
          {"fractional_cost", d.fractional_cost},
          {"lambda_ratio", d.lambda_ratio},
          {"objective_x", d.objective_x},
          {"objective_z", d.objective_z},
          {"seed_used", d.seed_used},
          {"retries", d.retries},
          {"integral_input", d.integral_input},
          {"certificate", to_json(d.certificate)}};
}

Json to_json(const signing::TwoSidedReport& r) {
  return {{"lambda_min", r.lambda_min},
          {"lambda_max", r.lambda_max},
          {"cost", r.cost},
          {"fractional_cost", r.fractional_cost},
          {"cost_ratio", r.cost_ratio},
          {"band", r.band},
          {"spectral_pass", r.spectral_pass},
          {"cost_pass", r.cost_pass},
          {"pass", r.pass}};
}

Json to_json(const concentration::SimulationReport& r) {
  Json rows = Json::array();
  for (const auto& t : r.rows)
    rows.push_back({{"eta", t.eta},
                    {"empirical_upper", t.empirical_upper},
                    {"bound_upper", t.bound_upper},
                    {"empirical_lower", t.empirical_lower},
                    {"bound_lower", t.bound_lower},
                    {"pass", t.pass}});
  return {{"chain",
           {{"M", r.chain.items}, {"p", r.chain.p}, {"k", r.chain.k}, {"B", r.chain.boost}, {"horizon", r.chain.horizon}}},
          {"trials", r.trials},
          {"seed", r.seed},
          {"rows", rows},
          {"pass", r.pass}};
}

Json to_json(const concentration::DriftReport& r) {
  return {{"gamma", r.gamma},
          {"beta_u", r.beta_u},
          {"beta_l", r.beta_l},
          {"sigma", r.sigma},
          {"iterations", r.iterations},
          {"worst_lower", r.worst_lower},
          {"worst_upper", r.worst_upper},
          {"worst_variance", r.worst_variance},
          {"pass", r.pass}};
}

void write_history_csv(std::ostream& out, const std::vector<rounding::IterationRecord>& history) {
  out << "t,lambda_min,cost,delta_plus,delta_minus\n";
  char buf[256];
  for (const auto& r : history) {
    std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g,%.17g,%.17g\n", r.t, r.lambda_min, r.cost, r.delta_plus,
                  r.delta_minus);
    out << buf;
  }
}

}  // namespace specround::io
