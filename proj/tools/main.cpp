#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "report.hpp"
#include "thetabody/combopt.hpp"
#include "thetabody/errors.hpp"
#include "thetabody/geomexact.hpp"
#include "thetabody/moment.hpp"
#include "thetabody/quadrics.hpp"
#include "thetabody/quotient_ring.hpp"
#include "thetabody/sdp.hpp"

namespace tb = thetabody;
using nlohmann::json;

namespace {

struct SolverFlags {
  tb::SdpOptions sdp;
  void attach(CLI::App* app) {
    app->add_option("--feas-tol", sdp.feas_tol, "Primal/dual feasibility tolerance")
        ->envname("THETA_FEAS_TOL")->capture_default_str();
    app->add_option("--gap-tol", sdp.gap_tol, "Duality gap tolerance")
        ->envname("THETA_GAP_TOL")->capture_default_str();
    app->add_option("--max-iter", sdp.max_iter, "Interior point iteration limit")
        ->envname("THETA_MAX_ITER")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--psd-tol", sdp.psd_tol, "Tolerance of the final PSD test")
        ->envname("THETA_PSD_TOL")->capture_default_str();
  }
  json to_json() const {
    return {{"feasTol", sdp.feas_tol}, {"gapTol", sdp.gap_tol}, {"maxIter", sdp.max_iter},
            {"psdTol", sdp.psd_tol}};
  }
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
  }
  return out;
}

// Rational "p/q" or a decimal literal.
tb::Rational parse_number(const std::string& text) {
  if (text.find_first_of(".eE") == std::string::npos) return tb::parse_rational(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw tb::InputError("not a number: '" + text + "'");
  }
  if (used != text.size()) throw tb::InputError("not a number: '" + text + "'");
  return tb::Rational(v);
}

std::vector<tb::Rational> parse_list(const std::string& text) {
  std::vector<tb::Rational> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_number(item));
  return out;
}

json parse_json(const std::string& bytes, const std::string& path) {
  try {
    return json::parse(bytes);
  } catch (const json::exception& e) {
    throw tb::InputError(path + ": " + e.what());
  }
}

tb::WeightedGraph load_graph(const std::string& bytes, const std::string& path) {
  const auto first = bytes.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && bytes[first] == '{')
    return tb::graph_from_json(parse_json(bytes, path));
  return tb::parse_dimacs(bytes);
}

bool solved(tb::SdpStatus s) { return s == tb::SdpStatus::Optimal || s == tb::SdpStatus::NearOptimal; }

json solver_diagnostics(const tb::SdpSolution& s) {
  return {{"status", tb::to_string(s.status)},
          {"iterations", s.iterations},
          {"dualityGap", s.duality_gap},
          {"primalInfeasibility", s.primal_infeasibility},
          {"dualInfeasibility", s.dual_infeasibility},
          {"minEig", s.min_eig},
          {"upperBound", s.upper_bound}};
}

json points_json(const tb::PointSet& s) { return tb::to_json(s)["points"]; }

// ---- subcommands ----

struct ThetaArgs {
  std::string graph;
  std::string model = "stable";
  int level = 1;
  std::string weights;
  int enum_cap = 20000;
  SolverFlags solver;
};

int run_theta(const ThetaArgs& a, cli::RunReport& report) {
  const std::string bytes = cli::read_file(a.graph);
  report.add_input(bytes);
  const tb::WeightedGraph wg = load_graph(bytes, a.graph);
  report.parameters() = {{"graph", a.graph}, {"model", a.model}, {"level", a.level},
                         {"enumerationCap", a.enum_cap}, {"solver", a.solver.to_json()}};
  if (a.level < 1) throw tb::InputError("--level must be >= 1");
  tb::CombOptions opts;
  opts.enumeration_cap = a.enum_cap;
  opts.sdp = a.solver.sdp;

  tb::ThetaResult r;
  json weights_out = json::array();
  if (a.model == "stable") {
    std::vector<double> w;
    if (!a.weights.empty()) {
      for (const auto& x : parse_list(a.weights)) {
        w.push_back(x.get_d());
        weights_out.push_back(tb::to_string(x));
      }
    }
    r = tb::stable_set_theta(wg.graph, a.level, w, opts);
  } else {
    std::vector<tb::Rational> w;
    if (!a.weights.empty()) {
      w = parse_list(a.weights);
    } else if (wg.weights) {
      w = *wg.weights;
    } else {
      w.assign(wg.graph.num_edges(), tb::Rational(1));
    }
    for (const auto& x : w) weights_out.push_back(tb::to_string(x));
    r = tb::cut_theta(wg.graph, w, a.level, opts);
  }
  report.parameters()["weights"] = weights_out;
  report.result() = {{"value", r.value},
                     {"status", tb::to_string(r.solution.status)},
                     {"gap", r.solution.duality_gap},
                     {"point", r.point},
                     {"vertices", wg.graph.num_vertices()},
                     {"edges", wg.graph.num_edges()}};
  report.diagnostics() = solver_diagnostics(r.solution);
  report.diagnostics()["matrixSide"] = r.side;
  report.diagnostics()["momentVariables"] = r.y_dim;
  std::cerr << "theta (" << a.model << ", level " << a.level << "): " << r.value << " ["
            << tb::to_string(r.solution.status) << "]\n";
  return solved(r.solution.status) ? cli::kOk : cli::kSolver;
}

struct ExactnessArgs {
  std::string points;
  int point_cap = 64;
  int max_dim = 8;
  bool down_closed = false;
};

int run_exactness(const ExactnessArgs& a, cli::RunReport& report) {
  const std::string bytes = cli::read_file(a.points);
  report.add_input(bytes);
  const tb::PointSet s = tb::point_set_from_json(parse_json(bytes, a.points));
  report.parameters() = {{"points", a.points}, {"pointCap", a.point_cap}, {"maxDim", a.max_dim},
                         {"downClosed", a.down_closed}};
  const tb::GeomOptions opts{a.point_cap, a.max_dim};
  const tb::ExactnessReport ex = tb::is_exact(s, opts);
  const tb::BoundCheck bounds = tb::check_facet_vertex_bounds(s, opts);
  json result = tb::to_json(ex);
  result["vertexCount"] = bounds.vertex_count;
  result["bounds"] = {{"applicable", bounds.applicable},
                      {"dim", bounds.dim},
                      {"facetCount", bounds.facet_count},
                      {"vertexCount", bounds.vertex_count},
                      {"withinBounds", bounds.applicable ? json(bounds.within_bounds) : json(nullptr)}};
  if (a.down_closed) {
    const tb::DownClosedReport dc = tb::down_closed_analysis(s, opts);
    result["downClosed"] = {{"isDownClosed", dc.down_closed},
                            {"isExact", dc.exact},
                            {"facetForm", dc.facet_form},
                            {"perfectGraph", dc.perfect_graph ? tb::to_json(*dc.perfect_graph) : json(nullptr)},
                            {"stableSetsMatch", dc.stable_sets_match}};
  }
  report.result() = result;
  report.diagnostics() = {{"points", s.size()}, {"ambientDimension", s.dim()}};
  std::cerr << "exactness: " << (ex.two_level ? "two-level" : "not two-level") << ", "
            << ex.facets.size() << " facets, theta-rank <= " << ex.theta_rank_upper_bound << "\n";
  return cli::kOk;
}

struct ClassifyArgs {
  int dim = 3;
  int jobs = 1;
};

int run_classify(const ClassifyArgs& a, cli::RunReport& report) {
  report.parameters() = {{"dim", a.dim}, {"jobs", a.jobs}};
  const auto classes = tb::classify_01(a.dim, a.jobs);
  json list = json::array();
  int exact = 0;
  for (const auto& c : classes) {
    exact += c.exact ? 1 : 0;
    list.push_back({{"size", c.representative.size()},
                    {"facetCount", c.facet_count},
                    {"exact", c.exact},
                    {"thetaRankUpperBound", c.theta_rank_upper_bound},
                    {"orbitSize", c.orbit_size},
                    {"points", points_json(c.representative)}});
  }
  report.result() = {{"dim", a.dim},
                     {"classCount", classes.size()},
                     {"exactCount", exact},
                     {"classes", list}};
  std::cerr << "classify01: " << classes.size() << " classes in dimension " << a.dim << ", " << exact
            << " exact\n";
  return cli::kOk;
}

struct Th1Args {
  std::string points;
  std::string gens;
  std::string query;
  std::string range;
  double boundary_tol = 1e-7;
  SolverFlags solver;
};

tb::QuadricSpace load_space(const Th1Args& a, cli::RunReport& report) {
  if (a.points.empty() == a.gens.empty()) throw tb::InputError("give exactly one of --points and --gens");
  if (!a.points.empty()) {
    const std::string bytes = cli::read_file(a.points);
    report.add_input(bytes);
    report.parameters()["points"] = a.points;
    return tb::quadric_space_from_points(tb::point_set_from_json(parse_json(bytes, a.points)));
  }
  const std::string bytes = cli::read_file(a.gens);
  report.add_input(bytes);
  report.parameters()["gens"] = a.gens;
  int dim = 0;
  const auto gens = tb::generators_from_json(parse_json(bytes, a.gens), dim);
  return tb::quadric_space_from_generators(dim, gens);
}

json space_json(const tb::QuadricSpace& space) {
  json basis = json::array();
  for (int k = 0; k < space.size(); ++k) basis.push_back(space.polynomial(k).to_string());
  return {{"dim", space.dim()}, {"size", space.size()}, {"basis", basis}};
}

int run_th1_member(const Th1Args& a, cli::RunReport& report) {
  const tb::QuadricSpace space = load_space(a, report);
  const auto q = parse_list(a.query);
  if (static_cast<int>(q.size()) != space.dim())
    throw tb::InputError("query has " + std::to_string(q.size()) + " coordinates, expected " +
                         std::to_string(space.dim()));
  Eigen::VectorXd x(q.size());
  json qs = json::array();
  for (std::size_t i = 0; i < q.size(); ++i) {
    x(i) = q[i].get_d();
    qs.push_back(tb::to_string(q[i]));
  }
  report.parameters()["query"] = qs;
  report.parameters()["boundaryTol"] = a.boundary_tol;
  report.parameters()["solver"] = a.solver.to_json();
  const tb::MembershipResult m = tb::th1_membership(space, x, a.boundary_tol, a.solver.sdp);
  report.result() = {{"status", tb::to_string(m.status)},
                     {"supValue", m.sup_value ? json(*m.sup_value) : json(nullptr)},
                     {"unbounded", m.unbounded},
                     {"certificate", m.certificate ? tb::to_json(*m.certificate) : json(nullptr)},
                     {"space", space_json(space)}};
  report.diagnostics() = m.solution.iterations > 0 ? solver_diagnostics(m.solution) : json::object();
  std::cerr << "th1 member: " << tb::to_string(m.status);
  if (m.sup_value) std::cerr << " (sup " << *m.sup_value << ")";
  std::cerr << "\n";
  return cli::kOk;
}

int run_th1_convex(const Th1Args& a, cli::RunReport& report) {
  const tb::QuadricSpace space = load_space(a, report);
  report.parameters()["solver"] = a.solver.to_json();
  const tb::ConvexQuadricResult c = tb::has_convex_quadric(space, 1e-7, a.solver.sdp);
  json result = {{"exists", c.exists},
                 {"witness", c.witness ? tb::to_json(*c.witness) : json(nullptr)},
                 {"minEigenvalue", c.solution.iterations > 0 ? json(c.min_eigenvalue) : json(nullptr)},
                 {"detail", c.detail},
                 {"space", space_json(space)}};
  if (!a.range.empty()) {
    const auto ij = split(a.range, ',');
    if (ij.size() != 2) throw tb::InputError("--range expects i,j");
    const int i = std::stoi(ij[0]) - 1, j = std::stoi(ij[1]) - 1;
    report.parameters()["range"] = {i + 1, j + 1};
    const tb::EntryRange r = tb::quadratic_entry_range(space, i, j);
    result["entryRange"] = {{"feasible", r.feasible},
                            {"min", r.feasible ? json(r.min) : json(nullptr)},
                            {"max", r.feasible ? json(r.max) : json(nullptr)}};
  }
  report.result() = result;
  report.diagnostics() = c.solution.iterations > 0 ? solver_diagnostics(c.solution) : json::object();
  std::cerr << "th1 convex: " << (c.exists ? "a convex quadric exists" : "no convex quadric") << "\n";
  return cli::kOk;
}

struct MomentArgs {
  std::string points;
  int level = 1;
  int k_max = 3;
};

int run_moment_dump(const MomentArgs& a, cli::RunReport& report) {
  const std::string bytes = cli::read_file(a.points);
  report.add_input(bytes);
  const tb::PointSet s = tb::point_set_from_json(parse_json(bytes, a.points));
  report.parameters() = {{"points", a.points}, {"level", a.level}, {"kMax", a.k_max}};
  if (a.level < 1) throw tb::InputError("--level must be >= 1");
  const tb::QuotientRing ring = tb::buchberger_moller(s, {a.k_max});
  const tb::MomentTemplate t = tb::build_moment_template(ring, a.level);
  json basis = json::array();
  for (const auto& m : ring.basis()) basis.push_back(m.to_string());
  report.result() = {{"basis", basis}, {"template", tb::template_to_json(t)}};
  report.diagnostics() = {{"points", s.size()}, {"side", t.side()}, {"yDim", t.y_dim()},
                          {"distinctCells", t.distinct_cells()}};
  std::cerr << "moment-dump: |B| = " << ring.size() << ", level " << a.level << " matrix " << t.side()
            << "x" << t.side() << " over " << t.y_dim() << " moments\n";
  return cli::kOk;
}

struct SolveArgs {
  std::string sdp;
  SolverFlags solver;
};

int run_solve(const SolveArgs& a, cli::RunReport& report) {
  const std::string bytes = cli::read_file(a.sdp);
  report.add_input(bytes);
  const tb::SdpProblem p = tb::sdp_problem_from_json(parse_json(bytes, a.sdp));
  report.parameters() = {{"sdp", a.sdp}, {"solver", a.solver.to_json()}};
  const tb::SdpSolution s = tb::solve(p, a.solver.sdp);
  report.result() = tb::to_json(s);
  report.diagnostics() = solver_diagnostics(s);
  report.diagnostics()["matrixSide"] = p.side;
  report.diagnostics()["variables"] = p.num_vars;
  std::cerr << "solve: " << tb::to_string(s.status) << ", objective " << s.objective << "\n";
  return s.status == tb::SdpStatus::IterLimit ? cli::kSolver : cli::kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Theta-body relaxations of point sets, graphs and quadric ideals"};
  app.require_subcommand(1);
  app.set_version_flag("--version", THETABODY_VERSION);

  ThetaArgs theta;
  auto* theta_cmd = app.add_subcommand("theta", "max of a linear objective over TH_k of a graph ideal");
  theta_cmd->add_option("--graph", theta.graph, "DIMACS or JSON graph")->required();
  theta_cmd->add_option("--model", theta.model, "stable or cut")
      ->check(CLI::IsMember({"stable", "cut"}))->capture_default_str();
  theta_cmd->add_option("--level", theta.level, "Relaxation level k")->envname("THETA_LEVEL")->capture_default_str();
  theta_cmd->add_option("--weights", theta.weights, "Comma separated weights (vertices or edges)");
  theta_cmd->add_option("--enum-cap", theta.enum_cap, "Cap on the combinatorial basis size")
      ->envname("THETA_ENUM_CAP")->capture_default_str();
  theta.solver.attach(theta_cmd);

  ExactnessArgs exactness;
  auto* ex_cmd = app.add_subcommand("exactness", "facets and two-level test of a point set");
  ex_cmd->add_option("--points", exactness.points, "Point set JSON")->required();
  ex_cmd->add_option("--point-cap", exactness.point_cap, "Largest accepted point set")
      ->envname("THETA_POINT_CAP")->capture_default_str();
  ex_cmd->add_option("--max-dim", exactness.max_dim, "Largest accepted affine dimension")
      ->envname("THETA_MAX_DIM")->capture_default_str();
  ex_cmd->add_flag("--down-closed", exactness.down_closed, "Add the down-closed / perfect graph analysis");

  ClassifyArgs classify;
  auto* cl_cmd = app.add_subcommand("classify01", "0/1 point sets up to affine equivalence");
  cl_cmd->add_option("--dim", classify.dim, "Dimension (1 to 3)")->capture_default_str();
  cl_cmd->add_option("--jobs", classify.jobs, "Worker threads")
      ->envname("THETA_JOBS")->capture_default_str()->check(CLI::PositiveNumber);

  Th1Args th1;
  auto* th1_cmd = app.add_subcommand("th1", "first theta body via convex quadrics");
  th1_cmd->require_subcommand(1);
  auto* member_cmd = th1_cmd->add_subcommand("member", "decide membership of a query point");
  auto* convex_cmd = th1_cmd->add_subcommand("convex", "search for a convex quadric in the ideal");
  for (auto* c : {member_cmd, convex_cmd}) {
    c->add_option("--points", th1.points, "Point set JSON");
    c->add_option("--gens", th1.gens, "Generator JSON");
    th1.solver.attach(c);
  }
  member_cmd->add_option("--query", th1.query, "Comma separated coordinates")->required();
  member_cmd->add_option("--boundary-tol", th1.boundary_tol, "Borderline band")
      ->envname("THETA_BOUNDARY_TOL")->capture_default_str();
  convex_cmd->add_option("--range", th1.range, "Report the range of A_ij, as i,j (1-based)");

  MomentArgs moment;
  auto* mo_cmd = app.add_subcommand("moment-dump", "symbolic combinatorial moment matrix");
  mo_cmd->add_option("--points", moment.points, "Point set JSON")->required();
  mo_cmd->add_option("--level", moment.level, "Level k")->capture_default_str();
  mo_cmd->add_option("--kmax", moment.k_max, "Largest tabulated level")
      ->envname("THETA_KMAX")->capture_default_str();

  SolveArgs solve;
  auto* so_cmd = app.add_subcommand("solve", "solve a raw SDP given as JSON");
  so_cmd->add_option("--sdp", solve.sdp, "Raw SDP JSON")->required();
  solve.solver.attach(so_cmd);

  bool quiet = false;
  app.add_flag("--quiet", quiet, "No summary on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kUsage;
  }
  if (quiet) std::cerr.setstate(std::ios::failbit);

  std::string name;
  for (auto* c : app.get_subcommands()) {
    name = c->get_name();
    for (auto* sub : c->get_subcommands()) name += " " + sub->get_name();
  }
  cli::RunReport report(name);
  int code = cli::kOk;
  try {
    if (theta_cmd->parsed()) code = run_theta(theta, report);
    else if (ex_cmd->parsed()) code = run_exactness(exactness, report);
    else if (cl_cmd->parsed()) code = run_classify(classify, report);
    else if (member_cmd->parsed()) code = run_th1_member(th1, report);
    else if (convex_cmd->parsed()) code = run_th1_convex(th1, report);
    else if (mo_cmd->parsed()) code = run_moment_dump(moment, report);
    else if (so_cmd->parsed()) code = run_solve(solve, report);
  } catch (const tb::InputError& e) {
    report.set_error("input", e.what());
    code = cli::kUsage;
  } catch (const tb::ResourceError& e) {
    report.set_error("resource", e.what());
    code = cli::kResource;
  } catch (const tb::SolverError& e) {
    report.set_error("solver", e.what());
    code = cli::kSolver;
  } catch (const json::exception& e) {
    report.set_error("input", e.what());
    code = cli::kUsage;
  } catch (const std::exception& e) {
    report.set_error("internal", e.what());
    code = cli::kInternal;
  }
  if (code != cli::kOk) {
    const json j = report.to_json();
    if (!j["error"].is_null()) std::cerr << "error: " << j["error"]["message"].get<std::string>() << "\n";
  }
  std::cout << report.to_json().dump(2) << "\n";
  return code;
}
