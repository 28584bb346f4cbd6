// Command-line front end: loads a project file, runs the requested checks,
// prints a human summary, and writes a machine-readable report.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "strataforms/integrate.hpp"
#include "strataforms/parallel.hpp"
#include "strataforms/project.hpp"

using namespace strataforms;
using nlohmann::json;

namespace {

struct CommonOpts {
  std::string project_path;
  std::string report_path;
  std::optional<unsigned> seed;
  std::optional<double> tol;
  std::optional<int> quad_order;
  std::optional<int> jobs;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--project", opts.project_path, "project file (JSON)")->required();
  cmd->add_option("--report", opts.report_path, "write the machine-readable report here");
  cmd->add_option("--seed", opts.seed, "random seed override");
  cmd->add_option("--tol", opts.tol, "tolerance override");
  cmd->add_option("--quad-order", opts.quad_order, "minimum quadrature order override");
  cmd->add_option("--jobs", opts.jobs, "worker threads (env STRATAFORMS_JOBS as fallback)");
}

Project load_with_overrides(const CommonOpts& opts) {
  Project p = load_project(opts.project_path);
  if (opts.seed) p.config.seed = *opts.seed;
  if (opts.tol) p.config.tol = *opts.tol;
  if (opts.quad_order) p.config.quad_order = *opts.quad_order;
  p.config.jobs = opts.jobs ? *opts.jobs : default_jobs();
  return p;
}

int finish(const std::string& command, const Project& p, const CommonOpts& opts, json checks,
           bool pass) {
  json report = {{"tool", "strataforms"},
                 {"version", "1.0.0"},
                 {"command", command},
                 {"seed", p.config.seed},
                 {"tol", p.config.tol},
                 {"pass", pass},
                 {"checks", checks}};
  if (!opts.report_path.empty()) {
    std::ofstream out(opts.report_path);
    out << report.dump(2) << "\n";
  }
  for (const auto& c : checks)
    std::cout << (c.value("pass", false) ? "PASS " : "FAIL ") << c.value("name", "?")
              << (c.contains("detail") ? "  [" + c.at("detail").get<std::string>() + "]" : "")
              << "\n";
  std::cout << (pass ? "OK" : "FAILED") << "\n";
  return pass ? 0 : 1;
}

json point_json(const std::vector<double>& p) {
  json j = json::array();
  for (double x : p) j.push_back(x);
  return j;
}

int cmd_validate(const CommonOpts& opts) {
  Project p = load_with_overrides(opts);
  json checks = json::array();
  bool pass = true;
  for (const auto& [sid, sigma] : p.stratifications) {
    FrontierReport fr = validate_frontier(sigma, p.cells, p.config.samples, p.config.tol);
    json check = {{"name", "frontier:" + sid},
                  {"pass", fr.pass && fr.overlap_ok},
                  {"samples", fr.samples_total}};
    if (!fr.failures.empty()) {
      check["detail"] = "uncovered boundary point near stratum " + fr.failures[0].stratum;
      check["witness"] = point_json(fr.failures[0].point);
    }
    pass = pass && fr.pass && fr.overlap_ok;
    checks.push_back(check);
  }
  for (const auto& [wid, w] : p.stratified_forms) {
    const auto& sigma = p.stratifications.at(w.stratification);
    ContinuityReport cr = check_graph_closed(w, sigma, p.cells, p.config.samples / 8 + 2);
    json check = {{"name", "graph-closure:" + wid},
                  {"pass", cr.pass},
                  {"max_residual", cr.max_residual},
                  {"pairs", cr.pairs_checked}};
    if (!cr.failures.empty()) {
      check["detail"] =
          "tangential mismatch " + cr.failures[0].upper + " vs " + cr.failures[0].lower;
      check["witness"] = point_json(cr.failures[0].point);
    }
    pass = pass && cr.pass;
    checks.push_back(check);
    if (w.declared_bound) {
      auto est = sup_norm_estimate(w, sigma, p.cells, p.config.samples);
      json bcheck = {{"name", "declared-bound:" + wid},
                     {"pass", est.bound_respected},
                     {"estimate", est.value}};
      if (!est.bound_respected) {
        bcheck["detail"] = "sampled sup exceeds the declared bound";
        bcheck["witness"] = point_json(est.argmax_point);
      }
      pass = pass && est.bound_respected;
      checks.push_back(bcheck);
    }
  }
  for (const auto& [rid, r] : p.retractions) {
    const auto& sigma = p.stratifications.at(r.stratification);
    json check;
    try {
      RetractionAudit audit =
          audit_retraction(r, sigma, p.cells, p.config.samples / 4 + 4, p.config.tol);
      check = {{"name", "retraction:" + rid},
               {"pass", audit.pass},
               {"endpoint_gap", audit.max_endpoint_gap},
               {"stratum_gap", audit.max_stratum_gap}};
      if (!audit.pass) check["detail"] = "contract violation (see gaps)";
      pass = pass && audit.pass;
    } catch (const Error& e) {
      check = {{"name", "retraction:" + rid}, {"pass", false}, {"detail", e.what()}};
      pass = false;
    }
    checks.push_back(check);
  }
  return finish("validate", p, opts, checks, pass);
}

int cmd_betti(const CommonOpts& opts, const std::string& complex_id) {
  Project p = load_with_overrides(opts);
  const auto& K = p.complexes.at(complex_id);
  BettiTable table = betti(K);
  json checks = json::array();
  json b = json::array();
  for (int x : table.b) b.push_back(x);
  checks.push_back({{"name", "betti:" + complex_id},
                    {"pass", true},
                    {"betti", b},
                    {"euler_characteristic", table.euler_characteristic()}});
  std::cout << "betti(" << complex_id << ") =";
  for (int x : table.b) std::cout << " " << x;
  std::cout << "\n";
  return finish("betti", p, opts, checks, true);
}

int cmd_stokes(const CommonOpts& opts, const std::string& form_id, const std::string& chain_id) {
  Project p = load_with_overrides(opts);
  const auto& w = p.stratified_forms.at(form_id);
  const auto& sigma = p.stratifications.at(w.stratification);
  const auto& chain = p.chains.at(chain_id);
  StokesReport report = stokes_residual(w, chain, p.cells, sigma, p.assignment, {}, p.config.tol,
                                        p.config.quad_order, p.config.jobs);
  json eps = json::array();
  for (const auto& e : report.eps_entries)
    eps.push_back({{"eps", e.eps},
                   {"interior", e.interior},
                   {"boundary", e.boundary},
                   {"residual", e.residual}});
  json checks = json::array();
  json check = {{"name", "stokes:" + form_id + "/" + chain_id},
                {"pass", report.pass},
                {"limit_interior", report.limit_interior},
                {"limit_boundary", report.limit_boundary},
                {"limit_residual", report.limit_residual},
                {"monotone", report.monotone_ok},
                {"eps", eps}};
  if (!report.pass) check["detail"] = "residual " + std::to_string(report.limit_residual);
  checks.push_back(check);
  return finish("stokes", p, opts, checks, report.pass);
}

int cmd_derham(const CommonOpts& opts, const std::string& complex_id) {
  Project p = load_with_overrides(opts);
  const auto& K = p.complexes.at(complex_id);
  Triangulation T = make_triangulation(K, complex_id);
  json checks = json::array();
  bool pass = true;
  for (int k = 0; k <= K.max_dim(); ++k) {
    PairingReport r = derham_pairing(T, k, p.config.quad_order, p.config.seed);
    bool ok = r.rank_matches && r.chain_map_residual <= std::max(1e-10, p.config.tol);
    checks.push_back({{"name", "derham:" + complex_id + ":deg" + std::to_string(k)},
                      {"pass", ok},
                      {"betti", r.betti},
                      {"pairing_rank", r.pairing_rank},
                      {"chain_map_residual", r.chain_map_residual}});
    pass = pass && ok;
  }
  return finish("derham", p, opts, checks, pass);
}

int cmd_poincare(const CommonOpts& opts, const std::string& form_id,
                 const std::string& retraction_id) {
  Project p = load_with_overrides(opts);
  const auto& w = p.stratified_forms.at(form_id);
  const auto& r = p.retractions.at(retraction_id);
  const auto& sigma = p.stratifications.at(w.stratification);
  json checks = json::array();
  bool pass = true;
  try {
    PoincareResult result = poincare_primitive(w, sigma, p.cells, r);
    pass = result.symbolic_exact && result.continuity_pass;
    checks.push_back({{"name", "poincare:" + form_id + "/" + retraction_id},
                      {"pass", pass},
                      {"symbolic_exact", result.symbolic_exact},
                      {"gamma_continuity", result.continuity_pass},
                      {"gamma_degree", result.gamma.degree}});
  } catch (const Error& e) {
    pass = false;
    checks.push_back({{"name", "poincare:" + form_id + "/" + retraction_id},
                      {"pass", false},
                      {"detail", e.what()}});
  }
  return finish("poincare", p, opts, checks, pass);
}

int cmd_smooth(const CommonOpts& opts, const std::string& grid_id, std::vector<double> eps_list) {
  Project p = load_with_overrides(opts);
  const auto& g = p.grids.at(grid_id);
  if (eps_list.empty()) eps_list = {0.2, 0.1, 0.05};
  json checks = json::array();
  double last = 1e300;
  bool monotone = true;
  json entries = json::array();
  for (double eps : eps_list) {
    GridForm smooth = convolve(g, Mollifier{eps});
    double dev = grid_sup_diff(smooth, g);
    double deriv = -1;
    if (g.analytic_d) {
      GridForm lhs = discrete_d(smooth);
      GridForm rhs = convolve(*g.analytic_d, Mollifier{eps});
      deriv = grid_sup_diff(lhs, rhs);
    }
    entries.push_back({{"eps", eps}, {"sup_deviation", dev}, {"derivative_residual", deriv}});
    if (dev > last + 1e-12) monotone = false;
    last = dev;
  }
  json check = {{"name", "smooth:" + grid_id}, {"pass", monotone}, {"entries", entries}};
  if (!monotone) check["detail"] = "sup deviation did not decrease along the eps list";
  checks.push_back(check);
  return finish("smooth", p, opts, checks, monotone);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stratified L-infinity forms verification toolkit"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string complex_id, form_id, chain_id, retraction_id, grid_id, out_dir;
  std::vector<double> eps_list;

  auto* validate = app.add_subcommand("validate", "frontier, continuity and retraction audits");
  add_common(validate, opts);

  auto* betti_cmd = app.add_subcommand("betti", "Betti numbers of a complex");
  add_common(betti_cmd, opts);
  betti_cmd->add_option("--complex", complex_id, "complex id")->required();

  auto* stokes = app.add_subcommand("stokes", "Stokes residual of a form over a chain");
  add_common(stokes, opts);
  stokes->add_option("--form", form_id, "stratified form id")->required();
  stokes->add_option("--chain", chain_id, "chain id")->required();

  auto* derham = app.add_subcommand("derham", "de Rham pairing ranks against Betti numbers");
  add_common(derham, opts);
  derham->add_option("--complex", complex_id, "complex id")->required();

  auto* poincare = app.add_subcommand("poincare", "Poincare primitive through a retraction");
  add_common(poincare, opts);
  poincare->add_option("--form", form_id, "closed stratified form id")->required();
  poincare->add_option("--retraction", retraction_id, "retraction id")->required();

  auto* smooth = app.add_subcommand("smooth", "mollifier smoothing of a grid form");
  add_common(smooth, opts);
  smooth->add_option("--grid", grid_id, "grid form id")->required();
  smooth->add_option("--eps", eps_list, "mollifier radii (decreasing)");

  auto* demo = app.add_subcommand("demo", "write demo project files");
  demo->add_option("--out", out_dir, "output directory")->required();

  auto* schema = app.add_subcommand("schema", "print the project file schema");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(validate)) return cmd_validate(opts);
    if (app.got_subcommand(betti_cmd)) return cmd_betti(opts, complex_id);
    if (app.got_subcommand(stokes)) return cmd_stokes(opts, form_id, chain_id);
    if (app.got_subcommand(derham)) return cmd_derham(opts, complex_id);
    if (app.got_subcommand(poincare)) return cmd_poincare(opts, form_id, retraction_id);
    if (app.got_subcommand(smooth)) return cmd_smooth(opts, grid_id, eps_list);
    if (app.got_subcommand(demo)) {
      std::filesystem::create_directories(out_dir);
      for (const auto& f : write_demo_projects(out_dir)) std::cout << f << "\n";
      return 0;
    }
    if (app.got_subcommand(schema)) {
      std::cout << project_schema_notes() << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
