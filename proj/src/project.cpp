#include "strataforms/project.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace strataforms {

using nlohmann::json;

namespace {

Rational parse_rat(const json& j) {
  if (j.is_number_integer()) return Rational(static_cast<long long>(j.get<long long>()));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw Error("BadProject", "rationals must be integers or 'num/den' strings");
}

Polynomial parse_poly(const json& j, int nvars) {
  Polynomial p(nvars);
  for (const auto& term : j) {
    Polynomial::Exponents e = term.at("exps").get<Polynomial::Exponents>();
    p.add_term(e, parse_rat(term.at("coeff")));
  }
  return p;
}

json poly_to_json(const Polynomial& p) {
  json out = json::array();
  for (const auto& [e, c] : p.terms())
    out.push_back({{"exps", e}, {"coeff", format_rational(c)}});
  return out;
}

PolyForm parse_form(const json& j) {
  PolyForm f(j.at("ambient_dim").get<int>(), j.at("degree").get<int>());
  for (const auto& term : j.at("terms")) {
    MultiIndex I = term.at("index").get<MultiIndex>();
    f.add_term(I, parse_poly(term.at("poly"), f.ambient_dim()));
  }
  return f;
}

json form_to_json(const std::string& id, const PolyForm& f) {
  json terms = json::array();
  for (const auto& [I, p] : f.coeffs()) terms.push_back({{"index", I}, {"poly", poly_to_json(p)}});
  return {{"id", id},
          {"ambient_dim", f.ambient_dim()},
          {"degree", f.degree()},
          {"terms", terms}};
}

ParametrizedCell parse_cell(const json& j) {
  ParametrizedCell c;
  c.id = j.at("id").get<std::string>();
  c.domain = j.at("domain").get<std::string>() == "box" ? RefDomain::Box : RefDomain::Simplex;
  c.dim = j.at("dim").get<int>();
  c.ambient_dim = j.at("ambient_dim").get<int>();
  c.map.domain_dim = c.dim;
  for (const auto& comp : j.at("map")) c.map.comps.push_back(parse_poly(comp, c.dim));
  c.orientation = j.value("orientation", 1);
  if (j.contains("faces"))
    for (const auto& f : j.at("faces"))
      c.faces.emplace_back(f.at(0).get<std::string>(), f.at(1).get<int>());
  return c;
}

}  // namespace

Project load_project(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("BadProject", "cannot open project file " + path);
  json j = json::parse(in);
  Project p;
  p.version = j.value("version", "1");
  if (p.version != "1") throw Error("BadProject", "unsupported project version " + p.version);
  if (j.contains("config")) {
    const auto& c = j.at("config");
    p.config.tol = c.value("tol", 1e-8);
    p.config.quad_order = c.value("quad_order", 10);
    p.config.samples = c.value("samples", 64);
    p.config.seed = c.value("seed", 1u);
    p.config.jobs = c.value("jobs", 1);
  }
  for (const auto& cj : j.value("complexes", json::array())) {
    SimplicialComplex K;
    K.ambient_dim = cj.at("ambient_dim").get<int>();
    for (const auto& v : cj.at("vertices")) {
      std::vector<Rational> point;
      for (const auto& x : v) point.push_back(parse_rat(x));
      K.points.push_back(point);
    }
    for (const auto& s : cj.at("simplices")) K.add_simplex(s.get<std::vector<int>>());
    std::string id = cj.at("id").get<std::string>();
    K.populate_catalogue(p.cells, id);
    p.complexes[id] = std::move(K);
  }
  for (const auto& cj : j.value("cells", json::array())) p.cells.add(parse_cell(cj));
  for (const auto& sj : j.value("stratifications", json::array())) {
    Stratification sigma;
    sigma.id = sj.at("id").get<std::string>();
    sigma.ambient_dim = sj.at("ambient_dim").get<int>();
    std::vector<Stratum> pending;
    for (const auto& st : sj.at("strata")) {
      Stratum s;
      s.id = st.at("id").get<std::string>();
      s.dim = st.at("dim").get<int>();
      s.cell = st.at("cell").get<std::string>();
      if (!p.cells.has(s.cell)) throw Error("BadProject", "stratum cell not found: " + s.cell);
      for (const auto& a : st.value("adjacency", json::array()))
        s.adjacency.insert(a.get<std::string>());
      for (const auto& c : st.value("catalogue", json::array()))
        s.catalogue_cells.insert(c.get<std::string>());
      pending.push_back(std::move(s));
    }
    std::sort(pending.begin(), pending.end(),
              [](const Stratum& a, const Stratum& b) { return a.dim < b.dim; });
    for (auto& s : pending) sigma.add(std::move(s));
    p.stratifications[sigma.id] = std::move(sigma);
  }
  for (const auto& fj : j.value("forms", json::array()))
    p.forms[fj.at("id").get<std::string>()] = parse_form(fj);
  for (const auto& sj : j.value("stratified_forms", json::array())) {
    StratifiedForm w;
    w.stratification = sj.at("stratification").get<std::string>();
    w.degree = sj.at("degree").get<int>();
    for (const auto& [sid, fid] : sj.at("components").items()) {
      auto it = p.forms.find(fid.get<std::string>());
      if (it == p.forms.end()) throw Error("BadProject", "unknown form id " + fid.get<std::string>());
      w.components[sid] = it->second;
    }
    if (sj.contains("bound") && !sj.at("bound").is_null())
      w.declared_bound = parse_rat(sj.at("bound"));
    p.stratified_forms[sj.at("id").get<std::string>()] = std::move(w);
  }
  for (const auto& cj : j.value("chains", json::array())) {
    Chain c;
    c.degree = cj.at("degree").get<int>();
    for (const auto& t : cj.at("terms")) c.add(t.at(0).get<std::string>(), parse_rat(t.at(1)));
    p.chains[cj.at("id").get<std::string>()] = std::move(c);
  }
  if (j.contains("cell_strata"))
    for (const auto& [cid, sid] : j.at("cell_strata").items())
      p.assignment.fixed[cid] = sid.get<std::string>();
  if (j.contains("splits"))
    for (const auto& [cid, parts] : j.at("splits").items())
      p.assignment.splits[cid] = parts.get<std::vector<std::string>>();
  for (const auto& rj : j.value("retractions", json::array())) {
    Retraction r;
    r.id = rj.at("id").get<std::string>();
    r.stratification = rj.at("stratification").get<std::string>();
    const auto& sigma = p.stratifications.at(r.stratification);
    r.ambient_dim = sigma.ambient_dim;
    std::string kind = rj.at("kind").get<std::string>();
    if (kind == "cone") {
      r.kind = Retraction::Kind::Cone;
      for (const auto& c : rj.at("center")) r.center.push_back(parse_rat(c));
      const int n = r.ambient_dim;
      PolyMap f;
      f.domain_dim = n + 1;
      for (int i = 0; i < n; ++i) {
        Polynomial xi = Polynomial::variable(n + 1, i);
        Polynomial t = Polynomial::variable(n + 1, n);
        f.comps.push_back(Polynomial::constant(n + 1, r.center[i]) +
                          t * (xi - Polynomial::constant(n + 1, r.center[i])));
      }
      r.poly = std::move(f);
    } else if (kind == "lift") {
      r.kind = Retraction::Kind::Lifted;
      auto base_it = p.retractions.find(rj.at("base").get<std::string>());
      if (base_it == p.retractions.end())
        throw Error("BadProject", "lift base retraction must be declared first");
      r.base = std::make_shared<Retraction>(base_it->second);
      r.cellkind = rj.at("cellkind").get<std::string>() == "graph" ? Retraction::CellKind::Graph
                                                                   : Retraction::CellKind::Band;
      int base_vars = r.ambient_dim - 1;
      r.theta_lo = parse_poly(rj.at("theta_lo"), base_vars);
      r.theta_hi = parse_poly(rj.at("theta_hi"), base_vars);
    } else {
      throw Error("BadProject", "unknown retraction kind " + kind);
    }
    for (const auto& t : rj.value("target", json::array()))
      r.target.push_back(t.get<std::string>());
    if (r.target.empty() && r.kind == Retraction::Kind::Cone) {
      // infer N: strata sitting at the center
      std::vector<double> cd(r.center.size());
      for (size_t i = 0; i < cd.size(); ++i) cd[i] = to_double(r.center[i]);
      for (const auto& [sid, s] : sigma.strata)
        if (distance_to_cell(cd, p.cells.get(s.cell)).distance <= 1e-9) r.target.push_back(sid);
    }
    p.retractions[r.id] = std::move(r);
  }
  for (const auto& gj : j.value("grids", json::array())) {
    std::string id = gj.at("id").get<std::string>();
    if (gj.contains("file")) {
      p.grids[id] = load_gridform(gj.at("file").get<std::string>());
      continue;
    }
    std::vector<std::array<double, 2>> box;
    for (const auto& b : gj.at("box")) box.push_back({b.at(0).get<double>(), b.at(1).get<double>()});
    std::vector<int> res = gj.at("res").get<std::vector<int>>();
    const auto& form = p.forms.at(gj.at("sample_form").get<std::string>());
    p.grids[id] = sample_polyform(form, box, res);
  }
  return p;
}

void save_gridform(const GridForm& g, const std::string& path) {
  std::ofstream out(path);
  out << "strataforms-grid 1\n" << g.n() << " " << g.degree << "\n";
  for (int a = 0; a < g.n(); ++a)
    out << g.box[a][0] << " " << g.box[a][1] << " " << g.res[a] << "\n";
  out.precision(17);
  for (const auto& [I, values] : g.comps) {
    out << "component";
    for (int i : I) out << " " << i;
    out << "\n";
    for (double v : values) out << v << "\n";
  }
}

GridForm load_gridform(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("BadProject", "cannot open grid file " + path);
  std::string magic;
  int version;
  in >> magic >> version;
  if (magic != "strataforms-grid" || version != 1)
    throw Error("BadProject", "unrecognized grid dump header");
  GridForm g;
  int n;
  in >> n >> g.degree;
  g.box.resize(n);
  g.res.resize(n);
  for (int a = 0; a < n; ++a) in >> g.box[a][0] >> g.box[a][1] >> g.res[a];
  std::string word;
  while (in >> word) {
    if (word != "component") throw Error("BadProject", "expected component record");
    std::string line;
    std::getline(in, line);
    std::istringstream hdr(line);
    MultiIndex I;
    int idx;
    while (hdr >> idx) I.push_back(idx);
    std::vector<double> values(g.node_count());
    for (auto& v : values) in >> v;
    g.comps[I] = std::move(values);
  }
  return g;
}

std::string project_schema_notes() {
  return R"(project file (JSON, version "1"):
{
  "version": "1",
  "config": {"tol": 1e-8, "quad_order": 10, "samples": 64, "seed": 1, "jobs": 1},
  "complexes": [{"id", "ambient_dim", "vertices": [["x","y",..]..], "simplices": [[v..]..]}],
  "cells": [{"id", "domain": "simplex"|"box", "dim", "ambient_dim",
             "map": [polynomial..], "orientation": 1, "faces": [["cellid", sign]..]}],
  "stratifications": [{"id", "ambient_dim",
      "strata": [{"id", "dim", "cell", "adjacency": [..], "catalogue": [..]}]}],
  "forms": [{"id", "ambient_dim", "degree",
             "terms": [{"index": [i..], "poly": [{"exps": [e..], "coeff": "n/d"}..]}]}],
  "stratified_forms": [{"id", "stratification", "degree",
                        "components": {"stratum": "form id"}, "bound": "n/d"|null}],
  "chains": [{"id", "degree", "terms": [["cell id", "n/d"]..]}],
  "cell_strata": {"cell id": "stratum id"},
  "splits": {"cell id": ["sub cell"..]},
  "retractions": [{"id", "kind": "cone", "stratification", "center": ["0","0"]} |
                  {"id", "kind": "lift", "base", "cellkind": "graph"|"band",
                   "theta_lo": [poly], "theta_hi": [poly], "stratification"}],
  "grids": [{"id", "box": [[a,b]..], "res": [n..], "sample_form": "form id"} |
            {"id", "file": "grid dump path"}]
}
polynomials are term lists; a simplicial complex "c" registers cells "c:s[v0,v1,..]".)";
}

namespace {

json complex_to_json(const std::string& id, const SimplicialComplex& K) {
  json verts = json::array();
  for (const auto& p : K.points) {
    json v = json::array();
    for (const auto& c : p) v.push_back(format_rational(c));
    verts.push_back(v);
  }
  json simp = json::array();
  for (const auto& s : K.simplices)
    if (s.size() == static_cast<size_t>(K.max_dim()) + 1) simp.push_back(s);
  return {{"id", id}, {"ambient_dim", K.ambient_dim}, {"vertices", verts}, {"simplices", simp}};
}

json strat_to_json(const Stratification& sigma) {
  json strata = json::array();
  for (const auto& [sid, s] : sigma.strata) {
    json adj = json::array();
    for (const auto& a : s.adjacency) adj.push_back(a);
    json cc = json::array();
    for (const auto& c : s.catalogue_cells) cc.push_back(c);
    strata.push_back(
        {{"id", sid}, {"dim", s.dim}, {"cell", s.cell}, {"adjacency", adj}, {"catalogue", cc}});
  }
  return {{"id", sigma.id}, {"ambient_dim", sigma.ambient_dim}, {"strata", strata}};
}

}  // namespace

std::vector<std::string> write_demo_projects(const std::string& dir) {
  std::vector<std::string> written;
  // 1. split square with a stratified 1-form and its Stokes chain
  {
    auto sq = split_square();
    json j;
    j["version"] = "1";
    j["config"] = {{"tol", 1e-8}, {"quad_order", 10}, {"samples", 32}, {"seed", 1}};
    j["complexes"] = json::array({complex_to_json("sq", sq.K)});
    j["stratifications"] = json::array({strat_to_json(sq.strat)});
    PolyForm xdy(2, 1);
    xdy.add_term({1}, Polynomial::variable(2, 0));
    j["forms"] = json::array({form_to_json("xdy", xdy)});
    json comps = json::object();
    for (const auto& [sid, s] : sq.strat.strata) comps[sid] = "xdy";
    j["stratified_forms"] = json::array(
        {{{"id", "w"}, {"stratification", sq.strat.id}, {"degree", 1}, {"components", comps}, {"bound", "2"}}});
    json terms = json::array();
    for (const auto& [cid, c] : sq.top_chain.terms) terms.push_back({cid, format_rational(c)});
    j["chains"] = json::array({{{"id", "square"}, {"degree", 2}, {"terms", terms}}});
    std::string path = dir + "/split_square.json";
    std::ofstream(path) << j.dump(2) << "\n";
    written.push_back(path);
  }
  // 2. box square with one edge stratum missing (frontier failure)
  {
    auto broken = square_boxes(true);
    json j;
    j["version"] = "1";
    j["config"] = {{"tol", 1e-9}, {"samples", 16}, {"seed", 1}};
    json cells = json::array();
    for (const auto& [cid, cell] : broken.cat.all()) {
      json maps = json::array();
      for (const auto& comp : cell.map.comps) maps.push_back(poly_to_json(comp));
      json faces = json::array();
      for (const auto& [fid, sign] : cell.faces) faces.push_back({fid, sign});
      cells.push_back({{"id", cid},
                       {"domain", cell.domain == RefDomain::Box ? "box" : "simplex"},
                       {"dim", cell.dim},
                       {"ambient_dim", cell.ambient_dim},
                       {"map", maps},
                       {"orientation", cell.orientation},
                       {"faces", faces}});
    }
    j["cells"] = cells;
    j["stratifications"] = json::array({strat_to_json(broken.strat)});
    std::string path = dir + "/missing_edge.json";
    std::ofstream(path) << j.dump(2) << "\n";
    written.push_back(path);
  }
  // 3. octahedron complex for betti and the de Rham pairing
  {
    auto oct = octahedron();
    json j;
    j["version"] = "1";
    j["config"] = {{"quad_order", 8}, {"seed", 1}};
    j["complexes"] = json::array({complex_to_json("oct", oct.K)});
    std::string path = dir + "/octahedron.json";
    std::ofstream(path) << j.dump(2) << "\n";
    written.push_back(path);
  }
  // 4. coned square with a cone retraction and a closed stratified form
  {
    auto cone = cone_square();
    json j;
    j["version"] = "1";
    j["config"] = {{"tol", 1e-8}, {"seed", 1}};
    j["complexes"] = json::array({complex_to_json("cone", cone.K)});
    j["stratifications"] = json::array({strat_to_json(cone.strat)});
    PolyForm dxdy = wedge(PolyForm::dx(2, 0), PolyForm::dx(2, 1));
    j["forms"] = json::array({form_to_json("vol", dxdy)});
    json comps = json::object();
    for (const auto& [sid, s] : cone.strat.strata) comps[sid] = "vol";
    j["stratified_forms"] = json::array(
        {{{"id", "w"}, {"stratification", "cone"}, {"degree", 2}, {"components", comps}, {"bound", "1"}}});
    j["retractions"] = json::array(
        {{{"id", "r"}, {"kind", "cone"}, {"stratification", "cone"}, {"center", json::array({"0", "0"})}}});
    std::string path = dir + "/cone_square.json";
    std::ofstream(path) << j.dump(2) << "\n";
    written.push_back(path);
  }
  // 5. grid form for mollifier smoothing
  {
    json j;
    j["version"] = "1";
    j["config"] = {{"seed", 1}};
    PolyForm w(2, 1);
    w.add_term({0}, Polynomial::variable(2, 1).pow(3));
    w.add_term({1}, Polynomial::variable(2, 0).pow(2));
    j["forms"] = json::array({form_to_json("cubic", w)});
    j["grids"] = json::array({{{"id", "g"},
                               {"box", json::array({json::array({0.0, 1.0}), json::array({0.0, 1.0})})},
                               {"res", json::array({96, 96})},
                               {"sample_form", "cubic"}}});
    std::string path = dir + "/grid_smooth.json";
    std::ofstream(path) << j.dump(2) << "\n";
    written.push_back(path);
  }
  return written;
}

}  // namespace strataforms
