#include "strataforms/stratification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace strataforms {

void Stratification::add(Stratum s) {
  for (const auto& adj : s.adjacency) {
    auto it = strata.find(adj);
    if (it != strata.end() && it->second.dim >= s.dim)
      throw Error("BadAdjacency", "adjacent stratum must have strictly lower dimension");
  }
  strata[s.id] = std::move(s);
}

const Stratum& Stratification::get(const std::string& sid) const {
  auto it = strata.find(sid);
  if (it == strata.end()) throw Error("MissingStratum", "no stratum '" + sid + "'");
  return it->second;
}

std::vector<std::string> Stratification::ids_of_dim(int k) const {
  std::vector<std::string> out;
  for (const auto& [id, s] : strata)
    if (s.dim == k) out.push_back(id);
  return out;
}

int Stratification::max_dim() const {
  int d = -1;
  for (const auto& [id, s] : strata) d = std::max(d, s.dim);
  return d;
}

FrontierReport validate_frontier(const Stratification& sigma, const CellCatalogue& cat,
                                 int samples_per_face, double tol) {
  FrontierReport report;
  for (const auto& [sid, stratum] : sigma.strata) {
    if (stratum.dim == 0) continue;
    const auto& cell = cat.get(stratum.cell);
    int k = cell.dim;
    int nfacets = cell.domain == RefDomain::Simplex ? k + 1 : 2 * k;
    for (int i = 0; i < nfacets; ++i) {
      PolyMap facet = cell.domain == RefDomain::Simplex ? simplex_face_map(k, i)
                                                        : box_face_map(k, i / 2, i % 2);
      for (const auto& u : ref_interior_points(cell.domain, k - 1, samples_per_face)) {
        std::vector<Rational> ur(u.size());
        for (size_t t = 0; t < u.size(); ++t) ur[t] = Rational(u[t]);
        auto img = facet.eval(ur);
        std::vector<double> w(img.size());
        for (size_t t = 0; t < img.size(); ++t) w[t] = to_double(img[t]);
        std::vector<double> p = cell.map.eval(w);

        ++report.samples_total;
        FrontierSample sample;
        sample.stratum = sid;
        sample.point = p;
        sample.distance = std::numeric_limits<double>::infinity();
        // nearest stratum over the whole stratification, for the report
        for (const auto& [oid, other] : sigma.strata) {
          if (oid == sid) continue;
          double d = distance_to_cell(p, cat.get(other.cell)).distance;
          if (d < sample.distance) {
            sample.distance = d;
            sample.nearest = oid;
          }
        }
        // PASS needs a declared lower-dimensional adjacent stratum within tol
        sample.ok = false;
        for (const auto& adj : stratum.adjacency) {
          const auto& other = sigma.get(adj);
          if (other.dim >= stratum.dim) continue;
          if (distance_to_cell(p, cat.get(other.cell)).distance <= tol) {
            sample.ok = true;
            break;
          }
        }
        report.max_distance = std::max(report.max_distance, sample.ok ? 0.0 : sample.distance);
        if (!sample.ok) {
          report.pass = false;
          if (report.failures.size() < 64) report.failures.push_back(std::move(sample));
        }
      }
    }
  }
  // disjointness audit: an interior sample of one stratum must not sit on a
  // different stratum of the same dimension (unless it is near its own
  // declared boundary, where sampling cannot distinguish)
  for (const auto& [sid, stratum] : sigma.strata) {
    const auto& cell = cat.get(stratum.cell);
    for (const auto& u : ref_interior_points(cell.domain, cell.dim, 8)) {
      std::vector<double> p = cell.map.eval(u);
      double own_boundary = std::numeric_limits<double>::infinity();
      for (const auto& adj : stratum.adjacency)
        own_boundary =
            std::min(own_boundary, distance_to_cell(p, cat.get(sigma.get(adj).cell)).distance);
      for (const auto& [oid, other] : sigma.strata) {
        if (oid == sid || other.dim != stratum.dim) continue;
        double d = distance_to_cell(p, cat.get(other.cell)).distance;
        if (d <= tol && own_boundary > 10 * tol) report.overlap_ok = false;
      }
    }
  }
  return report;
}

Refinement refine_common(const Stratification& a, const Stratification& b,
                         const CellCatalogue& cat) {
  // both inputs must be co-registered: every stratum carries catalogue cells,
  // and the two unions coincide
  std::set<std::string> universe_a, universe_b;
  std::map<std::string, std::string> owner_a, owner_b;  // catalogue cell -> stratum
  for (const auto& [sid, s] : a.strata) {
    if (s.catalogue_cells.empty())
      throw Error("IncompatibleCatalogue", "stratum " + sid + " lacks catalogue registration");
    for (const auto& c : s.catalogue_cells) {
      if (!cat.has(c)) throw Error("IncompatibleCatalogue", "unknown catalogue cell " + c);
      if (!universe_a.insert(c).second)
        throw Error("IncompatibleCatalogue", "catalogue cell in two strata of one input");
      owner_a[c] = sid;
    }
  }
  for (const auto& [sid, s] : b.strata) {
    if (s.catalogue_cells.empty())
      throw Error("IncompatibleCatalogue", "stratum " + sid + " lacks catalogue registration");
    for (const auto& c : s.catalogue_cells) {
      if (!cat.has(c)) throw Error("IncompatibleCatalogue", "unknown catalogue cell " + c);
      if (!universe_b.insert(c).second)
        throw Error("IncompatibleCatalogue", "catalogue cell in two strata of one input");
      owner_b[c] = sid;
    }
  }
  if (universe_a != universe_b)
    throw Error("IncompatibleCatalogue", "stratifications cover different catalogue cells");

  // group catalogue cells by (stratum in a, stratum in b)
  std::map<std::pair<std::string, std::string>, std::set<std::string>> groups;
  for (const auto& c : universe_a) groups[{owner_a.at(c), owner_b.at(c)}].insert(c);

  Refinement out;
  out.refined.id = a.id + "&" + b.id;
  out.refined.ambient_dim = a.ambient_dim;
  std::map<std::string, std::string> cell_to_refined;  // catalogue cell -> refined stratum id
  std::vector<Stratum> pending;
  for (const auto& [key, cells] : groups) {
    const Stratum& sa = a.get(key.first);
    const Stratum& sb = b.get(key.second);
    if (cells == sa.catalogue_cells || cells == sb.catalogue_cells) {
      // a whole input stratum survives; keep its identity and adjacency
      Stratum s = cells == sa.catalogue_cells ? sa : sb;
      pending.push_back(s);
      for (const auto& c : cells) cell_to_refined[c] = s.id;
      out.parent_in_a[s.id] = sa.id;
      out.parent_in_b[s.id] = sb.id;
    } else {
      // proper intersection: one refined stratum per catalogue cell
      for (const auto& c : cells) {
        Stratum s;
        s.id = c;
        s.dim = cat.get(c).dim;
        s.cell = c;
        s.catalogue_cells = {c};
        pending.push_back(s);
        cell_to_refined[c] = s.id;
        out.parent_in_a[s.id] = sa.id;
        out.parent_in_b[s.id] = sb.id;
      }
    }
  }
  // adjacency from the catalogue face relation: S' <= S when some cell of S
  // has a (transitive) face owned by S'
  auto transitive_faces = [&](const std::string& cid) {
    std::set<std::string> seen;
    std::vector<std::string> queue = {cid};
    while (!queue.empty()) {
      std::string cur = queue.back();
      queue.pop_back();
      for (const auto& [fid, sign] : cat.get(cur).faces) {
        (void)sign;
        if (seen.insert(fid).second && cat.has(fid)) queue.push_back(fid);
      }
    }
    return seen;
  };
  for (auto& s : pending) {
    for (const auto& c : s.catalogue_cells)
      for (const auto& f : transitive_faces(c)) {
        auto it = cell_to_refined.find(f);
        if (it != cell_to_refined.end() && it->second != s.id) s.adjacency.insert(it->second);
      }
  }
  // keep only adjacencies that exist in the output with strictly lower dim
  std::map<std::string, int> dim_of;
  for (const auto& s : pending) dim_of[s.id] = s.dim;
  for (auto& s : pending) {
    std::set<std::string> keep;
    for (const auto& adj : s.adjacency) {
      auto it = dim_of.find(adj);
      if (it != dim_of.end() && it->second < s.dim) keep.insert(adj);
    }
    s.adjacency = std::move(keep);
  }
  std::sort(pending.begin(), pending.end(),
            [](const Stratum& x, const Stratum& y) { return x.dim < y.dim; });
  for (auto& s : pending) out.refined.add(std::move(s));
  return out;
}

Stratification stratification_from_complex(const SimplicialComplex& K, const std::string& prefix,
                                           const std::string& strat_id) {
  Stratification sigma;
  sigma.id = strat_id;
  sigma.ambient_dim = K.ambient_dim;
  std::vector<std::vector<int>> all(K.simplices.begin(), K.simplices.end());
  std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
    return x.size() == y.size() ? x < y : x.size() < y.size();
  });
  for (const auto& s : all) {
    Stratum st;
    st.id = simplex_cell_id(prefix, s);
    st.dim = static_cast<int>(s.size()) - 1;
    st.cell = st.id;
    st.catalogue_cells = {st.id};
    // adjacency: all proper faces
    for (const auto& t : K.simplices) {
      if (t.size() >= s.size()) continue;
      if (std::includes(s.begin(), s.end(), t.begin(), t.end()))
        st.adjacency.insert(simplex_cell_id(prefix, t));
    }
    sigma.add(std::move(st));
  }
  return sigma;
}

}  // namespace strataforms
