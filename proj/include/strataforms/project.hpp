#pragma once

#include <map>
#include <string>

#include "strataforms/builders.hpp"
#include "strataforms/homotopy.hpp"
#include "strataforms/smoothing.hpp"
#include "strataforms/whitney.hpp"

namespace strataforms {

struct RunConfig {
  double tol = 1e-8;
  int quad_order = 10;  // minimum quadrature order
  int samples = 64;
  unsigned seed = 1;
  int jobs = 1;
};

// One self-contained verification workspace, loaded from a project file.
struct Project {
  std::string version = "1";
  RunConfig config;
  std::map<std::string, SimplicialComplex> complexes;
  CellCatalogue cells;  // explicit cells plus cells generated by complexes
  std::map<std::string, Stratification> stratifications;
  std::map<std::string, PolyForm> forms;
  std::map<std::string, StratifiedForm> stratified_forms;
  std::map<std::string, Chain> chains;
  std::map<std::string, Retraction> retractions;
  std::map<std::string, GridForm> grids;
  StratumAssignment assignment;
};

Project load_project(const std::string& path);

// Version-1 schema doc (shipped with the repo through the CLI help).
std::string project_schema_notes();

// Grid form text dump: header (box, resolution, degree), then node-major
// coefficient records.
void save_gridform(const GridForm& g, const std::string& path);
GridForm load_gridform(const std::string& path);

// Demo project files for the shipped geometries; returns the file names.
std::vector<std::string> write_demo_projects(const std::string& dir);

}  // namespace strataforms
