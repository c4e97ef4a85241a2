#pragma once

#include <string>
#include <vector>

#include "lcqft/causal_lattice.hpp"
#include "lcqft/microlocal_cones.hpp"

// JSON readers and writers behind the lcqft subcommands.
namespace lcqft::cli {

// Either a bare list [{"x": [4], "xi": [4]}, ...] in vertex order, or
// {"order": "vertex" | "slot", "points": [...]}. Throws InvalidArgument.
cones::CovectorConfig parse_cone_input(const std::string& text);
std::string cone_verdict_json(const cones::CovectorConfig& cfg, const cones::ConeVerdict& v);

std::string wf_scan_json(const std::string& distribution, const cones::Vec2& x,
                         const std::vector<cones::DirectionVerdict>& scan);

struct ScenarioFile {
  lattice::DeformationScenario scenario;
  int max_halvings = 20;
};
// {"grid": {nt, nx, dt, dx}, "slab": [lo, hi], "g1"/"g2": {beta, h, bumps: [{field, row, col, radius,
// amplitude}]}, "K1"/"K2": {rows: [i0, i1], cols: [j0, j1]} or null, "max_halvings"}.
// {"standard": w} selects the built-in scenario with K2 half width w.
ScenarioFile parse_scenario(const std::string& text);
std::string deformation_certificate_json(const ScenarioFile& s, const lattice::DeformationResult& r);

std::string read_file(const std::string& path);  // throws IoError
void write_output(const std::string& path, const std::string& body);  // "-" or empty writes stdout

}  // namespace lcqft::cli
