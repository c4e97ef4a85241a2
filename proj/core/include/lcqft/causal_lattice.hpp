#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace lcqft::lattice {

// 1+1 lattice for g = beta dt^2 - h dx^2. Row i sits at time i*dt, column j at x = j*dx and owns
// the spatial cell [x - dx/2, x + dx/2]. Between rows i and i+1 the speed is that of row i.
struct LatticeSpacetime {
  int nt = 0, nx = 0;
  double dt = 1.0, dx = 1.0;
  std::vector<double> beta, h;  // row-major nt x nx

  static LatticeSpacetime flat(int nt, int nx, double dt = 1.0, double dx = 1.0);
  int index(int i, int j) const { return i * nx + j; }
  double speed(int i, int j) const;
  double max_speed() const;
  // Throws GeometryError unless beta > 0 and h > 0 everywhere and sizes match.
  void validate() const;
};

struct Region {
  int nt = 0, nx = 0;
  std::vector<std::uint8_t> cells;

  static Region empty(int nt, int nx);
  static Region like(const LatticeSpacetime& l) { return empty(l.nt, l.nx); }
  // Rows [i0, i1] x columns [j0, j1], inclusive.
  static Region box(const LatticeSpacetime& l, int i0, int i1, int j0, int j1);

  bool contains(int i, int j) const { return cells[i * nx + j] != 0; }
  void set(int i, int j, bool v = true) { cells[i * nx + j] = v ? 1 : 0; }
  int count() const;
  bool empty() const { return count() == 0; }
  bool subset_of(const Region& o) const;
  Region operator&(const Region& o) const;
  Region operator|(const Region& o) const;
  Region complement() const;
  bool operator==(const Region& o) const { return nt == o.nt && nx == o.nx && cells == o.cells; }
  std::vector<std::pair<int, int>> points() const;
  int min_row() const;
  int max_row() const;
};

enum class Mode { Inner, Outer };
enum class Verdict { True, False, Inconclusive };
std::string verdict_name(Verdict v);

struct CausalOptions {
  double eps = -1.0;  // speed margin; negative selects dx / (2 c_max T) with T = (nt - 1) dt
};
double safety_epsilon(const LatticeSpacetime& l, const CausalOptions& opt = {});

// Lattice points in the continuum J+ / J- of O, with speeds c (1 -+ eps) for Inner / Outer.
Region causal_future(const LatticeSpacetime& l, const Region& O, Mode mode, const CausalOptions& opt = {});
Region causal_past(const LatticeSpacetime& l, const Region& O, Mode mode, const CausalOptions& opt = {});

// O = J+(O) cap J-(O): True if it holds with outer cones, False if it fails with inner cones.
Verdict is_causally_convex(const LatticeSpacetime& l, const Region& O, const CausalOptions& opt = {});

// Points causally unrelated to O. Inner uses outer cones, so Inner is a subset of Outer.
Region causal_complement(const LatticeSpacetime& l, const Region& O, Mode mode, const CausalOptions& opt = {});

// True if no point of R lies in the outer-mode J+ of another point of R.
bool is_achronal(const LatticeSpacetime& l, const Region& R, const CausalOptions& opt = {});

// Points p such that every inextendible causal curve through p crosses a cell face of R. Spatial edges
// are walls. Inner runs with faster cones. Throws NotAchronal.
Region domain_of_dependence(const LatticeSpacetime& l, const Region& R, Mode mode, const CausalOptions& opt = {});

struct DeformationSpec {
  LatticeSpacetime g1, g2;
  int slab_lo = 0, slab_hi = 0;  // interpolation rows, inclusive
  double beta_scale = 1.0;
};

// g1 below the slab, g2 above, f g1 + (1 - f) g2 inside with a quintic f from 1 to 0, beta scaled on the slab.
LatticeSpacetime deformed_metric(const DeformationSpec& spec);

struct DeformationResult {
  double beta_scale = 1.0;
  bool certified = false;
  int halvings = 0;
};

// K1 in D(K2) in both modes at the given scale.
bool deformation_holds(const DeformationSpec& spec, double beta_scale, const Region& K1, const Region& K2,
                       const CausalOptions& opt = {});
// Halves beta on the slab from spec.beta_scale until K1 in D(K2) or the floor 2^-max_halvings.
// Throws GeometryError unless K1 lies below the slab and K2 above it.
DeformationResult deform_and_certify(const DeformationSpec& spec, const Region& K1, const Region& K2,
                                     int max_halvings = 20, const CausalOptions& opt = {});

struct DeformationScenario {
  DeformationSpec spec;
  Region K1, K2;
};
// 64 x 129 unit lattice, flat g1, g2 with an h bump above the slab (rows 24..40), K1 columns 60..68 on
// row 20 and K2 on row 44 with the given half width around column 64.
DeformationScenario standard_scenario(int k2_half_width = 16);

}  // namespace lcqft::lattice
