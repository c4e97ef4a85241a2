#include "lcqft/causal_lattice.hpp"

#include <algorithm>
#include <cmath>

#include "lcqft/errors.hpp"

namespace lcqft::lattice {

namespace {

using Interval = std::pair<double, double>;
using Intervals = std::vector<Interval>;

void merge(Intervals& v) {
  if (v.empty()) return;
  std::sort(v.begin(), v.end());
  Intervals out{v.front()};
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (v[k].first <= out.back().second)
      out.back().second = std::max(out.back().second, v[k].second);
    else
      out.push_back(v[k]);
  }
  v = std::move(out);
}

struct Front {
  const LatticeSpacetime& l;
  double factor;

  double wall_lo() const { return -0.5 * l.dx; }
  double wall_hi() const { return (l.nx - 0.5) * l.dx; }

  // Extreme position after time tau starting at x, moving in direction dir through row `row`.
  double advance(double x, int dir, double tau, int row) const {
    const double lo = wall_lo();
    int j = dir > 0 ? static_cast<int>(std::floor((x - lo) / l.dx)) : static_cast<int>(std::ceil((x - lo) / l.dx)) - 1;
    while (tau > 0.0) {
      if (j < 0 || j >= l.nx) return dir > 0 ? wall_hi() : wall_lo();
      double v = l.speed(row, j) * factor;
      double edge = dir > 0 ? lo + (j + 1) * l.dx : lo + j * l.dx;
      double d = std::abs(edge - x);
      if (d >= v * tau) return x + dir * v * tau;
      x = edge;
      tau -= d / v;
      j += dir;
    }
    return x;
  }

  void expand(Intervals& iv, int row) const {
    for (auto& [a, b] : iv) {
      a = advance(a, -1, l.dt, row);
      b = advance(b, +1, l.dt, row);
    }
    merge(iv);
  }

  bool hit(const Intervals& iv, double x) const {
    const double tol = 1e-9 * l.dx;
    for (const auto& [a, b] : iv)
      if (x >= a - tol && x <= b + tol) return true;
    return false;
  }
};

Intervals subtract(const Intervals& iv, const Intervals& cut) {
  Intervals out;
  for (auto [a, b] : iv) {
    double cur = a;
    for (const auto& [c, d] : cut) {
      if (d < cur || c > b) continue;
      if (c > cur) out.emplace_back(cur, c);
      cur = std::max(cur, d);
    }
    if (cur < b) out.emplace_back(cur, b);
  }
  return out;
}

Intervals row_faces(const LatticeSpacetime& l, const Region& R, int i) {
  Intervals f;
  for (int j = 0; j < l.nx; ++j)
    if (R.contains(i, j)) f.emplace_back((j - 0.5) * l.dx, (j + 0.5) * l.dx);
  merge(f);
  return f;
}

void check_shape(const LatticeSpacetime& l, const Region& O) {
  if (O.nt != l.nt || O.nx != l.nx) throw Error(ErrorCode::GeometryError, "region does not match the lattice");
}

double mode_factor(const LatticeSpacetime& l, Mode mode, const CausalOptions& opt, bool faster_is_inner) {
  double eps = safety_epsilon(l, opt);
  bool inner = mode == Mode::Inner;
  return (inner == faster_is_inner) ? 1.0 + eps : 1.0 - eps;
}

Region sweep(const LatticeSpacetime& l, const Region& O, double factor, bool forward) {
  l.validate();
  check_shape(l, O);
  Front fr{l, factor};
  Region out = Region::like(l);
  Intervals iv;
  for (int s = 0; s < l.nt; ++s) {
    int i = forward ? s : l.nt - 1 - s;
    for (int j = 0; j < l.nx; ++j)
      if (O.contains(i, j)) iv.emplace_back(j * l.dx, j * l.dx);
    merge(iv);
    for (int j = 0; j < l.nx; ++j)
      if (fr.hit(iv, j * l.dx)) out.set(i, j);
    if (forward && i + 1 < l.nt) fr.expand(iv, i);
    if (!forward && i > 0) fr.expand(iv, i - 1);
  }
  return out;
}

}  // namespace

LatticeSpacetime LatticeSpacetime::flat(int nt, int nx, double dt, double dx) {
  LatticeSpacetime l;
  l.nt = nt;
  l.nx = nx;
  l.dt = dt;
  l.dx = dx;
  l.beta.assign(static_cast<std::size_t>(nt) * nx, 1.0);
  l.h.assign(static_cast<std::size_t>(nt) * nx, 1.0);
  return l;
}

double LatticeSpacetime::speed(int i, int j) const { return std::sqrt(beta[index(i, j)] / h[index(i, j)]); }

double LatticeSpacetime::max_speed() const {
  double c = 0.0;
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < nx; ++j) c = std::max(c, speed(i, j));
  return c;
}

void LatticeSpacetime::validate() const {
  const auto n = static_cast<std::size_t>(nt) * nx;
  if (nt < 1 || nx < 1 || beta.size() != n || h.size() != n || !(dt > 0) || !(dx > 0))
    throw Error(ErrorCode::GeometryError, "malformed lattice");
  for (std::size_t k = 0; k < n; ++k)
    if (!(beta[k] > 0) || !(h[k] > 0) || !std::isfinite(beta[k]) || !std::isfinite(h[k]))
      throw Error(ErrorCode::GeometryError, "beta and h must be positive and finite");
}

Region Region::empty(int nt, int nx) {
  Region r;
  r.nt = nt;
  r.nx = nx;
  r.cells.assign(static_cast<std::size_t>(nt) * nx, 0);
  return r;
}

Region Region::box(const LatticeSpacetime& l, int i0, int i1, int j0, int j1) {
  Region r = like(l);
  for (int i = std::max(0, i0); i <= std::min(l.nt - 1, i1); ++i)
    for (int j = std::max(0, j0); j <= std::min(l.nx - 1, j1); ++j) r.set(i, j);
  return r;
}

int Region::count() const { return static_cast<int>(std::count(cells.begin(), cells.end(), 1)); }

bool Region::subset_of(const Region& o) const {
  for (std::size_t k = 0; k < cells.size(); ++k)
    if (cells[k] && !o.cells[k]) return false;
  return true;
}

Region Region::operator&(const Region& o) const {
  Region r = *this;
  for (std::size_t k = 0; k < cells.size(); ++k) r.cells[k] = cells[k] && o.cells[k];
  return r;
}

Region Region::operator|(const Region& o) const {
  Region r = *this;
  for (std::size_t k = 0; k < cells.size(); ++k) r.cells[k] = cells[k] || o.cells[k];
  return r;
}

Region Region::complement() const {
  Region r = *this;
  for (auto& c : r.cells) c = c ? 0 : 1;
  return r;
}

std::vector<std::pair<int, int>> Region::points() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < nx; ++j)
      if (contains(i, j)) out.emplace_back(i, j);
  return out;
}

int Region::min_row() const {
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < nx; ++j)
      if (contains(i, j)) return i;
  return -1;
}

int Region::max_row() const {
  for (int i = nt - 1; i >= 0; --i)
    for (int j = 0; j < nx; ++j)
      if (contains(i, j)) return i;
  return -1;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

double safety_epsilon(const LatticeSpacetime& l, const CausalOptions& opt) {
  if (opt.eps >= 0.0) return opt.eps;
  double T = std::max(1, l.nt - 1) * l.dt;
  return l.dx / (2.0 * l.max_speed() * T);
}

Region causal_future(const LatticeSpacetime& l, const Region& O, Mode mode, const CausalOptions& opt) {
  return sweep(l, O, mode_factor(l, mode, opt, false), true);
}

Region causal_past(const LatticeSpacetime& l, const Region& O, Mode mode, const CausalOptions& opt) {
  return sweep(l, O, mode_factor(l, mode, opt, false), false);
}

Verdict is_causally_convex(const LatticeSpacetime& l, const Region& O, const CausalOptions& opt) {
  Region outer = causal_future(l, O, Mode::Outer, opt) & causal_past(l, O, Mode::Outer, opt);
  if (outer == O) return Verdict::True;
  Region inner = causal_future(l, O, Mode::Inner, opt) & causal_past(l, O, Mode::Inner, opt);
  if (!(inner == O)) return Verdict::False;
  return Verdict::Inconclusive;
}

Region causal_complement(const LatticeSpacetime& l, const Region& O, Mode mode, const CausalOptions& opt) {
  Mode cones = mode == Mode::Inner ? Mode::Outer : Mode::Inner;
  return (causal_future(l, O, cones, opt) | causal_past(l, O, cones, opt)).complement();
}

bool is_achronal(const LatticeSpacetime& l, const Region& R, const CausalOptions& opt) {
  check_shape(l, R);
  for (auto [i, j] : R.points()) {
    Region p = Region::like(l);
    p.set(i, j);
    Region fut = causal_future(l, p, Mode::Outer, opt);
    for (auto [a, b] : R.points())
      if ((a != i || b != j) && fut.contains(a, b)) return false;
  }
  return true;
}

Region domain_of_dependence(const LatticeSpacetime& l, const Region& R, Mode mode, const CausalOptions& opt) {
  l.validate();
  check_shape(l, R);
  if (!is_achronal(l, R, opt)) throw Error(ErrorCode::NotAchronal, "region has causally related points");
  Front fr{l, mode_factor(l, mode, opt, true)};
  std::vector<Intervals> faces(l.nt);
  for (int i = 0; i < l.nt; ++i) faces[i] = row_faces(l, R, i);

  // reach from the initial and final rows along curves that avoid every face of R
  Region from_past = Region::like(l), from_future = Region::like(l);
  Intervals iv{{fr.wall_lo(), fr.wall_hi()}};
  for (int i = 0; i < l.nt; ++i) {
    iv = subtract(iv, faces[i]);
    for (int j = 0; j < l.nx; ++j)
      if (fr.hit(iv, j * l.dx)) from_past.set(i, j);
    if (i + 1 < l.nt) fr.expand(iv, i);
  }
  iv = {{fr.wall_lo(), fr.wall_hi()}};
  for (int i = l.nt - 1; i >= 0; --i) {
    iv = subtract(iv, faces[i]);
    for (int j = 0; j < l.nx; ++j)
      if (fr.hit(iv, j * l.dx)) from_future.set(i, j);
    if (i > 0) fr.expand(iv, i - 1);
  }
  Region D = R;
  for (int i = 0; i < l.nt; ++i)
    for (int j = 0; j < l.nx; ++j)
      if (!(from_past.contains(i, j) && from_future.contains(i, j))) D.set(i, j);
  return D;
}

LatticeSpacetime deformed_metric(const DeformationSpec& spec) {
  const auto& a = spec.g1;
  const auto& b = spec.g2;
  a.validate();
  b.validate();
  if (a.nt != b.nt || a.nx != b.nx || a.dt != b.dt || a.dx != b.dx)
    throw Error(ErrorCode::GeometryError, "deformation metrics live on different lattices");
  if (spec.slab_lo < 0 || spec.slab_hi >= a.nt || spec.slab_lo > spec.slab_hi)
    throw Error(ErrorCode::GeometryError, "slab rows out of range");
  if (!(spec.beta_scale > 0)) throw Error(ErrorCode::GeometryError, "beta scale must be positive");
  LatticeSpacetime g = a;
  const int span = std::max(1, spec.slab_hi - spec.slab_lo);
  for (int i = 0; i < a.nt; ++i) {
    double f, s = 1.0;
    if (i < spec.slab_lo) {
      f = 1.0;
    } else if (i > spec.slab_hi) {
      f = 0.0;
    } else {
      double u = static_cast<double>(i - spec.slab_lo) / span;
      f = 1.0 - u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
      s = spec.beta_scale;
    }
    for (int j = 0; j < a.nx; ++j) {
      int k = a.index(i, j);
      g.beta[k] = s * (f * a.beta[k] + (1.0 - f) * b.beta[k]);
      g.h[k] = f * a.h[k] + (1.0 - f) * b.h[k];
    }
  }
  return g;
}

bool deformation_holds(const DeformationSpec& spec, double beta_scale, const Region& K1, const Region& K2,
                       const CausalOptions& opt) {
  DeformationSpec s = spec;
  s.beta_scale = beta_scale;
  LatticeSpacetime g = deformed_metric(s);
  if (K2.empty()) return false;
  return K1.subset_of(domain_of_dependence(g, K2, Mode::Inner, opt)) &&
         K1.subset_of(domain_of_dependence(g, K2, Mode::Outer, opt));
}

DeformationResult deform_and_certify(const DeformationSpec& spec, const Region& K1, const Region& K2, int max_halvings,
                                     const CausalOptions& opt) {
  if (K1.empty()) throw Error(ErrorCode::GeometryError, "K1 is empty");
  if (K1.max_row() >= spec.slab_lo) throw Error(ErrorCode::GeometryError, "K1 must lie below the slab");
  if (!K2.empty() && K2.min_row() <= spec.slab_hi) throw Error(ErrorCode::GeometryError, "K2 must lie above the slab");
  DeformationResult r;
  double scale = spec.beta_scale;
  for (int k = 0; k <= max_halvings; ++k) {
    r.beta_scale = scale;
    r.halvings = k;
    if (deformation_holds(spec, scale, K1, K2, opt)) {
      r.certified = true;
      return r;
    }
    if (k < max_halvings) scale *= 0.5;
  }
  return r;
}

DeformationScenario standard_scenario(int k2_half_width) {
  DeformationScenario s;
  const int nt = 64, nx = 129;
  s.spec.g1 = LatticeSpacetime::flat(nt, nx);
  s.spec.g2 = LatticeSpacetime::flat(nt, nx);
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < nx; ++j) {
      double r2 = ((i - 52.0) * (i - 52.0) + (j - 64.0) * (j - 64.0)) / 64.0;
      if (r2 < 1.0) s.spec.g2.h[s.spec.g2.index(i, j)] += 0.5 * std::exp(1.0 - 1.0 / (1.0 - r2));
    }
  s.spec.slab_lo = 24;
  s.spec.slab_hi = 40;
  s.K1 = Region::box(s.spec.g1, 20, 20, 60, 68);
  s.K2 = k2_half_width < 0 ? Region::like(s.spec.g1)
                           : Region::box(s.spec.g1, 44, 44, 64 - k2_half_width, 64 + k2_half_width);
  return s;
}

}  // namespace lcqft::lattice
