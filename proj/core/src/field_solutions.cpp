#include "lcqft/field_solutions.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <mutex>

#include "lcqft/errors.hpp"

namespace lcqft::fields {

namespace {

const cplx I(0.0, 1.0);
const double kPi = std::acos(-1.0);

cplx poly_eval(const std::vector<Monomial>& poly, const Vec4c& l) {
  cplx s(0.0);
  for (const auto& m : poly) {
    cplx t = m.coeff;
    for (int a = 0; a < 4; ++a)
      for (int k = 0; k < m.exps[static_cast<std::size_t>(a)]; ++k) t *= l(a);
    s += t;
  }
  return s;
}

double poly_abs(const std::vector<Monomial>& poly, const Vec4c& l) {
  double s = 0.0;
  for (const auto& m : poly) {
    double t = std::abs(m.coeff);
    for (int a = 0; a < 4; ++a)
      for (int k = 0; k < m.exps[static_cast<std::size_t>(a)]; ++k) t *= std::abs(l(a));
    s += t;
  }
  return s;
}

// Sum over terms of |P(l)| |exp(-q)| with P's monomials taken in absolute value.
double magnitude(const FourierTestFunction& f, const Vec4c& l) {
  if (half_space_factor(f.support, l(0).real()) == 0.0) return 0.0;
  double s = 0.0;
  for (const auto& t : f.terms) {
    const Vec4c d = l - t.center;
    const cplx q = (d.transpose() * t.width.cast<cplx>() * d)(0, 0);
    s += poly_abs(t.poly, l) * std::exp(-q.real());
  }
  return s;
}

// Radius beyond which every term of f is below exp(-45) of its scale.
double reach(const FourierTestFunction& f) {
  double r = 0.0;
  for (const auto& t : f.terms) {
    int deg = 0;
    for (const auto& m : t.poly) deg = std::max(deg, m.exps[0] + m.exps[1] + m.exps[2] + m.exps[3]);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(t.width);
    const double lam = es.eigenvalues().minCoeff();
    r = std::max(r, t.center.real().norm() + std::sqrt((45.0 + 4.0 * deg) / lam));
  }
  return r;
}

struct Integral {
  cplx value{0.0};
  double l1 = 0.0;
};

// int d^3l / (2 w) g(l) on the mass shell with l = m sinh(u) n, so d^3l / (2 w) = m^2 sinh^2(u) du dOmega / 2.
// g returns (value, magnitude).
Integral shell_integral(double m, double radius, int nodes,
                        const std::function<std::pair<cplx, double>(const Eigen::Vector3d&)>& g) {
  const double U = std::asinh(radius / m);
  const int nu = 2 * nodes + 1, nphi = 2 * nodes;
  const double hu = 2.0 * U / (nu - 1), hphi = 2.0 * kPi / nphi;
  const QuadratureRule& gl = gauss_legendre(nodes);
  Integral out;
  for (int iu = 0; iu < nu; ++iu) {
    const double u = -U + iu * hu;
    const double r = m * std::sinh(u);
    const double wu = hu * (iu == 0 || iu == nu - 1 ? 0.5 : 1.0) * 0.25 * r * r;
    if (wu == 0.0) continue;
    for (int it = 0; it < nodes; ++it) {
      const double ct = gl.nodes[static_cast<std::size_t>(it)];
      const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      const double wt = wu * gl.weights[static_cast<std::size_t>(it)] * hphi;
      for (int ip = 0; ip < nphi; ++ip) {
        const double ph = ip * hphi;
        const Eigen::Vector3d l(r * st * std::cos(ph), r * st * std::sin(ph), r * ct);
        const auto [v, mag] = g(l);
        out.value += wt * v;
        out.l1 += wt * mag;
      }
    }
  }
  return out;
}

Vec4c shell_point(const Eigen::Vector3d& l, double m) {
  Vec4c out;
  out(0) = std::sqrt(l.squaredNorm() + m * m);
  out.tail<3>() = l.cast<cplx>();
  return out;
}

// int d^3l/(2w) f^(s1 l) h^(s2 l) on the positive shell.
Integral pair_integral(const FourierTestFunction& f, double s1, const FourierTestFunction& h, double s2,
                       const KGParams& p, int n) {
  return shell_integral(p.m, std::min(reach(f), reach(h)), n, [&](const Eigen::Vector3d& l3) {
    const Vec4c l = shell_point(l3, p.m);
    return std::make_pair(f(s1 * l) * h(s2 * l), magnitude(f, s1 * l) * magnitude(h, s2 * l));
  });
}

void check_converged(const Integral& a, const Integral& b, double tol, const char* what) {
  const double scale = std::max(std::abs(b.value), b.l1);
  if (std::abs(a.value - b.value) > tol * scale)
    throw Error(ErrorCode::QuadratureNotConverged, std::string(what) + ": node doubling changed the result");
}

}  // namespace

cplx GaussianTerm::operator()(const Vec4c& l) const {
  const Vec4c d = l - center;
  const cplx q = d.transpose() * width.cast<cplx>() * d;
  return poly_eval(poly, l) * std::exp(-q);
}

double half_space_factor(HalfSpace s, double l0) {
  switch (s) {
    case HalfSpace::None: return 1.0;
    case HalfSpace::PositiveHard: return l0 >= 0.0 ? 1.0 : 0.0;
    case HalfSpace::NegativeHard: return l0 <= 0.0 ? 1.0 : 0.0;
    case HalfSpace::PositiveSmooth: return l0 > 0.0 ? std::exp(-1.0 / l0) : 0.0;
    case HalfSpace::NegativeSmooth: return l0 < 0.0 ? std::exp(1.0 / l0) : 0.0;
  }
  return 1.0;
}

cplx FourierTestFunction::operator()(const Vec4c& l) const {
  const double cut = half_space_factor(support, l(0).real());
  if (cut == 0.0) return 0.0;
  cplx s(0.0);
  for (const auto& t : terms) s += t(l);
  return cut * s;
}

FourierTestFunction FourierTestFunction::conjugate() const {
  FourierTestFunction out;
  switch (support) {
    case HalfSpace::None: out.support = HalfSpace::None; break;
    case HalfSpace::PositiveHard: out.support = HalfSpace::NegativeHard; break;
    case HalfSpace::NegativeHard: out.support = HalfSpace::PositiveHard; break;
    case HalfSpace::PositiveSmooth: out.support = HalfSpace::NegativeSmooth; break;
    case HalfSpace::NegativeSmooth: out.support = HalfSpace::PositiveSmooth; break;
  }
  for (const auto& t : terms) {
    GaussianTerm c;
    c.center = -t.center.conjugate();
    c.width = t.width;
    c.poly.clear();
    for (const auto& m : t.poly) {
      const int deg = m.exps[0] + m.exps[1] + m.exps[2] + m.exps[3];
      c.poly.push_back({(deg % 2 ? -1.0 : 1.0) * std::conj(m.coeff), m.exps});
    }
    out.terms.push_back(c);
  }
  return out;
}

FourierTestFunction FourierTestFunction::apply_kg(double m) const {
  FourierTestFunction out = *this;
  for (auto& t : out.terms) {
    std::vector<Monomial> np;
    for (const auto& mono : t.poly) {
      np.push_back({mono.coeff * m * m, mono.exps});
      for (int a = 0; a < 4; ++a) {
        Monomial x = mono;
        x.exps[static_cast<std::size_t>(a)] += 2;
        x.coeff *= a == 0 ? -1.0 : 1.0;
        np.push_back(x);
      }
    }
    t.poly = np;
  }
  return out;
}

void FourierTestFunction::validate() const {
  for (const auto& t : terms) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(t.width);
    if ((t.width - t.width.transpose()).cwiseAbs().maxCoeff() > 1e-14 || es.eigenvalues().minCoeff() <= 0.0)
      throw Error(ErrorCode::InvalidArgument, "Gaussian width must be symmetric positive-definite");
  }
}

const QuadratureRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  QuadratureRule q;
  q.nodes.assign(static_cast<std::size_t>(n), 0.0);
  q.weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5)), pp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    q.nodes[static_cast<std::size_t>(i)] = -z;
    q.nodes[static_cast<std::size_t>(n - 1 - i)] = z;
    q.weights[static_cast<std::size_t>(i)] = w;
    q.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return cache.emplace(n, q).first->second;
}

QuadratureResult vacuum_two_point_detail(const FourierTestFunction& f, const FourierTestFunction& h,
                                         const KGParams& p, const QuadratureConfig& cfg) {
  f.validate();
  h.validate();
  const double norm = std::pow(2.0 * kPi, -3.0);
  const Integral a = pair_integral(f, 1.0, h, -1.0, p, cfg.nodes);
  QuadratureResult r{a.value * norm, a.value * norm, a.l1 * norm};
  if (cfg.check_convergence) {
    const Integral b = pair_integral(f, 1.0, h, -1.0, p, 2 * cfg.nodes);
    check_converged(a, b, cfg.rel_tol, "vacuum_two_point");
    r.value_refined = b.value * norm;
  }
  return r;
}

cplx vacuum_two_point(const FourierTestFunction& f, const FourierTestFunction& h, const KGParams& p,
                      const QuadratureConfig& cfg) {
  return vacuum_two_point_detail(f, h, p, cfg).value;
}

cplx commutator_pairing(const FourierTestFunction& f, const FourierTestFunction& h, const KGParams& p,
                        const QuadratureConfig& cfg) {
  f.validate();
  h.validate();
  const double norm = std::pow(2.0 * kPi, -3.0);
  const Integral plus = pair_integral(f, 1.0, h, -1.0, p, cfg.nodes);
  const Integral minus = pair_integral(f, -1.0, h, 1.0, p, cfg.nodes);
  if (cfg.check_convergence) {
    const Integral plus2 = pair_integral(f, 1.0, h, -1.0, p, 2 * cfg.nodes);
    const Integral minus2 = pair_integral(f, -1.0, h, 1.0, p, 2 * cfg.nodes);
    Integral d1{plus.value - minus.value, plus.l1 + minus.l1};
    Integral d2{plus2.value - minus2.value, plus2.l1 + minus2.l1};
    check_converged(d1, d2, cfg.rel_tol, "commutator_pairing");
  }
  return -I * norm * (plus.value - minus.value);
}

cplx smoothed_two_point(const Vec4c& x, int n, const FourierTestFunction& f, const KGParams& p,
                        const QuadratureConfig& cfg, bool apply_kg_symbol) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "smoothing index must be >= 1");
  f.validate();
  const double norm = std::pow(2.0 * kPi, -3.0);
  const double inv4n2 = 1.0 / (4.0 * n * n);
  const double radius = std::min(reach(f), std::sqrt(45.0 * 4.0 * n * n));
  auto run = [&](int nodes) {
    return shell_integral(p.m, radius, nodes, [&](const Eigen::Vector3d& l3) {
      const Vec4c eta = shell_point(l3, p.m);
      const cplx xe = x(0) * eta(0) - x.tail<3>().cwiseProduct(eta.tail<3>()).sum();
      const double euclid = eta(0).real() * eta(0).real() + l3.squaredNorm();
      const cplx phase = std::exp(-I * xe) * std::exp(-euclid * inv4n2);
      double sym = 1.0, sym_abs = 1.0;
      if (apply_kg_symbol) {
        sym = p.m * p.m - (eta(0).real() * eta(0).real() - l3.squaredNorm());
        sym_abs = p.m * p.m + euclid;
      }
      return std::make_pair(sym * phase * f(-eta), sym_abs * std::abs(phase) * magnitude(f, -eta));
    });
  };
  const Integral a = run(cfg.nodes);
  if (cfg.check_convergence) check_converged(a, run(2 * cfg.nodes), cfg.rel_tol, "smoothed_two_point");
  return norm * a.value;
}

FourierTestFunction smoothing_kernel(const Eigen::Vector4d& x, int n) {
  const double s = 1.0 / (4.0 * n * n);
  Eigen::Vector4d xl = x;
  xl.tail<3>() *= -1.0;  // lowered index
  GaussianTerm t;
  t.width = s * Eigen::Matrix4d::Identity();
  t.center = (-I * 2.0 * double(n * n)) * xl.cast<cplx>();
  const cplx ctc = (t.center.transpose() * t.width.cast<cplx>() * t.center)(0, 0);
  t.poly = {{std::exp(ctc), {0, 0, 0, 0}}};
  return {{t}, HalfSpace::None};
}

void Lattice1p1::validate() const {
  if (nx < 3 || nt < 4 || dx <= 0.0 || dt <= 0.0 || m < 0.0)
    throw Error(ErrorCode::InvalidArgument, "lattice sizes or spacings invalid");
  if (dt > 0.5 * dx + 1e-15) throw Error(ErrorCode::CFLViolation, "dt must not exceed dx / 2");
}

LatticeField apply_kg(const Lattice1p1& l, const LatticeField& phi) {
  LatticeField out = LatticeField::Zero(l.nt, l.nx);
  const double idt2 = 1.0 / (l.dt * l.dt), idx2 = 1.0 / (l.dx * l.dx), m2 = l.m * l.m;
  for (int n = 1; n < l.nt - 1; ++n)
    for (int j = 0; j < l.nx; ++j) {
      const double left = j > 0 ? phi(n, j - 1) : 0.0;
      const double right = j + 1 < l.nx ? phi(n, j + 1) : 0.0;
      out(n, j) = (phi(n + 1, j) - 2.0 * phi(n, j) + phi(n - 1, j)) * idt2 - (right - 2.0 * phi(n, j) + left) * idx2 +
                  m2 * phi(n, j);
    }
  return out;
}

LatticeField retarded(const Lattice1p1& l, const LatticeField& f) {
  l.validate();
  LatticeField phi = LatticeField::Zero(l.nt, l.nx);
  const double dt2 = l.dt * l.dt, idx2 = 1.0 / (l.dx * l.dx), m2 = l.m * l.m;
  for (int n = 1; n < l.nt - 1; ++n)
    for (int j = 0; j < l.nx; ++j) {
      const double left = j > 0 ? phi(n, j - 1) : 0.0;
      const double right = j + 1 < l.nx ? phi(n, j + 1) : 0.0;
      const double lap = (right - 2.0 * phi(n, j) + left) * idx2;
      phi(n + 1, j) = dt2 * (f(n, j) + lap - m2 * phi(n, j)) + 2.0 * phi(n, j) - phi(n - 1, j);
    }
  return phi;
}

LatticeField advanced(const Lattice1p1& l, const LatticeField& f) {
  const LatticeField rf = f.colwise().reverse();
  return retarded(l, rf).colwise().reverse();
}

LatticeField causal_propagator(const Lattice1p1& l, const LatticeField& f) { return advanced(l, f) - retarded(l, f); }

GreenKernels lattice_green(const Lattice1p1& l) {
  l.validate();
  GreenKernels k;
  k.nt = l.nt;
  k.nx = l.nx;
  for (int n = 0; n < l.nt; ++n)
    for (int j = 0; j < l.nx; ++j) {
      LatticeField d = LatticeField::Zero(l.nt, l.nx);
      if (n >= 1 && n < l.nt - 1) d(n, j) = 1.0;
      k.eplus.push_back(retarded(l, d));
      k.eminus.push_back(advanced(l, d));
      k.e.push_back(k.eminus.back() - k.eplus.back());
    }
  return k;
}

bool within_stencil_cone(const LatticeField& phi, int n0, int j0, int side, int margin) {
  for (int n = 0; n < phi.rows(); ++n)
    for (int j = 0; j < phi.cols(); ++j) {
      if (phi(n, j) == 0.0) continue;
      const int dn = (n - n0) * side;
      if (dn < 0) return false;
      if (std::abs(j - j0) > dn + margin) return false;
    }
  return true;
}

double cauchy_symplectic(const Lattice1p1& l, const LatticeField& phi, const LatticeField& psi, int n) {
  if (n < 0 || n + 1 >= l.nt) throw Error(ErrorCode::InvalidArgument, "slice outside the lattice");
  double s = 0.0;
  for (int j = 0; j < l.nx; ++j) s += phi(n, j) * psi(n + 1, j) - phi(n + 1, j) * psi(n, j);
  return s * l.dx / l.dt;
}

double spacetime_pairing(const Lattice1p1& l, const LatticeField& f, const LatticeField& Eh) {
  return f.cwiseProduct(Eh).sum() * l.dx * l.dt;
}

double quintic_smoothstep(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * s * (s * (6.0 * s - 15.0) + 10.0);
}

TimeSliceDecomposition timeslice_decompose(const Lattice1p1& l, const LatticeField& f, int lo, int hi) {
  l.validate();
  if (hi - lo < 4) throw Error(ErrorCode::SlabTooThin, "slab must span at least 4 cells");
  if (lo < 1 || hi > l.nt - 2) throw Error(ErrorCode::InvalidArgument, "slab must lie in the interior rows");
  TimeSliceDecomposition d;
  d.chi = LatticeField::Zero(l.nt, l.nx);
  for (int n = 0; n < l.nt; ++n) d.chi.row(n).setConstant(quintic_smoothstep(static_cast<double>(n - lo) / (hi - lo)));
  const LatticeField Ef = causal_propagator(l, f);
  d.fprime = -apply_kg(l, d.chi.cwiseProduct(Ef));
  // Outside the slab K(chi E f) vanishes identically; drop the rounding residue there.
  for (int n = 0; n < l.nt; ++n)
    if (n < lo || n > hi) d.fprime.row(n).setZero();
  d.h = advanced(l, f - d.fprime);
  return d;
}

}  // namespace lcqft::fields
