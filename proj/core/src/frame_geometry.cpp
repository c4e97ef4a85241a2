#include "lcqft/frame_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>

#include "lcqft/errors.hpp"

namespace lcqft::geometry {

namespace {

const cplx I(0.0, 1.0);

double eta(int a) { return a == 0 ? 1.0 : -1.0; }
Mat4 eta_matrix() { return Vec4(1.0, -1.0, -1.0, -1.0).asDiagonal(); }

Vec4 unit(int mu) {
  Vec4 v = Vec4::Zero();
  v(mu) = 1.0;
  return v;
}

Vierbein gram_schmidt(const Mat4& g) {
  Vierbein v;
  v.e.setZero();
  if (g(0, 0) < 1e-10) throw Error(ErrorCode::FrameDegenerate, "d_t is not timelike");
  v.e.col(0) = unit(0) / std::sqrt(g(0, 0));
  for (int i = 1; i < 4; ++i) {
    Vec4 w = unit(i);
    for (int b = 0; b < i; ++b) w -= eta(b) * (unit(i).dot(g * v.e.col(b))) * v.e.col(b);
    const double n2 = -w.dot(g * w);
    if (n2 < 1e-10) throw Error(ErrorCode::FrameDegenerate, "Gram-Schmidt pivot below 1e-10");
    v.e.col(i) = w / std::sqrt(n2);
  }
  return v;
}

void fill_coframe(Vierbein& v, const Mat4& g) { v.ecov = eta_matrix() * v.e.transpose() * g; }

const double kStencil[5] = {1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0};

int stride(const Grid& g, int mu) {
  int s = 1;
  for (int k = 3; k > mu; --k) s *= g.n[static_cast<std::size_t>(k)];
  return s;
}

void require_derivative(const Grid& grid, int margin) {
  for (int mu = 0; mu < 4; ++mu)
    if (grid.n[static_cast<std::size_t>(mu)] < 2 * (margin + 2) + 1)
      throw Error(ErrorCode::GridTooSmall, "grid too small for the fourth-order stencil");
}

// d_mu of a grid field (fourth-order central) on points at least margin + 2 from the edge.
template <class T>
std::array<std::vector<T>, 4> coordinate_derivatives(const Grid& grid, const std::vector<T>& f, int margin) {
  require_derivative(grid, margin);
  std::array<std::vector<T>, 4> out;
  const T zero = T::Zero();
  for (int mu = 0; mu < 4; ++mu) {
    auto& d = out[static_cast<std::size_t>(mu)];
    d.assign(f.size(), zero);
    const int s = stride(grid, mu);
    const double ih = 1.0 / grid.h(mu);
    for (int idx = 0; idx < grid.size(); ++idx) {
      if (!grid.interior(idx, margin + 2)) continue;
      T acc = zero;
      for (int k = 0; k < 5; ++k)
        if (kStencil[k] != 0.0) acc += kStencil[k] * f[static_cast<std::size_t>(idx + (k - 2) * s)];
      d[static_cast<std::size_t>(idx)] = acc * ih;
    }
  }
  return out;
}

template <class T>
T frame_derivative(const std::array<std::vector<T>, 4>& d, const Vierbein& fr, int a, std::size_t idx) {
  T acc = d[0][idx] * fr.e(0, a);
  for (int mu = 1; mu < 4; ++mu) acc += d[static_cast<std::size_t>(mu)][idx] * fr.e(mu, a);
  return acc;
}

const Mat4c& gam(int a) { return field_rep().gammas[static_cast<std::size_t>(a)]; }
Mat4c gup(int a) { return field_rep().upper(a); }

SpinorGridField like(const SpinorGridField& f, int margin) {
  SpinorGridField out;
  out.grid = f.grid;
  out.kind = f.kind;
  out.margin = margin;
  out.values.assign(f.values.size(), Vec4c::Zero());
  return out;
}

}  // namespace

double smooth_bump(double r) {
  if (r >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - r * r));
}

std::array<Mat4, 4> MetricField::derivative(const Vec4& x) const {
  if (deriv) return deriv(x);
  std::array<Mat4, 4> d;
  for (int mu = 0; mu < 4; ++mu) {
    const Vec4 s = fd_step * unit(mu);
    d[static_cast<std::size_t>(mu)] = (eval(x + s) - eval(x - s)) / (2.0 * fd_step);
  }
  return d;
}

void MetricField::validate_at(const Vec4& x) const {
  const Mat4 g = eval(x);
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff()))
    throw Error(ErrorCode::SingularMetric, "metric not symmetric");
  if (std::abs(g.determinant()) < 1e-12) throw Error(ErrorCode::SingularMetric, "|det g| < 1e-12");
  Eigen::SelfAdjointEigenSolver<Mat4> es(g);
  const auto ev = es.eigenvalues();
  const int pos = static_cast<int>((ev.array() > 0.0).count());
  if (pos != 1 || g(0, 0) <= 0.0) throw Error(ErrorCode::SingularMetric, "metric signature is not (+,-,-,-) with g00 > 0");
}

MetricField MetricField::minkowski() {
  MetricField m;
  m.name = "minkowski";
  m.eval = [](const Vec4&) { return eta_matrix(); };
  m.deriv = [](const Vec4&) { return std::array<Mat4, 4>{Mat4::Zero(), Mat4::Zero(), Mat4::Zero(), Mat4::Zero()}; };
  return m;
}

MetricField MetricField::frw(double a0, double adot) {
  MetricField m;
  m.name = "frw";
  m.eval = [a0, adot](const Vec4& x) {
    const double a = a0 + adot * x(0);
    return Mat4(Vec4(1.0, -a * a, -a * a, -a * a).asDiagonal());
  };
  m.deriv = [a0, adot](const Vec4& x) {
    const double a = a0 + adot * x(0);
    std::array<Mat4, 4> d{Mat4::Zero(), Mat4::Zero(), Mat4::Zero(), Mat4::Zero()};
    d[0] = Vec4(0.0, -2.0 * a * adot, -2.0 * a * adot, -2.0 * a * adot).asDiagonal();
    return d;
  };
  return m;
}

MetricField MetricField::bump(const Vec4& center, double width, double amplitude) {
  Mat4 P;
  P << 0.6, 0.3, 0.1, 0.0,
       0.3, -0.4, 0.2, 0.1,
       0.1, 0.2, 0.5, -0.2,
       0.0, 0.1, -0.2, -0.3;
  MetricField m;
  m.name = "bump";
  m.eval = [=](const Vec4& x) { return Mat4(eta_matrix() + amplitude * smooth_bump((x - center).norm() / width) * P); };
  return m;
}

MetricField MetricField::from_preset(const std::string& spec) {
  static const std::regex re(R"(^\s*([a-z]+)\s*(?:\(([^)]*)\))?\s*$)");
  std::smatch mt;
  if (!std::regex_match(spec, mt, re)) throw Error(ErrorCode::InvalidArgument, "bad metric preset: " + spec);
  const std::string name = mt[1];
  std::vector<double> args;
  std::stringstream ss(mt[2].str());
  for (std::string tok; std::getline(ss, tok, ',');) {
    try {
      args.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad number in metric preset: " + spec);
    }
  }
  if (name == "minkowski" && args.empty()) return minkowski();
  if (name == "frw" && args.size() == 2) return frw(args[0], args[1]);
  if (name == "bump" && args.size() == 6)
    return bump(Vec4(args[0], args[1], args[2], args[3]), args[4], args[5]);
  throw Error(ErrorCode::InvalidArgument, "unknown metric preset or wrong argument count: " + spec);
}

double Vierbein::defect(const Mat4& g) const {
  const double d1 = (e.transpose() * g * e - eta_matrix()).cwiseAbs().maxCoeff();
  const double d2 = (ecov - eta_matrix() * e.transpose() * g).cwiseAbs().maxCoeff();
  const double d3 = (ecov * e - Mat4::Identity()).cwiseAbs().maxCoeff();
  return std::max({d1, d2, d3});
}

Christoffel christoffel(const MetricField& g, const Vec4& x) {
  g.validate_at(x);
  const Mat4 ginv = g(x).inverse();
  const auto dg = g.derivative(x);
  Christoffel chr;
  for (int r = 0; r < 4; ++r) {
    Mat4 c = Mat4::Zero();
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu)
        for (int s = 0; s < 4; ++s)
          c(mu, nu) += 0.5 * ginv(r, s) *
                       (dg[static_cast<std::size_t>(mu)](s, nu) + dg[static_cast<std::size_t>(nu)](s, mu) -
                        dg[static_cast<std::size_t>(s)](mu, nu));
    chr[static_cast<std::size_t>(r)] = c;
  }
  return chr;
}

Vierbein vierbein(const MetricField& g, const Vec4& x, const FrameGauge& gauge) {
  g.validate_at(x);
  const Mat4 gx = g(x);
  Vierbein v = gram_schmidt(gx);
  if (gauge) v.e = v.e * gauge(x);
  fill_coframe(v, gx);
  return v;
}

ConnectionData spin_connection(const MetricField& g, const Vec4& x, const FrameGauge& gauge) {
  ConnectionData c;
  c.christoffel = christoffel(g, x);
  c.frame = vierbein(g, x, gauge);
  c.g = g(x);
  c.ginv = c.g.inverse();
  std::array<Mat4, 4> de;
  for (int mu = 0; mu < 4; ++mu) {
    const Vec4 s = g.fd_step * unit(mu);
    de[static_cast<std::size_t>(mu)] = (vierbein(g, x + s, gauge).e - vierbein(g, x - s, gauge).e) / (2.0 * g.fd_step);
  }
  const Mat4& e = c.frame.e;
  for (int a = 0; a < 4; ++a) {
    Mat4 chr_a = Mat4::Zero();
    for (int r = 0; r < 4; ++r) chr_a += c.frame.ecov(a, r) * c.christoffel[static_cast<std::size_t>(r)];
    Mat4 G = e.transpose() * chr_a * e;
    for (int mu = 0; mu < 4; ++mu) {
      const Eigen::RowVector4d row = c.frame.ecov.row(a) * de[static_cast<std::size_t>(mu)];
      for (int b = 0; b < 4; ++b) G.row(b) += e(mu, b) * row;
    }
    c.frame_gamma[static_cast<std::size_t>(a)] = G;
  }
  for (int b = 0; b < 4; ++b) {
    Mat4c s = Mat4c::Zero();
    for (int a = 0; a < 4; ++a)
      for (int cc = 0; cc < 4; ++cc) s += 0.25 * c.frame_gamma[static_cast<std::size_t>(a)](b, cc) * gam(a) * gup(cc);
    c.spin_sigma[static_cast<std::size_t>(b)] = s;
  }
  return c;
}

double ConnectionData::antisymmetry_defect() const {
  double d = 0.0;
  for (int b = 0; b < 4; ++b)
    for (int cc = 0; cc < 4; ++cc)
      for (int dd = 0; dd < 4; ++dd)
        d = std::max(d, std::abs(eta(dd) * frame_gamma[static_cast<std::size_t>(dd)](b, cc) +
                                 eta(cc) * frame_gamma[static_cast<std::size_t>(cc)](b, dd)));
  return d;
}

double ConnectionData::covgamma_defect() const {
  double d = 0.0;
  for (int b = 0; b < 4; ++b)
    for (int a = 0; a < 4; ++a) {
      const Mat4c& s = spin_sigma[static_cast<std::size_t>(b)];
      Mat4c r = s * gam(a) - gam(a) * s;
      for (int cc = 0; cc < 4; ++cc) r -= frame_gamma[static_cast<std::size_t>(cc)](b, a) * gam(cc);
      d = std::max(d, r.cwiseAbs().maxCoeff());
    }
  return d;
}

const dirac::GammaRep& field_rep() {
  static const dirac::GammaRep rep = dirac::weyl_representation();
  return rep;
}

const dirac::AdjointPair& field_adjoint() {
  static const dirac::AdjointPair ac = dirac::find_adjoint_conjugation(field_rep());
  return ac;
}

std::array<int, 4> Grid::coords(int idx) const {
  std::array<int, 4> c{};
  for (int k = 3; k >= 0; --k) {
    c[static_cast<std::size_t>(k)] = idx % n[static_cast<std::size_t>(k)];
    idx /= n[static_cast<std::size_t>(k)];
  }
  return c;
}

Vec4 Grid::point(int idx) const {
  const auto c = coords(idx);
  Vec4 x;
  for (int k = 0; k < 4; ++k) x(k) = origin(k) + h(k) * c[static_cast<std::size_t>(k)];
  return x;
}

bool Grid::interior(int idx, int margin) const {
  const auto c = coords(idx);
  for (int k = 0; k < 4; ++k)
    if (c[static_cast<std::size_t>(k)] < margin || c[static_cast<std::size_t>(k)] >= n[static_cast<std::size_t>(k)] - margin)
      return false;
  return true;
}

SpinorGridField SpinorGridField::sample(const Grid& grid, SpinorKind kind, const std::function<Vec4c(const Vec4&)>& f) {
  SpinorGridField out;
  out.grid = grid;
  out.kind = kind;
  out.values.resize(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) out.values[static_cast<std::size_t>(i)] = f(grid.point(i));
  return out;
}

double SpinorGridField::max_abs() const {
  double m = 0.0;
  for (int i = 0; i < grid.size(); ++i)
    if (grid.interior(i, margin)) m = std::max(m, values[static_cast<std::size_t>(i)].cwiseAbs().maxCoeff());
  return m;
}

double SpinorGridField::max_abs_diff(const SpinorGridField& o) const {
  const int mg = std::max(margin, o.margin);
  double m = 0.0;
  for (int i = 0; i < grid.size(); ++i)
    if (grid.interior(i, mg))
      m = std::max(m, (values[static_cast<std::size_t>(i)] - o.values[static_cast<std::size_t>(i)]).cwiseAbs().maxCoeff());
  return m;
}

SpinorGridField SpinorGridField::operator+(const SpinorGridField& o) const {
  SpinorGridField r = *this;
  r.margin = std::max(margin, o.margin);
  for (std::size_t i = 0; i < values.size(); ++i) r.values[i] += o.values[i];
  return r;
}

SpinorGridField SpinorGridField::operator-(const SpinorGridField& o) const { return *this + o * cplx(-1.0); }

SpinorGridField SpinorGridField::operator*(cplx s) const {
  SpinorGridField r = *this;
  for (auto& v : r.values) v *= s;
  return r;
}

GridGeometry grid_geometry(const Grid& grid, const MetricField& g, const FrameGauge& gauge) {
  GridGeometry geo;
  geo.grid = grid;
  geo.points.resize(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) geo.points[static_cast<std::size_t>(i)] = spin_connection(g, grid.point(i), gauge);
  return geo;
}

SpinorGridField dirac_slash(const SpinorGridField& f, const GridGeometry& geo) {
  const auto d = coordinate_derivatives(f.grid, f.values, f.margin);
  SpinorGridField out = like(f, f.margin + 2);
  for (int i = 0; i < f.grid.size(); ++i) {
    if (!f.grid.interior(i, out.margin)) continue;
    const auto idx = static_cast<std::size_t>(i);
    const ConnectionData& c = geo.points[idx];
    const Vec4c& v = f.values[idx];
    Vec4c acc = Vec4c::Zero();
    for (int a = 0; a < 4; ++a) {
      const Vec4c da = frame_derivative(d, c.frame, a, idx);
      const Mat4c& s = c.spin_sigma[static_cast<std::size_t>(a)];
      if (f.kind == SpinorKind::Spinor)
        acc += gup(a) * (da + s * v);
      else
        acc += gup(a).transpose() * (da - s.transpose() * v);
    }
    out.values[idx] = acc;
  }
  return out;
}

SpinorGridField dirac_apply(const SpinorGridField& f, const GridGeometry& geo, double m) {
  const cplx sgn = f.kind == SpinorKind::Spinor ? -I : I;
  SpinorGridField out = dirac_slash(f, geo) * sgn + f * cplx(m);
  return out;
}

SpinorGridField dirac_apply(const SpinorGridField& f, const MetricField& g, double m) {
  require_derivative(f.grid, f.margin);
  return dirac_apply(f, grid_geometry(f.grid, g), m);
}

SpinorGridField dirac_adjoint(const SpinorGridField& f) {
  const Mat4c& A = field_adjoint().A;
  const Mat4c Ainv = A.inverse();
  SpinorGridField out = f;
  out.kind = f.kind == SpinorKind::Spinor ? SpinorKind::Cospinor : SpinorKind::Spinor;
  for (auto& v : out.values) v = f.kind == SpinorKind::Spinor ? Vec4c(A.transpose() * v.conjugate()) : Vec4c(Ainv * v.conjugate());
  return out;
}

SpinorGridField charge_conjugate(const SpinorGridField& f) {
  const Mat4c& C = field_adjoint().C;
  const Mat4c Cinv = C.inverse();
  SpinorGridField out = f;
  for (auto& v : out.values) v = f.kind == SpinorKind::Spinor ? Vec4c(Cinv * v.conjugate()) : Vec4c(C.transpose() * v.conjugate());
  return out;
}

namespace {

struct VariationPoint {
  Mat4 X;  // delta e^c_beta e_b^beta
  double tr = 0.0;  // delta g_{ab} g^{ab}
  Mat4 H;  // delta g^{ab} e^a_alpha e^b_beta
};

VariationPoint variation_point(const MetricFamily& family, const GaugeFamily& gauge, double d, const Vec4& x,
                               const MetricField& g0, const Vierbein& e0) {
  const MetricField gp = family(d), gm = family(-d);
  const FrameGauge up = gauge ? gauge(d) : FrameGauge{}, dn = gauge ? gauge(-d) : FrameGauge{};
  const Vierbein ep = vierbein(gp, x, up), em = vierbein(gm, x, dn);
  const Mat4 gpx = gp(x), gmx = gm(x);
  VariationPoint vp;
  const Mat4 decov = (ep.ecov - em.ecov) / (2.0 * d);
  const Mat4 dg = (gpx - gmx) / (2.0 * d);
  const Mat4 dginv = (gpx.inverse() - gmx.inverse()) / (2.0 * d);
  vp.X = decov * e0.e;
  vp.tr = (dg.cwiseProduct(g0(x).inverse())).sum();
  vp.H = e0.ecov * dginv * e0.ecov.transpose();
  return vp;
}

}  // namespace

VariationTerms dirac_variation(const MetricFamily& family, const SpinorGridField& v, const VariationConfig& cfg) {
  require_derivative(v.grid, v.margin);
  const MetricField g0 = family(0.0);
  const FrameGauge gauge0 = cfg.gauge ? cfg.gauge(0.0) : FrameGauge{};
  const GridGeometry geo = grid_geometry(v.grid, g0, gauge0);
  const bool spinor = v.kind == SpinorKind::Spinor;
  const std::size_t N = v.values.size();

  std::vector<VariationPoint> vp(N);
  for (std::size_t i = 0; i < N; ++i)
    vp[i] = variation_point(family, cfg.gauge, cfg.eps_step, v.grid.point(static_cast<int>(i)), g0, geo.points[i].frame);

  // Y1 = X(c,b) v gamma_c gamma^b (cospinor) or X(c,b) gamma^b gamma_c u (spinor); Y3 = tr v.
  SpinorGridField Y1 = like(v, v.margin), Y3 = like(v, v.margin);
  std::vector<Mat4c> MX(N);
  for (std::size_t i = 0; i < N; ++i) {
    Mat4c M = Mat4c::Zero();
    for (int c = 0; c < 4; ++c)
      for (int b = 0; b < 4; ++b)
        M += vp[i].X(c, b) * (spinor ? Mat4c(gup(b) * gam(c)) : Mat4c(gam(c) * gup(b)));
    MX[i] = M;
    Y1.values[i] = spinor ? Vec4c(M * v.values[i]) : Vec4c(M.transpose() * v.values[i]);
    Y3.values[i] = vp[i].tr * v.values[i];
  }
  const SpinorGridField Dv = dirac_apply(v, geo, cfg.m);
  const SpinorGridField DY1 = dirac_apply(Y1, geo, cfg.m), DY3 = dirac_apply(Y3, geo, cfg.m);
  const double s = spinor ? -1.0 : 1.0;  // var11 carries the opposite signs of var10

  VariationTerms t;
  t.dc_total = DY1 * cplx(-0.25 * s * I) + DY3 * cplx(-0.125 * s * I);
  t.dc_field = like(v, Dv.margin);
  for (std::size_t i = 0; i < N; ++i) {
    const Vec4c mdv = spinor ? Vec4c(MX[i] * Dv.values[i]) : Vec4c(MX[i].transpose() * Dv.values[i]);
    t.dc_field.values[i] = (0.25 * s * I) * mdv + (0.125 * s * I * vp[i].tr) * Dv.values[i];
  }

  // Frame-independent part: 1/4 H^{ab} nabla_a v gamma_b + 1/4 nabla_b(H^{ab} v gamma_a) (and the spinor mirror).
  const auto dv = coordinate_derivatives(v.grid, v.values, v.margin);
  std::array<std::vector<Vec4c>, 4> W;
  for (int b = 0; b < 4; ++b) {
    W[static_cast<std::size_t>(b)].assign(N, Vec4c::Zero());
    for (std::size_t i = 0; i < N; ++i) {
      Mat4c M = Mat4c::Zero();
      for (int a = 0; a < 4; ++a) M += vp[i].H(a, b) * gam(a);
      W[static_cast<std::size_t>(b)][i] = spinor ? Vec4c(M * v.values[i]) : Vec4c(M.transpose() * v.values[i]);
    }
  }
  std::array<std::array<std::vector<Vec4c>, 4>, 4> dW;
  for (int b = 0; b < 4; ++b) dW[static_cast<std::size_t>(b)] = coordinate_derivatives(v.grid, W[static_cast<std::size_t>(b)], v.margin);

  t.metric = like(v, v.margin + 2);
  for (std::size_t i = 0; i < N; ++i) {
    if (!v.grid.interior(static_cast<int>(i), t.metric.margin)) continue;
    const ConnectionData& c = geo.points[i];
    Vec4c acc = Vec4c::Zero();
    for (int a = 0; a < 4; ++a) {
      const Mat4c& sa = c.spin_sigma[static_cast<std::size_t>(a)];
      const Vec4c da = frame_derivative(dv, c.frame, a, i);
      const Vec4c nab = spinor ? Vec4c(da + sa * v.values[i]) : Vec4c(da - sa.transpose() * v.values[i]);
      for (int b = 0; b < 4; ++b) {
        if (vp[i].H(a, b) == 0.0) continue;
        acc += 0.25 * vp[i].H(a, b) * (spinor ? Vec4c(gam(b) * nab) : Vec4c(gam(b).transpose() * nab));
      }
    }
    for (int b = 0; b < 4; ++b) {
      const auto bi = static_cast<std::size_t>(b);
      const Mat4c& sb = c.spin_sigma[bi];
      Vec4c div = frame_derivative(dW[bi], c.frame, b, i);
      div += spinor ? Vec4c(sb * W[bi][i]) : Vec4c(-sb.transpose() * W[bi][i]);
      for (int cc = 0; cc < 4; ++cc) div += c.frame_gamma[bi](b, cc) * W[static_cast<std::size_t>(cc)][i];
      acc += 0.25 * div;
    }
    t.metric.values[i] = acc;
  }
  t.total = t.dc_total + t.dc_field + t.metric;
  return t;
}

SpinorGridField dirac_variation_fd(const MetricFamily& family, const SpinorGridField& v, double eps,
                                   const GaugeFamily& gauge) {
  require_derivative(v.grid, v.margin);
  const GridGeometry gp = grid_geometry(v.grid, family(eps), gauge ? gauge(eps) : FrameGauge{});
  const GridGeometry gm = grid_geometry(v.grid, family(-eps), gauge ? gauge(-eps) : FrameGauge{});
  return (dirac_slash(v, gp) - dirac_slash(v, gm)) * cplx(1.0 / (2.0 * eps));
}

cplx grid_pairing(const SpinorGridField& cospinor, const SpinorGridField& spinor) {
  if (cospinor.kind != SpinorKind::Cospinor || spinor.kind != SpinorKind::Spinor)
    throw Error(ErrorCode::InvalidArgument, "pairing needs a cospinor and a spinor field");
  const int mg = std::max(cospinor.margin, spinor.margin);
  cplx s = 0.0;
  for (int i = 0; i < spinor.grid.size(); ++i)
    if (spinor.grid.interior(i, mg))
      s += cospinor.values[static_cast<std::size_t>(i)].cwiseProduct(spinor.values[static_cast<std::size_t>(i)]).sum();
  return s;
}

TensorGridField semt_classical(const SpinorGridField& u, const GridGeometry& geo) {
  if (u.kind != SpinorKind::Spinor) throw Error(ErrorCode::InvalidArgument, "stress tensor needs a spinor field");
  const auto d = coordinate_derivatives(u.grid, u.values, u.margin);
  const Mat4c& A = field_adjoint().A;
  TensorGridField t;
  t.grid = u.grid;
  t.margin = u.margin + 2;
  t.values.assign(u.values.size(), Mat4c::Zero());
  for (int i = 0; i < u.grid.size(); ++i) {
    if (!u.grid.interior(i, t.margin)) continue;
    const auto idx = static_cast<std::size_t>(i);
    const ConnectionData& c = geo.points[idx];
    const Vec4c& ui = u.values[idx];
    std::array<Vec4c, 4> nab;
    for (int b = 0; b < 4; ++b)
      nab[static_cast<std::size_t>(b)] = frame_derivative(d, c.frame, b, idx) + c.spin_sigma[static_cast<std::size_t>(b)] * ui;
    Mat4c P, Q;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        P(a, b) = (ui.adjoint() * A * gam(a) * nab[static_cast<std::size_t>(b)])(0, 0);
        Q(a, b) = (nab[static_cast<std::size_t>(a)].adjoint() * A * gam(b) * ui)(0, 0);
      }
    t.values[idx] = (0.5 * I) * (0.5 * (P + P.transpose()) - 0.5 * (Q + Q.transpose()));
  }
  return t;
}

std::vector<Vec4c> semt_divergence(const TensorGridField& t, const GridGeometry& geo, int* margin_out) {
  const auto d = coordinate_derivatives(t.grid, t.values, t.margin);
  std::vector<Vec4c> out(t.values.size(), Vec4c::Zero());
  const int mg = t.margin + 2;
  if (margin_out) *margin_out = mg;
  for (int i = 0; i < t.grid.size(); ++i) {
    if (!t.grid.interior(i, mg)) continue;
    const auto idx = static_cast<std::size_t>(i);
    const ConnectionData& c = geo.points[idx];
    const Mat4c& T = t.values[idx];
    for (int b = 0; b < 4; ++b) {
      cplx s = 0.0;
      for (int a = 0; a < 4; ++a) {
        cplx term = frame_derivative(d, c.frame, a, idx)(a, b);
        for (int dd = 0; dd < 4; ++dd)
          term -= c.frame_gamma[static_cast<std::size_t>(dd)](a, a) * T(dd, b) +
                  c.frame_gamma[static_cast<std::size_t>(dd)](a, b) * T(a, dd);
        s += eta(a) * term;
      }
      out[idx](b) = s;
    }
  }
  return out;
}

double stencil_wavenumber(double k, double h) { return (8.0 * std::sin(k * h) - std::sin(2.0 * k * h)) / (6.0 * h); }

}  // namespace lcqft::geometry
