#include "lcqft/microlocal_cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "lcqft/errors.hpp"
#include "lcqft/field_solutions.hpp"

namespace lcqft::cones {

namespace {

constexpr double kBoundaryTol = 1e-12;
constexpr double kBalanceTol = 1e-9;

double mink(const Vec4& a, const Vec4& b) { return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]; }
Vec4 raise(const Vec4& p) { return Vec4(p[0], -p[1], -p[2], -p[3]); }

bool is_null_nonzero(const Vec4& v) {
  auto c = classify_covector(v);
  return c == CovectorClass::Nplus || c == CovectorClass::Nminus;
}

Vec4 future_unit(const Vec4& v) {
  Vec4 u = v / v.norm();
  return u[0] < 0 ? Vec4(-u) : u;
}

bool parallel(const Vec4& a, const Vec4& b, double tol) {
  double bb = b.squaredNorm();
  if (bb == 0.0) return a.norm() <= tol;
  return (a - (a.dot(b) / bb) * b).norm() <= tol * std::max(a.norm(), 1e-300);
}

struct LpResult {
  bool feasible = false;
  Eigen::VectorXd w;
  double phase_one = 0.0;
};

// Phase one of the tableau simplex with Bland's rule for A w = b, w >= 0.
LpResult feasibility(Eigen::MatrixXd A, Eigen::VectorXd b) {
  const int m = static_cast<int>(A.rows()), nv = static_cast<int>(A.cols());
  for (int r = 0; r < m; ++r)
    if (b[r] < 0) {
      A.row(r) *= -1.0;
      b[r] = -b[r];
    }
  const int rhs = nv + m;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m + 1, nv + m + 1);
  T.topLeftCorner(m, nv) = A;
  T.block(0, nv, m, m).setIdentity();
  T.col(rhs).head(m) = b;
  for (int c = 0; c < nv; ++c) T(m, c) = -A.col(c).sum();
  T(m, rhs) = -b.sum();
  std::vector<int> basis(m);
  std::iota(basis.begin(), basis.end(), nv);

  const double tol = 1e-11;
  for (int it = 0; it < 100000; ++it) {
    int enter = -1;
    for (int c = 0; c < rhs; ++c)
      if (T(m, c) < -tol) {
        enter = c;
        break;
      }
    if (enter < 0) break;
    int leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < m; ++r) {
      if (T(r, enter) <= 1e-9) continue;
      double ratio = T(r, rhs) / T(r, enter);
      if (ratio < best - 1e-14 || (std::abs(ratio - best) <= 1e-14 && basis[r] < basis[leave])) {
        best = ratio;
        leave = r;
      }
    }
    if (leave < 0) break;
    const double piv = T(leave, enter);
    T.row(leave) /= piv;
    for (int r = 0; r <= m; ++r) {
      const double f = T(r, enter);
      if (r != leave && f != 0.0) T.row(r) -= f * T.row(leave);
    }
    // rounding can push basic values below zero, which breaks the ratio test
    T.col(rhs).head(m) = T.col(rhs).head(m).cwiseMax(0.0);
    basis[leave] = enter;
  }

  LpResult out;
  out.phase_one = std::max(0.0, -T(m, rhs));
  out.w = Eigen::VectorXd::Zero(nv);
  for (int r = 0; r < m; ++r)
    if (basis[r] < nv) out.w[basis[r]] = std::max(0.0, T(r, rhs));
  out.feasible = out.phase_one <= 1e-10 * (1.0 + b.sum());
  return out;
}

enum class PairKind { Free, Coincident, NullRay, Absent };

PairKind pair_kind(const CovectorConfig& cfg, int i, int j, bool null_geodesic) {
  if (!null_geodesic) return PairKind::Free;
  Vec4 d = cfg.x[j] - cfg.x[i];
  double scale = 1.0 + std::max(cfg.x[i].norm(), cfg.x[j].norm());
  if (d.norm() <= kBoundaryTol * scale) return PairKind::Coincident;
  if (std::abs(mink(d, d)) <= 1e-10 * d.squaredNorm()) return PairKind::NullRay;
  return PairKind::Absent;
}

}  // namespace

std::string class_name(CovectorClass c) {
  switch (c) {
    case CovectorClass::Nplus: return "Nplus";
    case CovectorClass::Nminus: return "Nminus";
    case CovectorClass::VplusTimelike: return "Vplus_timelike";
    case CovectorClass::VminusTimelike: return "Vminus_timelike";
    case CovectorClass::Zero: return "Zero";
    case CovectorClass::Spacelike: return "Spacelike";
  }
  return "?";
}

CovectorClass classify_covector(const Vec4& xi) {
  double e2 = xi.squaredNorm();
  if (std::sqrt(e2) <= kBoundaryTol) return CovectorClass::Zero;
  double q = mink(xi, xi);
  if (std::abs(q) <= kBoundaryTol * e2) return xi[0] > 0 ? CovectorClass::Nplus : CovectorClass::Nminus;
  if (q > 0) return xi[0] > 0 ? CovectorClass::VplusTimelike : CovectorClass::VminusTimelike;
  return CovectorClass::Spacelike;
}

bool is_future_causal(const Vec4& p, double tol) {
  double n = p.norm();
  if (n <= tol) return true;
  return p[0] > 0 && mink(p, p) >= -tol * n * n;
}

CovectorConfig CovectorConfig::from_slots(const std::vector<Vec4>& x_slots, const std::vector<Vec4>& xi_slots) {
  if (x_slots.size() != xi_slots.size()) throw Error(ErrorCode::InvalidArgument, "point/covector count mismatch");
  CovectorConfig c;
  c.x.assign(x_slots.rbegin(), x_slots.rend());
  c.xi.assign(xi_slots.rbegin(), xi_slots.rend());
  c.slot_order = true;
  return c;
}

CovectorConfig CovectorConfig::negated() const {
  CovectorConfig c = *this;
  for (auto& k : c.xi) k = -k;
  return c;
}

std::vector<Vec4> null_generators(int count) {
  std::vector<Vec4> out;
  out.reserve(count);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < count; ++k) {
    double z = 1.0 - 2.0 * (k + 0.5) / count;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = golden * k;
    out.emplace_back(1.0, r * std::cos(phi), r * std::sin(phi), z);
  }
  return out;
}

bool verify_certificate(const CovectorConfig& cfg, const std::vector<EdgeCovector>& cert, bool null_geodesic,
                        double* residual) {
  const int n = cfg.size();
  std::vector<Vec4> sum(n, Vec4::Zero());
  bool ok = true;
  double scale = 1.0;
  for (const auto& k : cfg.xi) scale = std::max(scale, k.norm());
  for (const auto& e : cert) {
    if (e.i < 0 || e.j >= n || e.i > e.j) return false;
    if (e.i == e.j) {
      // loop edge, only produced by the loose Gamma_1 reading
      sum[e.i] += e.p;
      ok = ok && mink(e.p, e.p) >= -kBalanceTol * e.p.squaredNorm() && e.p.norm() > 0;
      continue;
    }
    sum[e.i] += e.p;
    sum[e.j] -= e.p;
    ok = ok && is_future_causal(e.p, kBalanceTol * scale);
    if (null_geodesic && e.p.norm() > kBalanceTol * scale) {
      switch (pair_kind(cfg, e.i, e.j, true)) {
        case PairKind::Coincident: break;
        case PairKind::NullRay: ok = ok && parallel(raise(e.p), cfg.x[e.j] - cfg.x[e.i], 1e-9); break;
        default: ok = false;
      }
    }
  }
  double res = 0.0;
  for (int i = 0; i < n; ++i) res = std::max(res, (sum[i] - cfg.xi[i]).cwiseAbs().maxCoeff());
  if (residual) *residual = res;
  return ok && res <= kBalanceTol * scale;
}

ConeVerdict in_gamma_n(const CovectorConfig& cfg, const ConeOptions& opt) {
  const int n = cfg.size();
  if (n < 1 || n > 4) throw Error(ErrorCode::InvalidArgument, "cone test needs 1 <= n <= 4");
  if (cfg.xi.size() != cfg.x.size()) throw Error(ErrorCode::InvalidArgument, "point/covector count mismatch");
  double scale = 0.0;
  for (const auto& k : cfg.xi) scale = std::max(scale, k.norm());
  if (scale <= kBoundaryTol) throw Error(ErrorCode::ZeroSection, "all covectors vanish");

  ConeVerdict v;
  if (n == 1) {
    auto c = classify_covector(cfg.xi[0]);
    bool causal = c != CovectorClass::Spacelike && c != CovectorClass::Zero;
    if (opt.gamma1 == Gamma1Reading::Loose && causal) {
      v.member = true;
      v.certificate.push_back({0, 0, cfg.xi[0]});
    } else {
      v.infeasibility_margin = scale;
    }
    return v;
  }

  // Null directions forced by cut fluxes: a null sum of future-causal covectors fixes every summand's ray.
  std::vector<Vec4> extra;
  for (int mask = 1; mask < (1 << n); ++mask) {
    Vec4 s = Vec4::Zero();
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) s += cfg.xi[i];
    if (s.norm() > kBoundaryTol * scale && is_null_nonzero(s)) extra.push_back(future_unit(s));
  }
  // Each causal sum s with spatial direction n is a positive combination of (1, n) and (1, -n).
  for (int mask = 1; mask < (1 << n); ++mask) {
    Vec4 s = Vec4::Zero();
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) s += cfg.xi[i];
    Eigen::Vector3d sp = s.tail<3>();
    if (sp.norm() <= kBoundaryTol * scale) continue;
    sp.normalize();
    extra.emplace_back(1.0, sp[0], sp[1], sp[2]);
    extra.emplace_back(1.0, -sp[0], -sp[1], -sp[2]);
  }
  auto base = null_generators(opt.generators);

  std::vector<std::pair<int, int>> col_pair;
  std::vector<Vec4> col_gen;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      auto add = [&](const Vec4& g) {
        col_pair.emplace_back(i, j);
        col_gen.push_back(g);
      };
      switch (pair_kind(cfg, i, j, opt.null_geodesic)) {
        case PairKind::Free:
          for (const auto& g : base) add(g);
          add(Vec4(1, 0, 0, 0));
          for (const auto& g : extra) add(g);
          break;
        case PairKind::Coincident:
          for (const auto& g : base) add(g);
          for (const auto& g : extra) add(g);
          break;
        case PairKind::NullRay: add(future_unit(raise(cfg.x[j] - cfg.x[i]))); break;
        case PairKind::Absent: break;
      }
    }

  const int rows = 4 * n, cols = static_cast<int>(col_gen.size());
  Eigen::VectorXd b(rows);
  for (int i = 0; i < n; ++i) b.segment<4>(4 * i) = cfg.xi[i] / scale;
  if (cols == 0) {
    v.infeasibility_margin = b.cwiseAbs().sum();
    return v;
  }
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, cols);
  for (int c = 0; c < cols; ++c) {
    A.col(c).segment<4>(4 * col_pair[c].first) = col_gen[c];
    A.col(c).segment<4>(4 * col_pair[c].second) = -col_gen[c];
  }
  auto lp = feasibility(A, b);
  if (!lp.feasible) {
    v.infeasibility_margin = lp.phase_one;
    return v;
  }
  std::vector<EdgeCovector> cert;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Vec4 p = Vec4::Zero();
      for (int c = 0; c < cols; ++c)
        if (col_pair[c].first == i && col_pair[c].second == j) p += lp.w[c] * col_gen[c];
      if (p.norm() > 0) cert.push_back({i, j, p * scale});
    }
  double res = 0.0;
  if (verify_certificate(cfg, cert, opt.null_geodesic, &res)) {
    v.member = true;
    v.certificate = std::move(cert);
    v.residual = res;
  } else {
    v.infeasibility_margin = std::max(res, lp.phase_one);
  }
  return v;
}

CovectorConfig interleave(const CovectorConfig& a, const CovectorConfig& b, const std::vector<int>& positions_a) {
  const int n = a.size() + b.size();
  if (static_cast<int>(positions_a.size()) != a.size())
    throw Error(ErrorCode::InvalidArgument, "one position per vertex of the first factor");
  std::vector<int> owner(n, -1);
  for (std::size_t k = 0; k < positions_a.size(); ++k) {
    int p = positions_a[k];
    if (p < 0 || p >= n || owner[p] != -1 || (k > 0 && p <= positions_a[k - 1]))
      throw Error(ErrorCode::InvalidArgument, "positions must be ascending and in range");
    owner[p] = 0;
  }
  CovectorConfig out;
  out.slot_order = a.slot_order;
  int ia = 0, ib = 0;
  for (int p = 0; p < n; ++p) {
    const CovectorConfig& src = owner[p] == 0 ? a : b;
    int& k = owner[p] == 0 ? ia : ib;
    out.x.push_back(src.x[k]);
    out.xi.push_back(src.xi[k]);
    ++k;
  }
  return out;
}

bool in_hadamard_set(const Vec4& x, const Vec4& xi, const Vec4& y, const Vec4& xi_p) {
  if (classify_covector(xi) != CovectorClass::Nminus) return false;
  if (classify_covector(xi_p) != CovectorClass::Nplus) return false;
  if ((xi + xi_p).norm() > 1e-9 * xi_p.norm()) return false;
  Vec4 d = x - y;
  double dn = d.norm();
  if (dn <= kBoundaryTol * (1.0 + std::max(x.norm(), y.norm()))) return true;
  if (std::abs(mink(d, d)) > 1e-9 * dn * dn) return false;
  return parallel(raise(xi_p), d, 1e-9);
}

CovectorConfig hadamard_to_gamma2(const Vec4& x, const Vec4& xi, const Vec4& y, const Vec4& xi_p) {
  return CovectorConfig::from_slots({x, y}, {xi, xi_p});
}

namespace {

// int exp(-y^T M y / 2 + b^T y + c) dy over the plane
cplx gaussian_2d(const Mat2& M, const Eigen::Vector2cd& b, cplx c) {
  Eigen::Matrix2cd Minv = M.inverse().cast<cplx>();
  cplx e = 0.5 * (b.transpose() * Minv * b)(0, 0) + c;
  return 2.0 * std::numbers::pi / std::sqrt(M.determinant()) * std::exp(e);
}

// int_0^inf exp(-a t^2 / 2 + beta t + gamma) dt by composite Gauss-Legendre
cplx half_line_gaussian(double a, cplx beta, cplx gamma) {
  double sigma = 1.0 / std::sqrt(a);
  double tc = beta.real() / a;
  double lo = std::max(0.0, tc - 12.0 * sigma);
  double hi = std::max(tc, 0.0) + 12.0 * sigma;
  if (hi <= lo) return 0.0;
  int panels = std::max(8, static_cast<int>(std::ceil((hi - lo) * (std::abs(beta.imag()) + sigma) / std::numbers::pi)));
  const auto& gl = fields::gauss_legendre(16);
  double width = (hi - lo) / panels;
  cplx sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    double mid = lo + (p + 0.5) * width;
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
      double t = mid + 0.5 * width * gl.nodes[k];
      sum += 0.5 * width * gl.weights[k] * std::exp(-0.5 * a * t * t + beta * t + gamma);
    }
  }
  return sum;
}

struct WindowParts {
  Eigen::Vector2cd b;
  cplx c;
};

WindowParts window_parts(const WindowedTest& w, double kappa = 0.0) {
  WindowParts p;
  Vec2 qc = w.Q * w.center;
  p.b = Eigen::Vector2cd(cplx(qc[0], -(w.xi[0] - kappa)), cplx(qc[1], -w.xi[1]));
  p.c = -0.5 * w.center.dot(qc);
  return p;
}

cplx theta_gaussian(const WindowedTest& w, double kappa) {
  auto wp = window_parts(w, kappa);
  Mat2 M = w.Q;
  M(1, 1) += 1.0;
  double a = M(0, 0) - M(0, 1) * M(0, 1) / M(1, 1);
  cplx beta = wp.b[0] - wp.b[1] * M(0, 1) / M(1, 1);
  cplx gamma = wp.c + wp.b[1] * wp.b[1] / (2.0 * M(1, 1));
  return std::sqrt(2.0 * std::numbers::pi / M(1, 1)) * half_line_gaussian(a, beta, gamma);
}

}  // namespace

std::vector<std::string> builtin_names() { return {"gaussian", "delta", "delta-line", "theta", "theta-phase"}; }

Distribution2D builtin_distribution(const std::string& name) {
  if (name == "gaussian")
    return [](const WindowedTest& w) {
      auto wp = window_parts(w);
      return gaussian_2d(w.Q + Mat2::Identity(), wp.b, wp.c);
    };
  if (name == "delta") return [](const WindowedTest& w) { return std::exp(window_parts(w).c); };
  if (name == "delta-line")
    return [](const WindowedTest& w) {
      auto wp = window_parts(w);
      double a = w.Q(0, 0);
      return std::sqrt(2.0 * std::numbers::pi / a) * std::exp(wp.b[0] * wp.b[0] / (2.0 * a) + wp.c);
    };
  if (name == "theta") return [](const WindowedTest& w) { return theta_gaussian(w, 0.0); };
  if (name == "theta-phase") return [](const WindowedTest& w) { return theta_gaussian(w, 1.0); };
  throw Error(ErrorCode::InvalidArgument, "unknown distribution '" + name + "'");
}

Distribution2D pullback(const Distribution2D& u, const Mat2& A) {
  double det = A.determinant();
  if (!std::isfinite(det) || std::abs(det) <= 1e-12 * std::max(1.0, A.squaredNorm()))
    throw Error(ErrorCode::SingularMap, "linear map is not invertible");
  Mat2 Ai = A.inverse();
  return [u, A, Ai, det](const WindowedTest& w) {
    WindowedTest v;
    v.center = A * w.center;
    v.Q = Ai.transpose() * w.Q * Ai;
    v.xi = Ai.transpose() * w.xi;
    return u(v) / std::abs(det);
  };
}

Distribution2D real_part(const Distribution2D& u) {
  return [u](const WindowedTest& w) {
    WindowedTest m = w;
    m.xi = -w.xi;
    return 0.5 * (u(w) + std::conj(u(m)));
  };
}

Distribution2D imag_part(const Distribution2D& u) {
  return [u](const WindowedTest& w) {
    WindowedTest m = w;
    m.xi = -w.xi;
    return (u(w) - std::conj(u(m))) / cplx(0.0, 2.0);
  };
}

Distribution2D combined_magnitude(const Distribution2D& u) {
  auto re = real_part(u), im = imag_part(u);
  return [re, im](const WindowedTest& w) { return cplx(std::hypot(std::abs(re(w)), std::abs(im(w))), 0.0); };
}

DirectionVerdict scan_direction(const Distribution2D& u, const Vec2& x, const Vec2& direction, const WFScanConfig& cfg,
                                const Mat2& Q) {
  DirectionVerdict d;
  d.direction = direction.normalized();
  const int m = std::max(2, cfg.magnitudes);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  bool all_clamped = true;
  for (int k = 0; k < m; ++k) {
    double s = cfg.xi_min * std::pow(cfg.xi_max / cfg.xi_min, static_cast<double>(k) / (m - 1));
    WindowedTest w{x, Q, s * d.direction};
    double val = std::abs(u(w));
    if (!std::isfinite(val)) throw Error(ErrorCode::EvaluationFailure, "distribution returned a non-finite value");
    all_clamped = all_clamped && val <= cfg.clamp;
    double lx = std::log(s), ly = std::log(std::max(val, cfg.clamp));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  d.slope = all_clamped ? -std::numeric_limits<double>::infinity() : (m * sxy - sx * sy) / (m * sxx - sx * sx);
  d.singular = d.slope > -cfg.order;
  return d;
}

std::vector<DirectionVerdict> wf_decay_scan(const Distribution2D& u, const Vec2& x, const WFScanConfig& cfg) {
  Mat2 Q = Mat2::Identity() / (cfg.window * cfg.window);
  std::vector<DirectionVerdict> out;
  for (int k = 0; k < cfg.directions; ++k) {
    double ang = 2.0 * std::numbers::pi * k / cfg.directions;
    out.push_back(scan_direction(u, x, Vec2(std::cos(ang), std::sin(ang)), cfg, Q));
  }
  return out;
}

PullbackReport wf_pullback_check(const Distribution2D& u, const Mat2& A, const Vec2& x, const WFScanConfig& cfg) {
  auto fu = pullback(u, A);
  PullbackReport rep;
  rep.pulled = wf_decay_scan(fu, x, cfg);
  Mat2 AiT = A.inverse().transpose();
  Mat2 Q = Mat2::Identity() / (cfg.window * cfg.window);
  Vec2 ax = A * x;
  for (const auto& d : rep.pulled) {
    rep.transported.push_back(scan_direction(u, ax, AiT * d.direction, cfg, Q));
    if (rep.transported.back().singular != d.singular) ++rep.mismatches;
  }
  return rep;
}

}  // namespace lcqft::cones
