#pragma once

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lcqft/dirac_algebra.hpp"

namespace lcqft::geometry {

using cplx = std::complex<double>;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;
using Vec4c = Eigen::Vector4cd;
using Mat4c = Eigen::Matrix4cd;

// Lorentzian metric g_{mu nu}(x), signature (+,-,-,-).
struct MetricField {
  std::function<Mat4(const Vec4&)> eval;
  // Optional analytic partial derivatives d_mu g; central differences otherwise.
  std::function<std::array<Mat4, 4>(const Vec4&)> deriv;
  double fd_step = 1e-5;
  std::string name = "custom";

  Mat4 operator()(const Vec4& x) const { return eval(x); }
  std::array<Mat4, 4> derivative(const Vec4& x) const;
  // Throws SingularMetric unless symmetric, invertible, signature (+,-,-,-) and g00 > 0.
  void validate_at(const Vec4& x) const;

  static MetricField minkowski();
  // diag(1, -a^2, -a^2, -a^2) with a(t) = a0 + adot t.
  static MetricField frw(double a0, double adot);
  // eta + amplitude b(|x - center| / width) P with the smooth unit bump b and a fixed symmetric P.
  static MetricField bump(const Vec4& center, double width, double amplitude);
  // Parses "minkowski", "frw(a0,adot)" or "bump(c0,c1,c2,c3,width,amplitude)".
  static MetricField from_preset(const std::string& spec);
};

// exp(1 - 1/(1 - r^2)) for r < 1, else 0.
double smooth_bump(double r);

// Columns are the frame vectors: e(mu, a) = e_a^mu. Rows of ecov are the coframe: ecov(a, mu) = e^a_mu.
struct Vierbein {
  Mat4 e;
  Mat4 ecov;

  // max |g(e_a, e_b) - eta_ab| and the coframe identity residual.
  double defect(const Mat4& g) const;
};

// Local Lorentz matrix L(x) acting on frame indices: e'_a = e_b L^b_a.
using FrameGauge = std::function<Mat4(const Vec4&)>;

using Christoffel = std::array<Mat4, 4>;  // chr[rho](mu, nu)

Christoffel christoffel(const MetricField& g, const Vec4& x);
// Gram-Schmidt on d_t, d_x, d_y, d_z; throws FrameDegenerate if a pivot is below 1e-10.
Vierbein vierbein(const MetricField& g, const Vec4& x, const FrameGauge& gauge = {});

struct ConnectionData {
  Christoffel christoffel;
  std::array<Mat4, 4> frame_gamma;  // frame_gamma[a](b, c) = Gamma^a_{bc}
  std::array<Mat4c, 4> spin_sigma;  // sigma_b
  Vierbein frame;
  Mat4 g, ginv;

  double antisymmetry_defect() const;
  // max_{a,b} |sigma_b gamma_a - gamma_a sigma_b - Gamma^c_{ba} gamma_c|
  double covgamma_defect() const;
};

ConnectionData spin_connection(const MetricField& g, const Vec4& x, const FrameGauge& gauge = {});

// Representation used for all spinor fields (Weyl) and its adjoint / conjugation matrices.
const dirac::GammaRep& field_rep();
const dirac::AdjointPair& field_adjoint();

struct Grid {
  Vec4 origin = Vec4::Zero();
  Vec4 h = Vec4::Constant(0.05);
  std::array<int, 4> n{9, 9, 9, 9};

  int size() const { return n[0] * n[1] * n[2] * n[3]; }
  int index(int i0, int i1, int i2, int i3) const { return ((i0 * n[1] + i1) * n[2] + i2) * n[3] + i3; }
  std::array<int, 4> coords(int idx) const;
  Vec4 point(int idx) const;
  // True if every coordinate is at least `margin` points from the edge.
  bool interior(int idx, int margin) const;
};

enum class SpinorKind { Spinor, Cospinor };

// Cospinor values are stored as the transposed row.
struct SpinorGridField {
  Grid grid;
  SpinorKind kind = SpinorKind::Spinor;
  std::vector<Vec4c> values;
  int margin = 0;  // boundary layers without valid data

  static SpinorGridField sample(const Grid& grid, SpinorKind kind, const std::function<Vec4c(const Vec4&)>& f);
  double max_abs() const;  // over valid points
  double max_abs_diff(const SpinorGridField& o) const;  // over points valid in both
  SpinorGridField operator+(const SpinorGridField& o) const;
  SpinorGridField operator-(const SpinorGridField& o) const;
  SpinorGridField operator*(cplx s) const;
};

// Per-point connection data on a grid.
struct GridGeometry {
  Grid grid;
  std::vector<ConnectionData> points;
};
GridGeometry grid_geometry(const Grid& grid, const MetricField& g, const FrameGauge& gauge = {});

// nabla-slash: gamma^a (d_a u + sigma_a u) or (d_a v - v sigma_a) gamma^a.
SpinorGridField dirac_slash(const SpinorGridField& f, const GridGeometry& geo);
// (-i nabla-slash + m) u for spinors, (i nabla-slash + m) v for cospinors. Throws GridTooSmall.
SpinorGridField dirac_apply(const SpinorGridField& f, const GridGeometry& geo, double m);
SpinorGridField dirac_apply(const SpinorGridField& f, const MetricField& g, double m);

// u^+ = u* A, v^+ = A^-1 v*; u^c = C^-1 conj(u), v^c = conj(v) C.
SpinorGridField dirac_adjoint(const SpinorGridField& f);
SpinorGridField charge_conjugate(const SpinorGridField& f);

using MetricFamily = std::function<MetricField(double eps)>;
using GaugeFamily = std::function<FrameGauge(double eps)>;

// Closed-form variation split by type. dc_total: D(...) total-derivative terms; dc_field: terms
// containing D v; metric: the two frame-independent delta g^{ab} terms.
struct VariationTerms {
  SpinorGridField dc_total, dc_field, metric, total;
};

struct VariationConfig {
  double m = 1.0;
  double eps_step = 1e-4;  // centred difference for delta e and delta g
  GaugeFamily gauge;
};

VariationTerms dirac_variation(const MetricFamily& family, const SpinorGridField& v, const VariationConfig& cfg = {});
// (nabla-slash_eps - nabla-slash_-eps) v / (2 eps) with per-eps frames.
SpinorGridField dirac_variation_fd(const MetricFamily& family, const SpinorGridField& v, double eps,
                                   const GaugeFamily& gauge = {});

// Frame pairing sum_x w(x) f(x) of a cospinor and a spinor field over points valid in both.
cplx grid_pairing(const SpinorGridField& cospinor, const SpinorGridField& spinor);

// T_ab = (i/2)(u^+ gamma_(a nabla_b) u - nabla_(a u^+ gamma_b) u) per grid point.
struct TensorGridField {
  Grid grid;
  std::vector<Mat4c> values;
  int margin = 0;
};
TensorGridField semt_classical(const SpinorGridField& u, const GridGeometry& geo);
// nabla^a T_ab as a frame covector per point.
std::vector<Vec4c> semt_divergence(const TensorGridField& t, const GridGeometry& geo, int* margin_out = nullptr);

// Stencil multiplier of the fourth-order central difference: d/dx exp(-i k x) -> -i k_eff exp(-i k x).
double stencil_wavenumber(double k, double h);

}  // namespace lcqft::geometry
