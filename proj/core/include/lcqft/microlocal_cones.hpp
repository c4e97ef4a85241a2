#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lcqft::cones {

using cplx = std::complex<double>;
using Vec4 = Eigen::Vector4d;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

enum class CovectorClass { Nplus, Nminus, VplusTimelike, VminusTimelike, Zero, Spacelike };
std::string class_name(CovectorClass c);

// Class of the covector xi under eta = diag(1,-1,-1,-1); null within 1e-12 relative, zero below 1e-12.
CovectorClass classify_covector(const Vec4& xi);
bool is_future_causal(const Vec4& p, double tol = 1e-9);

// Points and covectors listed by vertex index 1..n. Left-to-right argument slots run n..1, so
// from_slots reverses the list; slot_order records which form the caller supplied.
struct CovectorConfig {
  std::vector<Vec4> x;
  std::vector<Vec4> xi;
  bool slot_order = false;

  static CovectorConfig from_slots(const std::vector<Vec4>& x_slots, const std::vector<Vec4>& xi_slots);
  int size() const { return static_cast<int>(x.size()); }
  CovectorConfig negated() const;
};

struct EdgeCovector {
  int i = 0, j = 0;  // vertex indices (0-based), i < j
  Vec4 p = Vec4::Zero();
};

struct ConeVerdict {
  bool member = false;
  std::vector<EdgeCovector> certificate;
  double residual = 0.0;             // max |xi_i - sum| of the certificate
  double infeasibility_margin = 0.0;  // phase-one optimum when not a member
};

// Gamma_1: strict reading (loop pairs cancel, Gamma_1 empty) or loose (a single loop, Gamma_1 = V minus 0).
enum class Gamma1Reading { Strict, Loose };

struct ConeOptions {
  bool null_geodesic = false;
  Gamma1Reading gamma1 = Gamma1Reading::Strict;
  int generators = 64;
};

// xi_i = sum_{j>i} p_ij - sum_{j<i} p_ji with future-causal p_ij. Throws ZeroSection if all xi vanish.
ConeVerdict in_gamma_n(const CovectorConfig& cfg, const ConeOptions& opt = {});
// Exact check of a certificate against the cone condition and the balance equations.
bool verify_certificate(const CovectorConfig& cfg, const std::vector<EdgeCovector>& cert, bool null_geodesic,
                        double* residual = nullptr);

// Future null covectors (1, n) with n on a Fibonacci sphere.
std::vector<Vec4> null_generators(int count);

// Order-preserving merge of two configs; positions_a lists (ascending) where a's vertices land.
CovectorConfig interleave(const CovectorConfig& a, const CovectorConfig& b, const std::vector<int>& positions_a);

// (x, xi; y, xi') with xi in N-, xi' in N+, and (x,-xi) ~ (y, xi') along a null line (flat space).
bool in_hadamard_set(const Vec4& x, const Vec4& xi, const Vec4& y, const Vec4& xi_p);
// The slot pair (x, xi; y, xi') as a vertex-ordered Gamma_2 config: vertex 1 = (y, xi'), vertex 2 = (x, xi).
CovectorConfig hadamard_to_gamma2(const Vec4& x, const Vec4& xi, const Vec4& y, const Vec4& xi_p);

// Test function exp(-i xi.y) exp(-(y - center)^T Q (y - center) / 2) on the (t, x) plane.
struct WindowedTest {
  Vec2 center = Vec2::Zero();
  Mat2 Q = Mat2::Identity();
  Vec2 xi = Vec2::Zero();
};
using Distribution2D = std::function<cplx(const WindowedTest&)>;

// "gaussian", "delta", "delta-line" (delta(x), the t-axis), "theta" (theta(t) exp(-x^2/2)),
// "theta-phase" (theta(t) exp(i t) exp(-x^2/2)).
Distribution2D builtin_distribution(const std::string& name);
std::vector<std::string> builtin_names();

// (A^* u)(phi) = |det A|^-1 u(phi o A^-1) for y -> A y. Throws SingularMap.
Distribution2D pullback(const Distribution2D& u, const Mat2& A);
// (Re u)(phi_xi) = (u(phi_xi) + conj u(phi_-xi)) / 2; Im with / 2i.
Distribution2D real_part(const Distribution2D& u);
Distribution2D imag_part(const Distribution2D& u);

struct WFScanConfig {
  double window = 1.0;
  int directions = 32;
  double xi_min = 4.0, xi_max = 64.0;
  int magnitudes = 12;
  double order = 6.0;  // singular if slope > -order
  double clamp = 1e-300;
};

struct DirectionVerdict {
  Vec2 direction;
  double slope = 0.0;  // -inf when every sample is at or below the clamp
  bool singular = false;
};

// Least-squares slope of log|u(phi_xi)| against log|xi| along one ray, window Q centred at x.
DirectionVerdict scan_direction(const Distribution2D& u, const Vec2& x, const Vec2& direction, const WFScanConfig& cfg,
                                const Mat2& Q);
std::vector<DirectionVerdict> wf_decay_scan(const Distribution2D& u, const Vec2& x, const WFScanConfig& cfg = {});

struct PullbackReport {
  std::vector<DirectionVerdict> pulled;       // scan of A^* u at x on the grid directions
  std::vector<DirectionVerdict> transported;  // scan of u at A x along A^-T of each grid direction
  int mismatches = 0;
};
PullbackReport wf_pullback_check(const Distribution2D& u, const Mat2& A, const Vec2& x, const WFScanConfig& cfg = {});

// Magnitude used for combined scans: sqrt(|Re u(phi)|^2 + |Im u(phi)|^2).
Distribution2D combined_magnitude(const Distribution2D& u);

}  // namespace lcqft::cones
