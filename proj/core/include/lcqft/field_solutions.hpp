#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace lcqft::fields {

using cplx = std::complex<double>;
using Vec4c = Eigen::Vector4cd;

struct Monomial {
  cplx coeff;
  std::array<int, 4> exps{};  // powers of l0..l3
};

// P(l) exp(-(l - center)^T width (l - center)); the center may be complex.
struct GaussianTerm {
  std::vector<Monomial> poly{{cplx(1.0), {0, 0, 0, 0}}};
  Vec4c center = Vec4c::Zero();
  Eigen::Matrix4d width = Eigen::Matrix4d::Identity();

  cplx operator()(const Vec4c& l) const;
};

enum class HalfSpace { None, PositiveSmooth, PositiveHard, NegativeSmooth, NegativeHard };

// f^(l) = sum_i P_i(l) exp(-(l - c_i)^T S_i (l - c_i)), times an optional half-space factor.
struct FourierTestFunction {
  std::vector<GaussianTerm> terms;
  HalfSpace support = HalfSpace::None;

  cplx operator()(const Vec4c& l) const;
  // Fourier transform of the complex conjugate function: conj(f^(-l)).
  FourierTestFunction conjugate() const;
  // Multiplies f^ by (m^2 - l0^2 + |l|^2), the symbol of the Klein-Gordon operator.
  FourierTestFunction apply_kg(double m) const;
  // Validates positive-definite widths.
  void validate() const;
};

double half_space_factor(HalfSpace s, double l0);

struct KGParams {
  double m = 1.0;
  double xi = 0.0;  // inert in flat space
};

// Shell quadrature over l = m sinh(u) n: trapezoid in u (2 nodes + 1 points), Gauss-Legendre in
// cos(theta) (nodes points) and trapezoid in phi (2 nodes points).
struct QuadratureConfig {
  int nodes = 24;
  bool check_convergence = true;
  double rel_tol = 1e-7;
};

struct QuadratureResult {
  cplx value;
  cplx value_refined;  // at twice the node count when checked
  double l1 = 0.0;     // quadrature of the integrand magnitude before cancellations
};

// omega2(f, h) = (2 pi)^-3 int d^3l / (2 w) f^(l) h^(-l), l = (w, l), w = sqrt(|l|^2 + m^2).
cplx vacuum_two_point(const FourierTestFunction& f, const FourierTestFunction& h, const KGParams& p,
                      const QuadratureConfig& cfg = {});
QuadratureResult vacuum_two_point_detail(const FourierTestFunction& f, const FourierTestFunction& h,
                                         const KGParams& p, const QuadratureConfig& cfg = {});
// E(f, h) = -i (2 pi)^-3 int d^3l / (2 w) [f^(l) h^(-l) - f^(-l) h^(l)].
cplx commutator_pairing(const FourierTestFunction& f, const FourierTestFunction& h, const KGParams& p,
                        const QuadratureConfig& cfg = {});
// (2 pi)^-3 int d^3eta / (2 eta0) exp(-i x.eta) exp(-|eta|^2 / (4 n^2)) f^(-eta); x.eta Minkowski,
// |eta| Euclidean. Optionally multiplies the integrand by the shell symbol m^2 - eta^2.
cplx smoothed_two_point(const Vec4c& x, int n, const FourierTestFunction& f, const KGParams& p,
                        const QuadratureConfig& cfg = {}, bool apply_kg_symbol = false);
// The smoothing kernel centred at real x as a test function: exp(-i l.x) exp(-|l|^2 / (4 n^2)).
FourierTestFunction smoothing_kernel(const Eigen::Vector4d& x, int n);

// Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes, weights;
};
const QuadratureRule& gauss_legendre(int n);

// 1+1 lattice with Dirichlet spatial boundary; fields are nt x nx (row = time slice).
struct Lattice1p1 {
  int nx = 64;
  int nt = 128;
  double dx = 0.1;
  double dt = 0.05;
  double m = 1.0;

  void validate() const;
};

using LatticeField = Eigen::MatrixXd;

// (phi^{n+1} - 2 phi^n + phi^{n-1}) / dt^2 - Lap_x phi^n + m^2 phi^n on rows 1..nt-2.
LatticeField apply_kg(const Lattice1p1& l, const LatticeField& phi);
LatticeField retarded(const Lattice1p1& l, const LatticeField& f);  // E+
LatticeField advanced(const Lattice1p1& l, const LatticeField& f);  // E-
LatticeField causal_propagator(const Lattice1p1& l, const LatticeField& f);  // E = E- - E+

struct GreenKernels {
  // Impulse responses for a unit source at (n, j), dense in (n, j) source order.
  std::vector<LatticeField> eplus, eminus, e;
  int nt = 0, nx = 0;
};
GreenKernels lattice_green(const Lattice1p1& l);

// Whether every nonzero of phi lies in the stencil cone |j - j0| <= |n - n0| + margin
// with n on the given side (+1 future, -1 past) of n0.
bool within_stencil_cone(const LatticeField& phi, int n0, int j0, int side, int margin = 0);

// sum_j (phi^n psi^{n+1} - phi^{n+1} psi^n) dx / dt for phi = E f, psi = E h.
double cauchy_symplectic(const Lattice1p1& l, const LatticeField& Ef, const LatticeField& Eh, int slice);
// sum f (E h) dx dt
double spacetime_pairing(const Lattice1p1& l, const LatticeField& f, const LatticeField& Eh);

struct TimeSliceDecomposition {
  LatticeField chi;
  LatticeField fprime;
  LatticeField h;
};
// f' = -K(chi E f) supported in the slab rows [row_lo, row_hi]; h = E-(f - f').
TimeSliceDecomposition timeslice_decompose(const Lattice1p1& l, const LatticeField& f, int row_lo, int row_hi);
double quintic_smoothstep(double s);

}  // namespace lcqft::fields
