#pragma once

#include <array>
#include <complex>
#include <string>

#include <Eigen/Dense>

namespace lcqft::dirac {

using cplx = std::complex<double>;
using Mat4c = Eigen::Matrix4cd;
using Mat4 = Eigen::Matrix4d;

// Minkowski signature diag(1,-1,-1,-1).
struct Signature {
  Mat4 eta = Eigen::Vector4d(1.0, -1.0, -1.0, -1.0).asDiagonal();
  static double diag(int a) { return a == 0 ? 1.0 : -1.0; }
};

// Basis monomials are encoded as bitmasks over {g0,g1,g2,g3}; the canonical
// storage order is I; g_a; g_ag_b (a<b); g_ag_bg_c (a<b<c); g5.
constexpr int kBasisSize = 16;
int basis_mask(int index);
int basis_index(int mask);
std::string basis_label(int index);
int basis_grade(int index);

// Sign and resulting mask of the monomial product m1*m2.
struct MonomialProduct {
  int sign;
  int mask;
};
MonomialProduct monomial_product(int mask1, int mask2);

class CliffordElement {
 public:
  CliffordElement() { coeffs_.fill(0.0); }
  explicit CliffordElement(const std::array<double, kBasisSize>& c) : coeffs_(c) {}

  static CliffordElement scalar(double s);
  static CliffordElement basis(int index, double c = 1.0);
  static CliffordElement gamma(int a, double c = 1.0);
  static CliffordElement gamma5();

  double operator[](int i) const { return coeffs_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return coeffs_[static_cast<std::size_t>(i)]; }
  const std::array<double, kBasisSize>& coeffs() const { return coeffs_; }

  CliffordElement operator+(const CliffordElement& o) const;
  CliffordElement operator-(const CliffordElement& o) const;
  CliffordElement operator-() const;
  CliffordElement operator*(double s) const;
  CliffordElement operator*(const CliffordElement& o) const;

  bool is_even() const;
  bool is_odd() const;
  double max_abs() const;

 private:
  std::array<double, kBasisSize> coeffs_;
};

CliffordElement clifford_product(const CliffordElement& a, const CliffordElement& b);

struct GammaRep {
  std::array<Mat4c, 4> gammas;
  Mat4c gamma5;

  static GammaRep from_gammas(const std::array<Mat4c, 4>& g);
  // Conjugated copy K gamma_a K^-1.
  GammaRep conjugated(const Mat4c& K) const;
  // Raised index gamma^a = eta^{ab} gamma_b.
  Mat4c upper(int a) const { return Signature::diag(a) * gammas[static_cast<std::size_t>(a)]; }
  // Matrix of the basis monomial with the given canonical index.
  Mat4c monomial(int index) const;
  // Max defect of the Clifford relations and the gamma5 / trace conditions.
  double relation_defect() const;
  // gamma(n) = n^a gamma_a.
  Mat4c slash(const Eigen::Vector4d& n) const;
};

GammaRep weyl_representation();
// Dirac-Pauli representation with gamma0 = diag(I,-I).
GammaRep standard_representation();

struct TraceDet {
  Mat4c matrix;
  cplx trace;
  cplx det;
};
TraceDet represent_trace_det(const CliffordElement& e, const GammaRep& rep);
Mat4c represent(const CliffordElement& e, const GammaRep& rep);

struct Intertwiner {
  Mat4c L;
  double residual;
};
// Solves rep2(g_a) L = L rep1(g_a), i.e. rep2 = L rep1 L^-1.
Intertwiner find_intertwiner(const GammaRep& rep1, const GammaRep& rep2);

struct AdjointPair {
  Mat4c A;
  Mat4c C;
  // Max defect over the listed A/C conditions.
  double defect(const GammaRep& rep) const;
  // Same conditions, each divided by the magnitude of its terms, so rounding in ill-conditioned reps
  // does not count as a violation.
  double relative_defect(const GammaRep& rep) const;
};
AdjointPair find_adjoint_conjugation(const GammaRep& rep);

// Normalize so that det = 1 and the first nonzero entry has positive real part
// (argument in (-pi/4, pi/4]).
Mat4c normalize_unit_det(const Mat4c& L);

}  // namespace lcqft::dirac
