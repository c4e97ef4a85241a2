#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace lcqft::quantum {

using cplx = std::complex<double>;

struct SymplecticSpace {
  Eigen::MatrixXd sigma;

  int dim() const { return static_cast<int>(sigma.rows()); }
  double form(const Eigen::VectorXd& f, const Eigen::VectorXd& h) const { return f.dot(sigma * h); }
  // Throws InvalidArgument unless sigma is antisymmetric, even-dimensional and nondegenerate.
  void validate() const;
  static SymplecticSpace canonical(int modes);
};

struct WeylWord {
  cplx phase{1.0, 0.0};
  Eigen::VectorXd vector;
};

// One letter of a Weyl word: W(f), or W(f)* when adjoint is set.
struct WeylLetter {
  Eigen::VectorXd f;
  bool adjoint = false;
};

enum class Fold { Left, Right };

WeylWord weyl_product(const SymplecticSpace& s, const WeylWord& a, const WeylWord& b);
WeylWord weyl_adjoint(const WeylWord& w);
WeylWord weyl_normal_form(const SymplecticSpace& s, const std::vector<WeylLetter>& word, Fold fold = Fold::Left);

// omega2 on a real basis, extended bilinearly: omega2(f, h) = f^T Omega h.
struct TwoPointForm {
  Eigen::MatrixXcd omega2;

  cplx operator()(const Eigen::VectorXcd& f, const Eigen::VectorXcd& h) const {
    return f.transpose() * omega2 * h;
  }
  // max |Omega - Omega^T - i sigma|
  double commutator_defect(const SymplecticSpace& s) const;
  // Smallest eigenvalue of the Hermitian Gram f* Omega f.
  double min_hermitian_eigenvalue() const;
};

using Pairing = std::vector<std::pair<int, int>>;
// All pairings of {0..2m-1} with each pair ordered and first elements increasing,
// in recursive order (the first free element pairs with each later one in turn).
std::vector<Pairing> pairings(int m);
// Sign of the permutation (i1 j1 i2 j2 ...).
int pairing_sign(const Pairing& p);

// Quasi-free n-point function from a two-point kernel on slot indices.
cplx quasifree_npoint(const std::function<cplx(int, int)>& w2, int n, bool fermionic_sign = false);
cplx quasifree_npoint(const TwoPointForm& w2, const std::vector<Eigen::VectorXcd>& fs, bool fermionic_sign = false);

// Multilinear tables on a d-dimensional test space; tables[k] has d^k entries
// for k = 0..n (tables[0] unused), index = i_1 + d i_2 + ... (slot 1 fastest).
struct MomentTables {
  int d = 0;
  std::vector<std::vector<cplx>> tables;

  int order() const { return static_cast<int>(tables.size()) - 1; }
};

// Set partitions of {0..n-1}; the block containing the smallest free element is
// chosen first, its companions enumerated by ascending subset mask.
std::vector<std::vector<std::vector<int>>> set_partitions(int n);

MomentTables truncated_npoint(const MomentTables& moments);
MomentTables moments_from_truncated(const MomentTables& cumulants);
// Moment tables of the quasi-free state with the given two-point matrix on the basis.
MomentTables quasifree_moments(const TwoPointForm& w2, int n);

struct OscillatorReport {
  int levels = 0;
  double tail_bound = 0.0;
  cplx first_derivative;       // (-i) d/dt omega(W(t f1)) at 0
  cplx second_derivative;      // (-i)^2 d^2/dt1 dt2 omega(W(t1 f1) W(t2 f2)) at 0
  cplx expected_two_point;     // 1/2 (f1.f2) + i/2 sigma(f1, f2)
  cplx commutator;             // from the braided product
  cplx expected_commutator;    // i sigma(f1, f2)
  double two_point_error() const { return std::abs(second_derivative - expected_two_point); }
  double commutator_error() const { return std::abs(commutator - expected_commutator); }
};

// One-mode oscillator with Phi(f) = f1 Q + f2 P on an N-level truncation.
OscillatorReport oscillator_weyl_check(int levels, const Eigen::Vector2d& f1, const Eigen::Vector2d& f2,
                                       double step = 1e-3);
// Poisson tail of the coherent state W(f)|0> beyond N levels, |alpha|^2 = |f|^2/2.
double coherent_tail(int levels, double f_norm);

// Doubled space with Hermitian Gram G and antilinear maps f+ = P conj(f), fc = Q conj(f).
struct DoubledSpace {
  Eigen::MatrixXcd G, P, Q;

  int dim() const { return static_cast<int>(G.rows()); }
  cplx inner(const Eigen::VectorXcd& f, const Eigen::VectorXcd& h) const { return f.dot(G * h); }
  Eigen::VectorXcd plus(const Eigen::VectorXcd& f) const { return P * f.conjugate(); }
  Eigen::VectorXcd conj_c(const Eigen::VectorXcd& f) const { return Q * f.conjugate(); }
  // Max defect of the structural identities on the basis.
  double defect() const;

  static DoubledSpace standard(int half_dim);
  // Transport by an invertible T: f -> T f.
  DoubledSpace transported(const Eigen::MatrixXcd& T) const;
  // 0 (+) v in the space's own coordinates (first half zero before transport).
  Eigen::VectorXcd second_half(const Eigen::VectorXcd& v) const;
  Eigen::MatrixXcd transport;  // identity for the standard space
};

class CarFock {
 public:
  explicit CarFock(const DoubledSpace& space);

  int modes() const { return modes_; }
  const DoubledSpace& space() const { return space_; }
  Eigen::MatrixXcd B(const Eigen::VectorXcd& f) const;
  Eigen::MatrixXcd psi(const Eigen::VectorXcd& v) const { return B(space_.second_half(v)); }
  Eigen::MatrixXcd psi_plus(const Eigen::VectorXcd& v) const { return B(space_.plus(space_.second_half(v))); }
  const Eigen::MatrixXcd& parity() const { return parity_; }
  Eigen::VectorXcd vacuum() const;
  // Basis e_1..e_n with {e_j, e_j+} orthonormal (columns).
  const Eigen::MatrixXcd& mode_basis() const { return basis_; }

  // alpha_C(B(f)) = B(f^{c+}); tau(X) = Gamma X Gamma.
  Eigen::VectorXcd charge_conjugate_vector(const Eigen::VectorXcd& f) const {
    return space_.plus(space_.conj_c(f));
  }
  Eigen::MatrixXcd alpha_c(const Eigen::VectorXcd& f) const { return B(charge_conjugate_vector(f)); }
  Eigen::MatrixXcd tau(const Eigen::MatrixXcd& X) const { return parity_ * X * parity_; }

 private:
  DoubledSpace space_;
  int modes_;
  Eigen::MatrixXcd basis_;
  std::vector<Eigen::MatrixXcd> annihilators_;
  Eigen::MatrixXcd parity_;
};

}  // namespace lcqft::quantum
