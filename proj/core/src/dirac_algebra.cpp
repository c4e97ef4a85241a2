#include "lcqft/dirac_algebra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "lcqft/errors.hpp"

namespace lcqft::dirac {

namespace {

constexpr std::array<int, kBasisSize> kMasks = {
    0b0000,                                  // I
    0b0001, 0b0010, 0b0100, 0b1000,          // g0..g3
    0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100,  // g0g1 g0g2 g0g3 g1g2 g1g3 g2g3
    0b0111, 0b1011, 0b1101, 0b1110,          // g0g1g2 g0g1g3 g0g2g3 g1g2g3
    0b1111};                                 // g5

struct Table {
  std::array<std::array<int, kBasisSize>, kBasisSize> index{};
  std::array<std::array<int, kBasisSize>, kBasisSize> sign{};
  std::array<int, 16> mask_to_index{};
};

const Table& table() {
  static const Table t = [] {
    Table out;
    for (int i = 0; i < kBasisSize; ++i) out.mask_to_index[static_cast<std::size_t>(kMasks[static_cast<std::size_t>(i)])] = i;
    for (int i = 0; i < kBasisSize; ++i) {
      for (int j = 0; j < kBasisSize; ++j) {
        const auto p = monomial_product(kMasks[static_cast<std::size_t>(i)], kMasks[static_cast<std::size_t>(j)]);
        out.index[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = out.mask_to_index[static_cast<std::size_t>(p.mask)];
        out.sign[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = p.sign;
      }
    }
    return out;
  }();
  return t;
}

Eigen::MatrixXcd kron(const Mat4c& a, const Mat4c& b) {
  Eigen::MatrixXcd out(16, 16);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.block(4 * i, 4 * j, 4, 4) = a(i, j) * b;
  return out;
}

Mat4c unvec(const Eigen::VectorXcd& v) {
  Mat4c m;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) m(i, j) = v(4 * j + i);
  return m;
}

// One-dimensional nullspace of a stacked system, or nullopt-like failure flag.
bool nullspace_1d(const Eigen::MatrixXcd& sys, Mat4c& out) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sys, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const Eigen::Index n = s.size();
  const double smax = s(0);
  if (smax <= 0.0) return false;
  if (s(n - 1) > 1e-10 * smax) return false;
  if (s(n - 2) <= 1e-6 * smax) return false;
  out = unvec(svd.matrixV().col(n - 1));
  return true;
}

cplx first_nonzero(const Mat4c& m) {
  const double scale = m.cwiseAbs().maxCoeff();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (std::abs(m(i, j)) > 1e-12 * scale) return m(i, j);
  return cplx(0.0);
}

}  // namespace

int basis_mask(int index) { return kMasks.at(static_cast<std::size_t>(index)); }

int basis_index(int mask) { return table().mask_to_index.at(static_cast<std::size_t>(mask)); }

int basis_grade(int index) { return std::popcount(static_cast<unsigned>(basis_mask(index))); }

std::string basis_label(int index) {
  const int m = basis_mask(index);
  if (m == 0) return "I";
  if (m == 0b1111) return "g5";
  std::string s;
  for (int a = 0; a < 4; ++a)
    if (m & (1 << a)) s += "g" + std::to_string(a);
  return s;
}

MonomialProduct monomial_product(int mask1, int mask2) {
  // Move each generator of mask2 leftwards past the larger generators of mask1,
  // then square the shared ones with eta.
  int sign = 1;
  for (int b = 0; b < 4; ++b) {
    if (!(mask2 & (1 << b))) continue;
    int larger = 0;
    for (int a = b + 1; a < 4; ++a)
      if (mask1 & (1 << a)) ++larger;
    if (larger % 2) sign = -sign;
  }
  const int common = mask1 & mask2;
  for (int a = 1; a < 4; ++a)
    if (common & (1 << a)) sign = -sign;
  return {sign, mask1 ^ mask2};
}

CliffordElement CliffordElement::scalar(double s) { return basis(0, s); }

CliffordElement CliffordElement::basis(int index, double c) {
  CliffordElement e;
  e[index] = c;
  return e;
}

CliffordElement CliffordElement::gamma(int a, double c) { return basis(1 + a, c); }

CliffordElement CliffordElement::gamma5() { return basis(15); }

CliffordElement CliffordElement::operator+(const CliffordElement& o) const {
  CliffordElement r;
  for (int i = 0; i < kBasisSize; ++i) r[i] = (*this)[i] + o[i];
  return r;
}

CliffordElement CliffordElement::operator-(const CliffordElement& o) const {
  CliffordElement r;
  for (int i = 0; i < kBasisSize; ++i) r[i] = (*this)[i] - o[i];
  return r;
}

CliffordElement CliffordElement::operator-() const { return (*this) * -1.0; }

CliffordElement CliffordElement::operator*(double s) const {
  CliffordElement r;
  for (int i = 0; i < kBasisSize; ++i) r[i] = (*this)[i] * s;
  return r;
}

CliffordElement CliffordElement::operator*(const CliffordElement& o) const {
  const Table& t = table();
  CliffordElement r;
  for (int i = 0; i < kBasisSize; ++i) {
    const double a = (*this)[i];
    if (a == 0.0) continue;
    for (int j = 0; j < kBasisSize; ++j) {
      const double b = o[j];
      if (b == 0.0) continue;
      const auto ui = static_cast<std::size_t>(i);
      const auto uj = static_cast<std::size_t>(j);
      r[t.index[ui][uj]] += t.sign[ui][uj] * a * b;
    }
  }
  return r;
}

bool CliffordElement::is_even() const {
  for (int i = 0; i < kBasisSize; ++i)
    if (basis_grade(i) % 2 && (*this)[i] != 0.0) return false;
  return true;
}

bool CliffordElement::is_odd() const {
  for (int i = 0; i < kBasisSize; ++i)
    if (basis_grade(i) % 2 == 0 && (*this)[i] != 0.0) return false;
  return true;
}

double CliffordElement::max_abs() const {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

CliffordElement clifford_product(const CliffordElement& a, const CliffordElement& b) { return a * b; }

GammaRep GammaRep::from_gammas(const std::array<Mat4c, 4>& g) {
  GammaRep r;
  r.gammas = g;
  r.gamma5 = g[0] * g[1] * g[2] * g[3];
  return r;
}

GammaRep GammaRep::conjugated(const Mat4c& K) const {
  const Mat4c Ki = K.inverse();
  std::array<Mat4c, 4> g;
  for (std::size_t a = 0; a < 4; ++a) g[a] = K * gammas[a] * Ki;
  return from_gammas(g);
}

Mat4c GammaRep::monomial(int index) const {
  const int m = basis_mask(index);
  Mat4c out = Mat4c::Identity();
  for (int a = 0; a < 4; ++a)
    if (m & (1 << a)) out = out * gammas[static_cast<std::size_t>(a)];
  return out;
}

double GammaRep::relation_defect() const {
  double d = 0.0;
  const Mat4c I = Mat4c::Identity();
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const Mat4c anti = gammas[static_cast<std::size_t>(a)] * gammas[static_cast<std::size_t>(b)] +
                         gammas[static_cast<std::size_t>(b)] * gammas[static_cast<std::size_t>(a)];
      const double target = a == b ? 2.0 * Signature::diag(a) : 0.0;
      d = std::max(d, (anti - target * I).cwiseAbs().maxCoeff());
    }
    d = std::max(d, std::abs(gammas[static_cast<std::size_t>(a)].trace()));
  }
  d = std::max(d, (gamma5 * gamma5 + I).cwiseAbs().maxCoeff());
  return d;
}

Mat4c GammaRep::slash(const Eigen::Vector4d& n) const {
  Mat4c out = Mat4c::Zero();
  for (int a = 0; a < 4; ++a) out += n(a) * gammas[static_cast<std::size_t>(a)];
  return out;
}

GammaRep weyl_representation() {
  const cplx i(0.0, 1.0);
  Eigen::Matrix2cd I2 = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd s1, s2, s3;
  s1 << 0, 1, 1, 0;
  s2 << 0, -i, i, 0;
  s3 << 1, 0, 0, -1;
  auto offdiag = [](const Eigen::Matrix2cd& upper, const Eigen::Matrix2cd& lower) {
    Mat4c m = Mat4c::Zero();
    m.block<2, 2>(0, 2) = upper;
    m.block<2, 2>(2, 0) = lower;
    return m;
  };
  return GammaRep::from_gammas({offdiag(I2, I2), offdiag(-s1, s1), offdiag(-s2, s2), offdiag(-s3, s3)});
}

GammaRep standard_representation() {
  const cplx i(0.0, 1.0);
  Eigen::Matrix2cd I2 = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd s1, s2, s3;
  s1 << 0, 1, 1, 0;
  s2 << 0, -i, i, 0;
  s3 << 1, 0, 0, -1;
  Mat4c g0 = Mat4c::Zero();
  g0.block<2, 2>(0, 0) = I2;
  g0.block<2, 2>(2, 2) = -I2;
  auto spatial = [](const Eigen::Matrix2cd& s) {
    Mat4c m = Mat4c::Zero();
    m.block<2, 2>(0, 2) = s;
    m.block<2, 2>(2, 0) = -s;
    return m;
  };
  return GammaRep::from_gammas({g0, spatial(s1), spatial(s2), spatial(s3)});
}

Mat4c represent(const CliffordElement& e, const GammaRep& rep) {
  Mat4c out = Mat4c::Zero();
  for (int i = 0; i < kBasisSize; ++i)
    if (e[i] != 0.0) out += e[i] * rep.monomial(i);
  return out;
}

TraceDet represent_trace_det(const CliffordElement& e, const GammaRep& rep) {
  TraceDet r;
  r.matrix = represent(e, rep);
  r.trace = r.matrix.trace();
  r.det = r.matrix.determinant();
  return r;
}

Mat4c normalize_unit_det(const Mat4c& L) {
  const cplx det = L.determinant();
  Mat4c M = L / std::pow(det, 0.25);
  // Remaining freedom: multiplication by a fourth root of unity.
  const cplx z = first_nonzero(M);
  const double arg = std::arg(z);
  const double pi = std::acos(-1.0);
  const int k = static_cast<int>(std::lround(arg / (pi / 2.0)));
  M *= std::polar(1.0, -k * pi / 2.0);
  return M;
}

Intertwiner find_intertwiner(const GammaRep& rep1, const GammaRep& rep2) {
  Eigen::MatrixXcd sys(64, 16);
  const Mat4c I = Mat4c::Identity();
  for (int a = 0; a < 4; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    sys.block(16 * a, 0, 16, 16) = kron(I, rep2.gammas[ua]) - kron(rep1.gammas[ua].transpose(), I);
  }
  Mat4c L;
  if (!nullspace_1d(sys, L)) throw Error(ErrorCode::NoIntertwiner, "intertwining equations lack a one-dimensional solution space");
  L = normalize_unit_det(L);
  double res = 0.0;
  for (std::size_t a = 0; a < 4; ++a)
    res = std::max(res, (rep2.gammas[a] * L - L * rep1.gammas[a]).cwiseAbs().maxCoeff());
  return {L, res};
}

AdjointPair find_adjoint_conjugation(const GammaRep& rep) {
  const Mat4c I = Mat4c::Identity();
  Eigen::MatrixXcd sysA(64, 16), sysC(64, 16);
  for (int a = 0; a < 4; ++a) {
    const Mat4c& g = rep.gammas[static_cast<std::size_t>(a)];
    sysA.block(16 * a, 0, 16, 16) = kron(I, g.adjoint()) - kron(g.transpose(), I);
    sysC.block(16 * a, 0, 16, 16) = kron(g.transpose(), I) + kron(I, g.conjugate());
  }
  Mat4c A, C;
  if (!nullspace_1d(sysA, A)) throw Error(ErrorCode::NoSolution, "no one-dimensional solution space for A");
  if (!nullspace_1d(sysC, C)) throw Error(ErrorCode::NoSolution, "no one-dimensional solution space for C");

  const cplx t = (A * rep.gammas[0]).trace();
  if (std::abs(t) < 1e-12) throw Error(ErrorCode::NoSolution, "A gamma(n0) is traceless");
  A *= 4.0 / t;
  A = 0.5 * (A + A.adjoint());

  const Mat4c cc = C.conjugate() * C;
  const cplx mu = cc.trace() / 4.0;
  if (std::abs(mu.imag()) > 1e-8 * std::abs(mu) || mu.real() <= 0.0)
    throw Error(ErrorCode::NoSolution, "conj(C) C is not a positive multiple of I");
  C /= std::sqrt(mu.real());
  const cplx z = first_nonzero(C);
  C *= std::conj(z) / std::abs(z);
  return {A, C};
}

double AdjointPair::defect(const GammaRep& rep) const {
  double d = (A - A.adjoint()).cwiseAbs().maxCoeff();
  d = std::max(d, (C.conjugate() * C - Mat4c::Identity()).cwiseAbs().maxCoeff());
  const Mat4c Ai = A.inverse();
  const Mat4c Ci = C.inverse();
  for (const Mat4c& g : rep.gammas) {
    d = std::max(d, (g.adjoint() - A * g * Ai).cwiseAbs().maxCoeff());
    d = std::max(d, (-g.conjugate() - C * g * Ci).cwiseAbs().maxCoeff());
  }
  d = std::max(d, (A + C.adjoint() * A.conjugate() * C).cwiseAbs().maxCoeff());
  return d;
}

double AdjointPair::relative_defect(const GammaRep& rep) const {
  auto mx = [](const Mat4c& m) { return m.cwiseAbs().maxCoeff(); };
  const Mat4c Ai = A.inverse();
  const Mat4c Ci = C.inverse();
  double d = mx(A - A.adjoint()) / mx(A);
  d = std::max(d, mx(C.conjugate() * C - Mat4c::Identity()) / (1.0 + mx(C) * mx(C)));
  for (const Mat4c& g : rep.gammas) {
    d = std::max(d, mx(g.adjoint() - A * g * Ai) / (mx(g) * (1.0 + mx(A) * mx(Ai))));
    d = std::max(d, mx(-g.conjugate() - C * g * Ci) / (mx(g) * (1.0 + mx(C) * mx(Ci))));
  }
  d = std::max(d, mx(A + C.adjoint() * A.conjugate() * C) / (mx(A) * (1.0 + mx(C) * mx(C))));
  return d;
}

}  // namespace lcqft::dirac
