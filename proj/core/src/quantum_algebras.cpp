#include "lcqft/quantum_algebras.hpp"

#include <algorithm>
#include <cmath>

#include "lcqft/errors.hpp"

namespace lcqft::quantum {

namespace {

const cplx I(0.0, 1.0);

std::size_t ipow(int d, int k) {
  std::size_t r = 1;
  for (int i = 0; i < k; ++i) r *= static_cast<std::size_t>(d);
  return r;
}

void pairings_rec(std::vector<int>& free, Pairing& cur, std::vector<Pairing>& out) {
  if (free.empty()) {
    out.push_back(cur);
    return;
  }
  const int first = free.front();
  for (std::size_t k = 1; k < free.size(); ++k) {
    const int partner = free[k];
    std::vector<int> rest;
    for (std::size_t r = 1; r < free.size(); ++r)
      if (r != k) rest.push_back(free[r]);
    cur.emplace_back(first, partner);
    pairings_rec(rest, cur, out);
    cur.pop_back();
  }
}

void partitions_rec(const std::vector<int>& free, std::vector<std::vector<int>>& cur,
                    std::vector<std::vector<std::vector<int>>>& out) {
  if (free.empty()) {
    out.push_back(cur);
    return;
  }
  const int first = free.front();
  const std::size_t rest_n = free.size() - 1;
  for (std::size_t mask = 0; mask < (std::size_t{1} << rest_n); ++mask) {
    std::vector<int> block{first};
    std::vector<int> rest;
    for (std::size_t r = 0; r < rest_n; ++r) {
      if (mask & (std::size_t{1} << r)) block.push_back(free[r + 1]);
      else rest.push_back(free[r + 1]);
    }
    cur.push_back(block);
    partitions_rec(rest, cur, out);
    cur.pop_back();
  }
}

// Decode a flat table index into per-slot basis indices.
std::vector<int> decode(std::size_t idx, int d, int k) {
  std::vector<int> out(static_cast<std::size_t>(k));
  for (int s = 0; s < k; ++s) {
    out[static_cast<std::size_t>(s)] = static_cast<int>(idx % static_cast<std::size_t>(d));
    idx /= static_cast<std::size_t>(d);
  }
  return out;
}

std::size_t encode_block(const std::vector<int>& slots, const std::vector<int>& basis_idx, int d) {
  std::size_t idx = 0, mul = 1;
  for (int s : slots) {
    idx += mul * static_cast<std::size_t>(basis_idx[static_cast<std::size_t>(s)]);
    mul *= static_cast<std::size_t>(d);
  }
  return idx;
}

// sum over partitions other than the one-block partition of the products of
// block values, in enumeration order.
cplx partition_sum(const std::vector<std::vector<std::vector<int>>>& parts, const MomentTables& t,
                   const std::vector<int>& basis_idx, bool skip_single) {
  cplx total(0.0, 0.0);
  for (const auto& p : parts) {
    if (skip_single && p.size() == 1) continue;
    cplx prod(1.0, 0.0);
    for (const auto& block : p)
      prod *= t.tables[block.size()][encode_block(block, basis_idx, t.d)];
    total += prod;
  }
  return total;
}

}  // namespace

void SymplecticSpace::validate() const {
  if (sigma.rows() != sigma.cols() || sigma.rows() % 2 != 0)
    throw Error(ErrorCode::InvalidArgument, "symplectic form must be square and even-dimensional");
  if ((sigma + sigma.transpose()).cwiseAbs().maxCoeff() > 1e-14)
    throw Error(ErrorCode::InvalidArgument, "symplectic form is not antisymmetric");
  if (std::abs(sigma.determinant()) < 1e-12) throw Error(ErrorCode::InvalidArgument, "symplectic form is degenerate");
}

SymplecticSpace SymplecticSpace::canonical(int modes) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    s(2 * k, 2 * k + 1) = 1.0;
    s(2 * k + 1, 2 * k) = -1.0;
  }
  return {s};
}

WeylWord weyl_product(const SymplecticSpace& s, const WeylWord& a, const WeylWord& b) {
  return {a.phase * b.phase * std::exp(-0.5 * I * s.form(a.vector, b.vector)), a.vector + b.vector};
}

WeylWord weyl_adjoint(const WeylWord& w) { return {std::conj(w.phase), -w.vector}; }

WeylWord weyl_normal_form(const SymplecticSpace& s, const std::vector<WeylLetter>& word, Fold fold) {
  WeylWord acc{cplx(1.0, 0.0), Eigen::VectorXd::Zero(s.dim())};
  auto letter = [](const WeylLetter& l) {
    WeylWord w{cplx(1.0, 0.0), l.f};
    return l.adjoint ? weyl_adjoint(w) : w;
  };
  if (fold == Fold::Left) {
    for (const auto& l : word) acc = weyl_product(s, acc, letter(l));
  } else {
    for (auto it = word.rbegin(); it != word.rend(); ++it) acc = weyl_product(s, letter(*it), acc);
  }
  return acc;
}

double TwoPointForm::commutator_defect(const SymplecticSpace& s) const {
  return (omega2 - omega2.transpose() - I * s.sigma.cast<cplx>()).cwiseAbs().maxCoeff();
}

double TwoPointForm::min_hermitian_eigenvalue() const {
  const Eigen::MatrixXcd H = 0.5 * (omega2 + omega2.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  return es.eigenvalues().minCoeff();
}

std::vector<Pairing> pairings(int m) {
  std::vector<int> free(static_cast<std::size_t>(2 * m));
  for (int i = 0; i < 2 * m; ++i) free[static_cast<std::size_t>(i)] = i;
  std::vector<Pairing> out;
  Pairing cur;
  if (m == 0) return {Pairing{}};
  pairings_rec(free, cur, out);
  return out;
}

int pairing_sign(const Pairing& p) {
  std::vector<int> perm;
  for (const auto& [a, b] : p) {
    perm.push_back(a);
    perm.push_back(b);
  }
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inversions;
  return inversions % 2 ? -1 : 1;
}

cplx quasifree_npoint(const std::function<cplx(int, int)>& w2, int n, bool fermionic_sign) {
  if (n % 2) return {0.0, 0.0};
  cplx total(0.0, 0.0);
  for (const auto& p : pairings(n / 2)) {
    cplx prod(1.0, 0.0);
    for (const auto& [a, b] : p) prod *= w2(a, b);
    if (fermionic_sign && pairing_sign(p) < 0) prod = -prod;
    total += prod;
  }
  return total;
}

cplx quasifree_npoint(const TwoPointForm& w2, const std::vector<Eigen::VectorXcd>& fs, bool fermionic_sign) {
  return quasifree_npoint([&](int a, int b) { return w2(fs[static_cast<std::size_t>(a)], fs[static_cast<std::size_t>(b)]); },
                          static_cast<int>(fs.size()), fermionic_sign);
}

std::vector<std::vector<std::vector<int>>> set_partitions(int n) {
  std::vector<int> free(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) free[static_cast<std::size_t>(i)] = i;
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<std::vector<int>> cur;
  partitions_rec(free, cur, out);
  return out;
}

MomentTables truncated_npoint(const MomentTables& m) {
  if (m.order() > 8) throw Error(ErrorCode::InvalidArgument, "truncated n-point functions supported for n <= 8");
  MomentTables t;
  t.d = m.d;
  t.tables.resize(m.tables.size());
  for (int k = 1; k <= m.order(); ++k) {
    const auto parts = set_partitions(k);
    const std::size_t size = ipow(m.d, k);
    t.tables[static_cast<std::size_t>(k)].resize(size);
    for (std::size_t idx = 0; idx < size; ++idx) {
      const auto bi = decode(idx, m.d, k);
      t.tables[static_cast<std::size_t>(k)][idx] = m.tables[static_cast<std::size_t>(k)][idx] - partition_sum(parts, t, bi, true);
    }
  }
  return t;
}

MomentTables moments_from_truncated(const MomentTables& c) {
  MomentTables m;
  m.d = c.d;
  m.tables.resize(c.tables.size());
  for (int k = 1; k <= c.order(); ++k) {
    const auto parts = set_partitions(k);
    const std::size_t size = ipow(c.d, k);
    m.tables[static_cast<std::size_t>(k)].resize(size);
    for (std::size_t idx = 0; idx < size; ++idx)
      m.tables[static_cast<std::size_t>(k)][idx] = partition_sum(parts, c, decode(idx, c.d, k), false);
  }
  return m;
}

MomentTables quasifree_moments(const TwoPointForm& w2, int n) {
  MomentTables m;
  m.d = static_cast<int>(w2.omega2.rows());
  m.tables.resize(static_cast<std::size_t>(n + 1));
  for (int k = 1; k <= n; ++k) {
    const std::size_t size = ipow(m.d, k);
    m.tables[static_cast<std::size_t>(k)].resize(size);
    for (std::size_t idx = 0; idx < size; ++idx) {
      const auto bi = decode(idx, m.d, k);
      m.tables[static_cast<std::size_t>(k)][idx] =
          quasifree_npoint([&](int a, int b) { return w2.omega2(bi[static_cast<std::size_t>(a)], bi[static_cast<std::size_t>(b)]); }, k);
    }
  }
  return m;
}

double coherent_tail(int levels, double f_norm) {
  const double a2 = 0.5 * f_norm * f_norm;
  if (a2 == 0.0) return 0.0;
  // P(n >= N) for a Poisson law with mean a2.
  double term = std::exp(-a2);
  for (int n = 0; n < levels; ++n) term *= a2 / (n + 1);
  double tail = 0.0;
  double t = term;
  for (int n = levels; n < levels + 200 && t > 0.0; ++n) {
    tail += t;
    t *= a2 / (n + 1);
  }
  return tail;
}

OscillatorReport oscillator_weyl_check(int N, const Eigen::Vector2d& f1, const Eigen::Vector2d& f2, double step) {
  if (N < 32) throw Error(ErrorCode::TruncationTooSmall, "oscillator truncation needs at least 32 levels");
  OscillatorReport r;
  r.levels = N;
  const double reach = 2.0 * step * std::max(f1.norm(), f2.norm());
  r.tail_bound = coherent_tail(N, reach);
  if (r.tail_bound > 1e-6) throw Error(ErrorCode::TruncationTooSmall, "coherent-state tail exceeds 1e-6");

  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(N, N);
  for (int n = 1; n < N; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  const Eigen::MatrixXcd ad = a.adjoint();
  const Eigen::MatrixXcd Q = (a + ad) / std::sqrt(2.0);
  const Eigen::MatrixXcd P = I * (ad - a) / std::sqrt(2.0);

  struct Exp {
    Eigen::MatrixXcd V;
    Eigen::VectorXd lam;
  };
  auto phi_eig = [&](const Eigen::Vector2d& f) {
    const Eigen::MatrixXcd Phi = f(0) * Q + f(1) * P;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Phi);
    return Exp{es.eigenvectors(), es.eigenvalues()};
  };
  const Exp e1 = phi_eig(f1), e2 = phi_eig(f2);
  // W(t f)|0>, and <0|W(t f) as a row via W(t f)^* = W(-t f).
  auto W = [](const Exp& e, double t) {
    Eigen::VectorXcd ph(e.lam.size());
    for (Eigen::Index k = 0; k < e.lam.size(); ++k) ph(k) = std::exp(I * t * e.lam(k));
    return Eigen::MatrixXcd(e.V * ph.asDiagonal() * e.V.adjoint());
  };
  auto F = [&](const Exp& x, double t1, const Exp& y, double t2) {
    const Eigen::MatrixXcd M = W(x, t1) * W(y, t2);
    return M(0, 0);
  };
  auto mixed = [&](const Exp& x, const Exp& y, double h) {
    return (F(x, h, y, h) - F(x, h, y, -h) - F(x, -h, y, h) + F(x, -h, y, -h)) / (4.0 * h * h);
  };
  auto richardson = [&](const Exp& x, const Exp& y) {
    return (4.0 * mixed(x, y, step / 2.0) - mixed(x, y, step)) / 3.0;
  };
  r.first_derivative = -I * (W(e1, step)(0, 0) - W(e1, -step)(0, 0)) / (2.0 * step);
  r.second_derivative = -richardson(e1, e2);
  r.expected_two_point = cplx(0.5 * f1.dot(f2), 0.5 * (f1(0) * f2(1) - f1(1) * f2(0)));
  r.commutator = -(richardson(e1, e2) - richardson(e2, e1));
  r.expected_commutator = I * (f1(0) * f2(1) - f1(1) * f2(0));
  return r;
}

double DoubledSpace::defect() const {
  const Eigen::MatrixXcd Id = Eigen::MatrixXcd::Identity(dim(), dim());
  double d = (G - G.adjoint()).cwiseAbs().maxCoeff();
  d = std::max(d, (P.adjoint() * G * P - G.conjugate()).cwiseAbs().maxCoeff());
  d = std::max(d, (Q.adjoint() * G * Q - G.conjugate()).cwiseAbs().maxCoeff());
  d = std::max(d, (P * P.conjugate() - Id).cwiseAbs().maxCoeff());
  d = std::max(d, (Q * Q.conjugate() - Id).cwiseAbs().maxCoeff());
  d = std::max(d, (Q * P.conjugate() + P * Q.conjugate()).cwiseAbs().maxCoeff());
  return d;
}

DoubledSpace DoubledSpace::standard(int half) {
  const int n = 2 * half;
  DoubledSpace s;
  s.G = Eigen::MatrixXcd::Identity(n, n);
  s.P = Eigen::MatrixXcd::Zero(n, n);
  s.P.topRightCorner(half, half).setIdentity();
  s.P.bottomLeftCorner(half, half).setIdentity();
  s.Q = Eigen::MatrixXcd::Identity(n, n);
  s.Q.bottomRightCorner(half, half) *= -1.0;
  s.transport = Eigen::MatrixXcd::Identity(n, n);
  return s;
}

DoubledSpace DoubledSpace::transported(const Eigen::MatrixXcd& T) const {
  const Eigen::MatrixXcd Ti = T.inverse();
  DoubledSpace s;
  s.G = Ti.adjoint() * G * Ti;
  s.G = 0.5 * (s.G + s.G.adjoint());
  s.P = T * P * Ti.conjugate();
  s.Q = T * Q * Ti.conjugate();
  s.transport = T * transport;
  return s;
}

Eigen::VectorXcd DoubledSpace::second_half(const Eigen::VectorXcd& v) const {
  const int half = dim() / 2;
  if (v.size() != half) throw Error(ErrorCode::InvalidArgument, "second_half expects a half-dimension vector");
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(dim());
  w.tail(half) = v;
  return transport * w;
}

CarFock::CarFock(const DoubledSpace& space) : space_(space) {
  const int n = space.dim();
  if (n > 12) throw Error(ErrorCode::DimTooLarge, "CAR Fock model limited to doubled dimension 12");
  if (n % 2) throw Error(ErrorCode::InvalidArgument, "doubled space must be even-dimensional");
  modes_ = n / 2;

  // Real Gram-Schmidt on +-real vectors.
  std::vector<Eigen::VectorXcd> xs;
  for (int k = 0; k < n && static_cast<int>(xs.size()) < n; ++k) {
    const Eigen::VectorXcd e = Eigen::VectorXcd::Unit(n, k);
    for (int variant = 0; variant < 2; ++variant) {
      Eigen::VectorXcd x = variant == 0 ? Eigen::VectorXcd(e + space.plus(e)) : Eigen::VectorXcd(I * (e - space.plus(e)));
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& y : xs) x -= space.inner(y, x).real() * y;
      const double nrm2 = space.inner(x, x).real();
      if (nrm2 < 1e-10) continue;
      xs.push_back(x / std::sqrt(nrm2));
      if (static_cast<int>(xs.size()) == n) break;
    }
  }
  if (static_cast<int>(xs.size()) != n) throw Error(ErrorCode::InvalidArgument, "could not build a +-adapted basis");
  basis_.resize(n, modes_);
  for (int j = 0; j < modes_; ++j)
    basis_.col(j) = (xs[static_cast<std::size_t>(2 * j)] - I * xs[static_cast<std::size_t>(2 * j + 1)]) / std::sqrt(2.0);

  Eigen::Matrix2cd Z, sm, Id2;
  Z << 1, 0, 0, -1;
  sm << 0, 1, 0, 0;
  Id2.setIdentity();
  auto kron = [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
  };
  for (int j = 0; j < modes_; ++j) {
    Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(1, 1);
    for (int k = 0; k < modes_; ++k) op = kron(op, k < j ? Eigen::MatrixXcd(Z) : k == j ? Eigen::MatrixXcd(sm) : Eigen::MatrixXcd(Id2));
    annihilators_.push_back(op);
  }
  parity_ = Eigen::MatrixXcd::Identity(1, 1);
  for (int k = 0; k < modes_; ++k) parity_ = kron(parity_, Z);
}

Eigen::MatrixXcd CarFock::B(const Eigen::VectorXcd& f) const {
  const int dimF = 1 << modes_;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dimF, dimF);
  for (int j = 0; j < modes_; ++j) {
    const Eigen::VectorXcd e = basis_.col(j);
    const cplx alpha = space_.inner(e, f);
    const cplx beta = space_.inner(space_.plus(e), f);
    const auto& a = annihilators_[static_cast<std::size_t>(j)];
    out += alpha * a.adjoint() + beta * a;
  }
  return out;
}

Eigen::VectorXcd CarFock::vacuum() const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(1 << modes_);
  v(0) = 1.0;
  return v;
}

}  // namespace lcqft::quantum
