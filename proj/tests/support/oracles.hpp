#pragma once

// Reference computations for the tests, written from the definitions and kept
// apart from the library code paths: polynomial arithmetic by schoolbook
// multiplication and reduction, entries of operators by explicit loops,
// amplitudes by direct theta sums.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "qps/quasidist.hpp"

namespace oracle {

using qps::cplx;
using qps::FieldContext;
using qps::FieldElement;
using qps::Frame;
using qps::Matrix;
using qps::Vector;

inline int mod(long long a, int d) {
  const long long r = a % d;
  return static_cast<int>(r < 0 ? r + d : r);
}

// Field elements as coefficient vectors in powers of the root x.
using Poly = std::vector<int>;

inline Poly coeffs(const FieldContext& f, FieldElement a) { return f.coeffs(a); }
inline FieldElement element(const FieldContext& f, const Poly& c) { return f.from_coeffs(c); }

inline Poly add(const Poly& a, const Poly& b, int d) {
  Poly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = mod(a[i] + b[i], d);
  return r;
}

inline Poly neg(const Poly& a, int d) {
  Poly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = mod(-a[i], d);
  return r;
}

/// Product reduced modulo the monic defining polynomial.
inline Poly mul(const Poly& a, const Poly& b, const qps::Polynomial& p) {
  const int n = p.degree();
  const int d = p.modulus;
  std::vector<long long> full(2 * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) full[i + j] += static_cast<long long>(a[i]) * b[j];
  for (int k = 2 * n - 2; k >= n; --k) {
    const long long c = full[k] % d;
    full[k] = 0;
    for (int i = 0; i < n; ++i) full[k - n + i] -= c * p.coeffs[i];
  }
  Poly r(n);
  for (int i = 0; i < n; ++i) r[i] = mod(full[i], d);
  return r;
}

inline Poly one(int n) {
  Poly r(n, 0);
  r[0] = 1;
  return r;
}

inline Poly pow(Poly a, long long e, const qps::Polynomial& p) {
  Poly r = one(p.degree());
  while (e > 0) {
    if (e & 1) r = mul(r, a, p);
    a = mul(a, a, p);
    e >>= 1;
  }
  return r;
}

/// a + a^d + ... + a^(d^(n-1)); the result is a constant polynomial.
inline int trace(const Poly& a, const qps::Polynomial& p) {
  const int d = p.modulus;
  Poly acc(a.size(), 0);
  Poly term = a;
  for (int k = 0; k < p.degree(); ++k) {
    acc = add(acc, term, d);
    term = pow(term, d, p);
  }
  return acc[0];
}

inline int trace(const FieldContext& f, FieldElement a) { return trace(coeffs(f, a), f.polynomial()); }

inline FieldElement mul(const FieldContext& f, FieldElement a, FieldElement b) {
  return element(f, mul(coeffs(f, a), coeffs(f, b), f.polynomial()));
}
inline FieldElement add(const FieldContext& f, FieldElement a, FieldElement b) {
  return element(f, add(coeffs(f, a), coeffs(f, b), f.d()));
}

inline cplx omega(long long t, int d) {
  const double ang = 2.0 * std::numbers::pi * static_cast<double>(mod(t, d)) / d;
  return {std::cos(ang), std::sin(ang)};
}

inline cplx chi(const FieldContext& f, FieldElement a) { return omega(trace(f, a), f.d()); }

/// Multiplicative order by repeated multiplication.
inline long long order(const Poly& a, const qps::Polynomial& p) {
  const Poly e = one(p.degree());
  Poly x = a;
  for (long long k = 1;; ++k) {
    if (x == e) return k;
    x = mul(x, a, p);
  }
}

/// Lexicographically smallest monic primitive polynomial of degree n > 1,
/// comparing (c_{n-1}, ..., c_0).
inline qps::Polynomial smallest_primitive(int d, int n) {
  long long q = 1;
  for (int i = 0; i < n; ++i) q *= d;
  long long combos = q;
  for (long long code = 0; code < combos; ++code) {
    qps::Polynomial p{d, std::vector<int>(n + 1, 0)};
    p.coeffs[n] = 1;
    long long c = code;
    for (int i = 0; i < n; ++i) {
      p.coeffs[i] = static_cast<int>(c % d);
      c /= d;
    }
    if (p.coeffs[0] == 0) continue;
    Poly x(n, 0);
    x[1] = 1;
    // primitive iff x has order q-1, which also forces irreducibility
    if (order(x, p) == q - 1) return p;
  }
  return {};
}

/// Smallest generator of (Z_d)^*.
inline int smallest_primitive_root(int d) {
  for (int g = 2; g < d; ++g) {
    long long x = 1;
    int k = 1;
    for (; k < d; ++k) {
      x = x * g % d;
      if (x == 1) break;
    }
    if (k == d - 1) return g;
  }
  return 1;
}

inline int inverse_mod(int a, int d) {
  for (int b = 1; b < d; ++b)
    if (mod(static_cast<long long>(a) * b, d) == 1) return b;
  return 0;
}

// ---------------------------------------------------------------------------
// Operators laid out by the frame index.

inline Matrix U(const Frame& fr, FieldElement nu) {
  const auto& f = fr.field();
  const auto q = static_cast<Eigen::Index>(fr.dim());
  Matrix m = Matrix::Zero(q, q);
  for (auto l : f.elements()) m(fr.index(add(f, l, nu)), fr.index(l)) = 1.0;
  return m;
}

inline Matrix V(const Frame& fr, FieldElement mu) {
  const auto& f = fr.field();
  const auto q = static_cast<Eigen::Index>(fr.dim());
  Matrix m = Matrix::Zero(q, q);
  for (auto l : f.elements()) m(fr.index(l), fr.index(l)) = chi(f, mul(f, mu, l));
  return m;
}

inline Matrix fourier(const Frame& fr) {
  const auto& f = fr.field();
  const auto q = static_cast<Eigen::Index>(fr.dim());
  Matrix m(q, q);
  for (auto a : f.elements())
    for (auto b : f.elements()) m(fr.index(a), fr.index(b)) = chi(f, mul(f, a, b)) / std::sqrt(double(q));
  return m;
}

/// Odd characteristic: chi(2^-1 mu nu) U_nu V_mu.
inline Matrix D_odd(const Frame& fr, FieldElement mu, FieldElement nu) {
  const auto& f = fr.field();
  const FieldElement half = f.from_int(inverse_mod(2, f.d()));
  return chi(f, mul(f, half, mul(f, mu, nu))) * U(fr, nu) * V(fr, mu);
}

/// Single-qubit i^(mn) X^n Z^m.
inline Matrix D_qubit(int m, int n) {
  Matrix x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  Matrix r = Matrix::Identity(2, 2);
  if (n) r = r * x;
  if (m) r = r * z;
  return (m && n ? cplx(0, 1) : cplx(1, 0)) * r;
}

/// Explicit Kronecker product.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) r(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return r;
}

/// Multi-qubit displacement in a selfdual frame: tensor product of the
/// single-qubit factors at the frame coordinates.
inline Matrix D_qubits(const Frame& fr, FieldElement mu, FieldElement nu) {
  const auto m = fr.digits(mu);
  const auto n = fr.digits(nu);
  Matrix r = Matrix::Identity(1, 1);
  for (std::size_t j = 0; j < m.size(); ++j) r = kron(r, D_qubit(m[j], n[j]));
  return r;
}

// ---------------------------------------------------------------------------
// States.

/// Theta-sum amplitudes c_l = sum_k omega(k l) exp(-pi k^2 / d), k in [-K, K],
/// normalized.
inline std::vector<double> theta_reference(int d, int K = 80) {
  std::vector<double> c(d, 0.0);
  for (int l = 0; l < d; ++l) {
    double acc = 0.0;
    for (int k = -K; k <= K; ++k)
      acc += std::cos(2.0 * std::numbers::pi * k * l / d) * std::exp(-std::numbers::pi * k * k / d);
    c[l] = acc;
  }
  double norm = 0.0;
  for (double v : c) norm += v * v;
  for (double& v : c) v /= std::sqrt(norm);
  return c;
}

inline Matrix random_density(std::size_t q, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix a(q, q);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < q; ++j) a(i, j) = {g(rng), g(rng)};
  Matrix rho = a * a.adjoint();
  return rho / rho.trace();
}

inline Vector random_unit(std::size_t q, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(q);
  for (std::size_t i = 0; i < q; ++i) v(i) = {g(rng), g(rng)};
  return v / v.norm();
}

/// Kernel by its defining sum with an externally supplied displacement family:
///   w(mu, nu) = q^-1 sum chi(mu l - nu k) D(k, l) <ref|D(k, l)|ref>^(-s).
template <class DFun>
Matrix kernel(const Frame& fr, const Vector& ref, int s, FieldElement mu, FieldElement nu, DFun&& D) {
  const auto& f = fr.field();
  const auto q = static_cast<Eigen::Index>(fr.dim());
  Matrix w = Matrix::Zero(q, q);
  for (auto k : f.elements())
    for (auto l : f.elements()) {
      const Matrix dkl = D(k, l);
      const cplx overlap = ref.dot(dkl * ref);
      const FieldElement arg = f.sub(mul(f, mu, l), mul(f, nu, k));
      w += chi(f, arg) * std::pow(overlap, -s) * dkl;
    }
  return w / static_cast<double>(q);
}

}  // namespace oracle
