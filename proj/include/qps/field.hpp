#pragma once

// Arithmetic in GF(d^n) for prime d.
//
// Elements are stored as packed coefficient tuples in the polynomial basis
// {1, x, ..., x^(n-1)} of the root x of the defining polynomial:
//   index = c_0 + c_1 d + ... + c_{n-1} d^(n-1).
// Multiplication goes through log/antilog tables of the primitive element.
// A FieldContext is immutable once built and is shared by pointer.

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qps {

bool is_prime(std::int64_t value);

/// Default cap on the field order d^n. Reads QPS_SIZE_CAP when set.
std::size_t default_size_cap();

/// Monic polynomial over Z_d; coeffs[i] multiplies x^i, coeffs.back() == 1.
struct Polynomial {
  int modulus = 2;
  std::vector<int> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool is_monic() const { return !coeffs.empty() && coeffs.back() == 1; }

  /// Parses "x^3+2x^2+1"; coefficients are reduced mod d. Spaces are ignored.
  static Polynomial parse(std::string_view text, int d);
  std::string to_string() const;

  bool operator==(const Polynomial&) const = default;
};

/// True iff p has no monic factor of degree 1..deg/2 (exhaustive division).
bool is_irreducible(const Polynomial& p);

class FieldContext;

class FieldElement {
 public:
  FieldElement() = default;

  std::uint32_t index() const { return value_; }
  std::uint32_t tag() const { return tag_; }
  bool is_zero() const { return value_ == 0; }

  bool operator==(const FieldElement&) const = default;

 private:
  friend class FieldContext;
  FieldElement(std::uint32_t value, std::uint32_t tag) : value_(value), tag_(tag) {}

  std::uint32_t value_ = 0;
  std::uint32_t tag_ = 0;
};

class FieldContext {
 public:
  /// Builds GF(d^n). Without a polynomial, picks the lexicographically
  /// smallest monic primitive one (n = 1: x - g, g the smallest primitive root).
  static std::shared_ptr<const FieldContext> make(int d, int n,
                                                  std::optional<Polynomial> poly = std::nullopt,
                                                  std::size_t size_cap = default_size_cap());

  int d() const { return d_; }
  int n() const { return n_; }
  std::uint32_t order() const { return q_; }
  const Polynomial& polynomial() const { return poly_; }

  /// False when the supplied polynomial is irreducible but its root is not
  /// primitive; sigma() is then found by search and a warning is recorded.
  bool root_is_primitive() const { return root_is_primitive_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  FieldElement zero() const { return {0, tag_}; }
  FieldElement one() const { return {1, tag_}; }
  FieldElement sigma() const { return antilog_[1 % (q_ - 1)]; }

  FieldElement element(std::uint32_t index) const;
  FieldElement from_int(std::int64_t k) const;
  FieldElement from_coeffs(std::span<const int> coeffs) const;
  std::vector<int> coeffs(FieldElement a) const;
  int coeff(FieldElement a, int i) const { return digits_[a.index() * n_ + i]; }

  FieldElement power_of_sigma(std::int64_t k) const;
  /// Discrete log base sigma, in [0, q-2]. Throws ZeroInverse for 0.
  std::uint32_t log(FieldElement a) const;

  FieldElement add(FieldElement a, FieldElement b) const;
  FieldElement sub(FieldElement a, FieldElement b) const;
  FieldElement neg(FieldElement a) const;
  FieldElement mul(FieldElement a, FieldElement b) const;
  FieldElement inv(FieldElement a) const;
  FieldElement pow(FieldElement a, std::int64_t e) const;

  /// tr(a) = a + a^d + ... + a^(d^(n-1)), an integer in [0, d).
  int trace(FieldElement a) const;
  /// chi(a) = exp(2 pi i tr(a) / d).
  std::complex<double> character(FieldElement a) const { return unity_[trace(a)]; }
  /// exp(2 pi i t / d) for any integer t.
  std::complex<double> root_of_unity(std::int64_t t) const;

  /// Throws ContextMismatch if a was not produced by this field.
  void check(FieldElement a) const;
  bool same_field(const FieldContext& other) const { return tag_ == other.tag_; }

  /// "0", "s^k" for n > 1; the integer value for n = 1.
  std::string label(FieldElement a) const;
  /// Accepts "0", "s", "s^k" (k may be negative), a bare integer (prime-field
  /// element), or "(c_0,...,c_{n-1})" in the polynomial coordinates.
  FieldElement parse(std::string_view text) const;

  std::vector<FieldElement> elements() const;

 private:
  FieldContext() = default;
  void build_tables();

  int d_ = 2;
  int n_ = 1;
  std::uint32_t q_ = 2;
  std::uint32_t tag_ = 0;
  Polynomial poly_;
  bool root_is_primitive_ = true;
  std::vector<std::string> warnings_;
  std::vector<int> digits_;                 // q * n coefficients
  std::vector<std::uint32_t> place_;        // d^i
  std::vector<FieldElement> antilog_;       // sigma^k, k in [0, q-1)
  std::vector<std::uint32_t> log_;          // log_[index], unused at 0
  std::vector<int> trace_;                  // per element
  std::vector<std::complex<double>> unity_; // exp(2 pi i t / d)
};

using FieldPtr = std::shared_ptr<const FieldContext>;

inline FieldPtr make_field(int d, int n, std::optional<Polynomial> poly = std::nullopt) {
  return FieldContext::make(d, n, std::move(poly));
}

// ---------------------------------------------------------------------------
// Bases of GF(d^n) over Z_d.

enum class BasisKind { Polynomial, Normal, Selfdual, AlmostSelfdual, Custom };

std::string_view to_string(BasisKind kind);

struct Basis {
  std::vector<FieldElement> elements;
  BasisKind kind = BasisKind::Custom;

  std::size_t size() const { return elements.size(); }
};

/// G_ij = tr(theta_i theta_j).
std::vector<std::vector<int>> gram_matrix(const FieldContext& ctx, const Basis& b);

bool is_linearly_independent(const FieldContext& ctx, std::span<const FieldElement> elems);

/// Classifies a basis from its Gram matrix: Selfdual, AlmostSelfdual, or the
/// fallback kind supplied. Throws NotABasis for dependent element lists.
Basis make_basis(const FieldContext& ctx, std::vector<FieldElement> elems,
                 BasisKind fallback = BasisKind::Custom);

Basis polynomial_basis(const FieldContext& ctx);
/// Conjugates of the first power of sigma that generates a normal basis.
Basis normal_basis(const FieldContext& ctx);

Basis dual_basis(const FieldContext& ctx, const Basis& b);

/// First selfdual basis with elements in increasing discrete log; falls back
/// to the first almost-selfdual one whose exceptional element comes last.
Basis find_selfdual_basis(const FieldContext& ctx);

/// Coordinates l_j with lambda = sum_j l_j theta_j, via l_j = tr(lambda theta'_j).
std::vector<int> expand(const FieldContext& ctx, FieldElement lambda, const Basis& b);
FieldElement compose(const FieldContext& ctx, std::span<const int> coords, const Basis& b);

bool is_selfdual(const FieldContext& ctx, const Basis& b);
bool is_almost_selfdual(const FieldContext& ctx, const Basis& b);

/// Inverse of a square matrix over Z_d; nullopt when singular.
std::optional<std::vector<std::vector<int>>> inverse_mod(std::vector<std::vector<int>> m, int d);

}  // namespace qps
