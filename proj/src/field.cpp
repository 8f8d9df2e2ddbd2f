#include "qps/field.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "qps/error.hpp"

namespace qps {

namespace {

int mod(std::int64_t a, int d) {
  auto r = static_cast<int>(a % d);
  return r < 0 ? r + d : r;
}

int inverse_mod_int(int a, int d) {
  // d is prime: a^(d-2).
  std::int64_t result = 1;
  std::int64_t base = mod(a, d);
  int e = d - 2;
  while (e > 0) {
    if (e & 1) result = result * base % d;
    base = base * base % d;
    e >>= 1;
  }
  return static_cast<int>(result);
}

std::uint32_t field_tag(int d, int n, const Polynomial& p) {
  std::uint32_t h = 2166136261u;
  auto mix = [&h](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
      h ^= (v >> (8 * i)) & 0xffu;
      h *= 16777619u;
    }
  };
  mix(static_cast<std::uint32_t>(d));
  mix(static_cast<std::uint32_t>(n));
  for (int c : p.coeffs) mix(static_cast<std::uint32_t>(c));
  return h == 0 ? 1u : h;
}

// Multiplies coefficient vectors a, b (length n) modulo the monic p.
std::vector<int> mulmod(const std::vector<int>& a, const std::vector<int>& b, const Polynomial& p) {
  const int n = p.degree();
  const int d = p.modulus;
  std::vector<std::int64_t> prod(2 * n - 1, 0);
  for (int i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < n; ++j) prod[i + j] += static_cast<std::int64_t>(a[i]) * b[j];
  }
  for (int k = 2 * n - 2; k >= n; --k) {
    std::int64_t top = prod[k] % d;
    if (top == 0) continue;
    // x^k = x^(k-n) * x^n, x^n = -sum_i p_i x^i
    for (int i = 0; i < n; ++i) prod[k - n + i] -= top * p.coeffs[i];
    prod[k] = 0;
  }
  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) out[i] = mod(prod[i], d);
  return out;
}

// Remainder of a (any degree) divided by monic g, over Z_d.
std::vector<int> polymod(std::vector<int> a, const std::vector<int>& g, int d) {
  const int dg = static_cast<int>(g.size()) - 1;
  for (int k = static_cast<int>(a.size()) - 1; k >= dg; --k) {
    int top = mod(a[k], d);
    if (top == 0) continue;
    for (int i = 0; i <= dg; ++i) a[k - dg + i] = mod(a[k - dg + i] - static_cast<std::int64_t>(top) * g[i], d);
  }
  a.resize(std::max(dg, 0));
  return a;
}

bool root_order_is_full(const Polynomial& p) {
  const int n = p.degree();
  std::uint64_t q = 1;
  for (int i = 0; i < n; ++i) q *= static_cast<std::uint64_t>(p.modulus);
  std::vector<int> x(n, 0), one(n, 0), cur(n, 0);
  one[0] = 1;
  if (n == 1) {
    x[0] = mod(-static_cast<std::int64_t>(p.coeffs[0]), p.modulus);
  } else {
    x[1] = 1;
  }
  cur = one;
  for (std::uint64_t k = 1; k < q - 1; ++k) {
    cur = mulmod(cur, x, p);
    if (cur == one) return false;
  }
  if (q == 2) return mod(x[0], p.modulus) == 1;
  cur = mulmod(cur, x, p);
  return cur == one;
}

int smallest_primitive_root(int d) {
  if (d == 2) return 1;
  for (int g = 2; g < d; ++g) {
    std::int64_t v = 1;
    int order = 0;
    do {
      v = v * g % d;
      ++order;
    } while (v != 1);
    if (order == d - 1) return g;
  }
  return 1;
}

std::string trim(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

}  // namespace

bool is_prime(std::int64_t value) {
  if (value < 2) return false;
  for (std::int64_t k = 2; k * k <= value; ++k)
    if (value % k == 0) return false;
  return true;
}

std::size_t default_size_cap() {
  if (const char* env = std::getenv("QPS_SIZE_CAP")) {
    std::size_t v = 0;
    auto text = std::string_view(env);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec == std::errc() && ptr == text.data() + text.size() && v > 0) return v;
  }
  return std::size_t{1} << 16;
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial Polynomial::parse(std::string_view text, int d) {
  const std::string s = trim(text);
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty polynomial");
  std::vector<std::int64_t> acc;
  std::size_t pos = 0;
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (pos != 0) {
      throw Error(ErrorCode::ParseError, "expected '+' or '-' in \"" + s + "\"");
    }
    std::int64_t coeff = 1;
    bool has_coeff = false;
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos > start) {
      coeff = std::stoll(s.substr(start, pos - start));
      has_coeff = true;
    }
    if (pos < s.size() && s[pos] == '*') ++pos;
    int power = 0;
    if (pos < s.size() && (s[pos] == 'x' || s[pos] == 'X')) {
      ++pos;
      power = 1;
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        std::size_t ps = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == ps) throw Error(ErrorCode::ParseError, "missing exponent in \"" + s + "\"");
        power = std::stoi(s.substr(ps, pos - ps));
      }
    } else if (!has_coeff) {
      throw Error(ErrorCode::ParseError, "bad term in \"" + s + "\"");
    }
    if (static_cast<int>(acc.size()) <= power) acc.resize(power + 1, 0);
    acc[power] += sign * coeff;
  }
  Polynomial p;
  p.modulus = d;
  p.coeffs.resize(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) p.coeffs[i] = mod(acc[i], d);
  while (p.coeffs.size() > 1 && p.coeffs.back() == 0) p.coeffs.pop_back();
  return p;
}

std::string Polynomial::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    int c = coeffs[k];
    if (c == 0) continue;
    if (!first) os << '+';
    first = false;
    if (k == 0) {
      os << c;
      continue;
    }
    if (c != 1) os << c;
    os << 'x';
    if (k > 1) os << '^' << k;
  }
  if (first) os << '0';
  return os.str();
}

bool is_irreducible(const Polynomial& p) {
  const int n = p.degree();
  const int d = p.modulus;
  if (n < 1) return false;
  if (n == 1) return true;
  for (int k = 1; k <= n / 2; ++k) {
    std::uint64_t count = 1;
    for (int i = 0; i < k; ++i) count *= static_cast<std::uint64_t>(d);
    for (std::uint64_t v = 0; v < count; ++v) {
      std::vector<int> g(k + 1);
      std::uint64_t t = v;
      for (int i = 0; i < k; ++i) {
        g[i] = static_cast<int>(t % d);
        t /= d;
      }
      g[k] = 1;
      auto r = polymod(p.coeffs, g, d);
      if (std::all_of(r.begin(), r.end(), [](int c) { return c == 0; })) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// FieldContext

std::shared_ptr<const FieldContext> FieldContext::make(int d, int n, std::optional<Polynomial> poly,
                                                       std::size_t size_cap) {
  if (!is_prime(d)) throw Error(ErrorCode::NotPrime, std::to_string(d) + " is not prime");
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "extension degree must be >= 1");
  std::uint64_t q = 1;
  for (int i = 0; i < n; ++i) {
    q *= static_cast<std::uint64_t>(d);
    if (q > size_cap)
      throw Error(ErrorCode::SizeCapExceeded,
                  std::to_string(d) + "^" + std::to_string(n) + " exceeds cap " + std::to_string(size_cap));
  }

  std::shared_ptr<FieldContext> ctx(new FieldContext());
  ctx->d_ = d;
  ctx->n_ = n;
  ctx->q_ = static_cast<std::uint32_t>(q);

  if (poly) {
    Polynomial p = *poly;
    p.modulus = d;
    for (int& c : p.coeffs) c = mod(c, d);
    while (p.coeffs.size() > 1 && p.coeffs.back() == 0) p.coeffs.pop_back();
    if (p.degree() != n || !p.is_monic())
      throw Error(ErrorCode::InvalidPolynomial,
                  p.to_string() + " is not monic of degree " + std::to_string(n));
    if (!is_irreducible(p)) throw Error(ErrorCode::Reducible, p.to_string() + " is reducible over Z_" + std::to_string(d));
    ctx->poly_ = p;
  } else if (n == 1) {
    int g = smallest_primitive_root(d);
    ctx->poly_ = Polynomial{d, {mod(-g, d), 1}};
  } else {
    bool found = false;
    for (std::uint64_t v = 1; v < q && !found; ++v) {
      Polynomial p{d, std::vector<int>(n + 1, 0)};
      std::uint64_t t = v;
      for (int i = 0; i < n; ++i) {
        p.coeffs[i] = static_cast<int>(t % d);
        t /= d;
      }
      p.coeffs[n] = 1;
      if (p.coeffs[0] == 0) continue;
      if (is_irreducible(p) && root_order_is_full(p)) {
        ctx->poly_ = p;
        found = true;
      }
    }
    if (!found) throw Error(ErrorCode::InvalidPolynomial, "no primitive polynomial found");
  }
  ctx->tag_ = field_tag(d, n, ctx->poly_);
  ctx->build_tables();
  return ctx;
}

void FieldContext::build_tables() {
  place_.assign(n_, 1);
  for (int i = 1; i < n_; ++i) place_[i] = place_[i - 1] * static_cast<std::uint32_t>(d_);
  digits_.assign(static_cast<std::size_t>(q_) * n_, 0);
  for (std::uint32_t v = 0; v < q_; ++v) {
    std::uint32_t t = v;
    for (int i = 0; i < n_; ++i) {
      digits_[v * n_ + i] = static_cast<int>(t % d_);
      t /= d_;
    }
  }
  unity_.resize(d_);
  for (int t = 0; t < d_; ++t) {
    const double angle = 2.0 * std::numbers::pi * t / d_;
    unity_[t] = {std::cos(angle), std::sin(angle)};
  }
  // exact values where cos/sin round
  unity_[0] = {1.0, 0.0};
  if (d_ == 2) unity_[1] = {-1.0, 0.0};

  auto pack = [this](const std::vector<int>& c) {
    std::uint32_t v = 0;
    for (int i = 0; i < n_; ++i) v += static_cast<std::uint32_t>(c[i]) * place_[i];
    return v;
  };
  auto unpack = [this](std::uint32_t v) {
    return std::vector<int>(digits_.begin() + v * n_, digits_.begin() + (v + 1) * n_);
  };

  std::vector<int> x(n_, 0);
  if (n_ == 1) {
    x[0] = mod(-static_cast<std::int64_t>(poly_.coeffs[0]), d_);
  } else {
    x[1] = 1;
  }
  std::vector<int> one(n_, 0);
  one[0] = 1;

  auto try_generator = [&](const std::vector<int>& g) {
    std::vector<FieldElement> table;
    table.reserve(q_ - 1);
    std::vector<int> cur = one;
    for (std::uint32_t k = 0; k + 1 < q_; ++k) {
      if (k > 0 && cur == one) return std::vector<FieldElement>{};
      table.push_back(FieldElement(pack(cur), tag_));
      cur = mulmod(cur, g, poly_);
    }
    if (cur != one) return std::vector<FieldElement>{};
    return table;
  };

  antilog_ = try_generator(x);
  if (antilog_.empty()) {
    root_is_primitive_ = false;
    for (std::uint32_t v = 2; v < q_ && antilog_.empty(); ++v) antilog_ = try_generator(unpack(v));
    warnings_.push_back("root of " + poly_.to_string() +
                        " is not primitive; sigma = element (" + std::to_string(antilog_.at(1).index()) +
                        ") found by search");
  }
  log_.assign(q_, 0);
  for (std::uint32_t k = 0; k + 1 < q_; ++k) log_[antilog_[k].index()] = k;

  trace_.assign(q_, 0);
  for (std::uint32_t v = 1; v < q_; ++v) {
    FieldElement a(v, tag_);
    FieldElement acc = zero();
    FieldElement term = a;
    for (int k = 0; k < n_; ++k) {
      acc = add(acc, term);
      term = pow(term, d_);
    }
    if (acc.index() >= static_cast<std::uint32_t>(d_))
      throw Error(ErrorCode::InvalidPolynomial, "trace left the prime field");
    trace_[v] = static_cast<int>(acc.index());
  }
}

FieldElement FieldContext::element(std::uint32_t index) const {
  if (index >= q_) throw Error(ErrorCode::InvalidArgument, "element index out of range");
  return {index, tag_};
}

FieldElement FieldContext::from_int(std::int64_t k) const {
  return {static_cast<std::uint32_t>(mod(k, d_)), tag_};
}

FieldElement FieldContext::from_coeffs(std::span<const int> coeffs) const {
  if (static_cast<int>(coeffs.size()) != n_)
    throw Error(ErrorCode::LengthMismatch, "expected " + std::to_string(n_) + " coefficients");
  std::uint32_t v = 0;
  for (int i = 0; i < n_; ++i) v += static_cast<std::uint32_t>(mod(coeffs[i], d_)) * place_[i];
  return {v, tag_};
}

std::vector<int> FieldContext::coeffs(FieldElement a) const {
  check(a);
  return {digits_.begin() + a.index() * n_, digits_.begin() + (a.index() + 1) * n_};
}

FieldElement FieldContext::power_of_sigma(std::int64_t k) const {
  const std::int64_t m = q_ - 1;
  return antilog_[static_cast<std::size_t>(((k % m) + m) % m)];
}

std::uint32_t FieldContext::log(FieldElement a) const {
  check(a);
  if (a.is_zero()) throw Error(ErrorCode::ZeroInverse, "log of zero");
  return log_[a.index()];
}

void FieldContext::check(FieldElement a) const {
  if (a.tag() != tag_ || a.index() >= q_)
    throw Error(ErrorCode::ContextMismatch, "element does not belong to GF(" + std::to_string(q_) + ")");
}

FieldElement FieldContext::add(FieldElement a, FieldElement b) const {
  check(a);
  check(b);
  if (d_ == 2) return {a.index() ^ b.index(), tag_};
  std::uint32_t v = 0;
  const int* da = &digits_[a.index() * n_];
  const int* db = &digits_[b.index() * n_];
  for (int i = 0; i < n_; ++i) {
    int s = da[i] + db[i];
    if (s >= d_) s -= d_;
    v += static_cast<std::uint32_t>(s) * place_[i];
  }
  return {v, tag_};
}

FieldElement FieldContext::neg(FieldElement a) const {
  check(a);
  if (d_ == 2) return a;
  std::uint32_t v = 0;
  const int* da = &digits_[a.index() * n_];
  for (int i = 0; i < n_; ++i) v += static_cast<std::uint32_t>((d_ - da[i]) % d_) * place_[i];
  return {v, tag_};
}

FieldElement FieldContext::sub(FieldElement a, FieldElement b) const { return add(a, neg(b)); }

FieldElement FieldContext::mul(FieldElement a, FieldElement b) const {
  check(a);
  check(b);
  if (a.is_zero() || b.is_zero()) return zero();
  std::uint32_t e = log_[a.index()] + log_[b.index()];
  if (e >= q_ - 1) e -= q_ - 1;
  return antilog_[e];
}

FieldElement FieldContext::inv(FieldElement a) const {
  check(a);
  if (a.is_zero()) throw Error(ErrorCode::ZeroInverse, "zero has no inverse");
  const std::uint32_t e = log_[a.index()];
  return antilog_[e == 0 ? 0 : (q_ - 1) - e];
}

FieldElement FieldContext::pow(FieldElement a, std::int64_t e) const {
  check(a);
  if (a.is_zero()) {
    if (e < 0) throw Error(ErrorCode::ZeroInverse, "negative power of zero");
    return e == 0 ? one() : zero();
  }
  const std::int64_t m = q_ - 1;
  const std::int64_t l = log_[a.index()];
  const std::int64_t r = ((l * (e % m)) % m + m) % m;
  return antilog_[static_cast<std::size_t>(r)];
}

int FieldContext::trace(FieldElement a) const {
  check(a);
  return trace_[a.index()];
}

std::complex<double> FieldContext::root_of_unity(std::int64_t t) const { return unity_[mod(t, d_)]; }

std::string FieldContext::label(FieldElement a) const {
  check(a);
  if (n_ == 1) return std::to_string(a.index());
  if (a.is_zero()) return "0";
  return "s^" + std::to_string(log_[a.index()]);
}

FieldElement FieldContext::parse(std::string_view text) const {
  const std::string s = trim(text);
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty element");
  if (s[0] == 's' || s[0] == 'S') {
    if (s.size() == 1) return sigma();
    if (s[1] != '^' || s.size() < 3) throw Error(ErrorCode::ParseError, "bad element \"" + s + "\"");
    std::int64_t k = 0;
    auto [ptr, ec] = std::from_chars(s.data() + 2, s.data() + s.size(), k);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw Error(ErrorCode::ParseError, "bad exponent in \"" + s + "\"");
    return power_of_sigma(k);
  }
  if (s.front() == '(') {
    if (s.back() != ')') throw Error(ErrorCode::ParseError, "unterminated tuple \"" + s + "\"");
    std::vector<int> c;
    std::stringstream ss(s.substr(1, s.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      int v = 0;
      auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
      if (ec != std::errc() || ptr != item.data() + item.size())
        throw Error(ErrorCode::ParseError, "bad tuple entry \"" + item + "\"");
      c.push_back(v);
    }
    return from_coeffs(c);
  }
  std::int64_t k = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), k);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw Error(ErrorCode::ParseError, "bad element \"" + s + "\"");
  return from_int(k);
}

std::vector<FieldElement> FieldContext::elements() const {
  std::vector<FieldElement> out;
  out.reserve(q_);
  for (std::uint32_t v = 0; v < q_; ++v) out.push_back({v, tag_});
  return out;
}

// ---------------------------------------------------------------------------
// Bases

std::string_view to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::Polynomial: return "polynomial";
    case BasisKind::Normal: return "normal";
    case BasisKind::Selfdual: return "selfdual";
    case BasisKind::AlmostSelfdual: return "almost-selfdual";
    case BasisKind::Custom: return "custom";
  }
  return "custom";
}

std::optional<std::vector<std::vector<int>>> inverse_mod(std::vector<std::vector<int>> m, int d) {
  const std::size_t n = m.size();
  std::vector<std::vector<int>> inv(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    inv[i][i] = 1;
    for (auto& v : m[i]) v = mod(v, d);
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(m[pivot], m[col]);
    std::swap(inv[pivot], inv[col]);
    const int scale = inverse_mod_int(m[col][col], d);
    for (std::size_t j = 0; j < n; ++j) {
      m[col][j] = static_cast<int>(static_cast<std::int64_t>(m[col][j]) * scale % d);
      inv[col][j] = static_cast<int>(static_cast<std::int64_t>(inv[col][j]) * scale % d);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      const int f = m[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        m[r][j] = mod(m[r][j] - static_cast<std::int64_t>(f) * m[col][j], d);
        inv[r][j] = mod(inv[r][j] - static_cast<std::int64_t>(f) * inv[col][j], d);
      }
    }
  }
  return inv;
}

std::vector<std::vector<int>> gram_matrix(const FieldContext& ctx, const Basis& b) {
  const std::size_t n = b.size();
  std::vector<std::vector<int>> g(n, std::vector<int>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g[i][j] = ctx.trace(ctx.mul(b.elements[i], b.elements[j]));
  return g;
}

bool is_linearly_independent(const FieldContext& ctx, std::span<const FieldElement> elems) {
  if (static_cast<int>(elems.size()) != ctx.n()) return false;
  std::vector<std::vector<int>> m;
  for (auto e : elems) m.push_back(ctx.coeffs(e));
  return inverse_mod(std::move(m), ctx.d()).has_value();
}

namespace {

bool gram_is_identity(const std::vector<std::vector<int>>& g) {
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      if (g[i][j] != (i == j ? 1 : 0)) return false;
  return true;
}

bool gram_is_almost_identity(const std::vector<std::vector<int>>& g) {
  int exceptions = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j)
      if (i != j && g[i][j] != 0) return false;
    if (g[i][i] == 0) return false;
    if (g[i][i] != 1) ++exceptions;
  }
  return exceptions <= 1;
}

}  // namespace

bool is_selfdual(const FieldContext& ctx, const Basis& b) { return gram_is_identity(gram_matrix(ctx, b)); }

bool is_almost_selfdual(const FieldContext& ctx, const Basis& b) {
  return gram_is_almost_identity(gram_matrix(ctx, b));
}

Basis make_basis(const FieldContext& ctx, std::vector<FieldElement> elems, BasisKind fallback) {
  for (auto e : elems) ctx.check(e);
  if (!is_linearly_independent(ctx, elems))
    throw Error(ErrorCode::NotABasis, "elements are not a basis of GF(" + std::to_string(ctx.order()) + ")");
  Basis b{std::move(elems), fallback};
  auto g = gram_matrix(ctx, b);
  if (gram_is_identity(g)) {
    b.kind = BasisKind::Selfdual;
  } else if (gram_is_almost_identity(g)) {
    b.kind = BasisKind::AlmostSelfdual;
  }
  return b;
}

Basis polynomial_basis(const FieldContext& ctx) {
  std::vector<FieldElement> e;
  for (int k = 0; k < ctx.n(); ++k) e.push_back(ctx.power_of_sigma(k));
  return make_basis(ctx, std::move(e), BasisKind::Polynomial);
}

Basis normal_basis(const FieldContext& ctx) {
  for (std::uint32_t k = 1; k <= ctx.order() - 1; ++k) {
    std::vector<FieldElement> e;
    FieldElement t = ctx.power_of_sigma(k % (ctx.order() - 1));
    for (int j = 0; j < ctx.n(); ++j) {
      e.push_back(t);
      t = ctx.pow(t, ctx.d());
    }
    if (is_linearly_independent(ctx, e)) return make_basis(ctx, std::move(e), BasisKind::Normal);
  }
  throw Error(ErrorCode::NotABasis, "no normal element found");
}

Basis dual_basis(const FieldContext& ctx, const Basis& b) {
  auto inv = inverse_mod(gram_matrix(ctx, b), ctx.d());
  if (!inv) throw Error(ErrorCode::SingularGram, "Gram matrix of basis is singular");
  const std::size_t n = b.size();
  std::vector<FieldElement> out(n, ctx.zero());
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t m = 0; m < n; ++m)
      out[l] = ctx.add(out[l], ctx.mul(ctx.from_int((*inv)[l][m]), b.elements[m]));
  return make_basis(ctx, std::move(out), BasisKind::Custom);
}

namespace {

bool search_orthogonal(const FieldContext& ctx, std::vector<FieldElement>& chosen, std::uint32_t next_log,
                       bool allow_exception_last) {
  const int n = ctx.n();
  if (static_cast<int>(chosen.size()) == n) return true;
  const bool last = static_cast<int>(chosen.size()) == n - 1;
  for (std::uint32_t k = next_log; k + 1 < ctx.order(); ++k) {
    FieldElement t = ctx.power_of_sigma(k);
    const int diag = ctx.trace(ctx.mul(t, t));
    if (diag == 0) continue;
    if (diag != 1 && !(allow_exception_last && last)) continue;
    bool orthogonal = true;
    for (auto c : chosen)
      if (ctx.trace(ctx.mul(c, t)) != 0) {
        orthogonal = false;
        break;
      }
    if (!orthogonal) continue;
    chosen.push_back(t);
    if (search_orthogonal(ctx, chosen, k + 1, allow_exception_last)) return true;
    chosen.pop_back();
  }
  return false;
}

}  // namespace

Basis find_selfdual_basis(const FieldContext& ctx) {
  std::vector<FieldElement> chosen;
  if (search_orthogonal(ctx, chosen, 0, false)) return make_basis(ctx, chosen, BasisKind::Selfdual);
  chosen.clear();
  if (search_orthogonal(ctx, chosen, 0, true)) return make_basis(ctx, chosen, BasisKind::AlmostSelfdual);
  throw Error(ErrorCode::NotABasis, "no almost-selfdual basis found");
}

std::vector<int> expand(const FieldContext& ctx, FieldElement lambda, const Basis& b) {
  ctx.check(lambda);
  if (static_cast<int>(b.size()) != ctx.n()) throw Error(ErrorCode::LengthMismatch, "basis size differs from n");
  const Basis dual = dual_basis(ctx, b);
  std::vector<int> out(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) out[j] = ctx.trace(ctx.mul(lambda, dual.elements[j]));
  return out;
}

FieldElement compose(const FieldContext& ctx, std::span<const int> coords, const Basis& b) {
  if (coords.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "coordinate count differs from basis size");
  FieldElement acc = ctx.zero();
  for (std::size_t j = 0; j < coords.size(); ++j)
    acc = ctx.add(acc, ctx.mul(ctx.from_int(coords[j]), b.elements[j]));
  return acc;
}

}  // namespace qps
