#include "qps/operators.hpp"

#include <cmath>

#include "qps/error.hpp"

namespace qps {

namespace {

void check_frame(const FramePtr& frame) {
  if (!frame) throw Error(ErrorCode::InvalidArgument, "null frame");
}

}  // namespace

Operator generator_U(const FramePtr& frame, FieldElement nu) {
  check_frame(frame);
  const auto& f = frame->field();
  f.check(nu);
  const auto q = static_cast<Eigen::Index>(frame->dim());
  Matrix m = Matrix::Zero(q, q);
  for (auto l : f.elements()) m(frame->index(f.add(l, nu)), frame->index(l)) = 1.0;
  return {std::move(m), frame, true, nu.is_zero()};
}

Operator generator_V(const FramePtr& frame, FieldElement mu) {
  check_frame(frame);
  const auto& f = frame->field();
  f.check(mu);
  const auto q = static_cast<Eigen::Index>(frame->dim());
  Matrix m = Matrix::Zero(q, q);
  for (auto l : f.elements()) {
    const auto i = frame->index(l);
    m(i, i) = f.character(f.mul(mu, l));
  }
  return {std::move(m), frame, true, mu.is_zero()};
}

Operator fourier(const FramePtr& frame) {
  check_frame(frame);
  const auto& f = frame->field();
  const auto q = static_cast<Eigen::Index>(frame->dim());
  const double scale = 1.0 / std::sqrt(static_cast<double>(q));
  Matrix m(q, q);
  for (auto a : f.elements())
    for (auto b : f.elements()) m(frame->index(a), frame->index(b)) = scale * f.character(f.mul(a, b));
  return {std::move(m), frame, true, false};
}

cplx displacement_phase(const Frame& frame, FieldElement mu, FieldElement nu) {
  const auto& f = frame.field();
  if (f.d() == 2) {
    const auto m = frame.phase_digits(mu);
    const auto n = frame.phase_digits(nu);
    int count = 0;
    for (std::size_t j = 0; j < m.size(); ++j) count += m[j] * n[j];
    static constexpr cplx powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return powers[count % 4];
  }
  const FieldElement half = f.from_int((f.d() + 1) / 2);
  return f.character(f.mul(half, f.mul(mu, nu)));
}

Operator displacement(const FramePtr& frame, PhasePoint p) {
  check_frame(frame);
  const auto& f = frame->field();
  f.check(p.mu);
  f.check(p.nu);
  const auto q = static_cast<Eigen::Index>(frame->dim());
  const cplx phase = displacement_phase(*frame, p.mu, p.nu);
  Matrix m = Matrix::Zero(q, q);
  for (auto l : f.elements())
    m(frame->index(f.add(l, p.nu)), frame->index(l)) = phase * f.character(f.mul(p.mu, l));
  return {std::move(m), frame, true, p.mu.is_zero() && p.nu.is_zero()};
}

Operator parity_from_displacements(const FramePtr& frame) {
  check_frame(frame);
  const auto& f = frame->field();
  const auto q = static_cast<Eigen::Index>(frame->dim());
  Matrix sum = Matrix::Zero(q, q);
  for (auto mu : f.elements())
    for (auto nu : f.elements()) sum += displacement(frame, {mu, nu}).matrix;
  sum /= static_cast<double>(q);
  return {std::move(sum), frame, f.d() != 2, true};
}

Operator parity(const FramePtr& frame) {
  check_frame(frame);
  const auto& f = frame->field();
  const auto q = static_cast<Eigen::Index>(frame->dim());
  Matrix m = Matrix::Zero(q, q);
  for (auto l : f.elements()) m(frame->index(f.neg(l)), frame->index(l)) = 1.0;
  return {std::move(m), frame, true, true};
}

Operator squeeze_operator(const FramePtr& frame, FieldElement s) {
  check_frame(frame);
  const auto& f = frame->field();
  f.check(s);
  if (s.is_zero()) throw Error(ErrorCode::ZeroSqueeze, "squeeze element must be nonzero");
  const auto q = static_cast<Eigen::Index>(frame->dim());
  Matrix m = Matrix::Zero(q, q);
  for (auto l : f.elements()) m(frame->index(f.mul(s, l)), frame->index(l)) = 1.0;
  const bool involution = f.mul(s, s) == f.one();
  return {std::move(m), frame, true, involution};
}

FramePtr prime_frame(int d) { return Frame::canonical(FieldContext::make(d, 1)); }

Operator harper_hamiltonian(int d) {
  auto frame = prime_frame(d);
  const auto& f = frame->field();
  const Matrix u = generator_U(frame, f.one()).matrix;
  const Matrix v = generator_V(frame, f.one()).matrix;
  Matrix h = 2.0 * Matrix::Identity(d, d) - 0.5 * (u + u.adjoint()) - 0.5 * (v + v.adjoint());
  return {std::move(h), frame, false, true};
}

Operator basis_change_operator(const FieldContext& ctx, const Basis& from, const Basis& to) {
  const auto n = static_cast<std::size_t>(ctx.n());
  if (from.size() != n || to.size() != n)
    throw Error(ErrorCode::BasisMismatch, "bases must both have n elements");
  for (auto e : from.elements)
    if (e.tag() != to.elements.front().tag()) throw Error(ErrorCode::BasisMismatch, "bases belong to different fields");
  for (auto e : to.elements) ctx.check(e);
  if (!is_linearly_independent(ctx, from.elements) || !is_linearly_independent(ctx, to.elements))
    throw Error(ErrorCode::BasisMismatch, "not a basis");
  const Basis from_dual = dual_basis(ctx, from);
  const Basis to_dual = dual_basis(ctx, to);
  const auto q = static_cast<Eigen::Index>(ctx.order());
  auto flat = [&](FieldElement mu, const Basis& dual) {
    Eigen::Index idx = 0;
    for (std::size_t j = 0; j < n; ++j) idx = idx * ctx.d() + ctx.trace(ctx.mul(mu, dual.elements[j]));
    return idx;
  };
  Matrix m = Matrix::Zero(q, q);
  for (auto mu : ctx.elements()) m(flat(mu, to_dual), flat(mu, from_dual)) = 1.0;
  return {std::move(m), nullptr, true, false};
}

std::vector<Operator> factorize_displacement(const FieldPtr& ctx, const Basis& sd, PhasePoint p) {
  if (!is_selfdual(*ctx, sd)) throw Error(ErrorCode::NotSelfdual, "factorization needs a selfdual basis");
  auto single = prime_frame(ctx->d());
  const auto& g = single->field();
  const auto m = expand(*ctx, p.mu, sd);
  const auto n = expand(*ctx, p.nu, sd);
  std::vector<Operator> out;
  out.reserve(m.size());
  for (std::size_t j = 0; j < m.size(); ++j) out.push_back(displacement(single, {g.from_int(m[j]), g.from_int(n[j])}));
  return out;
}

Operator tensor(std::span<const Operator> factors) {
  std::vector<Matrix> ms;
  ms.reserve(factors.size());
  bool unitary = true, hermitian = true;
  for (const auto& f : factors) {
    ms.push_back(f.matrix);
    unitary = unitary && f.unitary;
    hermitian = hermitian && f.hermitian;
  }
  return {kron(std::span<const Matrix>(ms)), nullptr, unitary, hermitian};
}

}  // namespace qps
