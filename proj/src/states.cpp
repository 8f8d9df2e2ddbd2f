#include "qps/states.hpp"

#include <cmath>
#include <numbers>

#include "qps/error.hpp"

namespace qps {

StateVector::StateVector(FramePtr frame, Vector amps) : frame_(std::move(frame)), amps_(std::move(amps)) {
  if (frame_ && static_cast<std::size_t>(amps_.size()) != frame_->dim())
    throw Error(ErrorCode::LengthMismatch, "state length differs from frame dimension");
  const double norm = amps_.norm();
  if (!(std::abs(norm - 1.0) < kNormTol))
    throw Error(ErrorCode::NormViolation, "state norm " + std::to_string(norm) + " differs from 1");
}

StateVector apply(const Operator& op, const StateVector& state) {
  if (op.dim() != state.dim()) throw Error(ErrorCode::LengthMismatch, "operator and state dimensions differ");
  return {state.frame(), op.matrix * state.amps()};
}

ThetaParams theta_params(int d) {
  ThetaParams p;
  p.d = d;
  p.K = static_cast<int>(std::ceil(std::sqrt(17.0 * std::log(10.0) * d / std::numbers::pi))) + 1;
  for (int k = -p.K; k <= p.K; ++k) p.C += std::exp(-2.0 * std::numbers::pi * k * k / d);
  return p;
}

std::vector<double> theta_amplitudes(int d, int K) {
  if (d % 2 == 0) throw Error(ErrorCode::EvenDimension, "theta reference needs odd d; use qubit_reference");
  std::vector<double> c(d, 0.0);
  for (int l = 0; l < d; ++l) {
    double acc = 0.0;
    // symmetric pairing keeps c_l == c_{d-l} bit-exact
    for (int k = K; k >= 1; --k) {
      const int r = static_cast<int>((static_cast<long long>(k) * l) % d);
      const int rr = std::min(r, d - r);
      acc += 2.0 * std::cos(2.0 * std::numbers::pi * rr / d) * std::exp(-std::numbers::pi * k * k / d);
    }
    c[l] = acc + 1.0;
  }
  double norm = 0.0;
  for (double v : c) norm += v * v;
  norm = std::sqrt(norm);
  for (double& v : c) v /= norm;
  return c;
}

StateVector reference_state(int d) {
  const auto params = theta_params(d);
  const auto c = theta_amplitudes(d, params.K);
  Vector amps(d);
  for (int l = 0; l < d; ++l) amps(l) = c[l];
  return {prime_frame(d), std::move(amps)};
}

StateVector qubit_reference() {
  Vector amps(2);
  const double norm = std::sqrt(1.0 + kXi * kXi);
  amps(0) = 1.0 / norm;
  amps(1) = kXi / norm;
  return {prime_frame(2), std::move(amps)};
}

StateVector multi_reference_state(const FramePtr& frame, const Basis& sd) {
  const auto& f = frame->field();
  const bool selfdual = is_selfdual(f, sd);
  if (!selfdual && !is_almost_selfdual(f, sd))
    throw Error(ErrorCode::NotSelfdual, "reference state needs a selfdual or almost-selfdual basis");
  std::vector<double> c;
  if (f.d() == 2) {
    const double norm = std::sqrt(1.0 + kXi * kXi);
    c = {1.0 / norm, kXi / norm};
  } else {
    c = theta_amplitudes(f.d(), theta_params(f.d()).K);
  }
  const Basis dual = dual_basis(f, sd);
  Vector amps(static_cast<Eigen::Index>(frame->dim()));
  for (auto lambda : f.elements()) {
    double a = 1.0;
    for (const auto& t : dual.elements) a *= c[f.trace(f.mul(lambda, t))];
    amps(frame->index(lambda)) = a;
  }
  // an almost-selfdual product can drift from unit norm by roundoff only
  amps /= amps.norm();
  StateVector out(frame, std::move(amps));
  if (!selfdual) out.add_flag("non-canonical");
  return out;
}

StateVector reference_for(const FramePtr& frame) { return multi_reference_state(frame, frame->phase_basis()); }

StateVector coherent_state(const StateVector& reference, PhasePoint p) {
  return apply(displacement(reference.frame(), p), reference);
}

StateVector coherent_state(const FramePtr& frame, PhasePoint p) { return coherent_state(reference_for(frame), p); }

StateVector squeezed_state(const StateVector& reference, FieldElement s, PhasePoint p) {
  const auto& frame = reference.frame();
  StateVector squeezed = apply(squeeze_operator(frame, s), reference);
  return apply(displacement(frame, p), squeezed);
}

StateVector squeezed_state(const FramePtr& frame, FieldElement s, PhasePoint p) {
  return squeezed_state(reference_for(frame), s, p);
}

cplx expectation(const StateVector& state, const Matrix& a) { return state.amps().dot(a * state.amps()); }

double circular_dispersion(const StateVector& state, const Operator& a) {
  if (!is_unitary(a.matrix)) throw Error(ErrorCode::NotUnitary, "circular dispersion needs a unitary operator");
  return 1.0 - std::norm(expectation(state, a.matrix));
}

std::vector<int> squeeze_coefficient_map(const FieldContext& ctx, FieldElement s, const Basis& b,
                                         std::span<const int> l) {
  ctx.check(s);
  if (s.is_zero()) throw Error(ErrorCode::ZeroSqueeze, "squeeze element must be nonzero");
  if (l.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "tuple length differs from basis size");
  const std::size_t n = b.size();
  const Basis dual = dual_basis(ctx, b);
  const FieldElement s_inv = ctx.inv(s);
  std::vector<int> h(n);
  for (std::size_t k = 0; k < n; ++k) h[k] = ctx.trace(ctx.mul(s_inv, b.elements[k]));
  std::vector<int> m(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    long long acc = 0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const int f = ctx.trace(ctx.mul(dual.elements[i], ctx.mul(b.elements[j], dual.elements[k])));
        acc += static_cast<long long>(f) * l[j] * h[k];
      }
    m[i] = static_cast<int>(acc % ctx.d());
  }
  return m;
}

double reduced_purity(const StateVector& state, int factor) {
  const auto& f = state.frame()->field();
  const int d = f.d();
  const int n = f.n();
  if (factor < 0 || factor >= n) throw Error(ErrorCode::InvalidArgument, "factor out of range");
  std::size_t place = 1;
  for (int j = factor + 1; j < n; ++j) place *= d;
  const std::size_t q = state.dim();
  Matrix rho = Matrix::Zero(d, d);
  const Vector& a = state.amps();
  for (std::size_t i = 0; i < q; ++i) {
    const int di = static_cast<int>((i / place) % d);
    const std::size_t rest_i = i - di * place;
    for (int dj = 0; dj < d; ++dj) {
      const std::size_t j = rest_i + dj * place;
      rho(di, dj) += a(i) * std::conj(a(j));
    }
  }
  return (rho * rho).trace().real();
}

}  // namespace qps
