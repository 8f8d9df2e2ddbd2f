#pragma once

// Reference ("vacuum") states, coherent and squeezed states, and state
// diagnostics.

#include <string>
#include <vector>

#include "qps/operators.hpp"

namespace qps {

inline constexpr double kNormTol = 1e-12;

/// Unit-norm amplitude vector laid out in a frame.
class StateVector {
 public:
  /// Throws NormViolation unless | ||amps|| - 1 | < kNormTol.
  StateVector(FramePtr frame, Vector amps);

  const FramePtr& frame() const { return frame_; }
  const Vector& amps() const { return amps_; }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }

  /// Amplitude of |lambda>.
  cplx operator[](FieldElement lambda) const { return amps_(frame_->index(lambda)); }

  Matrix density() const { return amps_ * amps_.adjoint(); }

  /// Free-form markers such as "non-canonical".
  const std::vector<std::string>& flags() const { return flags_; }
  void add_flag(std::string flag) { flags_.push_back(std::move(flag)); }

 private:
  FramePtr frame_;
  Vector amps_;
  std::vector<std::string> flags_;
};

StateVector apply(const Operator& op, const StateVector& state);

struct ThetaParams {
  int d = 3;
  int K = 0;        // sum runs over k in [-K, K]
  double C = 0.0;   // truncated sum of exp(-2 pi k^2 / d)
};

ThetaParams theta_params(int d);

/// Real amplitudes c_l of the +1 Fourier eigenstate built from the theta sum,
/// normalized, positive at l = 0. Throws EvenDimension for d = 2.
std::vector<double> theta_amplitudes(int d, int K);

StateVector reference_state(int d);

/// (|0> + xi |1>) / sqrt(1 + xi^2), xi = sqrt(2) - 1.
StateVector qubit_reference();
inline const double kXi = 0.41421356237309504880;

/// Product of single-qudit reference states: amplitude of |lambda> is
/// prod_j c(l_j) with l the coordinates of lambda in `sd`, laid out in the
/// frame. Throws NotSelfdual unless sd is selfdual or almost-selfdual; the
/// almost-selfdual case is flagged "non-canonical".
StateVector multi_reference_state(const FramePtr& frame, const Basis& sd);

/// multi_reference_state in the frame's phase basis.
StateVector reference_for(const FramePtr& frame);

/// D(p) |ref>.
StateVector coherent_state(const FramePtr& frame, PhasePoint p);
StateVector coherent_state(const StateVector& reference, PhasePoint p);

/// D(p) S_s |ref>. Throws ZeroSqueeze.
StateVector squeezed_state(const FramePtr& frame, FieldElement s, PhasePoint p);
StateVector squeezed_state(const StateVector& reference, FieldElement s, PhasePoint p);

/// <state|A|state>.
cplx expectation(const StateVector& state, const Matrix& a);

/// 1 - |<A>|^2. Throws NotUnitary.
double circular_dispersion(const StateVector& state, const Operator& a);

/// Coordinates m (in b) of the source amplitude: (S_s psi) at tuple l equals
/// psi at tuple m, m_i = sum_{j,k} tr(theta'_i theta_j theta'_k) l_j tr(s^-1 theta_k).
std::vector<int> squeeze_coefficient_map(const FieldContext& ctx, FieldElement s, const Basis& b,
                                         std::span<const int> l);

/// Tr(rho_j^2) for the reduced state of tensor factor j (0 = leftmost).
double reduced_purity(const StateVector& state, int factor);

}  // namespace qps
