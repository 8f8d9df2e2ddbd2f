#pragma once

// Generators, Fourier transform, displacements, parity, squeeze, Harper
// Hamiltonian and basis-change operators. Matrices are indexed by the
// frame layout: entry (frame.index(a), frame.index(b)) is <a|A|b>.

#include <vector>

#include "qps/linalg.hpp"

namespace qps {

/// U_nu |l> = |l + nu>.
Operator generator_U(const FramePtr& frame, FieldElement nu);
/// V_mu |l> = chi(mu l) |l>.
Operator generator_V(const FramePtr& frame, FieldElement mu);
/// F = q^(-1/2) sum chi(l l') |l><l'|.
Operator fourier(const FramePtr& frame);

/// Phase of D(mu, nu). Odd d: chi(2^-1 mu nu). d = 2: i^(sum_j m_j n_j) with
/// m, n the coordinates in the frame's selfdual phase basis.
cplx displacement_phase(const Frame& frame, FieldElement mu, FieldElement nu);
/// D(mu, nu) = phase U_nu V_mu.
Operator displacement(const FramePtr& frame, PhasePoint p);

/// (1/q) sum over all D(mu, nu).
Operator parity_from_displacements(const FramePtr& frame);
/// P |l> = |-l>.
Operator parity(const FramePtr& frame);

/// S |l> = |s l>; the amplitude at l becomes the old amplitude at s^-1 l.
Operator squeeze_operator(const FramePtr& frame, FieldElement s);

/// H = 2 - (U + U^dag)/2 - (V + V^dag)/2 on a single qudit.
Operator harper_hamiltonian(int d);

/// Permutation sending the tuple of mu in `from` to the tuple of mu in `to`,
/// on the flattened tuple space (first coordinate most significant).
Operator basis_change_operator(const FieldContext& ctx, const Basis& from, const Basis& to);

/// Single-qudit displacements D(m_j, n_j) whose tensor product is D(mu, nu)
/// in the frame of `sd`. Throws NotSelfdual for other bases.
std::vector<Operator> factorize_displacement(const FieldPtr& ctx, const Basis& sd, PhasePoint p);

/// Single-qudit frame over GF(d) used for factor operators and states.
FramePtr prime_frame(int d);

Operator tensor(std::span<const Operator> factors);

}  // namespace qps
