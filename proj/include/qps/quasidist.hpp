#pragma once

// s-ordered kernels and quasidistributions on the q x q phase-space grid.
//
//   w_s(mu, nu) = q^-1 sum_{k,l} chi(mu l - nu k) D(k, l) f(k, l)^(-s),
//   f(k, l)     = <ref|D(k, l)|ref>,
//   W_s(mu, nu) = Tr[rho w_s(mu, nu)],
//   rho         = q^-1 sum W_s(mu, nu) w_{-s}(mu, nu).
//
// The fast path uses w_s(mu, nu) = D w_s(0,0) D^dag and is OpenMP-parallel
// over grid rows; the serial path sums the definition point by point.

#include <optional>
#include <vector>

#include "qps/states.hpp"

namespace qps {

inline constexpr double kSingularTol = 1e-12;

class SOrder {
 public:
  /// Throws InvalidArgument unless s is -1, 0 or +1.
  explicit SOrder(int s);
  int value() const { return s_; }
  SOrder negated() const { return SOrder(-s_); }
  bool operator==(const SOrder&) const = default;

 private:
  int s_;
};

struct Kernel {
  PhasePoint point;
  SOrder s{0};
  Operator op;
};

enum class Normalization { Raw, UnitSum };

/// Overlaps f(k, l) = <ref|D(k, l)|ref>, stored at [index(k) * q + index(l)].
std::vector<cplx> fiducial_overlaps(const StateVector& reference);

/// Kernel by the defining double sum. Throws SingularPKernel for s = +1 when
/// some |f| < kSingularTol.
Kernel kernel(const StateVector& reference, SOrder s, PhasePoint p);

/// w_s(0, 0) from the O(q^3) row sums.
Matrix origin_kernel(const StateVector& reference, SOrder s);

struct QuasiDistGrid {
  FramePtr frame;
  SOrder s{0};
  Normalization normalization = Normalization::Raw;
  std::size_t q = 0;
  std::vector<cplx> values;  // [index(mu) * q + index(nu)]
  Vector reference;          // fiducial amplitudes used by the kernels

  cplx at(FieldElement mu, FieldElement nu) const { return values[frame->index(mu) * q + frame->index(nu)]; }
  cplx& at(FieldElement mu, FieldElement nu) { return values[frame->index(mu) * q + frame->index(nu)]; }
  double max_imag() const;
  cplx total() const;
  /// Copy scaled so the values sum to 1.
  QuasiDistGrid unit_sum() const;
};

/// Fast grid; OpenMP-parallel over rows, bit-identical to a single thread.
QuasiDistGrid quasidist(const Matrix& rho, const StateVector& reference, SOrder s);
/// Definitional grid: builds every kernel by its double sum, then traces.
QuasiDistGrid quasidist_serial(const Matrix& rho, const StateVector& reference, SOrder s);

/// Inverts a raw grid with the (-s) kernels (fast path).
Matrix reconstruct(const QuasiDistGrid& grid);
Matrix reconstruct_serial(const QuasiDistGrid& grid);

/// Q(mu, nu) = <mu,nu|rho|mu,nu> from coherent-state overlaps.
QuasiDistGrid q_function(const Matrix& rho, const StateVector& reference);

/// Sum over nu = alpha mu + beta, or over mu = beta when vertical.
cplx line_sum(const QuasiDistGrid& grid, FieldElement alpha, FieldElement beta, bool vertical = false);

enum class MarginalAxis {
  Position,  // sum over mu: q <nu|rho|nu>
  Momentum,  // sum over nu: q <mu~|rho|mu~>, |mu~> = F|mu>
};

/// Marginal divided by q, indexed by frame position.
std::vector<double> marginal(const QuasiDistGrid& grid, MarginalAxis axis);

/// Large-d closed form for W of the single-qudit reference state,
///   sqrt(2)/d^(3/2) sum_{k,l} (-1)^(kl) w(mk - nl) exp(-pi (k^2 + l^2) / 2d),
/// summed over |k|, |l| <= K. Cross-check only.
std::vector<double> wigner_reference_closed_form(int d, int K);

}  // namespace qps
