#pragma once

// A Frame fixes the field and the basis used to lay out vectors: the basis
// state |lambda> sits at index sum_j l_j d^(n-1-j), where (l_1..l_n) expands
// lambda in the frame basis. The first coordinate is the most significant
// digit, i.e. the leftmost tensor factor.

#include <memory>
#include <string>
#include <vector>

#include "qps/field.hpp"

namespace qps {

struct PhasePoint {
  FieldElement mu;  // shift of the V (modulation) label
  FieldElement nu;  // shift of the U (translation) label
};

class Frame {
 public:
  Frame(FieldPtr ctx, Basis basis);

  /// Frame in the canonical basis: selfdual/almost-selfdual search result.
  static std::shared_ptr<const Frame> canonical(FieldPtr ctx);
  static std::shared_ptr<const Frame> with_basis(FieldPtr ctx, Basis basis);

  const FieldContext& field() const { return *ctx_; }
  const FieldPtr& field_ptr() const { return ctx_; }
  const Basis& basis() const { return basis_; }
  const Basis& dual() const { return dual_; }
  std::size_t dim() const { return ctx_->order(); }

  /// Position of |lambda> in the flattened vector.
  std::size_t index(FieldElement lambda) const { return to_index_[lambda.index()]; }
  /// Element whose basis state sits at position i.
  FieldElement element_at(std::size_t i) const { return from_index_[i]; }

  std::vector<int> digits(FieldElement lambda) const;

  /// Basis used for the qubit displacement phase i^(sum m_j n_j) and for the
  /// multi-qudit reference state: the frame basis when it is (almost) selfdual,
  /// otherwise the canonical one from find_selfdual_basis.
  const Basis& phase_basis() const { return phase_basis_; }
  /// Coordinates of lambda in phase_basis().
  std::vector<int> phase_digits(FieldElement lambda) const;

  bool same_as(const Frame& other) const;

 private:
  FieldPtr ctx_;
  Basis basis_;
  Basis dual_;
  Basis phase_basis_;
  Basis phase_dual_;
  std::vector<std::size_t> to_index_;
  std::vector<FieldElement> from_index_;
};

using FramePtr = std::shared_ptr<const Frame>;

}  // namespace qps
