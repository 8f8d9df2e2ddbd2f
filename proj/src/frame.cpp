#include "qps/frame.hpp"

#include "qps/error.hpp"

namespace qps {

Frame::Frame(FieldPtr ctx, Basis basis)
    : ctx_(std::move(ctx)),
      basis_(make_basis(*ctx_, basis.elements, basis.kind)),
      dual_(dual_basis(*ctx_, basis_)),
      phase_basis_(basis_.kind == BasisKind::Selfdual ||
                           (ctx_->d() != 2 && basis_.kind == BasisKind::AlmostSelfdual)
                       ? basis_
                       : find_selfdual_basis(*ctx_)),
      phase_dual_(dual_basis(*ctx_, phase_basis_)) {
  const std::size_t q = ctx_->order();
  const int d = ctx_->d();
  const int n = ctx_->n();
  to_index_.assign(q, 0);
  from_index_.assign(q, ctx_->zero());
  for (auto lambda : ctx_->elements()) {
    std::size_t idx = 0;
    for (int j = 0; j < n; ++j) idx = idx * d + ctx_->trace(ctx_->mul(lambda, dual_.elements[j]));
    to_index_[lambda.index()] = idx;
    from_index_[idx] = lambda;
  }
}

std::shared_ptr<const Frame> Frame::canonical(FieldPtr ctx) {
  Basis b = find_selfdual_basis(*ctx);
  return std::make_shared<const Frame>(std::move(ctx), std::move(b));
}

std::shared_ptr<const Frame> Frame::with_basis(FieldPtr ctx, Basis basis) {
  return std::make_shared<const Frame>(std::move(ctx), std::move(basis));
}

std::vector<int> Frame::digits(FieldElement lambda) const {
  ctx_->check(lambda);
  std::vector<int> out(ctx_->n());
  for (int j = 0; j < ctx_->n(); ++j) out[j] = ctx_->trace(ctx_->mul(lambda, dual_.elements[j]));
  return out;
}

std::vector<int> Frame::phase_digits(FieldElement lambda) const {
  ctx_->check(lambda);
  std::vector<int> out(ctx_->n());
  for (int j = 0; j < ctx_->n(); ++j) out[j] = ctx_->trace(ctx_->mul(lambda, phase_dual_.elements[j]));
  return out;
}

bool Frame::same_as(const Frame& other) const {
  return ctx_->same_field(*other.ctx_) && basis_.elements == other.basis_.elements;
}

}  // namespace qps
