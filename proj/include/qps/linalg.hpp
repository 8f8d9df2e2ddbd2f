#pragma once

#include <complex>
#include <span>

#include <Eigen/Dense>

#include "qps/frame.hpp"

namespace qps {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kHermitianTol = 1e-12;

/// Dense operator on the d^n-dimensional space of a frame. The flags record
/// properties known by construction; check them with has_valid_tags().
struct Operator {
  Matrix matrix;
  FramePtr frame;  // may be null for operators built outside a frame
  bool unitary = false;
  bool hermitian = false;

  std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
  bool has_valid_tags() const;
};

double max_abs(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);
double max_abs_diff(const Vector& a, const Vector& b);

bool is_unitary(const Matrix& a, double tol = kUnitaryTol);
bool is_hermitian(const Matrix& a, double tol = kHermitianTol);

Matrix kron(const Matrix& a, const Matrix& b);
Matrix kron(std::span<const Matrix> factors);
Vector kron(std::span<const Vector> factors);

}  // namespace qps
