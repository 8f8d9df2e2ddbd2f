#include "qps/quasidist.hpp"

#include <cmath>
#include <numbers>

#include "qps/error.hpp"

namespace qps {

namespace {

// Index-space tables for one frame: positions of sums/differences and the
// characters chi(a b), all addressed by frame positions.
struct Tables {
  std::size_t q = 0;
  std::vector<std::uint32_t> add;  // [i * q + j] -> index(e_i + e_j)
  std::vector<std::uint32_t> sub;  // [i * q + j] -> index(e_i - e_j)
  std::vector<cplx> chi;           // [i * q + j] -> chi(e_i e_j)
  std::vector<cplx> phase;         // [i * q + j] -> displacement phase of (e_i, e_j)

  explicit Tables(const Frame& frame) : q(frame.dim()) {
    const auto& f = frame.field();
    add.resize(q * q);
    sub.resize(q * q);
    chi.resize(q * q);
    phase.resize(q * q);
    for (std::size_t i = 0; i < q; ++i) {
      const auto a = frame.element_at(i);
      for (std::size_t j = 0; j < q; ++j) {
        const auto b = frame.element_at(j);
        add[i * q + j] = static_cast<std::uint32_t>(frame.index(f.add(a, b)));
        sub[i * q + j] = static_cast<std::uint32_t>(frame.index(f.sub(a, b)));
        chi[i * q + j] = f.character(f.mul(a, b));
        phase[i * q + j] = displacement_phase(frame, a, b);
      }
    }
  }
};

void check_rho(const Matrix& rho, std::size_t q) {
  if (static_cast<std::size_t>(rho.rows()) != q || static_cast<std::size_t>(rho.cols()) != q)
    throw Error(ErrorCode::LengthMismatch, "operator dimension differs from the frame");
}

std::vector<cplx> overlaps(const Tables& t, const Vector& ref) {
  const std::size_t q = t.q;
  std::vector<cplx> f(q * q);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ik = 0; ik < static_cast<std::ptrdiff_t>(q); ++ik) {
    for (std::size_t il = 0; il < q; ++il) {
      cplx acc = 0.0;
      for (std::size_t x = 0; x < q; ++x)
        acc += std::conj(ref(t.add[x * q + il])) * t.chi[ik * q + x] * ref(x);
      f[ik * q + il] = t.phase[ik * q + il] * acc;
    }
  }
  return f;
}

// c(k, l) = f(k, l)^(-s)
std::vector<cplx> weights(const std::vector<cplx>& f, SOrder s) {
  std::vector<cplx> c(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    switch (s.value()) {
      case -1: c[i] = f[i]; break;
      case 0: c[i] = 1.0; break;
      default:
        if (std::abs(f[i]) < kSingularTol)
          throw Error(ErrorCode::SingularPKernel,
                      "fiducial overlap " + std::to_string(std::abs(f[i])) + " below threshold");
        c[i] = 1.0 / f[i];
    }
  }
  return c;
}

Matrix origin_kernel_impl(const Tables& t, const std::vector<cplx>& c) {
  const std::size_t q = t.q;
  Matrix w = Matrix::Zero(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q));
  const double inv_q = 1.0 / static_cast<double>(q);
  // w[x + l, x] = q^-1 sum_k c(k, l) phase(k, l) chi(k x)
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t il = 0; il < static_cast<std::ptrdiff_t>(q); ++il) {
    for (std::size_t x = 0; x < q; ++x) {
      cplx acc = 0.0;
      for (std::size_t ik = 0; ik < q; ++ik) acc += c[ik * q + il] * t.phase[ik * q + il] * t.chi[ik * q + x];
      w(t.add[x * q + il], x) = acc * inv_q;
    }
  }
  return w;
}

Matrix kernel_by_definition(const Tables& t, const std::vector<cplx>& c, std::size_t imu, std::size_t inu) {
  const std::size_t q = t.q;
  Matrix w = Matrix::Zero(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q));
  for (std::size_t ik = 0; ik < q; ++ik) {
    for (std::size_t il = 0; il < q; ++il) {
      // chi(mu l - nu k)
      const cplx weight = t.chi[imu * q + il] * std::conj(t.chi[inu * q + ik]) * c[ik * q + il];
      const cplx base = weight * t.phase[ik * q + il];
      for (std::size_t x = 0; x < q; ++x) w(t.add[x * q + il], x) += base * t.chi[ik * q + x];
    }
  }
  return w / static_cast<double>(q);
}

FramePtr require_frame(const StateVector& reference) {
  if (!reference.frame()) throw Error(ErrorCode::InvalidArgument, "reference state has no frame");
  return reference.frame();
}

}  // namespace

SOrder::SOrder(int s) : s_(s) {
  if (s < -1 || s > 1) throw Error(ErrorCode::InvalidArgument, "s must be -1, 0 or +1");
}

std::vector<cplx> fiducial_overlaps(const StateVector& reference) {
  const auto frame = require_frame(reference);
  return overlaps(Tables(*frame), reference.amps());
}

Kernel kernel(const StateVector& reference, SOrder s, PhasePoint p) {
  const auto frame = require_frame(reference);
  frame->field().check(p.mu);
  frame->field().check(p.nu);
  const Tables t(*frame);
  const auto c = weights(overlaps(t, reference.amps()), s);
  Matrix w = kernel_by_definition(t, c, frame->index(p.mu), frame->index(p.nu));
  return {p, s, Operator{std::move(w), frame, false, true}};
}

Matrix origin_kernel(const StateVector& reference, SOrder s) {
  const auto frame = require_frame(reference);
  const Tables t(*frame);
  return origin_kernel_impl(t, weights(overlaps(t, reference.amps()), s));
}

double QuasiDistGrid::max_imag() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v.imag()));
  return m;
}

cplx QuasiDistGrid::total() const {
  cplx acc = 0.0;
  for (const auto& v : values) acc += v;
  return acc;
}

QuasiDistGrid QuasiDistGrid::unit_sum() const {
  QuasiDistGrid out = *this;
  const cplx t = total();
  for (auto& v : out.values) v /= t;
  out.normalization = Normalization::UnitSum;
  return out;
}

QuasiDistGrid quasidist(const Matrix& rho, const StateVector& reference, SOrder s) {
  const auto frame = require_frame(reference);
  const Tables t(*frame);
  const std::size_t q = t.q;
  check_rho(rho, q);
  const Matrix w0 = origin_kernel_impl(t, weights(overlaps(t, reference.amps()), s));

  QuasiDistGrid grid{frame, s, Normalization::Raw, q, std::vector<cplx>(q * q), reference.amps()};
  // W(mu, nu) = sum_d chi(mu d) H(nu, d),
  // H(nu, d)  = sum_x rho[x + nu - d, x + nu] w0[x, x - d]
#pragma omp parallel
  {
    std::vector<cplx> h(q);
#pragma omp for schedule(static)
    for (std::ptrdiff_t inu = 0; inu < static_cast<std::ptrdiff_t>(q); ++inu) {
      for (std::size_t id = 0; id < q; ++id) {
        cplx acc = 0.0;
        for (std::size_t x = 0; x < q; ++x) {
          const std::size_t col = t.add[x * q + inu];
          const std::size_t row = t.sub[col * q + id];
          acc += rho(row, col) * w0(x, t.sub[x * q + id]);
        }
        h[id] = acc;
      }
      for (std::size_t imu = 0; imu < q; ++imu) {
        cplx acc = 0.0;
        for (std::size_t id = 0; id < q; ++id) acc += t.chi[imu * q + id] * h[id];
        grid.values[imu * q + inu] = acc;
      }
    }
  }
  return grid;
}

QuasiDistGrid quasidist_serial(const Matrix& rho, const StateVector& reference, SOrder s) {
  const auto frame = require_frame(reference);
  const Tables t(*frame);
  const std::size_t q = t.q;
  check_rho(rho, q);
  const auto c = weights(overlaps(t, reference.amps()), s);
  QuasiDistGrid grid{frame, s, Normalization::Raw, q, std::vector<cplx>(q * q), reference.amps()};
  for (std::size_t imu = 0; imu < q; ++imu)
    for (std::size_t inu = 0; inu < q; ++inu)
      grid.values[imu * q + inu] = (rho * kernel_by_definition(t, c, imu, inu)).trace();
  return grid;
}

namespace {

QuasiDistGrid raw_grid(const QuasiDistGrid& grid) {
  if (grid.normalization == Normalization::Raw) return grid;
  throw Error(ErrorCode::InvalidArgument, "reconstruction needs a raw grid");
}

}  // namespace

Matrix reconstruct(const QuasiDistGrid& input) {
  const QuasiDistGrid grid = raw_grid(input);
  const Tables t(*grid.frame);
  const std::size_t q = t.q;
  const Matrix w0 = origin_kernel_impl(t, weights(overlaps(t, grid.reference), grid.s.negated()));
  // G(nu, d) = sum_mu W(mu, nu) chi(mu d)
  std::vector<cplx> g(q * q);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t inu = 0; inu < static_cast<std::ptrdiff_t>(q); ++inu)
    for (std::size_t id = 0; id < q; ++id) {
      cplx acc = 0.0;
      for (std::size_t imu = 0; imu < q; ++imu) acc += grid.values[imu * q + inu] * t.chi[imu * q + id];
      g[inu * q + id] = acc;
    }
  // rho[X, Y] = q^-1 sum_nu G(nu, X - Y) w0'[X - nu, Y - nu]
  Matrix rho(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q));
  const double inv_q = 1.0 / static_cast<double>(q);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ix = 0; ix < static_cast<std::ptrdiff_t>(q); ++ix)
    for (std::size_t iy = 0; iy < q; ++iy) {
      const std::size_t id = t.sub[ix * q + iy];
      cplx acc = 0.0;
      for (std::size_t inu = 0; inu < q; ++inu)
        acc += g[inu * q + id] * w0(t.sub[ix * q + inu], t.sub[iy * q + inu]);
      rho(ix, iy) = acc * inv_q;
    }
  return rho;
}

Matrix reconstruct_serial(const QuasiDistGrid& input) {
  const QuasiDistGrid grid = raw_grid(input);
  const Tables t(*grid.frame);
  const std::size_t q = t.q;
  const auto c = weights(overlaps(t, grid.reference), grid.s.negated());
  Matrix rho = Matrix::Zero(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q));
  for (std::size_t imu = 0; imu < q; ++imu)
    for (std::size_t inu = 0; inu < q; ++inu) rho += grid.values[imu * q + inu] * kernel_by_definition(t, c, imu, inu);
  return rho / static_cast<double>(q);
}

QuasiDistGrid q_function(const Matrix& rho, const StateVector& reference) {
  const auto frame = require_frame(reference);
  const Tables t(*frame);
  const std::size_t q = t.q;
  check_rho(rho, q);
  const Vector& ref = reference.amps();
  QuasiDistGrid grid{frame, SOrder(-1), Normalization::Raw, q, std::vector<cplx>(q * q), ref};
#pragma omp parallel
  {
    Vector v(static_cast<Eigen::Index>(q));
#pragma omp for schedule(static)
    for (std::ptrdiff_t imu = 0; imu < static_cast<std::ptrdiff_t>(q); ++imu)
      for (std::size_t inu = 0; inu < q; ++inu) {
        const cplx ph = t.phase[imu * q + inu];
        for (std::size_t x = 0; x < q; ++x) v(t.add[x * q + inu]) = ph * t.chi[imu * q + x] * ref(x);
        grid.values[imu * q + inu] = v.dot(rho * v);
      }
  }
  return grid;
}

cplx line_sum(const QuasiDistGrid& grid, FieldElement alpha, FieldElement beta, bool vertical) {
  const auto& f = grid.frame->field();
  f.check(alpha);
  f.check(beta);
  cplx acc = 0.0;
  for (auto x : f.elements()) {
    if (vertical) {
      acc += grid.at(beta, x);
    } else {
      acc += grid.at(x, f.add(f.mul(alpha, x), beta));
    }
  }
  return acc;
}

std::vector<double> marginal(const QuasiDistGrid& grid, MarginalAxis axis) {
  const std::size_t q = grid.q;
  std::vector<double> out(q, 0.0);
  for (std::size_t imu = 0; imu < q; ++imu)
    for (std::size_t inu = 0; inu < q; ++inu) {
      const double v = grid.values[imu * q + inu].real();
      out[axis == MarginalAxis::Position ? inu : imu] += v;
    }
  for (double& v : out) v /= static_cast<double>(q);
  return out;
}

std::vector<double> wigner_reference_closed_form(int d, int K) {
  std::vector<double> out(static_cast<std::size_t>(d) * d, 0.0);
  const double scale = std::sqrt(2.0) / std::pow(static_cast<double>(d), 1.5);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) {
      double acc = 0.0;
      for (int k = -K; k <= K; ++k)
        for (int l = -K; l <= K; ++l) {
          const double sign = ((k * l) % 2 == 0) ? 1.0 : -1.0;
          const double angle = 2.0 * std::numbers::pi * (m * k - n * l) / d;
          acc += sign * std::cos(angle) * std::exp(-std::numbers::pi * (k * k + l * l) / (2.0 * d));
        }
      out[static_cast<std::size_t>(m) * d + n] = scale * acc;
    }
  return out;
}

}  // namespace qps
