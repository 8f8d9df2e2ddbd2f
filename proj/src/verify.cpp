#include "qps/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <json.hpp>

#include "qps/error.hpp"
#include "qps/io.hpp"
#include "qps/quasidist.hpp"

namespace qps {

namespace {

struct FieldChoice {
  int d;
  int n;
  std::optional<Polynomial> poly;
};

std::string field_name(const FieldContext& f) {
  return "GF(" + std::to_string(f.order()) + "," + f.polynomial().to_string() + ")";
}

class Suite {
 public:
  Suite(VerifyReport& report, double tol_scale) : report_(report), tol_scale_(tol_scale) {}

  // body returns the worst error; pass iff it is below tol and no exception.
  void run(const std::string& name, double tol, const std::function<double(std::string&)>& body) {
    CheckResult r;
    r.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      r.error = body(r.detail);
      r.passed = r.error <= tol * tol_scale_;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report_.checks.push_back(std::move(r));
  }

 private:
  VerifyReport& report_;
  double tol_scale_;
};

double flag(bool ok) { return ok ? 0.0 : 1.0; }

Matrix random_density(std::size_t q, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix a(q, q);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = {g(rng), g(rng)};
  Matrix rho = a * a.adjoint();
  return rho / rho.trace();
}

Vector random_unit(std::size_t q, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(q);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = {g(rng), g(rng)};
  return v / v.norm();
}

double grid_diff(const QuasiDistGrid& a, const QuasiDistGrid& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

void field_checks(Suite& suite, const FieldPtr& ctx) {
  const auto& f = *ctx;
  const std::string tag = field_name(f);
  const auto all = f.elements();

  if (f.order() <= 81) {
    suite.run("field.axioms " + tag, 0.0, [&](std::string&) {
      int bad = 0;
      for (auto a : all) {
        if (!a.is_zero() && f.mul(a, f.inv(a)) != f.one()) ++bad;
        if (f.add(a, f.neg(a)) != f.zero()) ++bad;
        for (auto b : all) {
          if (f.add(a, b) != f.add(b, a) || f.mul(a, b) != f.mul(b, a)) ++bad;
          for (auto c : all) {
            if (f.mul(f.mul(a, b), c) != f.mul(a, f.mul(b, c))) ++bad;
            if (f.add(f.add(a, b), c) != f.add(a, f.add(b, c))) ++bad;
            if (f.mul(a, f.add(b, c)) != f.add(f.mul(a, b), f.mul(a, c))) ++bad;
          }
        }
      }
      return static_cast<double>(bad);
    });
  }

  suite.run("field.tables " + tag, 0.0, [&](std::string&) {
    int bad = 0;
    for (auto a : all) {
      if (a.is_zero()) continue;
      if (f.power_of_sigma(f.log(a)) != a) ++bad;
    }
    // sigma has order exactly q - 1
    FieldElement t = f.sigma();
    for (std::uint32_t k = 1; k + 1 < f.order(); ++k, t = f.mul(t, f.sigma()))
      if (t == f.one()) ++bad;
    if (t != f.one()) ++bad;
    return static_cast<double>(bad);
  });

  suite.run("field.trace_linear " + tag, 0.0, [&](std::string&) {
    int bad = 0;
    for (auto a : all) {
      const int ta = f.trace(a);
      if (ta < 0 || ta >= f.d()) ++bad;
      for (int k = 0; k < f.d(); ++k)
        if (f.trace(f.mul(f.from_int(k), a)) != (k * ta) % f.d()) ++bad;
      for (auto b : all)
        if (f.trace(f.add(a, b)) != (ta + f.trace(b)) % f.d()) ++bad;
    }
    return static_cast<double>(bad);
  });

  suite.run("field.characters " + tag, 1e-12, [&](std::string&) {
    double err = 0.0;
    for (auto a : all) {
      cplx sum = 0.0;
      for (auto b : all) {
        err = std::max(err, std::abs(f.character(f.add(a, b)) - f.character(a) * f.character(b)));
        sum += f.character(f.mul(a, b));
      }
      err = std::max(err, std::abs(sum - (a.is_zero() ? static_cast<double>(f.order()) : 0.0)));
    }
    return err;
  });

  suite.run("field.bases " + tag, 0.0, [&](std::string& detail) {
    int bad = 0;
    std::vector<Basis> bases{polynomial_basis(f), find_selfdual_basis(f)};
    detail = std::string(to_string(bases[1].kind));
    for (const auto& b : bases) {
      if (!inverse_mod(gram_matrix(f, b), f.d())) ++bad;
      for (auto a : all) {
        const auto c = expand(f, a, b);
        if (compose(f, c, b) != a) ++bad;
      }
      if (dual_basis(f, dual_basis(f, b)).elements != b.elements) ++bad;
    }
    const auto& sd = bases[1];
    if (sd.kind == BasisKind::Selfdual && !is_selfdual(f, sd)) ++bad;
    if (sd.kind == BasisKind::AlmostSelfdual && (is_selfdual(f, sd) || !is_almost_selfdual(f, sd))) ++bad;
    return static_cast<double>(bad);
  });
}

void operator_checks(Suite& suite, const FramePtr& frame, std::mt19937_64& rng) {
  const auto& f = frame->field();
  const std::string tag = field_name(f);
  const auto all = f.elements();
  const std::size_t q = f.order();
  const bool odd = f.d() != 2;

  suite.run("operators.weyl " + tag, 1e-12, [&](std::string&) {
    double err = 0.0;
    for (auto mu : all) {
      const Matrix v = generator_V(frame, mu).matrix;
      for (auto nu : all) {
        const Matrix u = generator_U(frame, nu).matrix;
        err = std::max(err, max_abs_diff(Matrix(v * u), Matrix(f.character(f.mul(mu, nu)) * u * v)));
      }
    }
    return err;
  });

  suite.run("operators.generators " + tag, 1e-12, [&](std::string&) {
    double err = 0.0;
    for (auto a : all)
      for (auto b : all) {
        err = std::max(err, max_abs_diff(Matrix(generator_U(frame, a).matrix * generator_U(frame, b).matrix),
                                         generator_U(frame, f.add(a, b)).matrix));
        err = std::max(err, max_abs_diff(Matrix(generator_V(frame, a).matrix * generator_V(frame, b).matrix),
                                         generator_V(frame, f.add(a, b)).matrix));
      }
    return err;
  });

  std::vector<Matrix> ds(q * q);
  for (auto mu : all)
    for (auto nu : all) ds[frame->index(mu) * q + frame->index(nu)] = displacement(frame, {mu, nu}).matrix;
  auto D = [&](FieldElement mu, FieldElement nu) -> const Matrix& { return ds[frame->index(mu) * q + frame->index(nu)]; };

  suite.run("operators.displacement_unitary " + tag, kUnitaryTol, [&](std::string&) {
    double err = max_abs_diff(D(f.zero(), f.zero()), Matrix::Identity(q, q));
    for (const auto& m : ds) err = std::max(err, max_abs_diff(Matrix(m.adjoint() * m), Matrix::Identity(q, q)));
    for (auto a : all) {
      err = std::max(err, std::abs(displacement_phase(*frame, a, f.zero()) - 1.0));
      err = std::max(err, std::abs(displacement_phase(*frame, f.zero(), a) - 1.0));
    }
    return err;
  });

  if (odd && q <= 25) {
    suite.run("operators.displacement_adjoint " + tag, 1e-12, [&](std::string&) {
      double err = 0.0;
      for (auto mu : all)
        for (auto nu : all) {
          err = std::max(err, max_abs_diff(Matrix(D(mu, nu).adjoint()), D(f.neg(mu), f.neg(nu))));
          const cplx pp = displacement_phase(*frame, mu, nu) * displacement_phase(*frame, f.neg(mu), f.neg(nu));
          err = std::max(err, std::abs(pp - f.character(f.mul(mu, nu))));
        }
      return err;
    });
  }

  if (odd) {
    suite.run("operators.composition " + tag, 1e-12, [&](std::string& detail) {
      const FieldElement half = f.from_int((f.d() + 1) / 2);
      double err = 0.0;
      auto check = [&](FieldElement m1, FieldElement n1, FieldElement m2, FieldElement n2) {
        const cplx ph = f.character(f.mul(half, f.sub(f.mul(m1, n2), f.mul(m2, n1))));
        err = std::max(err, max_abs_diff(Matrix(D(m1, n1) * D(m2, n2)), Matrix(ph * D(f.add(m1, m2), f.add(n1, n2)))));
      };
      if (q <= 9) {
        for (auto m1 : all)
          for (auto n1 : all)
            for (auto m2 : all)
              for (auto n2 : all) check(m1, n1, m2, n2);
        detail = "exhaustive";
      } else {
        std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(q - 1));
        for (int k = 0; k < 500; ++k)
          check(f.element(pick(rng)), f.element(pick(rng)), f.element(pick(rng)), f.element(pick(rng)));
        detail = "500 sampled pairs";
      }
      return err;
    });
  }

  suite.run("operators.trace_orthogonality " + tag, 1e-10, [&](std::string&) {
    double err = 0.0;
    for (std::size_t a = 0; a < ds.size(); ++a)
      for (std::size_t b = 0; b < ds.size(); ++b) {
        const cplx t = (ds[a].conjugate().cwiseProduct(ds[b])).sum();
        err = std::max(err, std::abs(t - (a == b ? static_cast<double>(q) : 0.0)));
      }
    return err;
  });

  suite.run("operators.fourier " + tag, 1e-12, [&](std::string&) {
    const Matrix F = fourier(frame).matrix;
    double err = max_abs_diff(Matrix(F.adjoint() * F), Matrix::Identity(q, q));
    err = std::max(err, max_abs_diff(Matrix(F * F * F * F), Matrix::Identity(q, q)));
    for (auto mu : all)
      err = std::max(err, max_abs_diff(Matrix(F * generator_U(frame, mu).matrix * F.adjoint()),
                                       generator_V(frame, mu).matrix));
    return err;
  });

  if (odd) {
    suite.run("operators.parity " + tag, 1e-11, [&](std::string&) {
      const Matrix P = parity(frame).matrix;
      Matrix sum = Matrix::Zero(q, q);
      for (const auto& m : ds) sum += m;
      sum /= static_cast<double>(q);
      return std::max(max_abs_diff(sum, P), max_abs_diff(Matrix(P * P), Matrix::Identity(q, q)));
    });
  }

  suite.run("operators.squeeze " + tag, 1e-12, [&](std::string&) {
    double err = 0.0;
    for (auto s : all) {
      if (s.is_zero()) continue;
      const Matrix S = squeeze_operator(frame, s).matrix;
      int fixed = 0;
      for (std::size_t i = 0; i < q; ++i) {
        int ones = 0;
        for (std::size_t j = 0; j < q; ++j) {
          if (S(i, j) == cplx(1.0)) ++ones;
          else if (S(i, j) != cplx(0.0)) err = 1.0;
        }
        if (ones != 1) err = 1.0;
        if (S(i, i) == cplx(1.0)) ++fixed;
      }
      if (s != f.one() && fixed != 1) err = 1.0;
      const FieldElement si = f.inv(s);
      for (auto a : all) {
        err = std::max(err, max_abs_diff(Matrix(S * generator_U(frame, a).matrix * S.adjoint()),
                                         generator_U(frame, f.mul(s, a)).matrix));
        err = std::max(err, max_abs_diff(Matrix(S * generator_V(frame, a).matrix * S.adjoint()),
                                         generator_V(frame, f.mul(si, a)).matrix));
      }
    }
    return err;
  });

  if (f.n() > 1 && frame->basis().kind == BasisKind::Selfdual) {
    suite.run("operators.selfdual_factorization " + tag, 1e-10, [&](std::string&) {
      double err = 0.0;
      for (auto mu : all)
        for (auto nu : all) {
          const auto factors = factorize_displacement(frame->field_ptr(), frame->basis(), {mu, nu});
          err = std::max(err, max_abs_diff(tensor(factors).matrix, D(mu, nu)));
        }
      const Matrix f1 = fourier(prime_frame(f.d())).matrix;
      std::vector<Matrix> fs(f.n(), f1);
      err = std::max(err, max_abs_diff(kron(std::span<const Matrix>(fs)), fourier(frame).matrix));
      return err;
    });
  }
}

void state_checks(Suite& suite, const FramePtr& frame, std::mt19937_64& rng) {
  const auto& f = frame->field();
  const std::string tag = field_name(f);
  const auto all = f.elements();
  const std::size_t q = f.order();
  const bool odd = f.d() != 2;
  const auto ref = reference_for(frame);

  suite.run("states.reference " + tag, 1e-10, [&](std::string&) {
    double err = 0.0;
    const bool factorizable = frame->basis().kind == BasisKind::Selfdual;
    if (factorizable) err = max_abs_diff(Vector(fourier(frame).matrix * ref.amps()), ref.amps());
    for (auto a : all) {
      if (ref[a] != ref[f.neg(a)]) err = 1.0;
      if (ref[a].real() < 0.0 || ref[a].imag() != 0.0) err = 1.0;
    }
    return err;
  });

  if (f.n() == 1 && odd) {
    suite.run("states.reference_moments " + tag, 1e-12, [&](std::string&) {
      const cplx eu = expectation(ref, generator_U(frame, f.one()).matrix);
      const cplx ev = expectation(ref, generator_V(frame, f.one()).matrix);
      return std::abs(eu - ev);
    });
    suite.run("states.theta_truncation " + tag, 1e-15, [&](std::string&) {
      const auto p = theta_params(f.d());
      const auto c1 = theta_amplitudes(f.d(), p.K);
      const auto c2 = theta_amplitudes(f.d(), 2 * p.K);
      double err = 0.0;
      for (int l = 0; l < f.d(); ++l) err = std::max(err, std::abs(c1[l] - c2[l]));
      return err;
    });
  }

  suite.run("states.coherent_covariance " + tag, 1e-12, [&](std::string&) {
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(q - 1));
    double err = 0.0;
    for (int k = 0; k < 40; ++k) {
      const PhasePoint p1{f.element(pick(rng)), f.element(pick(rng))};
      const PhasePoint p2{f.element(pick(rng)), f.element(pick(rng))};
      const Vector a = displacement(frame, p1).matrix * coherent_state(ref, p2).amps();
      const Vector b = coherent_state(ref, {f.add(p1.mu, p2.mu), f.add(p1.nu, p2.nu)}).amps();
      const cplx overlap = b.dot(a);
      err = std::max(err, std::abs(std::abs(overlap) - 1.0));
      err = std::max(err, max_abs_diff(a, Vector(overlap * b)));
    }
    return err;
  });

  if (f.n() == 1 && odd) {
    suite.run("states.squeezed_vacuum_moments " + tag, 1e-12, [&](std::string& detail) {
      double err = 0.0;
      detail = "<U> = <V^(s^-2)> on S_s|ref>";
      for (auto s : all) {
        if (s.is_zero()) continue;
        const auto sv = squeezed_state(ref, s, {f.zero(), f.zero()});
        const cplx eu = expectation(sv, generator_U(frame, f.one()).matrix);
        const cplx ev = expectation(sv, generator_V(frame, f.inv(f.mul(s, s))).matrix);
        err = std::max(err, std::abs(eu - ev));
      }
      return err;
    });
  }

  if (f.d() == 2 && f.n() == 3 && frame->basis().kind == BasisKind::Selfdual) {
    suite.run("states.entanglement_onset " + tag, 0.0, [&](std::string& detail) {
      int bad = 0;
      double worst = 0.0;
      for (int trial = 0; trial < 10; ++trial) {
        std::vector<Vector> parts;
        for (int j = 0; j < 3; ++j) parts.push_back(random_unit(2, rng));
        const StateVector prod(frame, kron(std::span<const Vector>(parts)));
        for (auto s : all) {
          if (s.is_zero() || s == f.one()) continue;
          const auto out = apply(squeeze_operator(frame, s), prod);
          const double purity = reduced_purity(out, 0);
          worst = std::max(worst, purity);
          if (!(purity < 1.0 - 1e-9)) ++bad;
        }
      }
      detail = "max single-qubit purity " + std::to_string(worst);
      // classes related by a qubit permutation
      auto perm_equivalent = [&](FieldElement a, FieldElement b) {
        const Matrix sa = squeeze_operator(frame, a).matrix;
        const Matrix sb = squeeze_operator(frame, b).matrix;
        std::array<int, 3> perm{0, 1, 2};
        do {
          Matrix p = Matrix::Zero(8, 8);
          for (int i = 0; i < 8; ++i) {
            const int bits[3] = {(i >> 2) & 1, (i >> 1) & 1, i & 1};
            int j = 0;
            for (int k = 0; k < 3; ++k) j = j * 2 + bits[perm[k]];
            p(j, i) = 1.0;
          }
          if (max_abs_diff(sa, Matrix(p * sb * p.adjoint())) == 0.0) return true;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return false;
      };
      const auto s = [&](int k) { return f.power_of_sigma(k); };
      for (int k : {5, 6})
        if (!perm_equivalent(s(k), s(3))) ++bad;
      for (int k : {2, 4})
        if (!perm_equivalent(s(k), s(1))) ++bad;
      return static_cast<double>(bad);
    });
  }
}

void quasidist_checks(Suite& suite, const FramePtr& frame, std::mt19937_64& rng) {
  const auto& f = frame->field();
  const std::string tag = field_name(f);
  const auto all = f.elements();
  const std::size_t q = f.order();
  const bool odd = f.d() != 2;
  const auto ref = reference_for(frame);
  const auto overlaps = fiducial_overlaps(ref);
  const bool p_regular =
      std::all_of(overlaps.begin(), overlaps.end(), [](cplx v) { return std::abs(v) >= kSingularTol; });
  std::vector<int> orders{0, -1};
  if (p_regular) orders.push_back(1);

  suite.run("quasidist.kernel_origin " + tag, 1e-11, [&](std::string&) {
    double err = max_abs_diff(origin_kernel(ref, SOrder(-1)), ref.density());
    if (odd) err = std::max(err, max_abs_diff(kernel(ref, SOrder(0), {f.zero(), f.zero()}).op.matrix, parity(frame).matrix));
    return err;
  });

  if (q <= 25) {
    suite.run("quasidist.kernel_algebra " + tag, 1e-10, [&](std::string& detail) {
      double err = 0.0;
      detail = p_regular ? "s in {-1,0,1}" : "s in {-1,0}; P kernel singular";
      for (int s : orders) {
        std::vector<Matrix> w(q * q), wn;
        for (auto mu : all)
          for (auto nu : all) w[frame->index(mu) * q + frame->index(nu)] = kernel(ref, SOrder(s), {mu, nu}).op.matrix;
        const Matrix w0 = w[frame->index(f.zero()) * q + frame->index(f.zero())];
        for (auto mu : all)
          for (auto nu : all) {
            const Matrix& k = w[frame->index(mu) * q + frame->index(nu)];
            err = std::max(err, max_abs_diff(k, Matrix(k.adjoint())));
            const Matrix D = displacement(frame, {mu, nu}).matrix;
            err = std::max(err, max_abs_diff(Matrix(D * w0 * D.adjoint()), k));
          }
        if (s == 1 || (s == -1 && !p_regular)) continue;
        if (s == 0) {
          wn = w;
        } else {
          wn.resize(q * q);
          for (auto mu : all)
            for (auto nu : all) wn[frame->index(mu) * q + frame->index(nu)] = kernel(ref, SOrder(-s), {mu, nu}).op.matrix;
        }
        for (std::size_t a = 0; a < w.size(); ++a)
          for (std::size_t b = 0; b < w.size(); ++b) {
            const cplx t = (w[a] * wn[b]).trace();
            err = std::max(err, std::abs(t - (a == b ? static_cast<double>(q) : 0.0)) / q);
          }
      }
      return err;
    });
  }

  suite.run("quasidist.grid " + tag, 1e-9, [&](std::string& detail) {
    double err = 0.0;
    detail = p_regular ? "s in {-1,0,1}" : "s in {-1,0}; P kernel singular";
    for (int trial = 0; trial < 5; ++trial) {
      const Matrix rho = random_density(q, rng);
      for (int s : orders) {
        const auto g = quasidist(rho, ref, SOrder(s));
        if (s != 1) err = std::max(err, g.max_imag());
        err = std::max(err, std::abs(g.total() - static_cast<double>(q)));
        if (s != 1 || p_regular) {
          const bool invertible = s == 0 || p_regular;
          if (invertible) err = std::max(err, max_abs_diff(reconstruct(g), rho));
        }
        if (trial == 0) err = std::max(err, grid_diff(g, quasidist_serial(rho, ref, SOrder(s))));
      }
    }
    return err;
  });

  suite.run("quasidist.q_function " + tag, 1e-12, [&](std::string&) {
    const Matrix rho = random_density(q, rng);
    return grid_diff(q_function(rho, ref), quasidist(rho, ref, SOrder(-1)));
  });

  suite.run("quasidist.translation " + tag, 1e-12, [&](std::string&) {
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(q - 1));
    const Matrix rho = random_density(q, rng);
    double err = 0.0;
    for (int k = 0; k < 3; ++k) {
      const PhasePoint p{f.element(pick(rng)), f.element(pick(rng))};
      const Matrix D = displacement(frame, p).matrix;
      for (int s : orders) {
        const auto g = quasidist(rho, ref, SOrder(s));
        const auto h = quasidist(Matrix(D * rho * D.adjoint()), ref, SOrder(s));
        for (auto mu : all)
          for (auto nu : all) err = std::max(err, std::abs(h.at(f.add(mu, p.mu), f.add(nu, p.nu)) - g.at(mu, nu)));
      }
    }
    return err;
  });

  if (odd) {
    suite.run("quasidist.squeeze_geometry " + tag, 1e-10, [&](std::string&) {
      const Matrix rho = random_density(q, rng);
      const auto g = quasidist(rho, ref, SOrder(0));
      double err = 0.0;
      for (auto s : all) {
        if (s.is_zero()) continue;
        const Matrix S = squeeze_operator(frame, s).matrix;
        const auto h = quasidist(Matrix(S * rho * S.adjoint()), ref, SOrder(0));
        const FieldElement si = f.inv(s);
        for (auto mu : all)
          for (auto nu : all) err = std::max(err, std::abs(h.at(mu, nu) - g.at(f.mul(s, mu), f.mul(si, nu))));
        // axis sums of rho_s vs rho_{s^-1} for the reference state
        const Matrix r0 = ref.density();
        const Matrix Si = squeeze_operator(frame, si).matrix;
        const auto a = quasidist(Matrix(S * r0 * S.adjoint()), ref, SOrder(0));
        const auto b = quasidist(Matrix(Si * r0 * Si.adjoint()), ref, SOrder(0));
        cplx lhs = 0.0, rhs = 0.0;
        for (auto x : all) {
          lhs += a.at(x, f.zero());
          rhs += b.at(f.zero(), x);
        }
        err = std::max(err, std::abs(lhs - rhs));
      }
      return err;
    });
  }

  if (f.n() > 1 && frame->basis().kind == BasisKind::Selfdual) {
    suite.run("quasidist.selfdual_factorization " + tag, 1e-10, [&](std::string&) {
      auto single = prime_frame(f.d());
      const auto ref1 = reference_for(single);
      double err = 0.0;
      for (int trial = 0; trial < 3; ++trial) {
        std::vector<Vector> parts;
        std::vector<QuasiDistGrid> grids;
        for (int j = 0; j < f.n(); ++j) {
          parts.push_back(random_unit(f.d(), rng));
          grids.push_back(quasidist(Matrix(parts.back() * parts.back().adjoint()), ref1, SOrder(0)));
        }
        const Vector prod = kron(std::span<const Vector>(parts));
        const auto g = quasidist(Matrix(prod * prod.adjoint()), ref, SOrder(0));
        for (auto mu : all)
          for (auto nu : all) {
            const auto m = expand(f, mu, frame->basis());
            const auto n = expand(f, nu, frame->basis());
            cplx v = 1.0;
            for (int j = 0; j < f.n(); ++j) v *= grids[j].values[m[j] * f.d() + n[j]];
            err = std::max(err, std::abs(v - g.at(mu, nu)));
          }
      }
      return err;
    });
  }

  suite.run("quasidist.marginals " + tag, 1e-12, [&](std::string&) {
    const Matrix rho = random_density(q, rng);
    const auto g = quasidist(rho, ref, SOrder(0));
    const Matrix F = fourier(frame).matrix;
    const Matrix rho_f = F.adjoint() * rho * F;
    const auto pos = marginal(g, MarginalAxis::Position);
    const auto mom = marginal(g, MarginalAxis::Momentum);
    double err = 0.0;
    for (std::size_t i = 0; i < q; ++i) {
      err = std::max(err, std::abs(pos[i] - rho(i, i).real()));
      err = std::max(err, std::abs(mom[i] - rho_f(i, i).real()));
    }
    return err;
  });

  const bool f_symmetric = frame->basis().kind == BasisKind::Selfdual;
  if (f_symmetric) {
    suite.run("quasidist.line_sums " + tag, 1e-12, [&](std::string&) {
      const auto g = quasidist(ref.density(), ref, SOrder(0));
      double err = 0.0;
      cplx total = g.total();
      for (auto a : all) {
        cplx family = 0.0;
        for (auto b : all) family += line_sum(g, a, b);
        err = std::max(err, std::abs(family - total));
        if (a.is_zero()) continue;
        const FieldElement partner = f.neg(f.inv(a));
        for (auto b : all) err = std::max(err, std::abs(line_sum(g, a, b) - line_sum(g, partner, f.mul(partner, b))));
      }
      // horizontal axis (nu = 0) against vertical axis (mu = 0)
      err = std::max(err, std::abs(line_sum(g, f.zero(), f.zero()) - line_sum(g, f.zero(), f.zero(), true)));
      return err;
    });
  }
}

void large_d_checks(Suite& suite, const std::vector<int>& dims) {
  std::vector<std::pair<int, double>> harper_errors;
  for (int d : dims) {
    if (d % 2 == 0 || !is_prime(d)) continue;
    const std::string tag = "d=" + std::to_string(d);
    auto frame = prime_frame(d);
    const auto& f = frame->field();
    const auto ref = reference_for(frame);
    const Matrix F = fourier(frame).matrix;
    const Operator H = harper_hamiltonian(d);

    suite.run("large.reference_fourier " + tag, 1e-10,
              [&](std::string&) { return max_abs_diff(Vector(F * ref.amps()), ref.amps()); });
    suite.run("large.harper_commutes " + tag, 1e-12,
              [&](std::string&) { return max_abs_diff(Matrix(H.matrix * F), Matrix(F * H.matrix)); });

    const double pi = std::numbers::pi;
    const double approx = pi / d - pi * pi / (2.0 * d * d) + pi * pi * pi / (6.0 * d * d * d);
    const double energy = expectation(ref, H.matrix).real();
    harper_errors.emplace_back(d, std::abs(energy - approx));
    suite.run("large.harper_ground_overlap " + tag, 0.0, [&](std::string& detail) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(H.matrix);
      const double overlap = std::abs(es.eigenvectors().col(0).dot(ref.amps()));
      detail = "overlap " + std::to_string(overlap) + ", <H> error " + std::to_string(std::abs(energy - approx));
      return flag(d < 31 || overlap > 0.999);
    });

    suite.run("large.uncertainty " + tag, 0.0, [&](std::string& detail) {
      const auto u = generator_U(frame, f.one());
      const auto v = generator_V(frame, f.one());
      const double bound = pi * pi / (static_cast<double>(d) * d);
      const double ratio = circular_dispersion(ref, u) * circular_dispersion(ref, v) / bound;
      detail = "(dU)^2 (dV)^2 / (pi^2/d^2) = " + std::to_string(ratio);
      bool ok = ratio >= 1.0;
      if (d == 31) ok = ok && ratio >= 0.9 && ratio <= 1.1;
      return flag(ok);
    });

    suite.run("large.q_symmetry " + tag, 1e-12, [&](std::string&) {
      const auto g = q_function(ref.density(), ref);
      double err = 0.0;
      for (auto m : f.elements())
        for (auto n : f.elements()) err = std::max(err, std::abs(g.at(m, n) - g.at(f.neg(n), m)));
      return err;
    });
  }
  if (harper_errors.size() >= 2) {
    std::sort(harper_errors.begin(), harper_errors.end());
    suite.run("large.harper_energy_monotone", 0.0, [&](std::string& detail) {
      bool ok = true;
      for (std::size_t i = 0; i < harper_errors.size(); ++i) {
        detail += (i ? ", " : "") + std::to_string(harper_errors[i].first) + ":" + std::to_string(harper_errors[i].second);
        if (i > 0 && !(harper_errors[i].second < harper_errors[i - 1].second)) ok = false;
      }
      return flag(ok);
    });
  }
}

}  // namespace

bool VerifyReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::vector<std::string> VerifyReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (!c.passed) out.push_back(c.name);
  return out;
}

std::string VerifyReport::to_json() const {
  nlohmann::json doc;
  doc["schema"] = kSchemaVersion;
  doc["kind"] = "verify-report";
  doc["ok"] = ok();
  nlohmann::json list = nlohmann::json::array();
  for (const auto& c : checks)
    list.push_back({{"name", c.name}, {"passed", c.passed}, {"error", c.error}, {"seconds", c.seconds}, {"detail", c.detail}});
  doc["checks"] = std::move(list);
  doc["failures"] = failures();
  return doc.dump(2) + "\n";
}

VerifyReport run_verify(const VerifyOptions& options) {
  VerifyReport report;
  Suite suite(report, options.tol_scale);
  std::mt19937_64 rng(options.seed);

  std::vector<FieldChoice> choices;
  for (int d = 2; d <= options.max_prime; ++d) {
    if (!is_prime(d)) continue;
    unsigned q = 1;
    for (int n = 1;; ++n) {
      q *= static_cast<unsigned>(d);
      if (q > options.max_order) break;
      std::optional<Polynomial> poly;
      if (d == 3 && n == 2) poly = Polynomial::parse("x^2+x+2", 3);
      if (d == 3 && n == 3) poly = Polynomial::parse("x^3+2x^2+1", 3);
      choices.push_back({d, n, poly});
    }
  }

  for (const auto& choice : choices) {
    auto ctx = FieldContext::make(choice.d, choice.n, choice.poly);
    auto frame = Frame::canonical(ctx);
    field_checks(suite, ctx);
    operator_checks(suite, frame, rng);
    state_checks(suite, frame, rng);
    quasidist_checks(suite, frame, rng);
  }
  large_d_checks(suite, options.extra_dims);
  return report;
}

}  // namespace qps
