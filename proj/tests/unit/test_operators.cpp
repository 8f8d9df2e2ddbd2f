#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qps/error.hpp"
#include "qps/operators.hpp"

using namespace qps;

namespace {

FramePtr frame_of(int d, int n, const char* poly = nullptr) {
  std::optional<Polynomial> p;
  if (poly) p = Polynomial::parse(poly, d);
  return Frame::canonical(make_field(d, n, p));
}

const std::vector<std::tuple<int, int, const char*>> kFields = {
    {2, 1, nullptr}, {3, 1, nullptr}, {5, 1, nullptr}, {7, 1, nullptr}, {2, 2, "x^2+x+1"},
    {2, 3, "x^3+x+1"}, {3, 2, "x^2+x+2"}, {3, 3, "x^3+2x^2+1"}, {5, 2, nullptr}};

bool is_permutation_matrix(const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    int row = 0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) == cplx(1.0, 0.0)) ++row;
      else if (m(i, j) != cplx(0.0, 0.0)) return false;
    }
    if (row != 1) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("generators match their definitions") {
  for (auto [d, n, p] : kFields) {
    const auto fr = frame_of(d, n, p);
    const auto& f = fr->field();
    CAPTURE(d);
    CAPTURE(n);
    CHECK(max_abs_diff(generator_U(fr, f.zero()).matrix, Matrix::Identity(fr->dim(), fr->dim())) == 0.0);
    double err = 0.0;
    for (auto a : f.elements()) {
      const auto u = generator_U(fr, a);
      const auto v = generator_V(fr, a);
      CHECK(u.unitary);
      err = std::max(err, max_abs_diff(u.matrix, oracle::U(*fr, a)));
      err = std::max(err, max_abs_diff(v.matrix, oracle::V(*fr, a)));
      for (auto b : f.elements()) {
        err = std::max(err, max_abs_diff(Matrix(u.matrix * generator_U(fr, b).matrix),
                                         generator_U(fr, f.add(a, b)).matrix));
        err = std::max(err, max_abs_diff(Matrix(v.matrix * generator_V(fr, b).matrix),
                                         generator_V(fr, f.add(a, b)).matrix));
      }
    }
    CHECK(err < 1e-12);
  }
}

TEST_CASE("single-qudit generator examples") {
  const auto f3 = prime_frame(3);
  const Matrix v = generator_V(f3, f3->field().one()).matrix;
  for (int l = 0; l < 3; ++l) CHECK(std::abs(v(l, l) - oracle::omega(l, 3)) < 1e-15);

  const auto f2 = prime_frame(2);
  Matrix x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  CHECK(max_abs_diff(generator_U(f2, f2->field().one()).matrix, x) < 1e-15);
  CHECK(max_abs_diff(generator_V(f2, f2->field().one()).matrix, z) < 1e-15);
}

TEST_CASE("Weyl form, exhaustive") {
  for (auto [d, n, p] : kFields) {
    const auto fr = frame_of(d, n, p);
    const auto& f = fr->field();
    double err = 0.0;
    for (auto mu : f.elements())
      for (auto nu : f.elements()) {
        const Matrix vu = generator_V(fr, mu).matrix * generator_U(fr, nu).matrix;
        const Matrix uv = generator_U(fr, nu).matrix * generator_V(fr, mu).matrix;
        err = std::max(err, max_abs_diff(vu, Matrix(oracle::chi(f, oracle::mul(f, mu, nu)) * uv)));
      }
    CHECK(err < 1e-12);
  }
}

TEST_CASE("Fourier transform") {
  const auto f2 = prime_frame(2);
  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  CHECK(max_abs_diff(fourier(f2).matrix, h) < 1e-15);

  for (auto [d, n, p] : kFields) {
    const auto fr = frame_of(d, n, p);
    const auto& f = fr->field();
    const Matrix F = fourier(fr).matrix;
    CHECK(max_abs_diff(F, oracle::fourier(*fr)) < 1e-12);
    CHECK(is_unitary(F));
    const Matrix F4 = F * F * F * F;
    CHECK(max_abs_diff(F4, Matrix::Identity(F.rows(), F.cols())) < 1e-12);
    for (auto mu : f.elements())
      CHECK(max_abs_diff(Matrix(F * generator_U(fr, mu).matrix * F.adjoint()), generator_V(fr, mu).matrix) < 1e-12);
  }
}

TEST_CASE("Fourier transform factorizes in a selfdual basis") {
  for (auto [d, n, p] : std::vector<std::tuple<int, int, const char*>>{
           {2, 2, "x^2+x+1"}, {2, 3, "x^3+x+1"}, {3, 3, "x^3+2x^2+1"}}) {
    const auto fr = frame_of(d, n, p);
    REQUIRE(fr->basis().kind == BasisKind::Selfdual);
    Matrix prod = Matrix::Identity(1, 1);
    for (int j = 0; j < n; ++j) prod = oracle::kron(prod, oracle::fourier(*prime_frame(d)));
    CHECK(max_abs_diff(fourier(fr).matrix, prod) < 1e-10);
  }
}

TEST_CASE("displacements, odd characteristic") {
  const auto f3 = prime_frame(3);
  const auto one = f3->field().one();
  CHECK(std::abs(displacement_phase(*f3, one, one) - oracle::omega(2, 3)) < 1e-15);

  for (auto [d, n, p] : kFields) {
    if (d == 2) continue;
    const auto fr = frame_of(d, n, p);
    const auto& f = fr->field();
    const auto zero = f.zero();
    CHECK(max_abs_diff(displacement(fr, {zero, zero}).matrix, Matrix::Identity(fr->dim(), fr->dim())) == 0.0);
    const FieldElement half = f.inv(f.from_int(2));
    double err = 0.0;
    for (auto mu : f.elements())
      for (auto nu : f.elements()) {
        const auto D = displacement(fr, {mu, nu});
        err = std::max(err, max_abs_diff(D.matrix, oracle::D_odd(*fr, mu, nu)));
        CHECK(D.unitary);
        CHECK(displacement_phase(*fr, mu, zero) == cplx(1.0, 0.0));
        CHECK(displacement_phase(*fr, zero, nu) == cplx(1.0, 0.0));
        // phase relation phi(mu, nu) phi(-mu, -nu) = chi(mu nu)
        const cplx pp = displacement_phase(*fr, mu, nu) * displacement_phase(*fr, f.neg(mu), f.neg(nu));
        err = std::max(err, std::abs(pp - oracle::chi(f, oracle::mul(f, mu, nu))));
        err = std::max(err, max_abs_diff(Matrix(D.matrix.adjoint()), displacement(fr, {f.neg(mu), f.neg(nu)}).matrix));
      }
    CHECK(err < 1e-12);

    // composition law
    std::mt19937_64 rng(d * 100 + n);
    std::uniform_int_distribution<std::uint32_t> pick(0, f.order() - 1);
    const bool exhaustive = f.order() <= 7;
    const int samples = exhaustive ? 0 : 400;
    auto check_pair = [&](PhasePoint a, PhasePoint b) {
      const Matrix lhs = displacement(fr, a).matrix * displacement(fr, b).matrix;
      const auto sym = f.sub(f.mul(a.mu, b.nu), f.mul(b.mu, a.nu));
      const Matrix rhs = oracle::chi(f, oracle::mul(f, half, sym)) *
                         displacement(fr, {f.add(a.mu, b.mu), f.add(a.nu, b.nu)}).matrix;
      return max_abs_diff(lhs, rhs);
    };
    double comp = 0.0;
    if (exhaustive) {
      for (auto m1 : f.elements())
        for (auto n1 : f.elements())
          for (auto m2 : f.elements())
            for (auto n2 : f.elements()) comp = std::max(comp, check_pair({m1, n1}, {m2, n2}));
    }
    for (int k = 0; k < samples; ++k)
      comp = std::max(comp, check_pair({f.element(pick(rng)), f.element(pick(rng))},
                                       {f.element(pick(rng)), f.element(pick(rng))}));
    CHECK(comp < 1e-12);
  }
}

TEST_CASE("displacements, qubits") {
  for (auto [d, n, p] : std::vector<std::tuple<int, int, const char*>>{
           {2, 1, nullptr}, {2, 2, "x^2+x+1"}, {2, 3, "x^3+x+1"}, {2, 4, nullptr}}) {
    const auto fr = frame_of(d, n, p);
    REQUIRE(fr->basis().kind == BasisKind::Selfdual);
    const auto& f = fr->field();
    double err = 0.0;
    for (auto mu : f.elements())
      for (auto nu : f.elements()) {
        const Matrix D = displacement(fr, {mu, nu}).matrix;
        err = std::max(err, max_abs_diff(D, oracle::D_qubits(*fr, mu, nu)));
        CHECK(is_unitary(D));
      }
    CHECK(err < 1e-12);
  }
}

TEST_CASE("trace orthogonality of displacements") {
  for (auto [d, n, p] : kFields) {
    const auto fr = frame_of(d, n, p);
    const auto& f = fr->field();
    const auto all = f.elements();
    std::vector<Matrix> ds;
    for (auto mu : all)
      for (auto nu : all) ds.push_back(displacement(fr, {mu, nu}).matrix);
    double err = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i)
      for (std::size_t j = 0; j < ds.size(); ++j) {
        const cplx t = ds[i].conjugate().cwiseProduct(ds[j]).sum();
        err = std::max(err, std::abs(t - cplx(i == j ? double(f.order()) : 0.0, 0.0)));
      }
    CHECK(err < 1e-9);
  }
}

TEST_CASE("parity") {
  const auto f3 = prime_frame(3);
  const Matrix p3 = parity(f3).matrix;
  CHECK(p3(2, 1) == cplx(1.0, 0.0));
  for (auto [d, n, p] : kFields) {
    if (d == 2) continue;
    const auto fr = frame_of(d, n, p);
    const Matrix P = parity(fr).matrix;
    CHECK(is_permutation_matrix(P));
    for (auto l : fr->field().elements()) CHECK(P(fr->index(fr->field().neg(l)), fr->index(l)) == cplx(1.0, 0.0));
    CHECK(max_abs_diff(Matrix(P * P), Matrix::Identity(P.rows(), P.cols())) == 0.0);
    CHECK(max_abs_diff(parity_from_displacements(fr).matrix, P) < 1e-12);
  }
  for (int d : {5, 7, 11, 13}) CHECK(max_abs_diff(parity_from_displacements(prime_frame(d)).matrix, parity(prime_frame(d)).matrix) < 1e-11);
}

TEST_CASE("squeeze operator") {
  for (auto [d, n, p] : kFields) {
    const auto fr = frame_of(d, n, p);
    const auto& f = fr->field();
    CHECK(max_abs_diff(squeeze_operator(fr, f.one()).matrix, Matrix::Identity(fr->dim(), fr->dim())) == 0.0);
    for (auto s : f.elements()) {
      if (s.is_zero()) continue;
      const Matrix S = squeeze_operator(fr, s).matrix;
      REQUIRE(is_permutation_matrix(S));
      int fixed = 0;
      for (auto l : f.elements()) {
        REQUIRE(S(fr->index(oracle::mul(f, s, l)), fr->index(l)) == cplx(1.0, 0.0));
        if (S(fr->index(l), fr->index(l)) == cplx(1.0, 0.0)) ++fixed;
      }
      CHECK(fixed == (s == f.one() ? static_cast<int>(f.order()) : 1));
      for (auto a : f.elements()) {
        REQUIRE(max_abs_diff(Matrix(S * generator_U(fr, a).matrix * S.adjoint()), generator_U(fr, f.mul(s, a)).matrix) == 0.0);
        REQUIRE(max_abs_diff(Matrix(S * generator_V(fr, a).matrix * S.adjoint()),
                             generator_V(fr, f.mul(f.inv(s), a)).matrix) < 1e-15);
      }
    }
    CHECK_THROWS_AS(squeeze_operator(fr, f.zero()), Error);
  }
  // d = 5, s = 2 sends |1> to |2>
  const auto f5 = prime_frame(5);
  const Matrix s2 = squeeze_operator(f5, f5->field().from_int(2)).matrix;
  CHECK(s2(2, 1) == cplx(1.0, 0.0));
  // GF(8), s = sigma: amplitudes C_l become C_{sigma^6 l}
  const auto f8 = frame_of(2, 3, "x^3+x+1");
  const auto& g = f8->field();
  std::mt19937_64 rng(3);
  const Vector c = oracle::random_unit(8, rng);
  const Vector out = squeeze_operator(f8, g.sigma()).matrix * c;
  for (auto l : g.elements()) CHECK(out(f8->index(l)) == c(f8->index(g.mul(g.pow(g.sigma(), 6), l))));
}

TEST_CASE("Harper Hamiltonian") {
  for (int d : {2, 3, 5, 31}) {
    const Operator H = harper_hamiltonian(d);
    CHECK(H.hermitian);
    CHECK(is_hermitian(H.matrix));
    const Matrix F = fourier(prime_frame(d)).matrix;
    CHECK(max_abs_diff(Matrix(H.matrix * F), Matrix(F * H.matrix)) < 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix> es(H.matrix);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12);
    CHECK(es.eigenvalues().maxCoeff() <= 4.0 + 1e-12);
  }
}

TEST_CASE("basis change operator") {
  SUBCASE("identity for equal bases") {
    const auto f = make_field(2, 3, Polynomial::parse("x^3+x+1", 2));
    const Basis b = polynomial_basis(*f);
    CHECK(max_abs_diff(basis_change_operator(*f, b, b).matrix, Matrix::Identity(8, 8)) == 0.0);
  }
  SUBCASE("GF(4) from {s, s^3} to {s, s^2} is CNOT in the printed layout") {
    const auto f = make_field(2, 2, Polynomial::parse("x^2+x+1", 2));
    const Basis from = make_basis(*f, {f->sigma(), f->pow(f->sigma(), 3)});
    const Basis to = make_basis(*f, {f->sigma(), f->pow(f->sigma(), 2)});
    const Matrix T = basis_change_operator(*f, from, to).matrix;
    // printed position of tuple (l1, l2) is (1 - l1) + 2 (1 - l2)
    auto printed = [](int flat) {
      const int l1 = flat / 2, l2 = flat % 2;
      return (1 - l1) + 2 * (1 - l2);
    };
    Matrix shown = Matrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) shown(printed(i), printed(j)) = T(i, j);
    Matrix cnot(4, 4);
    cnot << 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1;
    CHECK(max_abs_diff(shown, cnot) == 0.0);
  }
  SUBCASE("random basis pairs in GF(8)") {
    const auto f = make_field(2, 3, Polynomial::parse("x^3+x+1", 2));
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::uint32_t> pick(1, 7);
    auto random_basis = [&] {
      while (true) {
        std::vector<FieldElement> e{f->element(pick(rng)), f->element(pick(rng)), f->element(pick(rng))};
        if (is_linearly_independent(*f, e)) return make_basis(*f, e);
      }
    };
    for (int k = 0; k < 20; ++k) {
      const Basis a = random_basis(), b = random_basis();
      const Matrix T = basis_change_operator(*f, a, b).matrix;
      CHECK(is_permutation_matrix(T));
      CHECK(max_abs_diff(Matrix(T.adjoint() * T), Matrix::Identity(8, 8)) == 0.0);
      for (auto mu : f->elements()) {
        int from = 0, to = 0;
        for (int c : expand(*f, mu, a)) from = from * 2 + c;
        for (int c : expand(*f, mu, b)) to = to * 2 + c;
        REQUIRE(T(to, from) == cplx(1.0, 0.0));
      }
    }
  }
  SUBCASE("mismatched bases") {
    const auto f = make_field(2, 3);
    const auto g = make_field(3, 3);
    try {
      basis_change_operator(*f, polynomial_basis(*f), polynomial_basis(*g));
      FAIL("expected BasisMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::BasisMismatch);
    }
  }
}

TEST_CASE("selfdual factorization of displacements") {
  SUBCASE("origin gives identity factors") {
    const auto f = make_field(3, 3, Polynomial::parse("x^3+2x^2+1", 3));
    const auto factors = factorize_displacement(f, find_selfdual_basis(*f), {f->zero(), f->zero()});
    REQUIRE(factors.size() == 3);
    for (const auto& op : factors) CHECK(max_abs_diff(op.matrix, Matrix::Identity(3, 3)) == 0.0);
  }
  for (auto [d, n, p] : std::vector<std::tuple<int, int, const char*>>{
           {2, 2, "x^2+x+1"}, {2, 3, "x^3+x+1"}, {3, 3, "x^3+2x^2+1"}}) {
    const auto f = make_field(d, n, Polynomial::parse(p, d));
    const Basis sd = d == 3 ? make_basis(*f, {f->parse("s^1"), f->parse("s^3"), f->parse("s^9")}) : find_selfdual_basis(*f);
    const auto fr = Frame::with_basis(f, sd);
    std::mt19937_64 rng(d + n);
    std::uniform_int_distribution<std::uint32_t> pick(0, f->order() - 1);
    double err = 0.0;
    for (int k = 0; k < 50; ++k) {
      const PhasePoint pt{f->element(pick(rng)), f->element(pick(rng))};
      const auto factors = factorize_displacement(f, sd, pt);
      Matrix prod = Matrix::Identity(1, 1);
      for (const auto& op : factors) prod = oracle::kron(prod, op.matrix);
      err = std::max(err, max_abs_diff(prod, displacement(fr, pt).matrix));
      CHECK(max_abs_diff(tensor(factors).matrix, prod) == 0.0);
    }
    CHECK(err < 1e-10);
  }
  SUBCASE("GF(4) translations factor per qubit") {
    const auto f = make_field(2, 2, Polynomial::parse("x^2+x+1", 2));
    const Basis sd = make_basis(*f, {f->sigma(), f->pow(f->sigma(), 2)});
    const auto fr = Frame::with_basis(f, sd);
    const auto q1 = prime_frame(2);
    for (auto nu : f->elements()) {
      const auto c = expand(*f, nu, sd);
      const Matrix prod = oracle::kron(generator_U(q1, q1->field().from_int(c[0])).matrix,
                                       generator_U(q1, q1->field().from_int(c[1])).matrix);
      CHECK(max_abs_diff(generator_U(fr, nu).matrix, prod) == 0.0);
    }
  }
  SUBCASE("non-selfdual basis is rejected") {
    const auto f = make_field(2, 3, Polynomial::parse("x^3+x+1", 2));
    try {
      factorize_displacement(f, polynomial_basis(*f), {f->one(), f->one()});
      FAIL("expected NotSelfdual");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotSelfdual);
    }
  }
}
