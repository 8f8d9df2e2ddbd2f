// Fast (shift-covariant, OpenMP) grid evaluation against the definitional
// serial path. Also checks that the fast grid does not depend on the thread
// count.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <omp.h>

#include "qps/quasidist.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double time_best(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    f();
    const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    if (dt < best) best = dt;
  }
  return best;
}

qps::Matrix random_density(std::size_t q, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  qps::Matrix a(q, q);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < q; ++j) a(i, j) = {g(rng), g(rng)};
  qps::Matrix rho = a * a.adjoint();
  return rho / rho.trace();
}

bool bit_identical(const std::vector<qps::cplx>& a, const std::vector<qps::cplx>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(qps::cplx)) == 0;
}

double max_diff(const std::vector<qps::cplx>& a, const std::vector<qps::cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

struct Case {
  int d;
  int n;
  const char* poly;
};

}  // namespace

int main(int argc, char** argv) {
  int reps = 3;
  if (argc > 1) reps = std::max(1, std::atoi(argv[1]));
  const std::vector<Case> cases = {{7, 1, ""}, {2, 4, ""}, {3, 3, "x^3+2x^2+1"}, {31, 1, ""}, {5, 2, ""}};
  std::mt19937_64 rng(7);
  const int threads = omp_get_max_threads();
  std::printf("threads=%d reps=%d\n", threads, reps);
  std::printf("%-10s %10s %10s %8s %10s %10s %8s %10s %6s\n", "field", "grid_fast", "grid_ser", "speedup", "rec_fast",
              "rec_ser", "speedup", "max_diff", "omp=1");
  bool all_ok = true;
  for (const auto& c : cases) {
    std::optional<qps::Polynomial> poly;
    if (*c.poly) poly = qps::Polynomial::parse(c.poly, c.d);
    const auto frame = qps::Frame::canonical(qps::make_field(c.d, c.n, poly));
    const auto ref = qps::reference_for(frame);
    const qps::Matrix rho = random_density(frame->dim(), rng);
    const qps::SOrder s(0);

    qps::QuasiDistGrid fast, serial;
    const double t_fast = time_best(reps, [&] { fast = qps::quasidist(rho, ref, s); });
    const double t_ser = time_best(reps, [&] { serial = qps::quasidist_serial(rho, ref, s); });
    qps::Matrix r_fast, r_ser;
    const double t_rfast = time_best(reps, [&] { r_fast = qps::reconstruct(fast); });
    const double t_rser = time_best(reps, [&] { r_ser = qps::reconstruct_serial(fast); });

    omp_set_num_threads(1);
    const auto single = qps::quasidist(rho, ref, s);
    omp_set_num_threads(threads);
    const bool same = bit_identical(single.values, fast.values);
    const double diff = std::max(max_diff(fast.values, serial.values), qps::max_abs_diff(r_fast, r_ser));
    all_ok = all_ok && same && diff < 1e-10;

    const std::string name = "GF(" + std::to_string(c.d) + "^" + std::to_string(c.n) + ")";
    std::printf("%-10s %10.4f %10.4f %8.1f %10.4f %10.4f %8.1f %10.2e %6s\n", name.c_str(), t_fast, t_ser,
                t_ser / t_fast, t_rfast, t_rser, t_rser / t_rfast, diff, same ? "same" : "DIFF");
  }
  return all_ok ? 0 : 1;
}
