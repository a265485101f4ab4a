#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bapfactor/space.hpp"

using namespace bapfactor;

namespace {

Eigen::VectorXd v3(double a, double b, double c) {
  Eigen::VectorXd v(3);
  v << a, b, c;
  return v;
}

Eigen::VectorXd v2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

// Grid oracle for max f over the induced unit sphere of a 2-parameter
// subspace section: sweep directions (cos t, sin t), normalize each onto the
// induced sphere.
double grid_section_max(const Functional& f, const SubspaceBasis& sub, double step) {
  double best = 0.0;
  for (double t = 0.0; t < 2 * M_PI; t += step) {
    Eigen::VectorXd c(2);
    c << std::cos(t), std::sin(t);
    Vec x = sub.embed(c);
    double nx = norm(x);
    if (nx < 1e-14) continue;
    best = std::max(best, f.coords.dot(x.coords) / nx);
  }
  return best;
}

}  // namespace

TEST_CASE("tag round trip") {
  CHECK(to_string(NormTag::L1) == "l1");
  CHECK(to_string(NormTag::L2) == "l2");
  CHECK(to_string(NormTag::Linf) == "linf");
  CHECK(tag_from_string("l1") == NormTag::L1);
  CHECK(tag_from_string("l2") == NormTag::L2);
  CHECK(tag_from_string("linf") == NormTag::Linf);
  CHECK_THROWS_AS(tag_from_string("l3"), InputError);
}

TEST_CASE("norm examples") {
  CHECK(norm(Vec(v3(1, -2, 1), {3, NormTag::Linf})) == doctest::Approx(2).epsilon(1e-15));
  CHECK(norm(Vec(v2(0, 0), {2, NormTag::L1})) == 0.0);
  CHECK(norm(Vec(v2(3, 4), {2, NormTag::L2})) == doctest::Approx(5).epsilon(1e-15));
}

TEST_CASE("dual norm examples") {
  CHECK(dual_norm(Functional(v3(1, -3, 2), {3, NormTag::L1})) == doctest::Approx(3).epsilon(1e-15));
  CHECK(dual_norm(Functional(v2(1, 1), {2, NormTag::Linf})) == doctest::Approx(2).epsilon(1e-15));
  CHECK(dual_norm(Functional(v2(3, 4), {2, NormTag::L2})) == doctest::Approx(5).epsilon(1e-15));
}

TEST_CASE("vec and functional validation") {
  CHECK_THROWS_AS(NormedSpace(0, NormTag::L2), InputError);
  CHECK_THROWS_AS(Vec(v2(1, 2), NormedSpace(3, NormTag::L2)), InputError);
  CHECK_THROWS_AS(Vec(v2(1, std::nan("")), NormedSpace(2, NormTag::L2)), InputError);
  Functional f(v2(1, 0), {2, NormTag::L2});
  CHECK_THROWS_AS(f(Vec(v2(1, 0), {2, NormTag::L1})), InputError);
}

TEST_CASE("support_maximize unrestricted examples") {
  {
    SupportResult r = support_maximize({2, NormTag::Linf}, Functional(v2(1, 1), {2, NormTag::Linf}));
    CHECK(r.value == doctest::Approx(2).epsilon(1e-12));
    CHECK(r.maximizer.coords.isApprox(v2(1, 1), 1e-12));
  }
  {
    SupportResult r = support_maximize({3, NormTag::L2}, Functional(v3(0, 3, 4), {3, NormTag::L2}));
    CHECK(r.value == doctest::Approx(5).epsilon(1e-12));
    CHECK(r.maximizer.coords.isApprox(v3(0, 0.6, 0.8), 1e-12));
  }
  {
    SupportResult r = support_maximize({2, NormTag::L1}, Functional(v2(0, 0), {2, NormTag::L1}));
    CHECK(r.degenerate);
    CHECK(r.value == 0.0);
  }
}

TEST_CASE("support_maximize over LINF^3 subspace vs grid oracle") {
  NormedSpace W(3, NormTag::Linf);
  Eigen::MatrixXd B(3, 2);
  B << 1, 0, 1, 1, 0, 1;
  SubspaceBasis sub(W, B);
  Functional f(v3(1, 0, 0), W);
  SupportResult r = support_maximize(W, f, &sub);
  double oracle = grid_section_max(f, sub, 1e-3);
  CHECK(std::abs(r.value - oracle) < 5e-3);
  CHECK(norm(r.maximizer) <= 1 + 1e-9);
  // f restricted to the span attains 1 at (1,1,0) and cannot exceed the
  // first coordinate of an element of the unit ball.
  CHECK(r.value == doctest::Approx(1).epsilon(1e-9));
}

TEST_CASE("subspace rejects rank deficiency") {
  Eigen::MatrixXd B(3, 2);
  B << 1, 2, 1, 2, 0, 0;
  CHECK_THROWS_AS(SubspaceBasis({3, NormTag::L2}, B), InputError);
}

TEST_CASE("norm homogeneity and definiteness, seeded") {
  std::mt19937_64 rng(991);
  std::normal_distribution<double> gauss;
  const NormTag tags[3] = {NormTag::L1, NormTag::L2, NormTag::Linf};
  for (int it = 0; it < 300; ++it) {
    int d = 1 + static_cast<int>(rng() % 8);
    NormedSpace sp(d, tags[it % 3]);
    Eigen::VectorXd c(d);
    for (int i = 0; i < d; ++i) c[i] = gauss(rng);
    double alpha = gauss(rng);
    Vec v(c, sp), av(alpha * c, sp);
    CHECK(norm(av) == doctest::Approx(std::abs(alpha) * norm(v)).epsilon(1e-12));
    if (norm(v) < 1e-12) CHECK(c.lpNorm<Eigen::Infinity>() < 1e-10);
  }
}

TEST_CASE("dual norm equals unrestricted support value, seeded") {
  std::mt19937_64 rng(1234);
  std::normal_distribution<double> gauss;
  const NormTag tags[3] = {NormTag::L1, NormTag::L2, NormTag::Linf};
  for (int it = 0; it < 1000; ++it) {
    int d = 1 + static_cast<int>(rng() % 8);
    NormedSpace sp(d, tags[it % 3]);
    Eigen::VectorXd c(d);
    for (int i = 0; i < d; ++i) c[i] = gauss(rng);
    Functional f(c, sp);
    SupportResult r = support_maximize(sp, f);
    CHECK(std::abs(r.value - dual_norm(f)) < kTolLp * (1 + dual_norm(f)));
    CHECK(norm(r.maximizer) <= 1 + kTolLp);
  }
}

TEST_CASE("full-dimensional subspace agrees with unrestricted call") {
  std::mt19937_64 rng(777);
  std::normal_distribution<double> gauss;
  const NormTag tags[3] = {NormTag::L1, NormTag::L2, NormTag::Linf};
  for (int it = 0; it < 200; ++it) {
    int d = 1 + static_cast<int>(rng() % 5);
    NormedSpace sp(d, tags[it % 3]);
    Eigen::MatrixXd B(d, d);
    do {
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) B(i, j) = gauss(rng);
    } while (std::abs(B.partialPivLu().determinant()) < 1e-3);
    SubspaceBasis sub(sp, B);
    Eigen::VectorXd c(d);
    for (int i = 0; i < d; ++i) c[i] = gauss(rng);
    Functional f(c, sp);
    SupportResult free_r = support_maximize(sp, f);
    SupportResult sub_r = support_maximize(sp, f, &sub);
    CHECK(std::abs(free_r.value - sub_r.value) < kTolLp * (1 + free_r.value));
  }
}
