#include <doctest.h>

#include "covfield/errors.hpp"
#include "covfield/modular.hpp"
#include "covfield/monotone.hpp"
#include "oracles.hpp"

using namespace covfield;

namespace {

Matrix random_positive(Rng& rng, int n, double lo, double hi) {
  Matrix u = haar_unitary(rng, n);
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d(i) = uniform(rng, lo, hi);
  return u * d.cast<Complex>().asDiagonal() * u.adjoint();
}

}  // namespace

TEST_CASE("catalog metadata") {
  const auto& cat = function_catalog();
  CHECK(cat.size() == 5);
  for (const auto& f : cat) {
    CHECK(f.f1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f.petz_symmetric);
    CHECK(certify_monotone(f));
    CHECK(f.radial_degenerate() == (f.f0 == 0.0));
  }
  CHECK(catalog_function("bures").f0 == 0.5);
  CHECK(catalog_function("wigner-yanase").f0 == 0.25);
  CHECK(catalog_function("Kubo_Mori").name == "kubo-mori");
  CHECK(catalog_function("harmonic").radial_degenerate());
  CHECK(catalog_function("geometric").radial_degenerate());
  CHECK(catalog_function("kubo-mori").radial_degenerate());
  CHECK_THROWS_AS(catalog_function("nope"), InvalidInput);
}

TEST_CASE("Kubo-Mori near t = 1") {
  const auto& km = catalog_function("kubo-mori");
  CHECK(eval_scalar(km, 1.0) == 1.0);
  for (double d : {1e-9, 1e-6, 1e-4, 1e-3, 1e-2, 0.05}) {
    for (double t : {1 - d, 1 + d}) {
      double ref = oracle::kubo_mori(t);
      CHECK(std::abs(eval_scalar(km, t) - ref) < 1e-14 * ref);
    }
  }
  for (double t : {1e-8, 0.3, 2.0, 50.0, 1e6}) CHECK(std::abs(eval_scalar(km, t) - oracle::kubo_mori(t)) < 1e-13 * oracle::kubo_mori(t));
}

TEST_CASE("F(0) limits") {
  // linear approach for Bures and harmonic, square-root for WY and geometric, 1/|log t| for Kubo-Mori
  auto gap = [](const char* n) { return f0_limit_gaps(catalog_function(n)).back(); };
  CHECK(gap("bures") < 1e-8);
  CHECK(gap("harmonic") < 1e-8);
  CHECK(gap("wigner-yanase") == doctest::Approx(5e-7).epsilon(1e-3));
  CHECK(gap("geometric") == doctest::Approx(1e-6).epsilon(1e-9));
  CHECK(gap("kubo-mori") == doctest::Approx(1.0 / std::log(1e12)).epsilon(1e-6));
}

TEST_CASE("functional calculus") {
  const auto& b = catalog_function("bures");
  CHECK((eval_hermitian(b, Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)).norm() < 1e-15);
  Matrix h = Matrix::Zero(2, 2);
  h(0, 0) = 3;
  h(1, 1) = 1.0 / 3.0;
  Matrix g = eval_hermitian(catalog_function("geometric"), h);
  CHECK(std::abs(g(0, 0) - std::sqrt(3.0)) < 1e-14);
  CHECK(std::abs(g(1, 1) - 1 / std::sqrt(3.0)) < 1e-14);
  Matrix neg = -Matrix::Identity(2, 2);
  CHECK_THROWS_AS(eval_hermitian(b, neg), DomainError);
  // a rounding-level zero eigenvalue is read as 0
  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = 1e-17;
  z(1, 1) = 1;
  CHECK(std::abs(eval_hermitian(catalog_function("wigner-yanase"), z)(0, 0) - 0.25) < 1e-15);
}

TEST_CASE("Loewner matrices") {
  auto sq = loewner_test([](double t) { return std::sqrt(t); }, {1.0, 4.0});
  CHECK(sq.psd);
  CHECK(sq.min_eigenvalue > 0);
  auto t2 = loewner_test([](double t) { return t * t; }, {1.0, 4.0});
  CHECK_FALSE(t2.psd);
  // [[2,5],[5,8]]: eigenvalues 5 ± √34
  CHECK(t2.min_eigenvalue == doctest::Approx(5 - std::sqrt(34.0)).epsilon(1e-6));
  CHECK(loewner_test([](double) { return 1.0; }, {0.5, 2.0, 3.0}).psd);
  CHECK_THROWS_AS(loewner_test([](double t) { return t; }, {1.0, 1.0}), InvalidInput);

  Rng rng(7);
  for (int k = 0; k < 50; ++k) {
    auto grid = random_log_grid(rng, 12, 1e-3, 1e3);
    for (const auto& f : function_catalog()) CHECK(loewner_test(f, grid).psd);
    CHECK(loewner_test([](double t) { return t * t; }, grid).min_eigenvalue < -1e-3);
  }
}

TEST_CASE("Petz symmetry") {
  auto grid = log_grid(1e-3, 1e3, 15);
  CHECK(petz_symmetry_test(catalog_function("bures"), grid));
  CHECK(petz_symmetry_test(catalog_function("geometric"), grid));
  CHECK_FALSE(petz_symmetry_test([](double t) { return (2 + t) / 3; }, {2.0}));
}

TEST_CASE("user expressions") {
  auto f = function_from_expression("sq", "sqrt(t)");
  CHECK(f.f0 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f.f1 == doctest::Approx(1.0));
  CHECK(certify_monotone(f));
  auto g = function_from_expression("lin", "(1+t)/2");
  CHECK(g.f0 == doctest::Approx(0.5));
  CHECK(g.petz_symmetric);
  CHECK_FALSE(certify_monotone(function_from_expression("t2", "t^2")));
  CHECK_THROWS_AS(function_from_expression("bad", "t +* 2"), InvalidInput);
  CHECK_THROWS_AS(function_from_expression("bad", "foo(t)"), InvalidInput);
}

TEST_CASE("matrix monotonicity and concavity") {
  Rng rng(13);
  for (int k = 0; k < 500; ++k) {
    int n = 2 + k % 3;
    Matrix a = random_positive(rng, n, 1e-3, 5.0);
    Matrix g = ginibre(rng, n, n);
    Matrix p = g * g.adjoint();
    p *= uniform(rng, 0.0, 5.0) / op_norm(p);
    Matrix b = a + p;
    Matrix c = random_positive(rng, n, 1e-3, 10.0);
    double l = uniform(rng, 0.0, 1.0);
    for (const auto& f : function_catalog()) {
      CHECK(min_eigenvalue(eval_hermitian(f, b) - eval_hermitian(f, a)) >= -1e-8);
      Matrix lhs = eval_hermitian(f, l * a + (1 - l) * c);
      CHECK(min_eigenvalue(lhs - l * eval_hermitian(f, a) - (1 - l) * eval_hermitian(f, c)) >= -1e-8);
    }
  }
}
