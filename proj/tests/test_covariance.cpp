#include <doctest.h>

#include "covfield/covariance.hpp"
#include "covfield/errors.hpp"
#include "oracles.hpp"

using namespace covfield;

namespace {

const AlgebraShape kQubit({2});

State qubit_diag(double q1, double q2) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = q1;
  d(1, 1) = q2;
  return state_from_density(kQubit, AlgebraElement::from_embedded(kQubit, d));
}

double oracle_value(const State& rho, const CovarianceSpec& spec, const AlgebraElement& a) {
  return oracle::covariance(embed(rho.density()), rho.shape().block_dims(), spec.F.rule, spec.F.f0, embed(a),
                            spec.alpha - spec.beta);
}

Matrix offdiag(int K, int i, int j) {
  Matrix z = Matrix::Zero(K, K);
  z(i, j) = z(j, i) = 1;
  return z;
}

}  // namespace

TEST_CASE("CovarianceSpec construction") {
  auto s = make_covariance_spec(catalog_function("bures"));
  CHECK(s.alpha == 1.0);
  CHECK(s.beta == 1.0);
  CHECK(make_covariance_spec(catalog_function("bures"), 2.5).alpha == 2.5);
  CHECK_THROWS_AS(make_covariance_spec(catalog_function("bures"), -1.0), InvalidInput);
  CHECK_THROWS_AS(make_covariance_spec(function_from_expression("t2", "t^2")), DomainError);
}

TEST_CASE("tracial states") {
  for (const auto& shape : AlgebraShape::parse_list("2;3;1,2;2,2")) {
    State tr = tracial_state(shape);
    GnsSpace h = gns_space(tr);
    Vector psi = cyclic_vector(h).coords;
    for (double alpha : {1.0, 0.4, 3.0}) {
      Matrix ref = Matrix::Identity(h.dim(), h.dim()) + (alpha - 1.0) * psi * psi.adjoint();
      for (const auto& f : function_catalog()) {
        Matrix t = covariance_operator(h, make_covariance_spec(f, alpha)).T.m;
        CHECK((t - ref).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }
}

TEST_CASE("covariance form values") {
  const auto& bures = catalog_function("bures");
  State rho = random_faithful_state(AlgebraShape({2, 1}), 4);
  auto spec = make_covariance_spec(bures, 2.0);
  auto op = covariance_operator(rho, spec);
  auto psi = cyclic_vector(op.space());
  CHECK(covariance_form(op, psi, psi).real() == doctest::Approx(2.0).epsilon(1e-12));

  for (double p1 : {0.75, 0.5, 0.9}) {
    State q = diagonal_state(kQubit, {p1, 1 - p1});
    CHECK(covariance_value(q, make_covariance_spec(bures), AlgebraElement::unit(kQubit, 0, 0, 1)) ==
          doctest::Approx(0.5).epsilon(1e-12));
  }

  // tracial state, ξ ⊥ ψ
  State tr = tracial_state(kQubit);
  auto e12 = AlgebraElement::unit(kQubit, 0, 0, 1);
  CHECK(covariance_value(tr, make_covariance_spec(bures, 5.0), e12) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("covariance agrees with the spectral oracle") {
  Rng rng(19);
  for (std::uint64_t s = 0; s < 10; ++s) {
    for (const auto& shape : AlgebraShape::parse_list("3;1,2;2,2")) {
      State f = random_faithful_state(shape, s);
      State d = random_degenerate_state(shape, s + 100);
      auto a = AlgebraElement::random(shape, rng);
      for (const auto& F : function_catalog()) {
        auto spec = make_covariance_spec(F, 1.7);
        double v = covariance_value(f, spec, a);
        CHECK(std::abs(v - oracle_value(f, spec, a)) < 1e-10 * std::max(1.0, v));
        if (F.radial_degenerate() && has_off_support_directions(d)) {
          CHECK_THROWS_AS(covariance_value(d, spec, a), DomainError);
        } else {
          double w = covariance_value(d, spec, a);
          CHECK(std::abs(w - oracle_value(d, spec, a)) < 1e-10 * std::max(1.0, w));
        }
      }
    }
  }
}

TEST_CASE("qp directions carry F(0)") {
  State pure = qubit_diag(2.0, 0.0);
  auto op = covariance_operator(pure, make_covariance_spec(catalog_function("wigner-yanase")));
  // ξ_{e_21} spans the qp direction; ξ_{e_11} is the cyclic vector
  auto x = gns_vector(op.space(), AlgebraElement::unit(kQubit, 0, 1, 0));
  x.coords /= x.norm();
  CHECK(covariance_form(op, x, x).real() == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("commutation with the modular operator and symmetries") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    State rho = s % 2 ? random_degenerate_state(AlgebraShape({3}), s) : random_faithful_state(AlgebraShape({2, 2}), s);
    for (const auto& F : function_catalog()) {
      if (F.radial_degenerate() && has_off_support_directions(rho)) continue;
      auto op = covariance_operator(rho, make_covariance_spec(F));
      CHECK(op_norm(op.T.m * op.delta.m - op.delta.m * op.T.m) < 1e-10 * std::max(1.0, op_norm(op.T.m)));
    }
  }
}

TEST_CASE("metric closed forms") {
  AlgebraShape c2({1, 1});
  State uniform = diagonal_state(c2, {0.5, 0.5});
  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = 1;
  z(1, 1) = -1;
  auto tz = tangent_from_ordinary(c2, z);
  for (const auto& F : function_catalog())
    CHECK(metric_inner(uniform, make_covariance_spec(F), tz, tz) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(fisher_rao({0.5, 0.5}, {1, -1}) == 4.0);

  State q = diagonal_state(kQubit, {0.75, 0.25});
  auto off = tangent_from_ordinary(kQubit, offdiag(2, 0, 1));
  auto diag = tangent_from_ordinary(kQubit, z);
  auto G = [&](const char* n, const TangentVector& v) {
    return metric_inner(q, make_covariance_spec(catalog_function(n)), v, v);
  };
  CHECK(std::abs(G("bures", off) - 4.0) < 1e-9);
  CHECK(std::abs(G("harmonic", off) - 16.0 / 3.0) < 1e-9);
  CHECK(std::abs(G("geometric", off) - 8.0 / std::sqrt(3.0)) < 1e-9);
  CHECK(std::abs(G("kubo-mori", off) - 4.0 * std::log(3.0)) < 1e-9);
  CHECK(std::abs(G("wigner-yanase", off) - 32.0 / std::pow(1 + std::sqrt(3.0), 2)) < 1e-9);
  for (const auto& F : function_catalog())
    CHECK(std::abs(metric_inner(q, make_covariance_spec(F), diag, diag) - 16.0 / 3.0) < 1e-9);
}

TEST_CASE("metric agrees with the spectral oracle") {
  Rng rng(47);
  for (int k = 0; k < 100; ++k) {
    int n = 2 + k % 2;
    AlgebraShape s({n});
    State rho = random_faithful_state(s, 1000 + k);
    Matrix h = random_hermitian(rng, n);
    h -= (h.trace() / static_cast<double>(n)) * Matrix::Identity(n, n);
    auto t = tangent_from_ordinary(s, h);
    for (const auto& F : function_catalog()) {
      double g = metric_inner(rho, make_covariance_spec(F), t, t);
      CHECK(std::abs(g - metric_spectral_oracle(rho, F, t)) < 1e-9 * g);
      CHECK(std::abs(g - oracle::metric(embed(rho.density()), s.block_dims(), F.rule, h)) < 1e-9 * g);
    }
  }
  // block-diagonal states on a multi-block algebra through the test oracle
  AlgebraShape s({2, 1});
  State rho = random_faithful_state(s, 3);
  Matrix h = Matrix::Zero(3, 3);
  h.topLeftCorner(2, 2) = random_hermitian(rng, 2);
  h(2, 2) = -h.trace();
  auto t = tangent_from_ordinary(s, h);
  for (const auto& F : function_catalog()) {
    double g = metric_inner(rho, make_covariance_spec(F), t, t);
    CHECK(std::abs(g - oracle::metric(embed(rho.density()), s.block_dims(), F.rule, h)) < 1e-9 * g);
  }
}

TEST_CASE("metric and covariance superoperators are inverse") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    State rho = random_faithful_state(AlgebraShape({1, 3}), s);
    for (const auto& F : function_catalog()) {
      Matrix c = covariance_superoperator(rho, F);
      Matrix g = metric_superoperator(rho, F);
      CHECK(op_norm(g * c - Matrix::Identity(c.rows(), c.cols())) < 1e-9);
    }
  }
}

TEST_CASE("metric domain") {
  State pure = qubit_diag(2.0, 0.0);
  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = 1;
  z(1, 1) = -1;
  auto t = tangent_from_ordinary(kQubit, z);
  auto spec = make_covariance_spec(catalog_function("bures"));
  CHECK_THROWS_AS(metric_inner(pure, spec, t, t), DomainError);
  CHECK_THROWS_AS(metric_inner(tracial_state(kQubit), make_covariance_spec(catalog_function("bures"), 2.0), t, t),
                  Unsupported);
  CHECK_THROWS_AS(tangent_from_ordinary(kQubit, Matrix::Identity(2, 2)), InvalidInput);
  Matrix cross = Matrix::Zero(3, 3);
  cross(0, 2) = cross(2, 0) = 1;
  CHECK_THROWS_AS(tangent_from_ordinary(AlgebraShape({2, 1}), cross), InvalidInput);
}

TEST_CASE("concavity on faithful states") {
  Rng rng(53);
  for (std::uint64_t s = 0; s < 30; ++s) {
    AlgebraShape shape({2, 1});
    State a = random_faithful_state(shape, 2 * s), b = random_faithful_state(shape, 2 * s + 1);
    double l = uniform(rng, 0.05, 0.95);
    auto x = AlgebraElement::random(shape, rng);
    for (const auto& F : function_catalog()) {
      auto spec = make_covariance_spec(F);
      double m = covariance_value(mix(l, a, b), spec, x);
      CHECK(l * covariance_value(a, spec, x) + (1 - l) * covariance_value(b, spec, x) <= m + 1e-8);
    }
  }
}
