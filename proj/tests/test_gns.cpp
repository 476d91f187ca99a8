#include <doctest.h>

#include "covfield/errors.hpp"
#include "covfield/gns.hpp"
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

AlgebraElement e(int r, int s) { return AlgebraElement::unit(kQubit, 0, r, s); }

}  // namespace

TEST_CASE("Gelfand ideal") {
  CHECK(gelfand_ideal_basis(random_faithful_state(kQubit, 2)).empty());
  CHECK(gelfand_ideal_basis(tracial_state(AlgebraShape({1, 2}))).empty());

  State pure = qubit_diag(2.0, 0.0);
  auto basis = gelfand_ideal_basis(pure);
  REQUIRE(basis.size() == 2);
  // brute force: span{e_12, e_22} is exactly the set of matrix units with ρ(a†a) = 0
  for (int r = 0; r < 2; ++r)
    for (int s = 0; s < 2; ++s) {
      bool null = std::abs(oracle::rho_inner(embed(pure.density()), embed(e(r, s)), embed(e(r, s)))) < 1e-15;
      CHECK(null == (s == 1));
    }
  for (const auto& n : basis) CHECK(std::abs(rho_inner(pure, n, n)) < 1e-14);
}

TEST_CASE("GNS dimensions") {
  CHECK(gns_space(random_faithful_state(kQubit, 1)).dim() == 4);
  CHECK(gns_space(qubit_diag(2.0, 0.0)).dim() == 2);
  CHECK(gns_space(diagonal_state(AlgebraShape({1, 1}), {0.4, 0.6})).dim() == 2);
  for (std::uint64_t s = 0; s < 20; ++s) {
    State rho = random_degenerate_state(AlgebraShape({3, 1, 2}), s);
    int d = gns_space(rho).dim();
    int ideal = static_cast<int>(gelfand_ideal_basis(rho).size());
    CHECK(d + ideal == rho.shape().vec_dim());
    int expected = 0;
    for (int j = 0; j < rho.shape().num_blocks(); ++j) {
      int r = 0;
      for (Eigen::Index i = 0; i < rho.block_eigenvalues(j).size(); ++i)
        if (rho.in_support(rho.block_eigenvalues(j)(i))) ++r;
      expected += r * rho.shape().block_dim(j);
    }
    CHECK(d == expected);
  }
}

TEST_CASE("GNS inner products") {
  State rho = diagonal_state(kQubit, {0.75, 0.25});
  GnsSpace h = gns_space(rho);
  auto xi = gns_vector(h, e(0, 1));
  CHECK(gns_inner(xi, xi).real() == doctest::Approx(0.25).epsilon(1e-14));
  auto psi = cyclic_vector(h);
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-14));

  GnsSpace hp = gns_space(qubit_diag(2.0, 0.0));
  CHECK(gns_vector(hp, e(0, 1)).norm() < 1e-14);
  CHECK(hp.gram_error() < 1e-12);

  Rng rng(9);
  AlgebraShape s({2, 3});
  State r = random_degenerate_state(s, 12);
  GnsSpace g = gns_space(r);
  for (int k = 0; k < 10; ++k) {
    auto a = AlgebraElement::random(s, rng), b = AlgebraElement::random(s, rng);
    Complex ref = oracle::rho_inner(embed(r.density()), embed(a), embed(b));
    CHECK(std::abs(gns_inner(gns_vector(g, a), gns_vector(g, b)) - ref) < 1e-12);
    Complex ra = oracle::tau(embed(r.density()) * embed(a));
    CHECK(std::abs(gns_inner(gns_vector(g, a), cyclic_vector(g)) - std::conj(ra)) < 1e-12);
  }
}

TEST_CASE("tracial state gives the normalized Hilbert-Schmidt product") {
  Rng rng(31);
  for (int n = 1; n <= 4; ++n) {
    AlgebraShape s({n});
    GnsSpace h = gns_space(tracial_state(s));
    auto a = AlgebraElement::random(s, rng), b = AlgebraElement::random(s, rng);
    Complex hs = (a.block(0).adjoint() * b.block(0)).trace() / static_cast<double>(n);
    CHECK(std::abs(gns_inner(gns_vector(h, a), gns_vector(h, b)) - hs) < 1e-12);
  }
}

TEST_CASE("quotient is well defined") {
  Rng rng(41);
  for (std::uint64_t s = 0; s < 20; ++s) {
    AlgebraShape shape({2, 2});
    State rho = random_degenerate_state(shape, s);
    GnsSpace h = gns_space(rho);
    auto a = AlgebraElement::random(shape, rng);
    auto n = AlgebraElement::random(shape, rng) * support_projection(rho).q;
    CHECK((h.coordinates(a + n) - h.coordinates(a)).norm() < 1e-10);
  }
}

TEST_CASE("GNS representation") {
  Rng rng(43);
  AlgebraShape s({1, 2});
  State rho = random_faithful_state(s, 3);
  GnsSpace h = gns_space(rho);
  auto id = gns_representation(h, AlgebraElement::identity(s));
  CHECK((id.m - Matrix::Identity(h.dim(), h.dim())).norm() < 1e-12);
  for (int k = 0; k < 10; ++k) {
    auto a = AlgebraElement::random(s, rng), b = AlgebraElement::random(s, rng);
    auto pa = gns_representation(h, a), pb = gns_representation(h, b);
    CHECK((gns_representation(h, adjoint(a)).m - pa.m.adjoint()).norm() < 1e-10 * pa.m.norm());
    CHECK((gns_representation(h, a * b).m - pa.m * pb.m).norm() < 1e-10 * pa.m.norm() * pb.m.norm());
    CHECK(((pa * cyclic_vector(h)).coords - gns_vector(h, a).coords).norm() < 1e-12 * pa.m.norm());
  }
}

TEST_CASE("vectors from different spaces do not mix") {
  State rho = random_faithful_state(kQubit, 1);
  GnsSpace a = gns_space(rho), b = gns_space(rho);
  CHECK_FALSE(a.same_as(b));
  CHECK_THROWS_AS(gns_inner(cyclic_vector(a), cyclic_vector(b)), InvalidInput);
}
