#include "covfield/modular.hpp"

#include <cmath>

#include "covfield/errors.hpp"

namespace covfield {

double op_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
  if (m.size() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double min_eigenvalue(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return hermitian_eigenvalues(m)(0);
}

GnsSpace tracial_space(const AlgebraShape& shape) { return gns_space(tracial_state(shape)); }

namespace {

void require_tau(const State& rho, const GnsSpace& tau_space) {
  if (tau_space.state().shape() != rho.shape())
    throw InvalidInput("tracial space belongs to a different algebra");
}

}  // namespace

GnsOperator left_mult(const State& rho, const GnsSpace& tau_space) {
  require_tau(rho, tau_space);
  return {tau_space, left_mult_matrix(rho.density())};
}

GnsOperator right_mult(const State& rho, const GnsSpace& tau_space) {
  require_tau(rho, tau_space);
  return {tau_space, right_mult_matrix(rho.density())};
}

GnsOperator partial_inverse_W(const State& rho, const GnsSpace& tau_space) {
  require_tau(rho, tau_space);
  return {tau_space, right_mult_matrix(rho.pseudo_inverse())};
}

GnsOperator modular_on(const GnsSpace& space) {
  const State& rho = space.state();
  AlgebraElement pinv = rho.pseudo_inverse();
  GnsOperator d = induced_operator(space, [&](const AlgebraElement& a) {
    return mul(mul(rho.density(), a), pinv);
  });
  d.m = (d.m + d.m.adjoint()) * 0.5;
  return d;
}

ModularData modular_operator(const State& rho) {
  ModularData md;
  md.rho = rho;
  md.tau_space = tracial_space(rho.shape());
  md.L = left_mult(rho, md.tau_space);
  md.R = right_mult(rho, md.tau_space);
  md.W = partial_inverse_W(rho, md.tau_space);
  md.delta_tilde = md.L * md.W;
  md.space = gns_space(rho);
  md.delta = modular_on(md.space);
  md.spectrum = hermitian_eigenvalues(md.delta.m);
  return md;
}

AlgebraElement modular_flow(const State& rho, double t, const AlgebraElement& a) {
  if (!rho.faithful()) throw DomainError("modular flow requires a faithful state");
  if (a.shape() != rho.shape()) throw InvalidInput("element shape differs from state");
  auto power = [&](double s) {
    return rho.spectral_map([s](double q) { return std::exp(Complex(0.0, s * std::log(q))); }, 0.0);
  };
  return mul(mul(power(t), a), power(-t));
}

double restricted_norm(const GnsOperator& x, const AlgebraElement& p) {
  return op_norm(x.m * right_mult_matrix(p));
}

}  // namespace covfield
