#include "covfield/covariance.hpp"

#include <cmath>

#include "covfield/errors.hpp"

namespace covfield {

CovarianceSpec make_covariance_spec(const MonotoneFunction& f, std::optional<double> alpha) {
  if (!certify_monotone(f)) throw DomainError("function '" + f.name + "' fails Loewner certification");
  CovarianceSpec s{f, f.f1, f.f1};
  if (!(s.beta > 0)) throw DomainError("F(1) must be positive");
  if (alpha) {
    if (!(*alpha > 0)) throw InvalidInput("alpha must be positive");
    s.alpha = *alpha;
  }
  return s;
}

bool has_off_support_directions(const State& rho) {
  for (int j = 0; j < rho.shape().num_blocks(); ++j) {
    const auto& q = rho.block_eigenvalues(j);
    int r = 0;
    for (Eigen::Index i = 0; i < q.size(); ++i)
      if (rho.in_support(q(i))) ++r;
    if (r > 0 && r < q.size()) return true;
  }
  return false;
}

CovarianceOperator covariance_operator(const GnsSpace& space, const CovarianceSpec& spec) {
  if (spec.F.radial_degenerate() && has_off_support_directions(space.state()))
    throw DomainError("F(0) = 0 gives a degenerate covariance at this non-faithful state");
  CovarianceOperator op;
  op.spec = spec;
  op.delta = modular_on(space);
  op.T = eval_hermitian(spec.F, op.delta);
  Vector psi = cyclic_vector(space).coords;
  op.T.m += (spec.alpha - spec.beta) * psi * psi.adjoint();
  op.T.m = (op.T.m + op.T.m.adjoint()) * 0.5;
  return op;
}

CovarianceOperator covariance_operator(const State& rho, const CovarianceSpec& spec) {
  return covariance_operator(gns_space(rho), spec);
}

Complex covariance_form(const CovarianceOperator& op, const GnsVector& xi, const GnsVector& eta) {
  if (!xi.space.same_as(op.space()) || !eta.space.same_as(op.space()))
    throw InvalidInput("vectors do not belong to the covariance operator's space");
  return xi.coords.dot(op.T.m * eta.coords);
}

double covariance_value(const State& rho, const CovarianceSpec& spec, const AlgebraElement& a) {
  CovarianceOperator op = covariance_operator(rho, spec);
  GnsVector xi = gns_vector(op.space(), a);
  return covariance_form(op, xi, xi).real();
}

TangentVector tangent_from_element(const AlgebraElement& zeta_tilde) {
  double scale = std::max(1.0, zeta_tilde.frobenius_norm());
  if (!zeta_tilde.is_hermitian(1e-12 * scale)) throw InvalidInput("tangent vector must be Hermitian");
  if (std::abs(trace_eval(zeta_tilde)) > 1e-12 * scale) throw InvalidInput("tangent vector must be traceless");
  return {zeta_tilde};
}

TangentVector tangent_from_ordinary(const AlgebraShape& shape, const Matrix& ordinary) {
  AlgebraElement z = AlgebraElement::from_embedded(shape, ordinary);
  if ((embed(z) - ordinary).norm() > 1e-12 * std::max(1.0, ordinary.norm()))
    throw InvalidInput("tangent vector has entries outside the block structure");
  return tangent_from_element(z * Complex(shape.total_dim(), 0));
}

Matrix ordinary_coordinates(const TangentVector& v) {
  return embed(v.zeta) / static_cast<double>(v.zeta.shape().total_dim());
}

namespace {

void require_faithful(const State& rho) {
  if (!rho.faithful()) throw DomainError("metric requires a faithful state");
}

}  // namespace

Matrix covariance_superoperator(const State& rho, const MonotoneFunction& f) {
  require_faithful(rho);
  Matrix l = left_mult_matrix(rho.density());
  Matrix r = right_mult_matrix(rho.density());
  Matrix rinv = right_mult_matrix(rho.pseudo_inverse());
  return eval_hermitian(f, l * rinv) * r;
}

Matrix metric_superoperator(const State& rho, const MonotoneFunction& f) {
  Matrix s = covariance_superoperator(rho, f);
  return s.partialPivLu().solve(Matrix::Identity(s.rows(), s.cols()));
}

double metric_inner(const State& rho, const CovarianceSpec& spec, const TangentVector& zeta,
                    const TangentVector& eta) {
  require_faithful(rho);
  if (spec.alpha != spec.beta) throw Unsupported("metric is only defined for alpha = beta");
  if (zeta.zeta.shape() != rho.shape() || eta.zeta.shape() != rho.shape())
    throw InvalidInput("tangent vectors live on a different algebra");
  Matrix s = covariance_superoperator(rho, spec.F);
  Vector x = s.partialPivLu().solve(vectorize(eta.zeta));
  return vectorize(zeta.zeta).dot(x).real() / rho.shape().total_dim();
}

double metric_spectral_oracle(const State& rho, const MonotoneFunction& f, const TangentVector& zeta) {
  require_faithful(rho);
  if (rho.shape().num_blocks() != 1) throw Unsupported("spectral oracle handles a single block only");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.ordinary_density());
  const Eigen::VectorXd& p = es.eigenvalues();
  Matrix z = es.eigenvectors().adjoint() * ordinary_coordinates(zeta) * es.eigenvectors();
  double g = 0;
  for (Eigen::Index j = 0; j < p.size(); ++j)
    for (Eigen::Index k = 0; k < p.size(); ++k) g += std::norm(z(j, k)) / (p(k) * f.rule(p(j) / p(k)));
  return g;
}

double fisher_rao(const std::vector<double>& p, const std::vector<double>& zeta) {
  if (p.size() != zeta.size()) throw InvalidInput("length mismatch");
  double g = 0;
  for (std::size_t i = 0; i < p.size(); ++i) g += zeta[i] * zeta[i] / p[i];
  return g;
}

}  // namespace covfield
