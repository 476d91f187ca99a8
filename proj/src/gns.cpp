#include "covfield/gns.hpp"

#include "covfield/errors.hpp"

namespace covfield {

namespace {

constexpr double kZeroClass = 1e-10;

/// G·v where G is the Gram operator of ⟨·,·⟩_ρ in compact coordinates: vec(a) ↦ vec(aϱ)/K.
Vector apply_gram(const State& rho, const Vector& v) {
  const auto& s = rho.shape();
  Vector out(v.size());
  double inv_k = 1.0 / s.total_dim();
  for (int j = 0; j < s.num_blocks(); ++j) {
    int n = s.block_dim(j), o = s.vec_offset(j);
    Eigen::Map<const Matrix> a(v.data() + o, n, n);
    Eigen::Map<Matrix> r(out.data() + o, n, n);
    r = a * rho.density().block(j) * inv_k;
  }
  return out;
}

/// Spanning set {vec(e^{(j)}_{rs}·x)} in block, column, row order.
std::vector<Vector> unit_span(const AlgebraElement& x) {
  const auto& s = x.shape();
  std::vector<Vector> out;
  for (int j = 0; j < s.num_blocks(); ++j) {
    int n = s.block_dim(j);
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r) {
        Vector v = Vector::Zero(s.vec_dim());
        // e_rc·x has row r equal to row c of x_j.
        for (int k = 0; k < n; ++k) v(s.vec_offset(j) + r + k * n) = x.block(j)(c, k);
        out.push_back(v);
      }
  }
  return out;
}

/// Modified Gram–Schmidt with one re-orthogonalization pass under the inner product vᴴ·G·w.
template <class GramFn>
void orthonormalize(const std::vector<Vector>& span, GramFn gram, Matrix& basis, Matrix& gbasis) {
  Eigen::Index D = span.empty() ? 0 : span.front().size();
  std::vector<Vector> us, gus;
  for (const Vector& v0 : span) {
    Vector w = v0;
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t a = 0; a < us.size(); ++a) w -= gus[a].dot(w) * us[a];
    Vector gw = gram(w);
    double nrm2 = w.dot(gw).real();
    if (!(nrm2 > kZeroClass * kZeroClass)) continue;
    double nrm = std::sqrt(nrm2);
    us.push_back(w / nrm);
    gus.push_back(gw / nrm);
  }
  basis.resize(D, static_cast<Eigen::Index>(us.size()));
  gbasis.resize(D, static_cast<Eigen::Index>(us.size()));
  for (std::size_t a = 0; a < us.size(); ++a) {
    basis.col(a) = us[a];
    gbasis.col(a) = gus[a];
  }
}

void require_same_space(const GnsSpace& a, const GnsSpace& b) {
  if (!a.same_as(b)) throw InvalidInput("vectors or operators belong to different GNS spaces");
}

}  // namespace

AlgebraElement GnsSpace::basis_element(int alpha) const {
  return devectorize(state().shape(), impl_->basis.col(alpha));
}

Vector GnsSpace::coordinates(const AlgebraElement& a) const {
  if (a.shape() != state().shape()) throw InvalidInput("element shape differs from GNS space");
  return impl_->gbasis.adjoint() * vectorize(a);
}

AlgebraElement GnsSpace::representative(const Vector& c) const {
  return devectorize(state().shape(), impl_->basis * c);
}

double GnsSpace::gram_error() const {
  Matrix g = impl_->gbasis.adjoint() * impl_->basis;
  return (g - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
}

GnsOperator GnsOperator::operator*(const GnsOperator& o) const {
  require_same_space(space, o.space);
  return {space, m * o.m};
}

GnsOperator GnsOperator::operator+(const GnsOperator& o) const {
  require_same_space(space, o.space);
  return {space, m + o.m};
}

GnsOperator GnsOperator::operator-(const GnsOperator& o) const {
  require_same_space(space, o.space);
  return {space, m - o.m};
}

GnsVector GnsOperator::operator*(const GnsVector& v) const {
  require_same_space(space, v.space);
  return {space, m * v.coords};
}

Complex rho_inner(const State& rho, const AlgebraElement& a, const AlgebraElement& b) {
  return rho(mul(adjoint(a), b));
}

std::vector<AlgebraElement> gelfand_ideal_basis(const State& rho) {
  SupportProjection sp = support_projection(rho);
  Matrix basis, gbasis;
  orthonormalize(unit_span(sp.q), [](const Vector& v) { return v; }, basis, gbasis);
  std::vector<AlgebraElement> out;
  for (Eigen::Index a = 0; a < basis.cols(); ++a) out.push_back(devectorize(rho.shape(), basis.col(a)));
  return out;
}

GnsSpace gns_space(const State& rho) {
  auto impl = std::make_shared<GnsSpace::Impl>();
  impl->rho = rho;
  impl->support = support_projection(rho);
  orthonormalize(unit_span(impl->support.p), [&](const Vector& v) { return apply_gram(rho, v); },
                 impl->basis, impl->gbasis);
  GnsSpace s;
  s.impl_ = impl;
  return s;
}

GnsVector gns_vector(const GnsSpace& space, const AlgebraElement& a) {
  return {space, space.coordinates(a)};
}

Complex gns_inner(const GnsVector& xi, const GnsVector& eta) {
  require_same_space(xi.space, eta.space);
  return xi.coords.dot(eta.coords);
}

GnsOperator gns_representation(const GnsSpace& space, const AlgebraElement& a) {
  return induced_operator(space, [&](const AlgebraElement& b) { return mul(a, b); });
}

GnsVector cyclic_vector(const GnsSpace& space) {
  return gns_vector(space, AlgebraElement::identity(space.state().shape()));
}

GnsOperator induced_operator(const GnsSpace& space,
                             const std::function<AlgebraElement(const AlgebraElement&)>& map) {
  return {space, induced_matrix(space, space, map)};
}

Matrix induced_matrix(const GnsSpace& from, const GnsSpace& to,
                      const std::function<AlgebraElement(const AlgebraElement&)>& map) {
  Matrix m(to.dim(), from.dim());
  for (int b = 0; b < from.dim(); ++b) m.col(b) = to.coordinates(map(from.basis_element(b)));
  return m;
}

GnsOperator identity_operator(const GnsSpace& space) {
  return {space, Matrix::Identity(space.dim(), space.dim())};
}

}  // namespace covfield
