#include "covfield/states.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

#include "covfield/errors.hpp"

namespace covfield {

Eigen::VectorXd State::eigenvalues() const {
  Eigen::VectorXd v(shape().total_dim());
  for (int j = 0; j < shape().num_blocks(); ++j)
    v.segment(shape().block_offset(j), shape().block_dim(j)) = evals_[j];
  return v;
}

Eigen::VectorXd State::ordinary_probabilities() const {
  return eigenvalues() / static_cast<double>(shape().total_dim());
}

Matrix State::ordinary_density() const {
  return embed(density_) / static_cast<double>(shape().total_dim());
}

double State::min_eigenvalue() const { return eigenvalues().minCoeff(); }

Complex State::operator()(const AlgebraElement& a) const { return trace_eval(mul(density_, a)); }

AlgebraElement State::spectral_map(const std::function<Complex(double)>& f, Complex null_value) const {
  std::vector<Matrix> out;
  for (int j = 0; j < shape().num_blocks(); ++j) {
    const auto& q = evals_[j];
    Vector d(q.size());
    for (Eigen::Index i = 0; i < q.size(); ++i) d(i) = in_support(q(i)) ? f(q(i)) : null_value;
    out.push_back(evecs_[j] * d.asDiagonal() * evecs_[j].adjoint());
  }
  return {shape(), out};
}

AlgebraElement State::pseudo_inverse() const {
  return spectral_map([](double q) { return Complex(1.0 / q, 0.0); }, 0.0);
}

State state_from_density(const AlgebraShape& shape, const AlgebraElement& density) {
  if (density.shape() != shape) throw InvalidInput("density shape does not match state shape");
  double scale = std::max(1.0, density.frobenius_norm());
  for (int j = 0; j < shape.num_blocks(); ++j) {
    const Matrix& b = density.block(j);
    if (!b.allFinite()) throw InvalidState("density has non-finite entries");
    if ((b - b.adjoint()).norm() > 1e-10 * scale) throw InvalidState("density is not Hermitian");
  }
  State s;
  std::vector<Matrix> sym;
  for (const auto& b : density.blocks()) sym.push_back((b + b.adjoint()) * 0.5);
  s.density_ = AlgebraElement(shape, sym);

  Complex tr = trace_eval(s.density_);
  if (std::abs(tr - 1.0) > 1e-12) throw InvalidState("density is not normalized: tau(rho) != 1");

  s.lambda_max_ = 0;
  for (const auto& b : sym) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(b);
    Eigen::VectorXd ev = es.eigenvalues();
    double floor = -1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff());
    if (ev.minCoeff() < floor) throw InvalidState("density has a negative eigenvalue");
    ev = ev.cwiseMax(0.0);
    s.lambda_max_ = std::max(s.lambda_max_, ev.maxCoeff());
    s.evals_.push_back(ev);
    s.evecs_.push_back(es.eigenvectors());
  }
  s.rank_ = 0;
  for (const auto& ev : s.evals_)
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      if (s.in_support(ev(i))) ++s.rank_;
  return s;
}

State state_from_spectrum(const AlgebraShape& shape, const std::vector<Matrix>& eigenvectors,
                          const std::vector<Eigen::VectorXd>& eigenvalues) {
  std::vector<Matrix> blocks;
  for (int j = 0; j < shape.num_blocks(); ++j) {
    Vector d = eigenvalues[j].cast<Complex>();
    blocks.push_back(eigenvectors[j] * d.asDiagonal() * eigenvectors[j].adjoint());
  }
  return state_from_density(shape, AlgebraElement(shape, blocks));
}

State tracial_state(const AlgebraShape& shape) {
  return state_from_density(shape, AlgebraElement::identity(shape));
}

State pure_state(const AlgebraShape& shape, int index) {
  if (index < 0 || index >= shape.total_dim()) throw InvalidInput("pure state index out of range");
  AlgebraElement e = AlgebraElement::embedded_unit(shape, index, index);
  return state_from_density(shape, e * Complex(shape.total_dim(), 0));
}

State diagonal_state(const AlgebraShape& shape, const std::vector<double>& p) {
  if (static_cast<int>(p.size()) != shape.total_dim())
    throw InvalidInput("need one probability per embedding index");
  Matrix d = Matrix::Zero(shape.total_dim(), shape.total_dim());
  for (int i = 0; i < shape.total_dim(); ++i) d(i, i) = p[i] * shape.total_dim();
  return state_from_density(shape, AlgebraElement::from_embedded(shape, d));
}

State tracial_state_with_weights(const AlgebraShape& shape, const std::vector<double>& w) {
  if (static_cast<int>(w.size()) != shape.num_blocks()) throw InvalidInput("need one weight per block");
  std::vector<Matrix> b;
  for (int j = 0; j < shape.num_blocks(); ++j) {
    int n = shape.block_dim(j);
    b.push_back(Matrix::Identity(n, n) * (w[j] * shape.total_dim() / n));
  }
  return state_from_density(shape, AlgebraElement(shape, b));
}

SupportProjection support_projection(const State& rho) {
  AlgebraElement p = rho.spectral_map([](double) { return Complex(1.0, 0.0); }, 0.0);
  return {p, AlgebraElement::identity(rho.shape()) - p};
}

Eigen::VectorXd reduced_spectrum(const State& rho) {
  // Compress ϱ onto the support eigenvectors and re-diagonalize.
  std::vector<double> out;
  for (int j = 0; j < rho.shape().num_blocks(); ++j) {
    const auto& q = rho.block_eigenvalues(j);
    const auto& v = rho.block_eigenvectors(j);
    std::vector<Eigen::Index> cols;
    for (Eigen::Index i = 0; i < q.size(); ++i)
      if (rho.in_support(q(i))) cols.push_back(i);
    if (cols.empty()) continue;
    Matrix vp(v.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) vp.col(c) = v.col(cols[c]);
    Matrix comp = vp.adjoint() * rho.density().block(j) * vp;
    Eigen::SelfAdjointEigenSolver<Matrix> es((comp + comp.adjoint()) * 0.5);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
  }
  return Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

bool commutes(const State& rho, const State& sigma) {
  if (rho.shape() != sigma.shape()) throw InvalidInput("states live on different shapes");
  Matrix a = embed(rho.density()), b = embed(sigma.density());
  return (a * b - b * a).norm() < 1e-10 * a.norm() * b.norm();
}

bool is_tracial(const State& rho) {
  const auto& d = rho.density();
  for (int j = 0; j < rho.shape().num_blocks(); ++j) {
    const Matrix& b = d.block(j);
    int n = rho.shape().block_dim(j);
    Complex c = b.trace() / static_cast<double>(n);
    if ((b - c * Matrix::Identity(n, n)).norm() > 1e-10 * std::max(1.0, b.norm())) return false;
  }
  return true;
}

namespace {

AlgebraElement normalized(AlgebraElement x) {
  Complex t = trace_eval(x);
  return x * Complex(1.0 / t.real(), 0.0);
}

}  // namespace

State random_faithful_state(const AlgebraShape& shape, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Matrix> b;
  for (int n : shape.block_dims()) {
    Matrix g = ginibre(rng, n, n);
    b.push_back(g.adjoint() * g);
  }
  constexpr double floor = 1e-3;
  AlgebraElement x = normalized(AlgebraElement(shape, b));
  AlgebraElement id = AlgebraElement::identity(shape);
  return state_from_density(shape, x * Complex(1.0 - floor, 0) + id * Complex(floor, 0));
}

State random_degenerate_state(const AlgebraShape& shape, std::uint64_t seed) {
  Rng rng(seed);
  int N = shape.num_blocks();
  std::vector<int> ranks(N);
  int total = 0;
  for (int j = 0; j < N; ++j) {
    std::uniform_int_distribution<int> d(0, shape.block_dim(j));
    ranks[j] = d(rng);
    total += ranks[j];
  }
  if (total == 0) ranks[0] = 1;
  if (total == shape.total_dim() && shape.total_dim() > 1) {
    std::uniform_int_distribution<int> d(0, N - 1);
    ranks[d(rng)] -= 1;
    if (std::accumulate(ranks.begin(), ranks.end(), 0) == 0) ranks[0] = 1;
  }
  std::vector<Matrix> b;
  for (int j = 0; j < N; ++j) {
    int n = shape.block_dim(j);
    Matrix g = ginibre(rng, ranks[j], n);
    b.push_back(ranks[j] > 0 ? Matrix(g.adjoint() * g) : Matrix(Matrix::Zero(n, n)));
  }
  return state_from_density(shape, normalized(AlgebraElement(shape, b)));
}

State random_tracial_state(const AlgebraShape& shape, std::uint64_t seed, bool allow_zero_blocks) {
  Rng rng(seed);
  int N = shape.num_blocks();
  std::vector<double> w(N);
  for (int j = 0; j < N; ++j) w[j] = uniform(rng, 0.05, 1.0);
  if (allow_zero_blocks && N > 1) {
    std::uniform_int_distribution<int> d(0, N);
    int z = d(rng);
    if (z < N) w[z] = 0.0;
  }
  double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= s;
  return tracial_state_with_weights(shape, w);
}

CommutingSequence commuting_sequence(const State& rho, int count, double rate) {
  if (count < 1) throw InvalidInput("commuting sequence needs count >= 1");
  if (!(rate > 0 && rate < 1)) throw InvalidInput("rate must lie in (0,1)");
  std::vector<double> eps;
  for (int n = 1; n <= count; ++n) eps.push_back(std::pow(rate, n));
  return commuting_sequence(rho, eps);
}

CommutingSequence commuting_sequence(const State& rho, const std::vector<double>& epsilons) {
  if (epsilons.empty()) throw InvalidInput("commuting sequence needs at least one term");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0 && epsilons[i] <= 1)) throw InvalidInput("epsilon must lie in (0,1]");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
      throw InvalidInput("epsilon schedule must be strictly decreasing");
  }
  CommutingSequence seq{rho, {}, epsilons};
  const auto& shape = rho.shape();
  std::vector<Matrix> vecs;
  for (int j = 0; j < shape.num_blocks(); ++j) vecs.push_back(rho.block_eigenvectors(j));
  for (double e : epsilons) {
    std::vector<Eigen::VectorXd> vals;
    for (int j = 0; j < shape.num_blocks(); ++j)
      vals.push_back(((1.0 - e) * rho.block_eigenvalues(j)).array() + e);
    seq.terms.push_back(state_from_spectrum(shape, vecs, vals));
  }
  return seq;
}

State mix(double lambda, const State& rho, const State& sigma) {
  if (!(lambda > 0 && lambda < 1)) throw InvalidInput("mixing weight must lie in (0,1)");
  if (rho.shape() != sigma.shape()) throw InvalidInput("states live on different shapes");
  return state_from_density(
      rho.shape(), rho.density() * Complex(lambda, 0) + sigma.density() * Complex(1 - lambda, 0));
}

State direct_sum_state(double lambda, const State& rho, const State& sigma) {
  if (!(lambda > 0 && lambda < 1)) throw InvalidInput("mixing weight must lie in (0,1)");
  if (rho.shape() != sigma.shape()) throw InvalidInput("states live on different shapes");
  AlgebraShape ds = direct_sum(rho.shape(), sigma.shape());
  std::vector<Matrix> b;
  for (const auto& x : rho.density().blocks()) b.push_back(x * (2.0 * lambda));
  for (const auto& x : sigma.density().blocks()) b.push_back(x * (2.0 * (1 - lambda)));
  return state_from_density(ds, AlgebraElement(ds, b));
}

nlohmann::json to_json(const State& s) {
  return {{"shape", shape_to_json(s.shape())}, {"density", to_json(s.density())}};
}

State state_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("shape") || !j.contains("density"))
    throw InvalidInput("state needs 'shape' and 'density'");
  AlgebraShape shape = shape_from_json(j.at("shape"));
  return state_from_density(shape, element_from_json(j.at("density")));
}

State parse_state_spec(const std::string& spec, const std::optional<AlgebraShape>& shape) {
  auto need_shape = [&]() -> const AlgebraShape& {
    if (!shape) throw InvalidInput("state '" + spec + "' needs --shape");
    return *shape;
  };
  auto number_after = [&](std::size_t pos) {
    std::string rest = spec.substr(pos);
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(rest, &used);
    } catch (const std::exception&) {
      throw InvalidInput("bad number in state spec '" + spec + "'");
    }
    if (used != rest.size()) throw InvalidInput("bad number in state spec '" + spec + "'");
    return v;
  };
  if (spec == "tracial") return tracial_state(need_shape());
  if (spec.rfind("random:", 0) == 0) return random_faithful_state(need_shape(), number_after(7));
  if (spec.rfind("pure:", 0) == 0) return pure_state(need_shape(), static_cast<int>(number_after(5)));
  std::ifstream in(spec);
  if (!in) throw InvalidInput("cannot open state file '" + spec + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("state file is not valid JSON: ") + e.what());
  }
  State s = state_from_json(j);
  if (shape && *shape != s.shape()) throw InvalidInput("state file shape differs from --shape");
  return s;
}

}  // namespace covfield
