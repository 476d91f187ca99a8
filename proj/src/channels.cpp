#include "covfield/channels.hpp"

#include <cmath>
#include <numeric>

#include "covfield/errors.hpp"

namespace covfield {

CpuMap::CpuMap(AlgebraShape source, AlgebraShape target, Matrix superop)
    : source_(std::move(source)), target_(std::move(target)), superop_(std::move(superop)) {
  Eigen::Index ka = target_.total_dim(), kb = source_.total_dim();
  if (superop_.rows() != ka * ka || superop_.cols() != kb * kb)
    throw InvalidInput("superoperator must be K_target^2 x K_source^2");
}

CpuMap CpuMap::from_function(const AlgebraShape& source, const AlgebraShape& target,
                             const std::function<AlgebraElement(const AlgebraElement&)>& fn) {
  int kb = source.total_dim(), ka = target.total_dim();
  Matrix s = Matrix::Zero(ka * ka, kb * kb);
  for (int j = 0; j < source.num_blocks(); ++j) {
    int o = source.block_offset(j), n = source.block_dim(j);
    for (int c = o; c < o + n; ++c)
      for (int r = o; r < o + n; ++r) {
        AlgebraElement out = fn(AlgebraElement::embedded_unit(source, r, c));
        if (out.shape() != target) throw InvalidInput("map output has the wrong shape");
        s.col(r + c * kb) = embedded_vec(out);
      }
  }
  return {source, target, s};
}

AlgebraElement CpuMap::apply(const AlgebraElement& b) const {
  if (b.shape() != source_) throw InvalidInput("argument shape differs from map source");
  int ka = target_.total_dim();
  Vector v = superop_ * embedded_vec(b);
  return AlgebraElement::from_embedded(target_, Eigen::Map<const Matrix>(v.data(), ka, ka));
}

ChoiMatrix choi_matrix(const CpuMap& phi) {
  const auto& src = phi.source();
  int kb = src.total_dim(), ka = phi.target().total_dim();
  ChoiMatrix c;
  c.m = Matrix::Zero(kb * ka, kb * ka);
  for (int j = 0; j < src.num_blocks(); ++j) {
    int o = src.block_offset(j), n = src.block_dim(j);
    for (int r = o; r < o + n; ++r)
      for (int s = o; s < o + n; ++s)
        c.m.block(r * ka, s * ka, ka, ka) = embed(phi(AlgebraElement::embedded_unit(src, r, s)));
  }
  c.eigenvalues = hermitian_eigenvalues(c.m);
  c.trace = c.m.trace().real();
  c.psd = c.min_eigenvalue() >= -1e-9 * std::max(1.0, std::fabs(c.trace));
  return c;
}

double kadison_slack(const CpuMap& phi, std::uint64_t seed, int trials) {
  Rng rng(seed);
  double worst = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    AlgebraElement b = AlgebraElement::random(phi.source(), rng);
    b = b * Complex(1.0 / b.op_norm(), 0);
    AlgebraElement pb = phi(b);
    AlgebraElement gap = phi(mul(adjoint(b), b)) - mul(adjoint(pb), pb);
    for (const auto& blk : gap.blocks()) worst = std::min(worst, min_eigenvalue(blk));
  }
  return worst;
}

CertificationReport verify_cpu(const CpuMap& phi, std::uint64_t seed, int kadison_trials) {
  CertificationReport r;
  const auto& src = phi.source();
  r.unital_residual =
      (phi(AlgebraElement::identity(src)) - AlgebraElement::identity(phi.target())).frobenius_norm();
  r.unital = r.unital_residual < 1e-10;
  for (int j = 0; j < src.num_blocks(); ++j) {
    int o = src.block_offset(j), n = src.block_dim(j);
    for (int a = o; a < o + n; ++a)
      for (int b = o; b < o + n; ++b) {
        AlgebraElement x = phi(AlgebraElement::embedded_unit(src, a, b));
        AlgebraElement y = phi(AlgebraElement::embedded_unit(src, b, a));
        r.self_adjoint_residual = std::max(r.self_adjoint_residual, (adjoint(x) - y).frobenius_norm());
      }
  }
  r.self_adjoint = r.self_adjoint_residual < 1e-10;
  ChoiMatrix c = choi_matrix(phi);
  r.choi_min_eigenvalue = c.min_eigenvalue();
  r.choi_min_normalized = c.min_eigenvalue() / src.total_dim();
  r.completely_positive = c.psd;
  r.kadison_min_eigenvalue = kadison_slack(phi, seed, kadison_trials);
  r.kadison = r.kadison_min_eigenvalue >= -1e-9;
  return r;
}

State dual_state(const CpuMap& phi, const State& rho) {
  if (rho.shape() != phi.target()) throw InvalidInput("state does not live on the map's target");
  int kb = phi.source().total_dim(), ka = phi.target().total_dim();
  Vector y = phi.superop().adjoint() * embedded_vec(rho.density());
  Matrix ym = Eigen::Map<const Matrix>(y.data(), kb, kb).adjoint();
  AlgebraElement d = AlgebraElement::from_embedded(phi.source(), ym * (static_cast<double>(kb) / ka));
  return state_from_density(phi.source(), d);
}

InducedContraction induced_contraction(const CpuMap& phi, const GnsSpace& rho_space) {
  const State& rho = rho_space.state();
  State sigma = dual_state(phi, rho);
  InducedContraction c;
  c.source = gns_space(sigma);
  c.target = rho_space;
  for (const auto& n : gelfand_ideal_basis(sigma)) {
    double leak = rho_space.coordinates(phi(n)).norm();
    if (leak > 1e-6)
      throw InternalConsistency("map does not send the Gelfand ideal of the dual state into that of rho");
  }
  c.m = induced_matrix(c.source, c.target, [&](const AlgebraElement& b) { return phi(b); });
  c.norm = op_norm(c.m);
  c.unitality_residual = (c.m * cyclic_vector(c.source).coords - cyclic_vector(c.target).coords).norm();
  return c;
}

InducedContraction induced_contraction(const CpuMap& phi, const State& rho) {
  return induced_contraction(phi, gns_space(rho));
}

double modular_slack(const InducedContraction& c) {
  Matrix ds = modular_on(c.source).m;
  Matrix dr = modular_on(c.target).m;
  return min_eigenvalue(ds - c.m.adjoint() * dr * c.m);
}

double covariance_slack(const InducedContraction& c, const CovarianceSpec& spec) {
  Matrix ts = covariance_operator(c.source, spec).T.m;
  Matrix tr = covariance_operator(c.target, spec).T.m;
  return min_eigenvalue(ts - c.m.adjoint() * tr * c.m);
}

double covariance_invariance_defect(const InducedContraction& c, const CovarianceSpec& spec) {
  Matrix ts = covariance_operator(c.source, spec).T.m;
  Matrix tr = covariance_operator(c.target, spec).T.m;
  return op_norm(c.m.adjoint() * tr * c.m - ts);
}

CpuMap pinching_expectation(const std::vector<AlgebraElement>& projections) {
  if (projections.empty()) throw InvalidInput("pinching needs at least one projection");
  const AlgebraShape& shape = projections.front().shape();
  AlgebraElement sum = AlgebraElement::zero(shape);
  for (std::size_t i = 0; i < projections.size(); ++i) {
    const auto& p = projections[i];
    if (p.shape() != shape) throw InvalidInput("projections live on different shapes");
    if (!p.is_hermitian(1e-10) || (mul(p, p) - p).frobenius_norm() > 1e-10)
      throw InvalidInput("pinching needs orthogonal projections");
    for (std::size_t k = 0; k < i; ++k)
      if (mul(p, projections[k]).frobenius_norm() > 1e-10)
        throw InvalidInput("pinching projections must be mutually orthogonal");
    sum = sum + p;
  }
  if ((sum - AlgebraElement::identity(shape)).frobenius_norm() > 1e-10)
    throw InvalidInput("pinching projections must sum to the identity");
  return CpuMap::from_function(shape, shape, [&](const AlgebraElement& a) {
    AlgebraElement out = AlgebraElement::zero(shape);
    for (const auto& p : projections) out = out + mul(mul(p, a), p);
    return out;
  });
}

namespace {

/// Index ranges of (numerically) equal eigenvalues in an ascending list.
std::vector<std::pair<int, int>> eigen_clusters(const Eigen::VectorXd& q, double tol) {
  std::vector<std::pair<int, int>> out;
  int start = 0;
  for (int i = 1; i <= q.size(); ++i)
    if (i == q.size() || q(i) - q(i - 1) > tol) {
      out.emplace_back(start, i);
      start = i;
    }
  return out;
}

}  // namespace

CpuMap centralizer_expectation(const State& rho) {
  const auto& shape = rho.shape();
  std::vector<AlgebraElement> ps;
  double tol = 1e-10 * std::max(1.0, rho.max_eigenvalue());
  for (int j = 0; j < shape.num_blocks(); ++j) {
    const Matrix& v = rho.block_eigenvectors(j);
    for (auto [a, b] : eigen_clusters(rho.block_eigenvalues(j), tol)) {
      AlgebraElement p = AlgebraElement::zero(shape);
      Matrix vs = v.middleCols(a, b - a);
      p.block(j) = vs * vs.adjoint();
      ps.push_back(p);
    }
  }
  return pinching_expectation(ps);
}

CpuMap identity_map(const AlgebraShape& shape) {
  return CpuMap::from_function(shape, shape, [](const AlgebraElement& a) { return a; });
}

CpuMap transpose_map(const AlgebraShape& shape) {
  return CpuMap::from_function(shape, shape, [](const AlgebraElement& a) {
    std::vector<Matrix> b;
    for (const auto& x : a.blocks()) b.push_back(x.transpose());
    return AlgebraElement(a.shape(), b);
  });
}

CpuMap unitary_conjugation(const AlgebraElement& u) {
  AlgebraElement ud = adjoint(u);
  if ((mul(ud, u) - AlgebraElement::identity(u.shape())).frobenius_norm() > 1e-10)
    throw InvalidInput("conjugating element is not unitary");
  return CpuMap::from_function(u.shape(), u.shape(), [&](const AlgebraElement& b) { return mul(mul(ud, b), u); });
}

AlgebraElement random_state_preserving_unitary(const State& rho, std::uint64_t seed) {
  Rng rng(seed);
  const auto& shape = rho.shape();
  std::vector<Matrix> blocks;
  double tol = 1e-10 * std::max(1.0, rho.max_eigenvalue());
  for (int j = 0; j < shape.num_blocks(); ++j) {
    const Matrix& v = rho.block_eigenvectors(j);
    Matrix w = Matrix::Zero(v.rows(), v.cols());
    for (auto [a, b] : eigen_clusters(rho.block_eigenvalues(j), tol))
      w.block(a, a, b - a, b - a) = haar_unitary(rng, b - a);
    blocks.push_back(v * w * v.adjoint());
  }
  return {shape, blocks};
}

CpuMap random_cpu(const AlgebraShape& source, const AlgebraShape& target, int dilation, std::uint64_t seed) {
  if (dilation < 1) throw InvalidInput("dilation must be at least 1");
  int kb = source.total_dim(), ka = target.total_dim();
  if (kb * dilation < ka) throw InvalidInput("dilation too small for an isometry into K_source * r");
  Rng rng(seed);
  Matrix v = random_isometry(rng, kb * dilation, ka);
  Matrix id_r = Matrix::Identity(dilation, dilation);
  CpuMap phi = CpuMap::from_function(source, target, [&](const AlgebraElement& b) {
    return AlgebraElement::from_embedded(target, v.adjoint() * kron(embed(b), id_r) * v);
  });
  phi.stinespring = CpuMap::Stinespring{v, dilation};
  return phi;
}

Rational parse_rational(const std::string& text) {
  Rational q;
  auto slash = text.find('/');
  try {
    std::size_t used = 0;
    std::string a = text.substr(0, slash);
    q.num = std::stol(a, &used);
    if (used != a.size()) throw InvalidInput("bad rational '" + text + "'");
    if (slash != std::string::npos) {
      std::string b = text.substr(slash + 1);
      q.den = std::stol(b, &used);
      if (used != b.size()) throw InvalidInput("bad rational '" + text + "'");
    }
  } catch (const std::logic_error&) {
    throw InvalidInput("bad rational '" + text + "'");
  }
  if (q.den <= 0) throw InvalidInput("rational denominator must be positive");
  long g = std::gcd(q.num, q.den);
  if (g > 1) {
    q.num /= g;
    q.den /= g;
  }
  return q;
}

RationalSplitMono rational_trace_split_mono(const std::vector<Rational>& weights, const AlgebraShape& shape) {
  if (static_cast<int>(weights.size()) != shape.num_blocks())
    throw InvalidInput("need one weight per block");
  RationalSplitMono out;
  out.shape = shape;
  out.M = 1;
  for (const auto& w : weights) {
    if (w.num <= 0 || w.den <= 0) throw InvalidInput("weights must be positive rationals");
    out.M = std::lcm(out.M, w.den);
  }
  long total = 0;
  for (const auto& w : weights) {
    out.L.push_back(w.num * (out.M / w.den));
    total += out.L.back();
  }
  if (total != out.M) throw InvalidInput("weights must sum to 1");

  long D = 1;
  for (int n : shape.block_dims()) D *= n;
  long N = out.M * D;
  if (N > 32) throw Unsupported("the tensor space for these weights exceeds 32 dimensions");
  out.big = AlgebraShape({static_cast<int>(N)});

  std::vector<long> offs;
  long off = 0;
  for (int j = 0; j < shape.num_blocks(); ++j) {
    offs.push_back(off);
    off += out.L[j] * D;
  }
  const AlgebraShape big = out.big;
  const std::vector<long> L = out.L;

  out.phi = CpuMap::from_function(shape, big, [=](const AlgebraElement& a) {
    Matrix x = Matrix::Zero(N, N);
    for (int j = 0; j < shape.num_blocks(); ++j) {
      long rest = D / shape.block_dim(j);
      Matrix blk = kron(kron(Matrix::Identity(L[j], L[j]), a.block(j)), Matrix::Identity(rest, rest));
      x.block(offs[j], offs[j], blk.rows(), blk.cols()) = blk;
    }
    return AlgebraElement::from_embedded(big, x);
  });

  out.E = CpuMap::from_function(big, shape, [=](const AlgebraElement& xe) {
    const Matrix& x = xe.block(0);
    std::vector<Matrix> blocks;
    for (int j = 0; j < shape.num_blocks(); ++j) {
      int n = shape.block_dim(j);
      long rest = D / n;
      Matrix a = Matrix::Zero(n, n);
      for (long l = 0; l < L[j]; ++l)
        for (long m = 0; m < rest; ++m)
          for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
              a(i, k) += x(offs[j] + (l * n + i) * rest + m, offs[j] + (l * n + k) * rest + m);
      blocks.push_back(a / static_cast<double>(L[j] * rest));
    }
    return AlgebraElement(shape, blocks);
  });

  std::vector<double> w;
  for (long l : out.L) w.push_back(static_cast<double>(l) / out.M);
  out.sigma = tracial_state_with_weights(shape, w);
  out.tau = tracial_state(big);

  for (int j = 0; j < shape.num_blocks(); ++j)
    for (int r = 0; r < shape.block_dim(j); ++r)
      for (int s = 0; s < shape.block_dim(j); ++s) {
        AlgebraElement e = AlgebraElement::unit(shape, j, r, s);
        out.left_inverse_residual =
            std::max(out.left_inverse_residual, (out.E(out.phi(e)) - e).frobenius_norm());
      }
  out.pullback_residual = (dual_state(out.phi, out.tau).density() - out.sigma.density()).frobenius_norm();
  out.pushforward_residual = (dual_state(out.E, out.sigma).density() - out.tau.density()).frobenius_norm();
  return out;
}

CpuMap i_rs_embedding(int n, int r, int s) {
  if (n < 3) throw InvalidInput("i_rs needs n >= 3");
  if (r == s || r < 0 || s < 0 || r >= n || s >= n) throw InvalidInput("bad indices for i_rs");
  AlgebraShape src({2, 1}), tgt({n});
  return CpuMap::from_function(src, tgt, [=](const AlgebraElement& x) {
    Matrix a = Matrix::Zero(n, n);
    const Matrix& m = x.block(0);
    a(r, r) = m(0, 0);
    a(r, s) = m(0, 1);
    a(s, r) = m(1, 0);
    a(s, s) = m(1, 1);
    for (int k = 0; k < n; ++k)
      if (k != r && k != s) a(k, k) = x.block(1)(0, 0);
    return AlgebraElement(tgt, {a});
  });
}

CpuMap i_rs_expectation(const State& rho, int r, int s) {
  const auto& shape = rho.shape();
  if (shape.num_blocks() != 1 || shape.total_dim() < 3) throw InvalidInput("i_rs needs a single block of size >= 3");
  int n = shape.total_dim();
  if (r == s || r < 0 || s < 0 || r >= n || s >= n) throw InvalidInput("bad indices for i_rs");
  AlgebraElement p = AlgebraElement::identity(shape) - AlgebraElement::unit(shape, 0, r, r) -
                     AlgebraElement::unit(shape, 0, s, s);
  double rp = rho(p).real();
  if (!(rp > 0)) throw DomainError("rho vanishes on the complement of {r, s}");
  AlgebraShape tgt({2, 1});
  return CpuMap::from_function(shape, tgt, [=](const AlgebraElement& a) {
    const Matrix& x = a.block(0);
    Matrix m(2, 2);
    m << x(r, r), x(r, s), x(s, r), x(s, s);
    Matrix c(1, 1);
    c(0, 0) = rho(mul(mul(p, a), p)) / rp;
    return AlgebraElement(tgt, {m, c});
  });
}

nlohmann::json to_json(const CpuMap& phi) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < phi.superop().rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < phi.superop().cols(); ++j) row.push_back(complex_to_json(phi.superop()(i, j)));
    rows.push_back(row);
  }
  return {{"source_shape", shape_to_json(phi.source())},
          {"target_shape", shape_to_json(phi.target())},
          {"superop", rows}};
}

CpuMap cpu_map_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("source_shape") || !j.contains("target_shape") || !j.contains("superop"))
    throw InvalidInput("map needs 'source_shape', 'target_shape' and 'superop'");
  AlgebraShape src = shape_from_json(j.at("source_shape"));
  AlgebraShape tgt = shape_from_json(j.at("target_shape"));
  const auto& rows = j.at("superop");
  Eigen::Index nr = static_cast<Eigen::Index>(tgt.total_dim()) * tgt.total_dim();
  Eigen::Index nc = static_cast<Eigen::Index>(src.total_dim()) * src.total_dim();
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != nr)
    throw InvalidInput("superop must have K_target^2 rows");
  Matrix s(nr, nc);
  for (Eigen::Index i = 0; i < nr; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != nc)
      throw InvalidInput("superop rows must have K_source^2 entries");
    for (Eigen::Index k = 0; k < nc; ++k) s(i, k) = complex_from_json(row[k]);
  }
  // Entries outside the block structure of the source are masked out.
  std::vector<int> keep = compact_to_embedded_index(src);
  Matrix masked = Matrix::Zero(nr, nc);
  for (int c : keep) masked.col(c) = s.col(c);
  return {src, tgt, masked};
}

nlohmann::json to_json(const CertificationReport& r) {
  return {{"unital", r.unital},
          {"unital_residual", r.unital_residual},
          {"self_adjoint", r.self_adjoint},
          {"self_adjoint_residual", r.self_adjoint_residual},
          {"completely_positive", r.completely_positive},
          {"choi_min_eigenvalue", r.choi_min_eigenvalue},
          {"choi_min_eigenvalue_normalized", r.choi_min_normalized},
          {"kadison", r.kadison},
          {"kadison_min_eigenvalue", r.kadison_min_eigenvalue},
          {"pass", r.pass()}};
}

}  // namespace covfield
