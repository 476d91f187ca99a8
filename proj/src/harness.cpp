#include "covfield/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "covfield/errors.hpp"

namespace covfield {

namespace {

using nlohmann::json;

double neg_part(double x) { return x < 0 ? -x : 0.0; }

/// Haar eigenvectors, support eigenvalues in [0.5, 1.5] before normalization.
State conditioned_state(const AlgebraShape& shape, std::uint64_t seed, bool degenerate) {
  Rng rng(seed);
  int N = shape.num_blocks();
  std::vector<int> ranks(shape.block_dims());
  if (degenerate && shape.total_dim() > 1) {
    std::vector<int> mixed;
    for (int j = 0; j < N; ++j)
      if (shape.block_dim(j) >= 2) mixed.push_back(j);
    if (!mixed.empty()) {
      int j = mixed[std::uniform_int_distribution<int>(0, static_cast<int>(mixed.size()) - 1)(rng)];
      ranks[j] = std::uniform_int_distribution<int>(1, shape.block_dim(j) - 1)(rng);
    } else {
      ranks[std::uniform_int_distribution<int>(0, N - 1)(rng)] = 0;
    }
  }
  std::vector<Matrix> vecs;
  std::vector<Eigen::VectorXd> vals;
  double total = 0;
  for (int j = 0; j < N; ++j) {
    int n = shape.block_dim(j);
    vecs.push_back(haar_unitary(rng, n));
    Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < ranks[j]; ++i) q(i) = uniform(rng, 0.5, 1.5);
    total += q.sum();
    vals.push_back(q);
  }
  for (auto& q : vals) q *= shape.total_dim() / total;
  return state_from_spectrum(shape, vecs, vals);
}

/// Random positive definite n×n matrix with spectrum in [lo, hi].
Matrix random_positive(Rng& rng, int n, double lo, double hi) {
  Matrix u = haar_unitary(rng, n);
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d(i) = std::exp(uniform(rng, std::log(lo), std::log(hi)));
  return u * d.cast<Complex>().asDiagonal() * u.adjoint();
}

bool lipschitz_at_zero(const MonotoneFunction& f) {
  auto g = f0_limit_gaps(f);
  return g.back() <= 1e-4 * g.front() + 1e-15;
}

bool usable_at(const MonotoneFunction& f, const State& rho) {
  return !(f.radial_degenerate() && has_off_support_directions(rho));
}

std::vector<double> exponent_schedule(int from, int to) {
  std::vector<double> e;
  for (int k = from; k <= to; ++k) e.push_back(std::pow(10.0, -k));
  return e;
}

struct Ctx {
  const SuiteConfig& cfg;
  std::vector<MonotoneFunction> fs;

  const AlgebraShape& shape(int trial) const { return cfg.shapes[trial % cfg.shapes.size()]; }
  const AlgebraShape& next_shape(int trial) const {
    std::size_t s = cfg.shapes.size();
    return cfg.shapes[(trial + 1 + trial / s) % s];
  }
};

struct TrialOutcome {
  double value = 0;
  std::string note;
};

using TrialFn = std::function<TrialOutcome(const Ctx&, int trial, std::uint64_t seed)>;

struct PropertyDef {
  std::string name;
  std::string anchor;
  double tolerance;
  bool single_trial;
  TrialFn fn;
};

// ---- states ----

TrialOutcome states_reduction(const Ctx& c, int t, std::uint64_t seed) {
  State rho = random_degenerate_state(c.shape(t), seed);
  auto sp = support_projection(rho);
  Eigen::VectorXd red = reduced_spectrum(rho);
  double v = std::abs(rho(sp.q));
  if (red.size() != rho.rank() || red.size() == 0 || !(red.minCoeff() > rho.cutoff())) v += 1.0;
  return {v, {}};
}

TrialOutcome states_commuting(const Ctx& c, int t, std::uint64_t seed) {
  State rho = (t % 2) ? random_degenerate_state(c.shape(t), seed) : random_faithful_state(c.shape(t), seed);
  auto seq = commuting_sequence(rho, 12, 0.5);
  Matrix r = embed(rho.density());
  double scale = r.squaredNorm();
  double v = 0, prev = -1;
  for (const State& s : seq.terms) {
    if (!s.faithful()) v += 1.0;
    Matrix x = embed(s.density());
    v = std::max(v, (x * r - r * x).norm() / std::max(1.0, scale));
    double d = (x - r).norm();
    if (prev > 1e-300 && d > 1e-300) v = std::max(v, std::abs(d / prev - 0.5));
    prev = d;
  }
  return {v, {}};
}

TrialOutcome states_direct_sum(const Ctx& c, int t, std::uint64_t seed) {
  Rng rng(seed);
  const auto& shape = c.shape(t);
  State rho = (t % 2) ? random_degenerate_state(shape, seed ^ 1) : random_faithful_state(shape, seed ^ 1);
  State sigma = random_faithful_state(shape, seed ^ 2);
  double lambda = uniform(rng, 0.05, 0.95);
  State omega = direct_sum_state(lambda, rho, sigma);
  Matrix dr = modular_operator(rho).delta.m, ds = modular_operator(sigma).delta.m;
  Matrix dw = modular_operator(omega).delta.m;
  if (dw.rows() != dr.rows() + ds.rows()) return {1.0, "GNS dimensions do not add"};
  Matrix block = Matrix::Zero(dw.rows(), dw.cols());
  block.topLeftCorner(dr.rows(), dr.cols()) = dr;
  block.bottomRightCorner(ds.rows(), ds.cols()) = ds;
  return {op_norm(dw - block), {}};
}

// ---- gns ----

TrialOutcome gns_dimension(const Ctx& c, int t, std::uint64_t seed) {
  State rho = (t % 2) ? random_faithful_state(c.shape(t), seed) : random_degenerate_state(c.shape(t), seed);
  GnsSpace h = gns_space(rho);
  int ideal = static_cast<int>(gelfand_ideal_basis(rho).size());
  int expected = 0;
  for (int j = 0; j < rho.shape().num_blocks(); ++j) {
    int r = 0;
    const auto& q = rho.block_eigenvalues(j);
    for (Eigen::Index i = 0; i < q.size(); ++i)
      if (rho.in_support(q(i))) ++r;
    expected += r * rho.shape().block_dim(j);
  }
  double v = std::abs(h.dim() + ideal - rho.shape().vec_dim()) + std::abs(h.dim() - expected);
  return {v, {}};
}

TrialOutcome gns_tracial(const Ctx& c, int t, std::uint64_t seed) {
  Rng rng(seed);
  const auto& shape = c.shape(t);
  GnsSpace h = gns_space(tracial_state(shape));
  AlgebraElement a = AlgebraElement::random(shape, rng), b = AlgebraElement::random(shape, rng);
  Complex lhs = gns_inner(gns_vector(h, a), gns_vector(h, b));
  Complex hs = 0;
  for (int j = 0; j < shape.num_blocks(); ++j) hs += (a.block(j).adjoint() * b.block(j)).trace();
  hs /= static_cast<double>(shape.total_dim());
  return {std::abs(lhs - hs) / std::max(1.0, a.frobenius_norm() * b.frobenius_norm()), {}};
}

TrialOutcome gns_quotient(const Ctx& c, int t, std::uint64_t seed) {
  Rng rng(seed);
  const auto& shape = c.shape(t);
  State rho = random_degenerate_state(shape, seed);
  GnsSpace h = gns_space(rho);
  AlgebraElement a = AlgebraElement::random(shape, rng);
  AlgebraElement n = AlgebraElement::random(shape, rng) * support_projection(rho).q;
  double d = (h.coordinates(a + n) - h.coordinates(a)).norm();
  return {std::max(d, h.gram_error()), {}};
}

// ---- modular ----

TrialOutcome modular_restricted(const Ctx& c, int t, std::uint64_t seed) {
  const auto& shape = c.shape(t);
  State rho = conditioned_state(shape, seed, true);
  if (rho.faithful()) return {0.0, "shape " + shape.to_string() + " admits no non-faithful state"};
  GnsSpace ts = tracial_space(shape);
  AlgebraElement p = support_projection(rho).p;
  GnsOperator base = left_mult(rho, ts) * partial_inverse_W(rho, ts);
  auto seq = commuting_sequence(rho, exponent_schedule(1, 8));
  const State& last = seq.terms.back();
  GnsOperator w = partial_inverse_W(last, ts);
  double wn = op_norm(w.m);
  double diff = restricted_norm(left_mult(last, ts) * w - base, p);
  if (!(wn > 1e6)) return {std::numeric_limits<double>::infinity(), "W norm stayed below 1e6"};
  return {diff, {}};
}

TrialOutcome modular_positivity(const Ctx& c, int t, std::uint64_t seed) {
  State rho = (t % 2) ? random_degenerate_state(c.shape(t), seed) : random_faithful_state(c.shape(t), seed);
  ModularData md = modular_operator(rho);
  double lo = md.spectrum.size() ? md.spectrum(0) : 0.0;
  double v = neg_part(lo);
  if (rho.faithful() && !(lo > 0)) v += 1.0;
  return {v, {}};
}

TrialOutcome modular_faithful(const Ctx& c, int t, std::uint64_t seed) {
  State rho = random_faithful_state(c.shape(t), seed);
  ModularData md = modular_operator(rho);
  Matrix rinv = md.R.m.inverse();
  Matrix ref = md.L.m * rinv;
  return {op_norm(ref - md.delta_tilde.m) / std::max(1.0, op_norm(ref)), {}};
}

TrialOutcome modular_qubit(const Ctx&, int, std::uint64_t) {
  State rho = diagonal_state(AlgebraShape({2}), {0.75, 0.25});
  Eigen::VectorXd s = modular_operator(rho).spectrum;
  Eigen::VectorXd ref(4);
  ref << 1.0 / 3.0, 1.0, 1.0, 3.0;
  if (s.size() != 4) return {1.0, "wrong GNS dimension"};
  return {(s - ref).cwiseAbs().maxCoeff(), {}};
}

// ---- monotone ----

TrialOutcome monotone_matrix(const Ctx& c, int, std::uint64_t seed) {
  Rng rng(seed);
  double v = 0;
  for (int k = 0; k < 20; ++k) {
    int n = std::uniform_int_distribution<int>(2, 4)(rng);
    Matrix a = random_positive(rng, n, 1e-3, 5.0);
    Matrix g = ginibre(rng, n, n);
    Matrix p = g * g.adjoint();
    p *= uniform(rng, 0.0, 5.0) / op_norm(p);
    Matrix b = a + p;
    for (const auto& f : c.fs) {
      Matrix fb = eval_hermitian(f, b);
      v = std::max(v, neg_part(min_eigenvalue(fb - eval_hermitian(f, a))) / std::max(1.0, op_norm(fb)));
    }
  }
  return {v, {}};
}

TrialOutcome monotone_concavity(const Ctx& c, int, std::uint64_t seed) {
  Rng rng(seed);
  double v = 0;
  for (int k = 0; k < 20; ++k) {
    int n = std::uniform_int_distribution<int>(2, 4)(rng);
    Matrix a = random_positive(rng, n, 1e-3, 10.0), b = random_positive(rng, n, 1e-3, 10.0);
    double l = uniform(rng, 0.0, 1.0);
    for (const auto& f : c.fs) {
      Matrix lhs = eval_hermitian(f, l * a + (1 - l) * b);
      Matrix rhs = l * eval_hermitian(f, a) + (1 - l) * eval_hermitian(f, b);
      v = std::max(v, neg_part(min_eigenvalue(lhs - rhs)) / std::max(1.0, op_norm(lhs)));
    }
  }
  return {v, {}};
}

TrialOutcome monotone_f0(const Ctx& c, int, std::uint64_t) {
  double v = 0;
  std::string degenerate;
  for (const auto& f : c.fs) {
    if (f.f0 < 0) v += 1.0;
    if (f.radial_degenerate()) {
      degenerate += (degenerate.empty() ? "" : ",") + f.name;
    } else if (!(f.f0 > 0)) {
      v += 1.0;
    }
  }
  std::string note;
  if (!degenerate.empty()) note = "F(0) = 0 for " + degenerate + "; checked on the remaining entries";
  return {v, note};
}

TrialOutcome monotone_loewner(const Ctx& c, int, std::uint64_t seed) {
  Rng rng(seed);
  auto grid = random_log_grid(rng, 12, 1e-3, 1e3);
  double v = 0;
  for (const auto& f : c.fs) {
    auto r = loewner_test(f, grid);
    v = std::max(v, neg_part(r.min_eigenvalue) / std::max(1e-300, r.norm));
  }
  auto sq = loewner_test([](double x) { return x * x; }, grid);
  if (!(sq.min_eigenvalue < -1e-3)) v += 1.0;
  return {v, {}};
}

TrialOutcome monotone_petz(const Ctx& c, int, std::uint64_t seed) {
  Rng rng(seed);
  auto grid = random_log_grid(rng, 12, 1e-3, 1e3);
  double v = 0;
  for (const auto& f : c.fs) {
    if (!f.petz_symmetric) continue;
    for (double x : grid) {
      double a = eval_scalar(f, x), b = x * eval_scalar(f, 1.0 / x);
      v = std::max(v, std::abs(a - b) / std::max(1e-300, std::abs(a)));
    }
  }
  return {v, {}};
}

// ---- covariance ----

TrialOutcome covariance_tracial(const Ctx& c, int t, std::uint64_t seed) {
  Rng rng(seed);
  State rho = random_tracial_state(c.shape(t), seed, true);
  GnsSpace h = gns_space(rho);
  double alpha = uniform(rng, 0.5, 2.0);
  Vector psi = cyclic_vector(h).coords;
  Matrix ref = Matrix::Identity(h.dim(), h.dim()) + (alpha - 1.0) * psi * psi.adjoint();
  double v = 0;
  for (const auto& f : c.fs) {
    if (f.f1 != 1.0) continue;
    Matrix tm = covariance_operator(h, make_covariance_spec(f, alpha)).T.m;
    v = std::max(v, (tm - ref).cwiseAbs().maxCoeff());
  }
  return {v, {}};
}

TrialOutcome covariance_commutation(const Ctx& c, int t, std::uint64_t seed) {
  const auto& shape = c.shape(t);
  State rho = (t % 2) ? random_degenerate_state(shape, seed) : random_faithful_state(shape, seed);
  GnsSpace h = gns_space(rho);
  std::vector<GnsOperator> us;
  for (int k = 0; k < 20; ++k) {
    AlgebraElement u = random_state_preserving_unitary(rho, derive_seed(seed, "unitary", k));
    AlgebraElement ud = adjoint(u);
    us.push_back(induced_operator(h, [&](const AlgebraElement& b) { return u * b * ud; }));
  }
  double v = 0;
  for (const auto& f : c.fs) {
    if (!usable_at(f, rho)) continue;
    auto op = covariance_operator(h, make_covariance_spec(f));
    const Matrix& tm = op.T.m;
    double scale = std::max(1.0, op_norm(tm));
    v = std::max(v, op_norm(tm * op.delta.m - op.delta.m * tm) / (scale * std::max(1.0, op_norm(op.delta.m))));
    for (const auto& u : us) v = std::max(v, op_norm(tm * u.m - u.m * tm) / scale);
  }
  return {v, {}};
}

TrialOutcome covariance_concavity(const Ctx& c, int t, std::uint64_t seed) {
  Rng rng(seed);
  const auto& shape = c.shape(t);
  State rho = random_faithful_state(shape, derive_seed(seed, "rho", 0));
  State sigma = random_faithful_state(shape, derive_seed(seed, "sigma", 0));
  double l = uniform(rng, 0.01, 0.99);
  State m = mix(l, rho, sigma);
  AlgebraElement a = AlgebraElement::random(shape, rng);
  double v = 0;
  for (const auto& f : c.fs) {
    auto spec = make_covariance_spec(f);
    double cm = covariance_value(m, spec, a);
    double gap = cm - l * covariance_value(rho, spec, a) - (1 - l) * covariance_value(sigma, spec, a);
    v = std::max(v, neg_part(gap) / std::max(1.0, cm));
  }
  return {v, {}};
}

TrialOutcome covariance_continuity(const Ctx& c, int t, std::uint64_t seed) {
  Rng rng(seed);
  const auto& shape = c.shape(t);
  bool degenerate = t % 2 == 0;
  State rho = conditioned_state(shape, seed, degenerate);
  AlgebraElement a = AlgebraElement::random(shape, rng);
  AlgebraElement p = support_projection(rho).p;
  auto eps = exponent_schedule(1, 8);
  auto seq = commuting_sequence(rho, eps);
  std::vector<GnsSpace> spaces;
  for (const auto& s : seq.terms) spaces.push_back(gns_space(s));
  GnsSpace h = gns_space(rho);

  double v = 0;
  std::vector<std::string> loose;
  AlgebraElement e = default_probe_direction(rho);
  bool has_radial = !rho.faithful() && has_off_support_directions(rho);
  double p_s = 0;
  if (has_radial) {
    // e = |v_s⟩⟨v_N|, so e†e = |v_N⟩⟨v_N| and e e† = |v_s⟩⟨v_s|
    p_s = rho(e * adjoint(e)).real();
  }
  for (const auto& f : c.fs) {
    bool strict = rho.faithful() || lipschitz_at_zero(f);
    auto spec = make_covariance_spec(f);
    std::vector<double> gaps;
    if (usable_at(f, rho)) {
      auto op = covariance_operator(h, spec);
      GnsVector xi = gns_vector(h, a);
      double limit = covariance_form(op, xi, xi).real();
      for (std::size_t k = 0; k < seq.terms.size(); ++k) {
        auto opn = covariance_operator(spaces[k], spec);
        GnsVector xn = gns_vector(spaces[k], a * p);
        gaps.push_back(std::abs(covariance_form(opn, xn, xn).real() - limit) / std::max(1.0, std::abs(limit)));
      }
    }
    if (has_radial && f.petz_symmetric) {
      std::vector<double> radial;
      double limit = p_s * f.f0;
      for (std::size_t k = 0; k < seq.terms.size(); ++k) {
        auto opn = covariance_operator(spaces[k], spec);
        GnsVector xn = gns_vector(spaces[k], e);
        radial.push_back(std::abs(covariance_form(opn, xn, xn).real() - limit) / std::max(1.0, limit));
      }
      if (gaps.empty()) {
        gaps = radial;
      } else {
        for (std::size_t k = 0; k < gaps.size(); ++k) gaps[k] = std::max(gaps[k], radial[k]);
      }
    }
    if (gaps.empty()) continue;
    if (strict) {
      v = std::max(v, gaps.back());
    } else {
      loose.push_back(f.name);
      // slow approach to F(0): require monotone decay and a final gap below the first
      double m = gaps.back() < gaps.front() ? 0.0 : 1.0;
      for (std::size_t k = 1; k < gaps.size(); ++k) m = std::max(m, gaps[k] - gaps[k - 1] - 1e-12);
      v = std::max(v, m);
    }
  }
  std::string note;
  if (!loose.empty()) {
    std::set<std::string> uniq(loose.begin(), loose.end());
    note = "non-faithful limits checked for monotone decay only:";
    for (const auto& n : uniq) note += " " + n;
  }
  return {v, note};
}

TrialOutcome covariance_inverse(const Ctx& c, int t, std::uint64_t seed) {
  State rho = random_faithful_state(c.shape(t), seed);
  double v = 0;
  for (const auto& f : c.fs) {
    Matrix s = covariance_superoperator(rho, f);
    Matrix g = metric_superoperator(rho, f);
    v = std::max(v, op_norm(g * s - Matrix::Identity(s.rows(), s.cols())));
  }
  return {v, {}};
}

TrialOutcome covariance_fisher_rao(const Ctx& c, int t, std::uint64_t seed) {
  Rng rng(seed);
  const auto& shape = c.shape(t);
  int K = shape.total_dim();
  if (K < 2) return {0.0, {}};
  std::vector<double> p(K), z(K);
  for (int i = 0; i < K; ++i) p[i] = uniform(rng, 0.05, 1.0);
  double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= s;
  double zm = 0;
  for (int i = 0; i < K; ++i) zm += (z[i] = uniform(rng, -1.0, 1.0));
  for (double& x : z) x -= zm / K;
  State rho = diagonal_state(shape, p);
  Matrix zo = Matrix::Zero(K, K);
  for (int i = 0; i < K; ++i) zo(i, i) = z[i];
  TangentVector tz = tangent_from_ordinary(shape, zo);
  double fr = fisher_rao(p, z);
  double v = 0;
  for (const auto& f : c.fs) {
    if (f.f1 != 1.0) continue;
    auto spec = make_covariance_spec(f);
    v = std::max(v, std::abs(metric_inner(rho, spec, tz, tz) - fr) / fr);
    if (shape.num_blocks() == 1) {
      State r2 = random_faithful_state(shape, derive_seed(seed, "oracle", 0));
      Matrix h = random_hermitian(rng, K);
      h -= (h.trace() / static_cast<double>(K)) * Matrix::Identity(K, K);
      TangentVector th = tangent_from_ordinary(shape, h);
      double g = metric_inner(r2, spec, th, th);
      v = std::max(v, std::abs(g - metric_spectral_oracle(r2, f, th)) / std::abs(g));
    }
  }
  return {v, {}};
}

TrialOutcome covariance_pure_probe(const Ctx&, int, std::uint64_t) {
  AlgebraShape q({2});
  ProbeTable tab = continuity_probe(pure_state(q, 0), catalog_function("bures"), 25);
  double v = 0;
  for (const auto& r : tab.rows) {
    v = std::max(v, std::abs(r.unprojected - 0.5) / 1e-9);
    v = std::max(v, std::abs(r.w_norm - r.n) / (1e-6 * r.n));
  }
  const auto& last = tab.rows.back();
  v = std::max({v, std::abs(last.projected) / 1e-6, last.restricted_delta / 1e-6});
  return {v, "worst deviation in units of each column's bound"};
}

// ---- channels ----

struct ChannelTrial {
  CpuMap phi;
  State rho;
  InducedContraction c;
};

ChannelTrial channel_trial(const Ctx& c, int t, std::uint64_t seed) {
  const AlgebraShape& src = c.shape(t);
  const AlgebraShape& tgt = c.next_shape(t);
  int ka = tgt.total_dim(), kb = src.total_dim();
  int r = std::max((ka + kb - 1) / kb, (kb + ka - 1) / ka);
  ChannelTrial out;
  out.phi = random_cpu(src, tgt, r, derive_seed(seed, "map", 0));
  out.rho = random_faithful_state(tgt, derive_seed(seed, "state", 0));
  out.c = induced_contraction(out.phi, out.rho);
  return out;
}

TrialOutcome channels_functoriality(const Ctx& c, int t, std::uint64_t seed) {
  ChannelTrial ct = channel_trial(c, t, seed);
  double v = 0;
  for (const auto& f : c.fs) {
    if (!usable_at(f, ct.c.source.state())) continue;
    auto spec = make_covariance_spec(f);
    double scale = std::max(1.0, op_norm(covariance_operator(ct.c.source, spec).T.m));
    v = std::max(v, neg_part(covariance_slack(ct.c, spec)) / scale);
  }
  return {v, {}};
}

TrialOutcome channels_modular(const Ctx& c, int t, std::uint64_t seed) {
  ChannelTrial ct = channel_trial(c, t, seed);
  return {neg_part(modular_slack(ct.c)), {}};
}

std::vector<Rational> random_weights(const AlgebraShape& shape, Rng& rng) {
  long prod = 1;
  for (int n : shape.block_dims()) prod *= n;
  std::vector<long> l(shape.num_blocks());
  long m = 0;
  for (auto& x : l) m += (x = std::uniform_int_distribution<long>(1, 3)(rng));
  if (m * prod > 32) {
    std::fill(l.begin(), l.end(), 1);
    m = shape.num_blocks();
  }
  std::vector<Rational> w;
  for (long x : l) w.push_back({x, m});
  return w;
}

TrialOutcome channels_split_mono(const Ctx& c, int t, std::uint64_t seed) {
  Rng rng(seed);
  const auto& shape = c.shape(t);
  double v = 0;
  std::string note;
  auto w = random_weights(shape, rng);
  long prod = 1;
  for (int n : shape.block_dims()) prod *= n;
  if (shape.num_blocks() * prod <= 32) {
    auto sm = rational_trace_split_mono(w, shape);
    auto ic = induced_contraction(sm.phi, sm.tau);
    v = std::max({v, sm.left_inverse_residual, sm.pullback_residual, sm.pushforward_residual});
    for (const auto& f : c.fs) {
      if (!usable_at(f, sm.sigma)) continue;
      v = std::max(v, covariance_invariance_defect(ic, make_covariance_spec(f)));
    }
  } else {
    note = "rational construction skipped for shapes beyond 32 dimensions";
  }
  // i_rs on a state that is block diagonal for span{r,s} ⊕ complement
  int n = 3 + t % 2;
  int r = std::uniform_int_distribution<int>(0, n - 1)(rng);
  int s = (r + std::uniform_int_distribution<int>(1, n - 1)(rng)) % n;
  AlgebraShape big({n});
  State base = random_faithful_state(big, derive_seed(seed, "irs", 0));
  Matrix d = embed(base.density());
  Matrix pinched = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      bool ii = i == r || i == s, jj = j == r || j == s;
      if (ii == jj) pinched(i, j) = d(i, j);
    }
  State rho = state_from_density(big, AlgebraElement::from_embedded(big, pinched));
  CpuMap phi = i_rs_embedding(n, r, s);
  CpuMap e = i_rs_expectation(rho, r, s);
  auto ic = induced_contraction(phi, rho);
  State sigma = dual_state(phi, rho);
  v = std::max(v, (embed(dual_state(e, sigma).density()) - pinched).norm());
  for (const auto& f : c.fs) v = std::max(v, covariance_invariance_defect(ic, make_covariance_spec(f)));
  return {v, note};
}

TrialOutcome channels_jensen(const Ctx& c, int, std::uint64_t seed) {
  Rng rng(seed);
  double v = 0;
  for (int k = 0; k < 20; ++k) {
    int n = std::uniform_int_distribution<int>(2, 4)(rng);
    Matrix g = ginibre(rng, n, n);
    Matrix vv = g * (uniform(rng, 0.1, 1.0) / op_norm(g));
    Matrix h = random_positive(rng, n, 1e-3, 10.0);
    for (const auto& f : c.fs) {
      Matrix lhs = eval_hermitian(f, Matrix(vv.adjoint() * h * vv));
      Matrix rhs = vv.adjoint() * eval_hermitian(f, h) * vv;
      v = std::max(v, neg_part(min_eigenvalue(lhs - rhs)) / std::max(1.0, op_norm(lhs)));
    }
  }
  return {v, {}};
}

std::vector<std::pair<std::string, CpuMap>> certified_maps(const Ctx& c, int t, std::uint64_t seed) {
  const auto& shape = c.shape(t);
  std::vector<std::pair<std::string, CpuMap>> maps;
  maps.emplace_back("identity", identity_map(shape));
  State rho = random_faithful_state(shape, derive_seed(seed, "state", 0));
  maps.emplace_back("centralizer", centralizer_expectation(rho));
  maps.emplace_back("conjugation", unitary_conjugation(random_state_preserving_unitary(rho, seed)));
  const AlgebraShape& other = c.next_shape(t);
  int ka = other.total_dim(), kb = shape.total_dim();
  maps.emplace_back("random", random_cpu(shape, other, (ka + kb - 1) / kb + 1, derive_seed(seed, "map", 0)));
  int n = 3 + t % 2;
  maps.emplace_back("i_rs", i_rs_embedding(n, 0, n - 1));
  maps.emplace_back("i_rs_left_inverse", i_rs_expectation(random_faithful_state(AlgebraShape({n}), seed), 0, n - 1));
  return maps;
}

TrialOutcome channels_kadison(const Ctx& c, int t, std::uint64_t seed) {
  double v = 0;
  for (const auto& [name, phi] : certified_maps(c, t, seed))
    v = std::max(v, neg_part(kadison_slack(phi, derive_seed(seed, name, 0), 20)));
  return {v, {}};
}

TrialOutcome channels_certification(const Ctx& c, int t, std::uint64_t seed) {
  auto maps = certified_maps(c, t, seed);
  if (c.cfg.inject_transpose && t == 0) {
    AlgebraShape q({2});
    maps.emplace_back("transpose", transpose_map(q));
  }
  double v = 0;
  std::string failed;
  for (const auto& [name, phi] : maps) {
    auto rep = verify_cpu(phi, derive_seed(seed, name, 1), 10);
    if (!rep.pass()) {
      v += 1.0;
      failed += (failed.empty() ? "" : ",") + name;
    }
  }
  return {v, failed.empty() ? std::string() : "not CP-certified: " + failed};
}

const std::vector<PropertyDef>& property_defs() {
  static const std::vector<PropertyDef> defs = {
      {"states.reduced-state-faithful", "reduced state on pAp is faithful", 1e-12, false, states_reduction},
      {"states.commuting-sequence", "commuting sequence", 1e-9, false, states_commuting},
      {"states.direct-sum-modular", "modular operator of direct sum", 1e-10, false, states_direct_sum},
      {"gns.dimension-law", "Gelfand ideal and GNS quotient", 0.0, false, gns_dimension},
      {"gns.tracial-hilbert-schmidt", "GNS space of the trace endowed with the Hilbert product", 1e-12, false,
       gns_tracial},
      {"gns.quotient-well-defined", "GNS quotient by the Gelfand ideal", 1e-10, false, gns_quotient},
      {"modular.restricted-convergence", "convergence of modular operator", 1e-6, false, modular_restricted},
      {"modular.positivity", "modular operator is positive", 1e-12, false, modular_positivity},
      {"modular.faithful-consistency", "reduces to the familiar formula", 1e-10, false, modular_faithful},
      {"monotone.matrix-monotonicity", "operator monotone functions", 1e-8, false, monotone_matrix},
      {"monotone.operator-concavity", "operator concavity via Jensen", 1e-8, false, monotone_concavity},
      {"monotone.positive-f0", "gamma equals F(0)", 0.0, true, monotone_f0},
      {"covariance.tracial-collapse", "full classification on tracial states", 1e-12, false, covariance_tracial},
      {"covariance.commutation", "covariance operator commutes with symmetries", 1e-10, false,
       covariance_commutation},
      {"covariance.concavity", "concavity of covariance field on faithful states", 1e-8, false,
       covariance_concavity},
      {"covariance.continuity", "continuity for fields of covariances; continuity on reduced directions", 1e-6,
       false, covariance_continuity},
      {"covariance.inverse-relation", "contravariant and covariant duality of metric and covariance", 1e-9, false,
       covariance_inverse},
      {"channels.functoriality", "categorical monotonicity", 1e-8, false, channels_functoriality},
      {"channels.split-mono-invariance", "categorical invariance condition", 1e-9, false, channels_split_mono},
      {"channels.jensen", "Jensen's operator inequality", 1e-8, false, channels_jensen},
      {"modular.qubit-spectrum", "modular operator has eigenvalue p_j/p_k", 1e-12, true, modular_qubit},
      {"modular.contraction-monotonicity", "inequality involving the contraction", 1e-9, false, channels_modular},
      {"channels.kadison", "Kadison inequality for CPU maps", 1e-9, false, channels_kadison},
      {"channels.cp-certification", "completely positive unital maps", 0.0, false, channels_certification},
      {"monotone.loewner-certification", "Loewner characterization of operator monotonicity", 1e-8, false,
       monotone_loewner},
      {"monotone.petz-symmetry", "Petz symmetry condition", 1e-12, false, monotone_petz},
      {"covariance.metric-reductions", "coincides with the Fisher-Rao and quantum monotone metric tensors", 1e-9,
       false, covariance_fisher_rao},
      {"covariance.pure-qubit-probe", "continuity on reduced directions, pure qubit", 1.0, true,
       covariance_pure_probe},
  };
  return defs;
}

std::string iso_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

SuiteConfig default_suite_config() {
  SuiteConfig c;
  c.shapes = AlgebraShape::parse_list("2;3;1,2;2,2;1,1");
  return c;
}

std::vector<std::string> suite_property_names() {
  std::vector<std::string> out;
  for (const auto& d : property_defs()) out.push_back(d.name);
  return out;
}

void SuiteConfig::validate() const {
  if (shapes.empty()) throw InvalidInput("config needs at least one shape");
  for (const auto& s : shapes) {
    if (s.num_blocks() == 0) throw InvalidInput("empty shape in config");
    if (s.total_dim() > 8) throw InvalidInput("suite shapes are limited to K <= 8, got " + s.to_string());
  }
  if (trials < 1) throw InvalidInput("trials must be at least 1");
  auto names = suite_property_names();
  for (const auto& [name, tol] : tolerance_overrides) {
    if (std::find(names.begin(), names.end(), name) == names.end())
      throw InvalidInput("tolerance override for unknown property '" + name + "'");
    if (!(tol > 0) || !std::isfinite(tol)) throw InvalidInput("tolerance for '" + name + "' must be positive");
  }
  for (const auto& n : catalog_subset) catalog_function(n);
}

std::vector<MonotoneFunction> SuiteConfig::functions() const {
  if (catalog_subset.empty()) return function_catalog();
  std::vector<MonotoneFunction> out;
  for (const auto& n : catalog_subset) out.push_back(catalog_function(n));
  return out;
}

json SuiteConfig::to_json() const {
  json j;
  std::string s;
  for (std::size_t i = 0; i < shapes.size(); ++i) s += (i ? ";" : "") + shapes[i].to_string();
  j["shapes"] = s;
  j["trials"] = trials;
  j["seed"] = seed;
  j["tolerances"] = tolerance_overrides;
  j["catalog"] = catalog_subset;
  j["inject_transpose"] = inject_transpose;
  return j;
}

SuiteConfig suite_config_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  SuiteConfig c = default_suite_config();
  try {
    if (j.contains("shapes")) {
      const auto& s = j["shapes"];
      if (s.is_string()) {
        c.shapes = AlgebraShape::parse_list(s.get<std::string>());
      } else if (s.is_array()) {
        c.shapes.clear();
        for (const auto& x : s) c.shapes.push_back(shape_from_json(x));
      } else {
        throw InvalidInput("'shapes' must be a string or an array");
      }
    }
    if (j.contains("trials")) c.trials = j["trials"].get<int>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("tolerances")) c.tolerance_overrides = j["tolerances"].get<std::map<std::string, double>>();
    if (j.contains("catalog")) c.catalog_subset = j["catalog"].get<std::vector<std::string>>();
    if (j.contains("out")) c.output_path = j["out"].get<std::string>();
    if (j.contains("inject_transpose")) c.inject_transpose = j["inject_transpose"].get<bool>();
    if (j.contains("timestamps")) c.timestamps = j["timestamps"].get<bool>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("bad config: ") + e.what());
  }
  return c;
}

PropertyReport run_suite(const SuiteConfig& config) {
  config.validate();
  auto start = std::chrono::steady_clock::now();
  Ctx ctx{config, config.functions()};
  PropertyReport rep;
  rep.config = config;
  rep.verdict = true;
  for (const auto& d : property_defs()) {
    PropertyRecord rec;
    rec.name = d.name;
    rec.anchor = d.anchor;
    auto it = config.tolerance_overrides.find(d.name);
    rec.tolerance = it != config.tolerance_overrides.end() ? it->second : d.tolerance;
    int trials = d.single_trial ? 1 : config.trials;
    double worst = 0;
    std::set<std::string> notes;
    try {
      for (int t = 0; t < trials; ++t) {
        TrialOutcome o = d.fn(ctx, t, derive_seed(config.seed, d.name, static_cast<std::uint64_t>(t)));
        if (std::isnan(o.value) || o.value > worst) worst = std::isnan(worst) ? worst : o.value;
        if (!o.note.empty()) notes.insert(o.note);
        ++rec.trials;
      }
    } catch (const InvalidInput&) {
      throw;
    } catch (const Error& e) {
      rec.error = e.what();
    }
    rec.worst = worst;
    for (const auto& n : notes) rec.note += (rec.note.empty() ? "" : "; ") + n;
    rec.pass = rec.error.empty() && worst <= rec.tolerance;
    rep.verdict = rep.verdict && rec.pass;
    rep.properties.push_back(rec);
  }
  rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (config.timestamps) rep.timestamp = iso_timestamp();
  return rep;
}

json PropertyReport::to_json() const {
  json j;
  j["config"] = config.to_json();
  json props = json::array();
  for (const auto& r : properties) {
    json p;
    p["name"] = r.name;
    p["anchor"] = r.anchor;
    p["trials"] = r.trials;
    if (std::isfinite(r.worst)) {
      p["worst"] = r.worst;
    } else {
      p["worst"] = nullptr;
    }
    p["tolerance"] = r.tolerance;
    p["pass"] = r.pass;
    if (!r.note.empty()) p["note"] = r.note;
    if (!r.error.empty()) p["error"] = r.error;
    props.push_back(p);
  }
  j["properties"] = props;
  j["verdict"] = verdict ? "pass" : "fail";
  if (config.timestamps) {
    j["runtime_seconds"] = runtime_seconds;
    j["timestamp"] = timestamp;
  }
  return j;
}

std::string PropertyReport::dump() const { return to_json().dump(2) + "\n"; }

// ---- continuity probe ----

AlgebraElement default_probe_direction(const State& rho) {
  const auto& shape = rho.shape();
  for (int j = 0; j < shape.num_blocks(); ++j) {
    const auto& q = rho.block_eigenvalues(j);
    int s = -1, z = -1;
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      if (rho.in_support(q(i))) {
        if (s < 0 || q(i) > q(s)) s = static_cast<int>(i);
      } else if (z < 0) {
        z = static_cast<int>(i);
      }
    }
    if (s >= 0 && z >= 0) {
      const Matrix& v = rho.block_eigenvectors(j);
      AlgebraElement a = AlgebraElement::zero(shape);
      a.block(j) = v.col(s) * v.col(z).adjoint();
      return a;
    }
  }
  for (int j = 0; j < shape.num_blocks(); ++j)
    if (shape.block_dim(j) >= 2) return AlgebraElement::unit(shape, j, 0, shape.block_dim(j) - 1);
  return AlgebraElement::identity(shape);
}

ProbeTable continuity_probe(const State& rho, const MonotoneFunction& f, int steps,
                            std::optional<AlgebraElement> a, long max_n) {
  if (steps < 2) throw InvalidInput("continuity probe needs at least 2 steps");
  if (max_n < 2) throw InvalidInput("max n must be at least 2");
  const auto& shape = rho.shape();
  ProbeTable tab;
  tab.a = a ? *a : default_probe_direction(rho);
  if (tab.a.shape() != shape) throw InvalidInput("probe direction lives on a different shape");

  std::vector<long> ns;
  for (int k = 0; k < steps; ++k) {
    long n = std::lround(std::pow(static_cast<double>(max_n), static_cast<double>(k) / (steps - 1)));
    if (ns.empty() || n > ns.back()) ns.push_back(n);
  }
  std::vector<double> eps;
  for (long n : ns) eps.push_back(1.0 / static_cast<double>(n));
  auto seq = commuting_sequence(rho, eps);

  CovarianceSpec spec = make_covariance_spec(f);
  AlgebraElement p = support_projection(rho).p;
  AlgebraElement ap = tab.a * p;
  if (usable_at(f, rho)) tab.limit_value = covariance_value(rho, spec, tab.a);
  if (has_off_support_directions(rho)) {
    tab.radial_limit = rho(tab.a * adjoint(tab.a)).real() * f.f0;
  } else {
    tab.radial_limit = tab.limit_value.value_or(0.0);
  }

  GnsSpace ts = tracial_space(shape);
  GnsOperator base = left_mult(rho, ts) * partial_inverse_W(rho, ts);
  for (std::size_t k = 0; k < ns.size(); ++k) {
    const State& s = seq.terms[k];
    GnsSpace h = gns_space(s);
    auto op = covariance_operator(h, spec);
    GnsVector x1 = gns_vector(h, ap), x2 = gns_vector(h, tab.a);
    GnsOperator w = partial_inverse_W(s, ts);
    ProbeRow r;
    r.n = ns[k];
    r.epsilon = eps[k];
    r.projected = covariance_form(op, x1, x1).real();
    r.unprojected = covariance_form(op, x2, x2).real();
    r.w_norm = hermitian_eigenvalues(w.m).cwiseAbs().maxCoeff();
    r.restricted_delta = restricted_norm(left_mult(s, ts) * w - base, p);
    tab.rows.push_back(r);
  }
  return tab;
}

json ProbeTable::to_json() const {
  json j;
  j["a"] = covfield::to_json(a);
  if (limit_value) {
    j["limit"] = *limit_value;
  } else {
    j["limit"] = nullptr;
  }
  j["radial_limit"] = radial_limit;
  json rows_j = json::array();
  for (const auto& r : rows)
    rows_j.push_back({{"n", r.n},
                      {"epsilon", r.epsilon},
                      {"projected", r.projected},
                      {"unprojected", r.unprojected},
                      {"w_norm", r.w_norm},
                      {"restricted_delta", r.restricted_delta}});
  j["rows"] = rows_j;
  return j;
}

// ---- metric table ----

std::vector<std::vector<double>> metric_grid(const AlgebraShape& shape, int n) {
  if (n < 1) throw InvalidInput("grid size must be at least 1");
  int K = shape.total_dim();
  std::vector<std::vector<double>> out;
  for (int g = 1; g <= n; ++g) {
    std::vector<double> p(K);
    p[0] = K == 1 ? 1.0 : static_cast<double>(g) / (n + 1);
    double rest = 1.0 - p[0], norm = K * (K - 1) / 2.0;
    for (int i = 1; i < K; ++i) p[i] = rest * i / norm;
    out.push_back(p);
  }
  return out;
}

std::vector<MetricRow> metric_table(const AlgebraShape& shape, const std::vector<MonotoneFunction>& fs,
                                    const std::vector<std::vector<double>>& points) {
  int K = shape.total_dim();
  std::vector<CovarianceSpec> specs;
  for (const auto& f : fs) specs.push_back(make_covariance_spec(f));

  struct Dir {
    std::string name;
    Matrix z;
    bool diagonal;
  };
  std::vector<Dir> dirs;
  for (int i = 0; i < K; ++i)
    for (int j = i + 1; j < K; ++j) {
      Matrix z = Matrix::Zero(K, K);
      z(i, i) = 1;
      z(j, j) = -1;
      dirs.push_back({"d" + std::to_string(i + 1) + std::to_string(j + 1), z, true});
    }
  for (int i = 0; i < K; ++i)
    for (int j = i + 1; j < K; ++j) {
      if (shape.block_of(i) != shape.block_of(j)) continue;
      Matrix x = Matrix::Zero(K, K), y = Matrix::Zero(K, K);
      x(i, j) = x(j, i) = 1;
      y(i, j) = Complex(0, -1);
      y(j, i) = Complex(0, 1);
      dirs.push_back({"x" + std::to_string(i + 1) + std::to_string(j + 1), x, false});
      dirs.push_back({"y" + std::to_string(i + 1) + std::to_string(j + 1), y, false});
    }

  std::vector<MetricRow> rows;
  for (std::size_t s = 0; s < points.size(); ++s) {
    const auto& p = points[s];
    State rho = diagonal_state(shape, p);
    if (!rho.faithful()) throw DomainError("metric table needs faithful grid states");
    for (const auto& d : dirs) {
      MetricRow row;
      row.state_index = static_cast<int>(s);
      row.p = p;
      row.direction = d.name;
      TangentVector tz = tangent_from_ordinary(shape, d.z);
      if (d.diagonal) {
        std::vector<double> z(K);
        for (int i = 0; i < K; ++i) z[i] = d.z(i, i).real();
        row.fisher_rao = fisher_rao(p, z);
      }
      for (const auto& spec : specs) row.values.push_back(metric_inner(rho, spec, tz, tz));
      rows.push_back(row);
    }
  }
  return rows;
}

std::string metric_table_csv(const std::vector<MonotoneFunction>& fs, const std::vector<MetricRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "state,p,direction,fisher_rao";
  for (const auto& f : fs) out << ',' << f.name;
  out << '\n';
  for (const auto& r : rows) {
    out << r.state_index << ',';
    for (std::size_t i = 0; i < r.p.size(); ++i) out << (i ? ";" : "") << r.p[i];
    out << ',' << r.direction << ',';
    if (r.fisher_rao) out << *r.fisher_rao;
    for (double v : r.values) out << ',' << v;
    out << '\n';
  }
  return out.str();
}

}  // namespace covfield
