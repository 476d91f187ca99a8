// Acceptance criteria, one PASS/FAIL line each; exits non-zero if any fails.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "covfield/harness.hpp"

using namespace covfield;

namespace {

int failures = 0;

void report(int id, const char* what, bool pass, const std::string& detail) {
  std::printf("[%2d] %s %s (%s)\n", id, pass ? "PASS" : "FAIL", what, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double neg_part(double x) { return x < 0 ? -x : 0.0; }

int dilation_for(const AlgebraShape& src, const AlgebraShape& tgt) {
  int ka = tgt.total_dim(), kb = src.total_dim();
  return std::max((ka + kb - 1) / kb, (kb + ka - 1) / ka);
}

const std::vector<AlgebraShape>& shapes() {
  static const auto s = AlgebraShape::parse_list("2;3;1,2;2,2");
  return s;
}

void tracial_uniqueness() {
  double worst = 0;
  for (int t = 0; t < 20; ++t) {
    const auto& shape = shapes()[t % shapes().size()];
    State tr = random_tracial_state(shape, derive_seed(1, "tracial", t), t % 2 == 1);
    GnsSpace h = gns_space(tr);
    Matrix ref = covariance_operator(h, make_covariance_spec(function_catalog()[0], 1.7)).T.m;
    for (const auto& f : function_catalog())
      worst = std::max(worst, (covariance_operator(h, make_covariance_spec(f, 1.7)).T.m - ref).cwiseAbs().maxCoeff());
  }
  report(1, "tracial uniqueness", worst < 1e-12, fmt("worst %.3g", worst));
}

void qubit_spectrum() {
  Eigen::VectorXd s = modular_operator(diagonal_state(AlgebraShape({2}), {0.75, 0.25})).spectrum;
  std::vector<double> ref = {1.0 / 3.0, 1.0, 1.0, 3.0};
  double worst = s.size() == 4 ? 0.0 : 1.0;
  for (int i = 0; i < std::min<int>(4, static_cast<int>(s.size())); ++i) worst = std::max(worst, std::abs(s(i) - ref[i]));
  report(2, "qubit modular spectrum", worst < 1e-12, fmt("worst %.3g", worst));
}

void modular_monotonicity() {
  double worst = 0;
  int count = 0;
  for (const auto& src : shapes())
    for (const auto& tgt : shapes())
      for (int t = 0; t < 500; ++t) {
        std::uint64_t seed = derive_seed(3, src.to_string() + "->" + tgt.to_string(), t);
        auto phi = random_cpu(src, tgt, dilation_for(src, tgt), derive_seed(seed, "map", 0));
        State rho = (t % 2) ? random_degenerate_state(tgt, derive_seed(seed, "state", 0))
                            : random_faithful_state(tgt, derive_seed(seed, "state", 0));
        worst = std::min(worst, modular_slack(induced_contraction(phi, rho)));
        ++count;
      }
  report(3, "modular monotonicity", worst >= -1e-9, fmt("min eigenvalue %.3g", worst) + " over " + std::to_string(count));
}

void covariance_monotonicity() {
  double worst = 0;
  const auto& fs = function_catalog();
  for (int t = 0; t < 500; ++t) {
    const auto& src = shapes()[t % 4];
    const auto& tgt = shapes()[(t / 4) % 4];
    std::uint64_t seed = derive_seed(4, "trial", t);
    const auto& f = fs[t % fs.size()];
    auto phi = random_cpu(src, tgt, dilation_for(src, tgt), derive_seed(seed, "map", 0));
    State rho = random_faithful_state(tgt, derive_seed(seed, "state", 0));
    auto c = induced_contraction(phi, rho);
    worst = std::min(worst, covariance_slack(c, make_covariance_spec(f)));
  }
  report(4, "covariance monotonicity", worst >= -1e-8, fmt("min eigenvalue %.3g", worst));
}

void split_mono_invariance() {
  double worst = 0;
  auto run = [&](const std::vector<Rational>& w, const AlgebraShape& shape) {
    auto sm = rational_trace_split_mono(w, shape);
    auto ic = induced_contraction(sm.phi, sm.tau);
    for (const auto& f : function_catalog())
      worst = std::max(worst, covariance_invariance_defect(ic, make_covariance_spec(f)));
  };
  run({{1, 3}, {2, 3}}, AlgebraShape({1, 1}));
  run({{1, 2}, {1, 4}, {1, 4}}, AlgebraShape({1, 1, 1}));
  run({{1, 3}, {2, 3}}, AlgebraShape({2, 1}));
  run({{1, 2}, {1, 4}, {1, 4}}, AlgebraShape({1, 2, 1}));
  report(5, "split-mono invariance", worst < 1e-9, fmt("worst %.3g", worst));
}

void kadison() {
  std::vector<CpuMap> maps;
  for (const auto& s : shapes()) {
    maps.push_back(identity_map(s));
    maps.push_back(centralizer_expectation(random_faithful_state(s, 6)));
    maps.push_back(centralizer_expectation(tracial_state(s)));
    for (const auto& t : shapes()) maps.push_back(random_cpu(s, t, dilation_for(s, t), derive_seed(6, s.to_string(), t.total_dim())));
  }
  auto sm = rational_trace_split_mono({{1, 3}, {2, 3}}, AlgebraShape({1, 1}));
  maps.push_back(sm.phi);
  maps.push_back(sm.E);
  maps.push_back(i_rs_embedding(3, 0, 2));
  double worst = 0;
  int certified = 0;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (!verify_cpu(maps[i]).pass()) continue;
    ++certified;
    worst = std::min(worst, kadison_slack(maps[i], derive_seed(6, "kadison", i), 500));
  }
  bool ok = worst >= -1e-9 && certified == static_cast<int>(maps.size());
  report(6, "Kadison inequality", ok, fmt("min eigenvalue %.3g", worst) + ", " + std::to_string(certified) + "/" +
                                          std::to_string(maps.size()) + " maps certified");
}

void loewner() {
  Rng rng(derive_seed(7, "grids", 0));
  double cat_min = 1e300, t2_max = -1e300;
  bool all = true;
  for (int g = 0; g < 50; ++g) {
    auto grid = random_log_grid(rng, 12, 1e-3, 1e3);
    for (const auto& f : function_catalog()) {
      auto r = loewner_test(f, grid);
      all = all && r.psd;
      cat_min = std::min(cat_min, r.min_eigenvalue);
    }
    t2_max = std::max(t2_max, loewner_test([](double t) { return t * t; }, grid).min_eigenvalue);
  }
  bool ok = all && t2_max < -1e-3;
  report(7, "Loewner certification", ok, fmt("catalog min %.3g", cat_min) + fmt(", t^2 worst min %.3g", t2_max));
}

void fisher_rao_reduction() {
  Rng rng(derive_seed(8, "fr", 0));
  double worst = 0;
  for (int t = 0; t < 200; ++t) {
    int k = 2 + t % 3;
    AlgebraShape s(std::vector<int>(k, 1));
    std::vector<double> p(k), z(k);
    double tot = 0, zs = 0;
    for (auto& x : p) tot += (x = uniform(rng, 0.05, 1.0));
    for (auto& x : p) x /= tot;
    for (auto& x : z) zs += (x = uniform(rng, -1.0, 1.0));
    for (auto& x : z) x -= zs / k;
    Matrix zeta = Matrix::Zero(k, k);
    for (int i = 0; i < k; ++i) zeta(i, i) = z[i];
    State rho = diagonal_state(s, p);
    auto tz = tangent_from_ordinary(s, zeta);
    double ref = fisher_rao(p, z);
    for (const auto& f : function_catalog())
      worst = std::max(worst, std::abs(metric_inner(rho, make_covariance_spec(f), tz, tz) - ref) / ref);
  }
  report(8, "Fisher-Rao reduction", worst < 1e-9, fmt("worst relative %.3g", worst));
}

void mcp_reduction() {
  Rng rng(derive_seed(9, "mcp", 0));
  double worst = 0;
  for (int t = 0; t < 200; ++t) {
    int n = 2 + t % 2;
    AlgebraShape s({n});
    State rho = random_faithful_state(s, derive_seed(9, "state", t));
    Matrix h = random_hermitian(rng, n);
    h -= (h.trace() / static_cast<double>(n)) * Matrix::Identity(n, n);
    auto tz = tangent_from_ordinary(s, h);
    for (const auto& f : function_catalog()) {
      double g = metric_inner(rho, make_covariance_spec(f), tz, tz);
      worst = std::max(worst, std::abs(g - metric_spectral_oracle(rho, f, tz)) / g);
    }
  }
  AlgebraShape q({2});
  Matrix off = Matrix::Zero(2, 2);
  off(0, 1) = off(1, 0) = 1;
  auto to = tangent_from_ordinary(q, off);
  double bures = metric_inner(diagonal_state(q, {0.75, 0.25}), make_covariance_spec(catalog_function("bures")), to, to);
  bool ok = worst < 1e-9 && std::abs(bures - 4.0) < 1e-9;
  report(9, "monotone metric reduction", ok, fmt("worst relative %.3g", worst) + fmt(", bures off-diagonal %.12f", bures));
}

void concavity() {
  Rng rng(derive_seed(10, "concavity", 0));
  double worst = 0;
  for (int t = 0; t < 300; ++t) {
    const auto& shape = shapes()[t % shapes().size()];
    State a = random_faithful_state(shape, derive_seed(10, "rho", t));
    State b = random_faithful_state(shape, derive_seed(10, "sigma", t));
    double l = uniform(rng, 0.0, 1.0);
    auto x = AlgebraElement::random(shape, rng);
    State m = mix(l, a, b);
    for (const auto& f : function_catalog()) {
      auto spec = make_covariance_spec(f);
      double gap = covariance_value(m, spec, x) - l * covariance_value(a, spec, x) - (1 - l) * covariance_value(b, spec, x);
      worst = std::max(worst, neg_part(gap));
    }
  }
  report(10, "covariance concavity", worst <= 1e-8, fmt("worst violation %.3g", worst));
}

void continuity() {
  ProbeTable tab = continuity_probe(pure_state(AlgebraShape({2}), 0), catalog_function("bures"), 40);
  double unproj = 0, wdev = 0;
  for (const auto& r : tab.rows) {
    unproj = std::max(unproj, std::abs(r.unprojected - 0.5));
    wdev = std::max(wdev, std::abs(r.w_norm - r.n) / r.n);
  }
  const auto& last = tab.rows.back();
  bool ok = last.n == 1000000 && std::abs(last.projected) < 1e-6 && unproj <= 1e-9 && wdev <= 1e-6 &&
            last.restricted_delta < 1e-6;
  report(11, "pure-qubit continuity probe", ok,
         fmt("projected %.3g", last.projected) + fmt(", unprojected dev %.3g", unproj) +
             fmt(", W rel dev %.3g", wdev) + fmt(", restricted %.3g", last.restricted_delta));
}

void direct_sum_law() {
  Rng rng(derive_seed(12, "lambda", 0));
  double worst = 0;
  for (int t = 0; t < 50; ++t) {
    const auto& sr = shapes()[t % shapes().size()];
    State rho = (t % 2) ? random_degenerate_state(sr, derive_seed(12, "rho", t)) : random_faithful_state(sr, derive_seed(12, "rho", t));
    State sigma = random_faithful_state(sr, derive_seed(12, "sigma", t));
    State omega = direct_sum_state(uniform(rng, 0.05, 0.95), rho, sigma);
    Matrix dr = modular_operator(rho).delta.m, ds = modular_operator(sigma).delta.m;
    Matrix dw = modular_operator(omega).delta.m;
    if (dw.rows() != dr.rows() + ds.rows()) {
      worst = 1.0;
      continue;
    }
    Matrix block = Matrix::Zero(dw.rows(), dw.cols());
    block.topLeftCorner(dr.rows(), dr.cols()) = dr;
    block.bottomRightCorner(ds.rows(), ds.cols()) = ds;
    worst = std::max(worst, op_norm(dw - block));
  }
  report(12, "direct-sum modular law", worst < 1e-10, fmt("worst %.3g", worst));
}

void determinism() {
  SuiteConfig c = default_suite_config();
  c.seed = 42;
  c.timestamps = false;
  PropertyReport a = run_suite(c);
  PropertyReport b = run_suite(c);
  bool same = a.dump() == b.dump();
  report(13, "deterministic suite report", same,
         std::string(same ? "identical" : "differs") + ", suite verdict " + (a.verdict ? "PASS" : "FAIL"));
}

}  // namespace

int main() {
  std::vector<std::function<void()>> criteria = {
      tracial_uniqueness, qubit_spectrum, modular_monotonicity, covariance_monotonicity, split_mono_invariance,
      kadison,           loewner,        fisher_rao_reduction, mcp_reduction,           concavity,
      continuity,        direct_sum_law, determinism};
  int id = 1;
  for (auto& c : criteria) {
    try {
      c();
    } catch (const std::exception& e) {
      report(id, "criterion raised", false, e.what());
    }
    ++id;
  }
  std::printf("%d/%zu criteria pass\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
