#include "covfield/monotone.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "covfield/errors.hpp"
#include "covfield/expression.hpp"
#include "covfield/modular.hpp"

namespace covfield {

namespace {

double kubo_mori(double t) {
  double u = t - 1.0;
  if (std::fabs(u) < 1e-6) {
    // log(1+u)/u = 1 − u/2 + u²/3 − u³/4 + u⁴/5 − u⁵/6 + …
    double s = 1.0 - u / 2 + u * u / 3 - u * u * u / 4 + u * u * u * u / 5 - u * u * u * u * u / 6;
    return 1.0 / s;
  }
  return u / std::log(t);
}

std::vector<MonotoneFunction> build_catalog() {
  return {
      {"bures", [](double t) { return (1.0 + t) / 2.0; }, 0.5, 1.0, true},
      {"harmonic", [](double t) { return 2.0 * t / (1.0 + t); }, 0.0, 1.0, true},
      {"geometric", [](double t) { return std::sqrt(t); }, 0.0, 1.0, true},
      {"kubo-mori", kubo_mori, 0.0, 1.0, true},
      {"wigner-yanase",
       [](double t) {
         double h = (1.0 + std::sqrt(t)) / 2.0;
         return h * h;
       },
       0.25, 1.0, true},
  };
}

}  // namespace

const std::vector<MonotoneFunction>& function_catalog() {
  static const std::vector<MonotoneFunction> catalog = build_catalog();
  return catalog;
}

const MonotoneFunction& catalog_function(const std::string& name) {
  std::string key = name;
  std::replace(key.begin(), key.end(), '_', '-');
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
  for (const auto& f : function_catalog())
    if (f.name == key) return f;
  throw InvalidInput("unknown monotone function '" + name + "'");
}

MonotoneFunction function_from_expression(const std::string& name, const std::string& expr) {
  MonotoneFunction f;
  f.name = name;
  f.rule = compile_expression(expr);
  double z = f.rule(0.0);
  f.f0 = std::isfinite(z) ? z : f.rule(1e-14);
  double one = f.rule(1.0);
  f.f1 = std::isfinite(one) ? one : 0.5 * (f.rule(1.0 + 1e-7) + f.rule(1.0 - 1e-7));
  f.petz_symmetric = petz_symmetry_test(f, log_grid(1e-3, 1e3, 25));
  return f;
}

double eval_scalar(const MonotoneFunction& f, double t) {
  if (!(t >= 0)) throw DomainError("monotone functions are defined on [0, inf)");
  if (t == 0.0) return f.f0;
  return f.rule(t);
}

Matrix eval_hermitian(const MonotoneFunction& f, const Matrix& h) {
  if (h.size() == 0) return h;
  Eigen::SelfAdjointEigenSolver<Matrix> es((h + h.adjoint()) * 0.5);
  const Eigen::VectorXd& lam = es.eigenvalues();
  double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
  Vector d(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) < -1e-10 * scale) throw DomainError("spectrum below zero in functional calculus");
    d(i) = eval_scalar(f, lam(i) > 1e-13 * scale ? lam(i) : 0.0);
  }
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

GnsOperator eval_hermitian(const MonotoneFunction& f, const GnsOperator& h) {
  return {h.space, eval_hermitian(f, h.m)};
}

LoewnerResult loewner_test(const std::function<double(double)>& f, const std::vector<double>& points) {
  if (points.size() < 2) throw InvalidInput("Loewner test needs at least two points");
  std::set<double> seen;
  for (double t : points) {
    if (!(t > 0)) throw InvalidInput("Loewner points must be positive");
    if (!seen.insert(t).second) throw InvalidInput("duplicate Loewner point");
  }
  Eigen::Index n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double ti = points[i];
    double h = 1e-3 * ti;
    m(i, i) = (8 * (f(ti + h) - f(ti - h)) - (f(ti + 2 * h) - f(ti - 2 * h))) / (12 * h);
    for (Eigen::Index j = 0; j < i; ++j) {
      double tj = points[j];
      m(i, j) = m(j, i) = (f(ti) - f(tj)) / (ti - tj);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  LoewnerResult r;
  r.min_eigenvalue = es.eigenvalues()(0);
  r.norm = es.eigenvalues().cwiseAbs().maxCoeff();
  r.psd = std::isfinite(r.min_eigenvalue) && r.min_eigenvalue >= -1e-8 * r.norm;
  return r;
}

LoewnerResult loewner_test(const MonotoneFunction& f, const std::vector<double>& points) {
  return loewner_test(f.rule, points);
}

bool petz_symmetry_test(const std::function<double(double)>& f, const std::vector<double>& grid) {
  for (double t : grid) {
    double a = f(t), b = t * f(1.0 / t);
    if (!(std::fabs(a - b) < 1e-12 * std::max(1.0, std::fabs(a)))) return false;
  }
  return true;
}

bool petz_symmetry_test(const MonotoneFunction& f, const std::vector<double>& grid) {
  return petz_symmetry_test(f.rule, grid);
}

std::vector<double> random_log_grid(Rng& rng, int size, double lo, double hi) {
  std::set<double> pts;
  while (static_cast<int>(pts.size()) < size) pts.insert(std::exp(uniform(rng, std::log(lo), std::log(hi))));
  return {pts.begin(), pts.end()};
}

std::vector<double> log_grid(double lo, double hi, int size) {
  std::vector<double> g;
  for (int i = 0; i < size; ++i)
    g.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / std::max(1, size - 1)));
  return g;
}

bool certify_monotone(const MonotoneFunction& f) {
  for (int k = 0; k < 8; ++k) {
    Rng rng(derive_seed(0x5eed, "certify:" + f.name, k));
    if (!loewner_test(f, random_log_grid(rng, 12, 1e-3, 1e3)).psd) return false;
  }
  return true;
}

std::vector<double> f0_limit_gaps(const MonotoneFunction& f) {
  std::vector<double> g;
  for (int e = 6; e <= 12; ++e) g.push_back(std::fabs(f.rule(std::pow(10.0, -e)) - f.f0));
  return g;
}

}  // namespace covfield
