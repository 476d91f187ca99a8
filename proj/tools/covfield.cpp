// covfield: command-line front end for the covariance-field toolkit.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "covfield/errors.hpp"
#include "covfield/harness.hpp"

using namespace covfield;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInvalid = 2;

std::optional<AlgebraShape> optional_shape(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return AlgebraShape::parse(text);
}

std::pair<int, int> parse_pair(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos) throw InvalidInput("expected 'r,s', got '" + text + "'");
  try {
    return {std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw InvalidInput("expected 'r,s', got '" + text + "'");
  }
}

/// |r⟩⟨s| from 1-based embedding indices.
AlgebraElement unit_from_pair(const AlgebraShape& shape, const std::string& text) {
  auto [r, s] = parse_pair(text);
  int K = shape.total_dim();
  if (r < 1 || s < 1 || r > K || s > K) throw InvalidInput("unit indices out of range: " + text);
  if (shape.block_of(r - 1) != shape.block_of(s - 1)) throw InvalidInput("unit " + text + " crosses blocks");
  return AlgebraElement::embedded_unit(shape, r - 1, s - 1);
}

std::vector<MonotoneFunction> functions_from_list(const std::string& text) {
  std::vector<MonotoneFunction> fs;
  if (text.empty() || text == "all") return function_catalog();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) fs.push_back(catalog_function(item));
  if (fs.empty()) throw InvalidInput("no functions selected");
  return fs;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monotone covariance fields on finite-dimensional C*-algebras"};
  app.require_subcommand(1);

  // run-suite
  auto* suite = app.add_subcommand("run-suite", "Run the seeded property suite");
  std::string config_path, suite_shapes, suite_out, suite_catalog;
  std::optional<std::uint64_t> suite_seed;
  std::optional<int> suite_trials;
  bool no_timestamp = false, inject_transpose = false;
  suite->add_option("--config", config_path, "JSON config file");
  suite->add_option("--seed", suite_seed, "Master seed");
  suite->add_option("--shapes", suite_shapes, "Shapes, e.g. '2;1,2;3'");
  suite->add_option("--trials", suite_trials, "Trials per property");
  suite->add_option("--catalog", suite_catalog, "Comma-separated catalog subset");
  suite->add_option("--out", suite_out, "Report path (stdout if omitted)");
  suite->add_flag("--no-timestamp", no_timestamp, "Omit runtime and timestamp from the report");
  suite->add_flag("--inject-transpose", inject_transpose, "Add the transpose map to the CP-certified set");

  // continuity-probe
  auto* probe = app.add_subcommand("continuity-probe", "Covariance values along a commuting sequence");
  std::string probe_state, probe_shape, probe_f = "bures", probe_a;
  int probe_steps = 40;
  long probe_max_n = 1000000;
  bool probe_json = false;
  probe->add_option("--state", probe_state, "tracial | random:SEED | pure:INDEX | file.json")->required();
  probe->add_option("--shape", probe_shape, "Shape for literal states");
  probe->add_option("--F", probe_f, "Catalog function");
  probe->add_option("--steps", probe_steps, "Number of log-spaced steps");
  probe->add_option("--max-n", probe_max_n, "Largest n in the schedule eps_n = 1/n");
  probe->add_option("--a", probe_a, "Direction |r><s| as 'r,s' (1-based)");
  probe->add_flag("--json", probe_json, "Emit JSON instead of CSV");

  // metric-table
  auto* metric = app.add_subcommand("metric-table", "Monotone metric values on a grid of diagonal states");
  std::string metric_shape, metric_fs;
  int metric_grid_n = 5;
  metric->add_option("--shape", metric_shape, "Algebra shape")->required();
  metric->add_option("--F", metric_fs, "Comma-separated functions (default: catalog)");
  metric->add_option("--grid", metric_grid_n, "Grid points");

  // verify-cpu
  auto* verify = app.add_subcommand("verify-cpu", "Certify a map as completely positive and unital");
  std::string verify_path;
  std::uint64_t verify_seed = 0;
  verify->add_option("file", verify_path, "CpuMap JSON")->required();
  verify->add_option("--seed", verify_seed, "Seed for the Kadison trials");

  // check-monotone-fn
  auto* check = app.add_subcommand("check-monotone-fn", "Loewner and Petz checks for a function");
  std::string check_name, check_expr;
  auto* name_opt = check->add_option("--name", check_name, "Catalog name");
  auto* expr_opt = check->add_option("--expr", check_expr, "Expression in t, e.g. 'sqrt(t)'");
  name_opt->excludes(expr_opt);

  // gns-info
  auto* gns = app.add_subcommand("gns-info", "GNS dimension data");
  std::string gns_state, gns_shape;
  gns->add_option("--state", gns_state, "State")->required();
  gns->add_option("--shape", gns_shape, "Shape for literal states");

  // modular-spectrum
  auto* mod = app.add_subcommand("modular-spectrum", "Spectrum of the modular operator");
  std::string mod_state, mod_shape;
  mod->add_option("--state", mod_state, "State")->required();
  mod->add_option("--shape", mod_shape, "Shape for literal states");

  // covariance-eval
  auto* cov = app.add_subcommand("covariance-eval", "Evaluate c_rho(xi_a, xi_b)");
  std::string cov_state, cov_shape, cov_f = "bures", cov_a, cov_b;
  std::optional<double> cov_alpha;
  cov->add_option("--state", cov_state, "State")->required();
  cov->add_option("--shape", cov_shape, "Shape for literal states");
  cov->add_option("--F", cov_f, "Catalog function");
  cov->add_option("--alpha", cov_alpha, "Weight of the cyclic direction (default F(1))");
  cov->add_option("--a", cov_a, "Unit 'r,s' (1-based)")->required();
  cov->add_option("--b", cov_b, "Unit 'r,s' (defaults to a)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInvalid;
  }

  try {
    if (*suite) {
      SuiteConfig cfg = config_path.empty() ? default_suite_config() : suite_config_from_json(read_json_file(config_path));
      if (suite_seed) cfg.seed = *suite_seed;
      if (suite->count("--shapes")) cfg.shapes = AlgebraShape::parse_list(suite_shapes);
      if (suite_trials) cfg.trials = *suite_trials;
      if (!suite_catalog.empty()) {
        cfg.catalog_subset.clear();
        for (const auto& f : functions_from_list(suite_catalog)) cfg.catalog_subset.push_back(f.name);
      }
      if (!suite_out.empty()) cfg.output_path = suite_out;
      if (no_timestamp) cfg.timestamps = false;
      if (inject_transpose) cfg.inject_transpose = true;
      PropertyReport rep = run_suite(cfg);
      write_output(cfg.output_path, rep.dump());
      int failed = 0;
      for (const auto& p : rep.properties)
        if (!p.pass) ++failed;
      std::cerr << "suite " << (rep.verdict ? "PASS" : "FAIL") << ": " << rep.properties.size() - failed << "/"
                << rep.properties.size() << " properties pass\n";
      return rep.verdict ? kExitPass : kExitViolation;
    }

    if (*probe) {
      State rho = parse_state_spec(probe_state, optional_shape(probe_shape));
      std::optional<AlgebraElement> a;
      if (!probe_a.empty()) a = unit_from_pair(rho.shape(), probe_a);
      ProbeTable tab = continuity_probe(rho, catalog_function(probe_f), probe_steps, a, probe_max_n);
      if (probe_json) {
        std::cout << tab.to_json().dump(2) << "\n";
      } else {
        std::cout.precision(17);
        std::cout << "n,epsilon,projected,unprojected,w_norm,restricted_delta\n";
        for (const auto& r : tab.rows)
          std::cout << r.n << ',' << r.epsilon << ',' << r.projected << ',' << r.unprojected << ',' << r.w_norm
                    << ',' << r.restricted_delta << '\n';
      }
      return kExitPass;
    }

    if (*metric) {
      AlgebraShape shape = AlgebraShape::parse(metric_shape);
      auto fs = functions_from_list(metric_fs);
      auto rows = metric_table(shape, fs, metric_grid(shape, metric_grid_n));
      std::cout << metric_table_csv(fs, rows);
      return kExitPass;
    }

    if (*verify) {
      CpuMap phi = cpu_map_from_json(read_json_file(verify_path));
      CertificationReport r = verify_cpu(phi, verify_seed);
      std::cout << to_json(r).dump(2) << "\n";
      return r.pass() ? kExitPass : kExitViolation;
    }

    if (*check) {
      if (check_name.empty() == check_expr.empty()) throw InvalidInput("give exactly one of --name or --expr");
      MonotoneFunction f = check_name.empty() ? function_from_expression(check_expr, check_expr)
                                              : catalog_function(check_name);
      auto grid = log_grid(1e-3, 1e3, 12);
      LoewnerResult lr = loewner_test(f, grid);
      bool certified = certify_monotone(f);
      json j;
      j["name"] = f.name;
      j["loewner"] = certified;
      j["loewner_min_eigenvalue"] = lr.min_eigenvalue;
      j["petz"] = petz_symmetry_test(f, grid);
      j["F0"] = f.f0;
      j["F1"] = f.f1;
      j["radial_degenerate"] = f.radial_degenerate();
      std::cout << j.dump(2) << "\n";
      return certified ? kExitPass : kExitViolation;
    }

    if (*gns) {
      State rho = parse_state_spec(gns_state, optional_shape(gns_shape));
      GnsSpace h = gns_space(rho);
      json j;
      j["shape"] = rho.shape().to_string();
      j["rank"] = rho.rank();
      j["faithful"] = rho.faithful();
      j["d_rho"] = h.dim();
      j["ideal_dim"] = gelfand_ideal_basis(rho).size();
      j["algebra_dim"] = rho.shape().vec_dim();
      j["gram_error"] = h.gram_error();
      std::cout << j.dump(2) << "\n";
      return kExitPass;
    }

    if (*mod) {
      State rho = parse_state_spec(mod_state, optional_shape(mod_shape));
      Eigen::VectorXd s = modular_operator(rho).spectrum;
      std::cout << json(std::vector<double>(s.data(), s.data() + s.size())).dump() << "\n";
      return kExitPass;
    }

    if (*cov) {
      State rho = parse_state_spec(cov_state, optional_shape(cov_shape));
      CovarianceSpec spec = make_covariance_spec(catalog_function(cov_f), cov_alpha);
      AlgebraElement a = unit_from_pair(rho.shape(), cov_a);
      AlgebraElement b = cov_b.empty() ? a : unit_from_pair(rho.shape(), cov_b);
      CovarianceOperator op = covariance_operator(rho, spec);
      Complex v = covariance_form(op, gns_vector(op.space(), a), gns_vector(op.space(), b));
      json j;
      j["F"] = spec.F.name;
      j["alpha"] = spec.alpha;
      j["beta"] = spec.beta;
      j["value"] = complex_to_json(v);
      std::cout << j.dump(2) << "\n";
      return kExitPass;
    }
  } catch (const InternalConsistency& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitViolation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
