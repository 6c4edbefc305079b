// priorshift command-line front end: batch adaptation from files, the
// synthetic Gaussian demo, and the invariant validation suite.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "priorshift/bench.hpp"
#include "priorshift/core.hpp"
#include "priorshift/random_simplex.hpp"

namespace {

constexpr int kExitParse = 1;
constexpr int kExitDimension = 2;
constexpr int kExitSolver = 3;
constexpr int kExitValidate = 4;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string join17(const std::vector<double>& v, char sep = ',') {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += fmt17(v[i]);
  }
  return out;
}

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_double(const std::string& tok, const std::string& where) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError(where + ": not a number: '" + tok + "'");
  }
  while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos])))
    ++pos;
  if (pos != tok.size())
    throw ParseError(where + ": not a number: '" + tok + "'");
  return v;
}

std::vector<double> parse_number_list(const std::string& text,
                                      const std::string& where) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_double(tok, where));
  if (!text.empty() && text.back() == ',')
    throw ParseError(where + ": trailing comma");
  return out;
}

struct AdaptRequest {
  std::optional<std::vector<double>> old_priors;
  std::optional<std::vector<double>> new_priors;
  std::vector<std::vector<double>> rows;
};

AdaptRequest read_request_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open input file: " + path);

  AdaptRequest req;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line[0] == '#') {
      const std::size_t comma = line.find(',');
      const std::string key = line.substr(1, comma == std::string::npos
                                                 ? std::string::npos
                                                 : comma - 1);
      const std::string rest =
          comma == std::string::npos ? "" : line.substr(comma + 1);
      if (key == "old_priors")
        req.old_priors = parse_number_list(rest, where);
      else if (key == "new_priors")
        req.new_priors = parse_number_list(rest, where);
      else
        throw ParseError(where + ": unknown directive '#" + key + "'");
    } else {
      req.rows.push_back(parse_number_list(line, where));
    }
  }
  return req;
}

AdaptRequest read_request_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open input file: " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  AdaptRequest req;
  try {
    if (doc.contains("old_priors"))
      req.old_priors = doc.at("old_priors").get<std::vector<double>>();
    if (doc.contains("new_priors"))
      req.new_priors = doc.at("new_priors").get<std::vector<double>>();
    req.rows = doc.at("rows").get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return req;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct AdaptOptions {
  std::string input;
  std::string output;
  std::string method = "ratio";
  bool emit_likelihoods = false;
  double tol = 1e-13;
  std::size_t max_iter = 10000;
  std::string old_priors_flag, new_priors_flag;
  std::string old_counts_flag, new_counts_flag;
};

int run_adapt(const AdaptOptions& opt) {
  using priorshift::ProbabilityVector;

  AdaptRequest req = ends_with(opt.input, ".json")
                         ? read_request_json(opt.input)
                         : read_request_csv(opt.input);

  // Flags override the file header; counts are normalized internally.
  if (!opt.old_priors_flag.empty())
    req.old_priors = parse_number_list(opt.old_priors_flag, "--old-priors");
  if (!opt.new_priors_flag.empty())
    req.new_priors = parse_number_list(opt.new_priors_flag, "--new-priors");
  if (!opt.old_counts_flag.empty())
    req.old_priors = parse_number_list(opt.old_counts_flag, "--old-counts");
  if (!opt.new_counts_flag.empty())
    req.new_priors = parse_number_list(opt.new_counts_flag, "--new-counts");

  if (!req.old_priors)
    throw ParseError("old priors missing: supply a '#old_priors' header line "
                     "or --old-priors/--old-counts");
  if (!req.new_priors)
    throw ParseError("new priors missing: supply a '#new_priors' header line "
                     "or --new-priors/--new-counts");
  if (req.old_priors->size() != req.new_priors->size())
    throw DimensionError("old and new priors differ in length");

  const ProbabilityVector old_priors =
      ProbabilityVector::from_unnormalized(*req.old_priors);
  const ProbabilityVector new_priors =
      ProbabilityVector::from_unnormalized(*req.new_priors);

  const priorshift::SolveMethod method = opt.method == "eigen"
                                             ? priorshift::SolveMethod::kEigen
                                             : priorshift::SolveMethod::kRatio;
  const priorshift::SolverConfig cfg{opt.tol, opt.max_iter};

  std::ofstream out(opt.output);
  if (!out) throw ParseError("cannot open output file: " + opt.output);
  std::ofstream lik_out;
  if (opt.emit_likelihoods) {
    lik_out.open(opt.output + ".likelihoods");
    if (!lik_out)
      throw ParseError("cannot open output file: " + opt.output +
                       ".likelihoods");
  }

  for (std::size_t r = 0; r < req.rows.size(); ++r) {
    const std::string where = "row " + std::to_string(r + 1);
    if (req.rows[r].size() != old_priors.size())
      throw DimensionError(where + ": expected " +
                           std::to_string(old_priors.size()) +
                           " columns, got " +
                           std::to_string(req.rows[r].size()));
    ProbabilityVector posteriors = [&] {
      try {
        return ProbabilityVector(req.rows[r]);
      } catch (const std::invalid_argument& e) {
        throw ParseError(where + ": " + e.what());
      }
    }();

    const ProbabilityVector adapted =
        priorshift::adapt(posteriors, old_priors, new_priors, cfg, method);
    out << join17(adapted.values()) << '\n';

    if (opt.emit_likelihoods) {
      const priorshift::LikelihoodVector lik =
          method == priorshift::SolveMethod::kEigen
              ? priorshift::recover_likelihoods(posteriors, old_priors, cfg)
                    .likelihoods
              : priorshift::closed_form_likelihoods(posteriors, old_priors);
      lik_out << join17(lik.values()) << '\n';
    }
  }
  return 0;
}

struct DemoOptions {
  std::uint64_t seed = 12345;
  std::size_t n = 10000;
  std::string old_priors = "0.5,0.5";
  std::string new_priors = "0.8,0.2";
  std::string means = "-1,1";
  double variance = 1.0;
  std::string hist_out = "demo_histogram.tsv";
};

int run_demo_cmd(const DemoOptions& opt) {
  using priorshift::ProbabilityVector;

  const ProbabilityVector old_priors = ProbabilityVector::from_unnormalized(
      parse_number_list(opt.old_priors, "--old-priors"));
  const ProbabilityVector new_priors = ProbabilityVector::from_unnormalized(
      parse_number_list(opt.new_priors, "--new-priors"));
  const std::vector<double> means =
      parse_number_list(opt.means, "--means");
  if (means.size() != old_priors.size() ||
      old_priors.size() != new_priors.size())
    throw DimensionError("priors and means must have matching length");

  std::vector<priorshift::GaussianClassSpec> specs;
  specs.reserve(means.size());
  for (double m : means) specs.push_back({m, opt.variance});

  const priorshift::ExperimentReport report =
      priorshift::run_demo(opt.seed, opt.n, old_priors, new_priors, specs);

  const std::vector<priorshift::LabeledSample> samples =
      priorshift::sample_dataset(new_priors, specs, opt.n, opt.seed);
  priorshift::write_histogram(opt.hist_out, samples, specs.size());

  std::cout << "# priorshift demo (sampling: mt19937-64 + Box-Muller, "
               "sequential per seed)\n";
  std::cout << "seed\t" << opt.seed << "\n";
  std::cout << "n\t" << opt.n << "\n";
  std::cout << "old_priors\t" << join17(old_priors.values()) << "\n";
  std::cout << "new_priors\t" << join17(new_priors.values()) << "\n";
  std::cout << "boundary_old\t" << fmt17(report.boundary_old) << "\n";
  std::cout << "boundary_new\t" << fmt17(report.boundary_new) << "\n";
  for (std::size_t c = 0; c < report.class_counts.size(); ++c)
    std::cout << "class_" << c << "\tcount " << report.class_counts[c]
              << "\told_errors " << report.old_errors[c] << "\tadapted_errors "
              << report.adapted_errors[c] << "\n";
  std::cout << "old_error_rate\t" << fmt17(report.old_error_rate) << "\n";
  std::cout << "adapted_error_rate\t" << fmt17(report.adapted_error_rate)
            << "\n";
  std::cout << "boundary_mismatches\t" << report.boundary_mismatches << "\n";
  std::cout << "histogram\t" << opt.hist_out << "\n";
  return 0;
}

struct ValidateOptions {
  std::size_t instances = 1000;
  std::uint64_t seed = 42;
  double perturb_column_sums = 0.0;
};

struct PropertyCheck {
  std::string name;
  double measured = 0.0;
  double tol = 0.0;
  bool pass = false;
};

int run_validate(const ValidateOptions& opt) {
  using priorshift::ProbabilityVector;

  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<std::size_t> size_dist(2, 100);
  const priorshift::SolverConfig cfg;

  double max_col_sum_dev = 0.0;
  double max_oracle_dev = 0.0;
  double max_residual = 0.0;
  double min_likelihood = 1.0;
  double max_round_trip_dev = 0.0;
  double max_scale_dev = 0.0;
  std::size_t argmax_mismatches = 0;
  std::size_t unconverged = 0;

  for (std::size_t k = 0; k < opt.instances; ++k) {
    const std::size_t n = size_dist(rng);
    const ProbabilityVector posteriors(priorshift::random_simplex(rng, n));
    const ProbabilityVector priors(priorshift::random_floored_simplex(rng, n));

    const priorshift::AdaptationMatrix a =
        priorshift::build_a_matrix(posteriors, priors);
    for (std::size_t j = 0; j < n; ++j) {
      double col_sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) col_sum += a.entries()(i, j);
      if (j == 0) col_sum += opt.perturb_column_sums;  // fault injection
      max_col_sum_dev = std::max(max_col_sum_dev, std::fabs(col_sum - 1.0));
    }

    const priorshift::SolveReport report =
        priorshift::recover_likelihoods(posteriors, priors, cfg);
    const priorshift::LikelihoodVector oracle =
        priorshift::closed_form_likelihoods(posteriors, priors);
    if (!report.converged) {
      ++unconverged;
    } else {
      max_residual = std::max(max_residual, report.residual_inf);
    }
    for (std::size_t i = 0; i < n; ++i) {
      max_oracle_dev = std::max(
          max_oracle_dev, std::fabs(report.likelihoods[i] - oracle[i]));
      min_likelihood = std::min(min_likelihood, report.likelihoods[i]);
    }

    const ProbabilityVector round_trip =
        priorshift::adapt(posteriors, priors, priors);
    for (std::size_t i = 0; i < n; ++i)
      max_round_trip_dev =
          std::max(max_round_trip_dev, std::fabs(round_trip[i] - posteriors[i]));

    if (k < 50) {
      const ProbabilityVector new_priors(
          priorshift::random_floored_simplex(rng, n));
      const ProbabilityVector base =
          priorshift::update_posteriors(oracle, new_priors);
      for (double alpha : {1e-6, 1.0, 1e6}) {
        std::vector<double> scaled = oracle.values();
        for (double& v : scaled) v *= alpha;
        const ProbabilityVector again = priorshift::update_posteriors(
            priorshift::LikelihoodVector(scaled), new_priors);
        for (std::size_t i = 0; i < n; ++i)
          max_scale_dev =
              std::max(max_scale_dev, std::fabs(again[i] - base[i]));
      }

      const ProbabilityVector uniform_priors(
          std::vector<double>(n, 1.0 / static_cast<double>(n)));
      const ProbabilityVector adapted =
          priorshift::adapt(posteriors, priors, uniform_priors);
      const auto argmax = [](const std::vector<double>& v) {
        return static_cast<std::size_t>(
            std::max_element(v.begin(), v.end()) - v.begin());
      };
      if (argmax(adapted.values()) != argmax(oracle.values()))
        ++argmax_mismatches;
    }
  }

  // Gram cross-check over small instances.
  double max_gram_dev = 0.0;
  for (std::size_t k = 0; k < 100; ++k) {
    std::uniform_int_distribution<std::size_t> small(2, 8);
    const std::size_t n = small(rng);
    const ProbabilityVector posteriors(priorshift::random_simplex(rng, n));
    const ProbabilityVector priors(priorshift::random_floored_simplex(rng, n));
    const priorshift::DenseMatrix m =
        priorshift::build_m_matrix(posteriors, priors);
    const std::vector<double> gram_vec = priorshift::gram_smallest_eigvec(m);
    const priorshift::SolveReport report =
        priorshift::recover_likelihoods(posteriors, priors, cfg);
    for (std::size_t i = 0; i < n; ++i)
      max_gram_dev = std::max(max_gram_dev,
                              std::fabs(gram_vec[i] - report.likelihoods[i]));
  }

  std::vector<PropertyCheck> checks;
  checks.push_back({"column_sums", max_col_sum_dev, 1e-14,
                    max_col_sum_dev <= 1e-14});
  checks.push_back({"solver_convergence", static_cast<double>(unconverged), 0.0,
                    unconverged == 0});
  checks.push_back({"oracle_equivalence", max_oracle_dev, 1e-10,
                    max_oracle_dev <= 1e-10});
  checks.push_back({"null_residual", max_residual, priorshift::kResidualTol,
                    max_residual <= priorshift::kResidualTol});
  checks.push_back({"positivity", min_likelihood, 0.0, min_likelihood > 0.0});
  checks.push_back({"round_trip", max_round_trip_dev, 1e-12,
                    max_round_trip_dev <= 1e-12});
  checks.push_back({"scale_invariance", max_scale_dev, 1e-12,
                    max_scale_dev <= 1e-12});
  checks.push_back({"argmax_monotonicity", static_cast<double>(argmax_mismatches),
                    0.0, argmax_mismatches == 0});
  checks.push_back({"gram_cross_check", max_gram_dev, 1e-8,
                    max_gram_dev <= 1e-8});

  bool all_pass = true;
  for (const PropertyCheck& c : checks) {
    all_pass = all_pass && c.pass;
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name
              << ": measured=" << fmt17(c.measured) << " tol=" << fmt17(c.tol)
              << "\n";
  }
  std::cout << (all_pass ? "OK" : "FAILED") << " (" << opt.instances
            << " instances, seed " << opt.seed << ")\n";
  return all_pass ? 0 : kExitValidate;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prior-shift adaptation of classifier posteriors"};
  app.require_subcommand(1);

  AdaptOptions adapt_opt;
  CLI::App* adapt_cmd = app.add_subcommand(
      "adapt", "Adapt posterior rows from a file to new class priors");
  adapt_cmd->add_option("--input", adapt_opt.input, "Input file (.csv or .json)")
      ->required();
  adapt_cmd->add_option("--output", adapt_opt.output, "Output file")->required();
  adapt_cmd->add_option("--method", adapt_opt.method, "Solver path")
      ->check(CLI::IsMember({"eigen", "ratio"}))
      ->default_val("ratio");
  adapt_cmd->add_flag("--emit-likelihoods", adapt_opt.emit_likelihoods,
                      "Also write recovered likelihoods to OUTPUT.likelihoods");
  adapt_cmd->add_option("--tol", adapt_opt.tol, "Power-iteration step tolerance");
  adapt_cmd->add_option("--max-iter", adapt_opt.max_iter,
                        "Power-iteration cap");
  adapt_cmd->add_option("--old-priors", adapt_opt.old_priors_flag,
                        "Override old priors, e.g. 0.5,0.5");
  adapt_cmd->add_option("--new-priors", adapt_opt.new_priors_flag,
                        "Override new priors, e.g. 0.8,0.2");
  adapt_cmd->add_option("--old-counts", adapt_opt.old_counts_flag,
                        "Old priors as raw class counts, e.g. 5000,5000");
  adapt_cmd->add_option("--new-counts", adapt_opt.new_counts_flag,
                        "New priors as raw class counts, e.g. 8000,2000");

  DemoOptions demo_opt;
  CLI::App* demo_cmd = app.add_subcommand(
      "demo", "Two-Gaussian prior-shift experiment");
  demo_cmd->add_option("--seed", demo_opt.seed, "RNG seed");
  demo_cmd->add_option("--n", demo_opt.n, "Sample count");
  demo_cmd->add_option("--old-priors", demo_opt.old_priors, "Old priors");
  demo_cmd->add_option("--new-priors", demo_opt.new_priors, "New priors");
  demo_cmd->add_option("--means", demo_opt.means, "Class means");
  demo_cmd->add_option("--variance", demo_opt.variance, "Shared variance");
  demo_cmd->add_option("--hist-out", demo_opt.hist_out,
                       "Histogram plot-data output path");

  ValidateOptions validate_opt;
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Run the invariant property suite");
  validate_cmd->add_option("--instances", validate_opt.instances,
                           "Random instances to draw");
  validate_cmd->add_option("--seed", validate_opt.seed, "RNG seed");
  validate_cmd->add_option("--perturb-column-sums",
                           validate_opt.perturb_column_sums,
                           "Fault injection: offset added to one column sum");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*adapt_cmd) return run_adapt(adapt_opt);
    if (*demo_cmd) return run_demo_cmd(demo_opt);
    if (*validate_cmd) return run_validate(validate_opt);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const DimensionError& e) {
    std::cerr << "dimension mismatch: " << e.what() << "\n";
    return kExitDimension;
  } catch (const priorshift::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitDimension;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return 0;
}
