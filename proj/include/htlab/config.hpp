#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace htlab::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelSpec {
  std::string type = "mmm";  // gbm | bessel | mmm | market | diffusion
  // gbm
  double sigma = 0.2;
  // bessel / diffusion (built-in squared-Bessel generator)
  double delta = 4.0;
  double x = 1.0;
  // mmm
  double alpha0 = 0.043;
  double eta = 0.052;
  // market with constant coefficients
  int m = 1;
  int d = 1;
  double r = 0.0;
  std::vector<double> a;
  std::vector<double> b;  // row-major d x d
  std::vector<double> h;
  std::vector<double> x0;
};

struct GridSpec {
  double horizon = 10.0;
  double dt = 0.01;
  double adaptive_epsilon = 0.01;
};

struct McSpec {
  std::size_t n_paths = 1000;
  std::uint64_t seed = 42;
};

struct PayoffSpec {
  bool present = false;
  std::string name = "put";
  double strike = 2.5;
};

struct LawSpec {
  std::string target = "laplace";  // laplace | cdf | density
  std::vector<double> points;
};

struct ExperimentConfig {
  std::string experiment;  // figures | maxlaw-check | hedge-backtest | law |
                           // invert | validate
  ModelSpec model;
  GridSpec grid;
  McSpec mc;
  PayoffSpec payoff;
  LawSpec law;
  std::string output_dir = "out";
};

// Flat typed key-value file with [sections]; unknown sections or keys are
// hard errors (silent typos corrupt Monte Carlo studies).
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

}  // namespace htlab::cli
