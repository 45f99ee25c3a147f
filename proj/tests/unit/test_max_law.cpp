#include <cmath>
#include <vector>

#include "doctest.h"
#include "htlab/errors.hpp"
#include "htlab/max_law.hpp"
#include "htlab/model_sim.hpp"

using namespace htlab;
using namespace htlab::maxlaw;

TEST_CASE("doob_tail closed form and MC cross-check") {
  CHECK(doob_tail(1.0, 0.5) == 1.0);
  CHECK(doob_tail(1.0, 2.0) == 0.5);
  CHECK(doob_tail(2.0, 8.0) == 0.25);
  CHECK_THROWS_AS(doob_tail(0.0, 1.0), std::domain_error);

  sim::GbmSummaryRequest req;
  req.dt = 0.02;
  auto res = sim::simulate_gbm_summaries(sim::GbmModel{0.2}, req, 2000, 314);
  int above = 0;
  for (const auto& s : res) above += s.sigma_end > 2.0;
  CHECK(std::abs(above / 2000.0 - 0.5) < 0.045);  // 4 se
}

TEST_CASE("conditional law of the maximum: values and route agreement") {
  auto c = constant_payoff(3.25);
  CHECK(conditional_max_expectation(c, 0.7, 1.4) == doctest::Approx(3.25));

  auto ind = indicator_payoff(2.0);
  CHECK(conditional_max_expectation(ind, 1.0, 1.0) ==
        doctest::Approx(0.5).epsilon(1e-14));  // reduces to doob_tail(1,2)

  auto put = put_payoff(2.5);
  CHECK(conditional_max_expectation(put, 1.0, 1.0) ==
        doctest::Approx(0.58370926812584493).epsilon(1e-13));

  // the two algebraic routes agree to ~1e-12 across payoffs and states
  const std::vector<MaxPayoffSpec> specs = {
      put_payoff(2.5), indicator_payoff(1.7), log_payoff(), power_payoff(0.5),
      constant_payoff(1.0)};
  for (const auto& spec : specs) {
    for (double sigma : {1.0, 1.3, 2.1, 3.0}) {
      for (double ratio : {0.2, 0.6, 1.0}) {
        const double n = ratio * sigma;
        const double a = conditional_max_expectation(spec, n, sigma);
        const double b = conditional_max_expectation_uform(spec, n, sigma);
        CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
      }
    }
  }
  CHECK_THROWS_AS(conditional_max_expectation(put, 2.0, 1.0),
                  std::domain_error);
}

TEST_CASE("tower property at t = 0 against hand-computed expectations") {
  // Sigma_inf = x / U with U uniform: closed-form expectations by hand.
  CHECK(conditional_max_expectation(put_payoff(2.5), 1.0, 1.0) ==
        doctest::Approx(1.5 - std::log(2.5)).epsilon(1e-14));
  CHECK(conditional_max_expectation(put_payoff(2.5), 2.0, 2.0) ==
        doctest::Approx(0.5 - 2.0 * std::log(1.25)).epsilon(1e-13));
  CHECK(conditional_max_expectation(indicator_payoff(2.0), 1.0, 1.0) ==
        doctest::Approx(0.5));
  CHECK(conditional_max_expectation(log_payoff(), 1.0, 1.0) ==
        doctest::Approx(1.0).epsilon(1e-14));  // E[-ln U] = 1
  CHECK(conditional_max_expectation(power_payoff(0.5), 1.0, 1.0) ==
        doctest::Approx(2.0).epsilon(1e-14));  // E[U^{-1/2}] = 2
  CHECK(conditional_max_expectation(constant_payoff(0.3), 1.0, 1.0) ==
        doctest::Approx(0.3));
}

TEST_CASE("monotone payoffs give monotone conditional expectations") {
  for (const auto& spec :
       {indicator_payoff(1.5), log_payoff(), power_payoff(0.5)}) {
    double prev = -1e300;
    for (double n = 0.2; n <= 1.0; n += 0.1) {
      const double v = conditional_max_expectation(spec, n, 1.0);
      CHECK(v >= prev - 1e-14);
      prev = v;
    }
    prev = -1e300;
    for (double sigma = 1.0; sigma <= 3.0; sigma += 0.25) {
      const double v = conditional_max_expectation(spec, 0.5, sigma);
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("call-type payoffs are flagged as infinite expectation") {
  CHECK_THROWS_AS(
      generic_payoff([](double y) { return std::max(y - 2.0, 0.0); }, "call"),
      InfiniteExpectationError);
  CHECK_THROWS_AS(power_payoff(1.0), std::domain_error);
}

TEST_CASE("generic quadrature payoff matches registered closed forms") {
  auto closed = put_payoff(2.5);
  auto generic = generic_payoff(
      [](double y) { return std::max(2.5 - y, 0.0); }, "put-generic");
  for (double z : {0.5, 1.0, 1.9, 2.4, 3.0}) {
    CHECK(generic.tail_integral(z) ==
          doctest::Approx(closed.tail_integral(z)).epsilon(1e-9));
    CHECK(representation_integrand(generic, z) ==
          doctest::Approx(representation_integrand(closed, z))
              .epsilon(1e-8));
  }
}

TEST_CASE("azema-yor value") {
  // f == 1 recovers N itself
  auto one = constant_payoff(1.0);
  CHECK(azema_yor_value(one, 0.8, 1.9) == doctest::Approx(0.8).epsilon(1e-15));
  // classical f(y) = 2y: X = 2 Sigma N - Sigma^2
  MaxPayoffSpec lin;
  lin.label = "2y";
  lin.f = [](double y) { return 2.0 * y; };
  lin.primitive = [](double z) { return z * z; };
  CHECK(azema_yor_value(lin, 1.5, 2.0) == doctest::Approx(2.0));
  // at a maximum: F(Sigma)
  CHECK(azema_yor_value(lin, 2.0, 2.0) == doctest::Approx(4.0));
}

TEST_CASE("azema-yor replay: telescoping, constants and convergence rate") {
  auto one = constant_payoff(1.0);
  std::vector<double> n = {1.0, 1.4, 0.9, 2.0, 1.7};
  std::vector<double> sigma, imin;
  paths::running_extrema(n, &sigma, &imin);
  auto replay = ay_integral_replay(one, n, sigma);
  for (std::size_t i = 0; i < n.size(); ++i)
    CHECK(replay[i] == doctest::Approx(azema_yor_value(one, n[i], sigma[i]))
                           .epsilon(1e-14));

  std::vector<double> flat = {1.2, 1.2, 1.2};
  std::vector<double> fs, fi;
  paths::running_extrema(flat, &fs, &fi);
  MaxPayoffSpec lin;
  lin.label = "2y";
  lin.f = [](double y) { return 2.0 * y; };
  lin.primitive = [](double z) { return z * z; };
  auto flat_replay = ay_integral_replay(lin, flat, fs);
  for (double v : flat_replay) CHECK(v == doctest::Approx(1.44));

  // sup-error halving under dt halving, same Brownian path
  const sim::GbmModel model{0.2};
  const double T = 3.0, dt_f = 1e-3;
  const auto fine = paths::TimeGrid::uniform(T, dt_f);
  const auto coarse = paths::TimeGrid::uniform(T, 2.0 * dt_f);
  double s_f = 0.0, s_c = 0.0;
  for (int p = 0; p < 160; ++p) {
    num::RngStream rng(808, p);
    std::vector<double> z(fine.size() - 1);
    for (auto& v : z) v = rng.gauss();
    auto pf = sim::simulate_gbm_path_from_normals(model, fine, z, 1.0);
    std::vector<double> zc(coarse.size() - 1);
    for (std::size_t i = 0; i < zc.size(); ++i)
      zc[i] = (z[2 * i] + z[2 * i + 1]) / std::sqrt(2.0);
    auto pc = sim::simulate_gbm_path_from_normals(model, coarse, zc, 1.0);
    auto sup_err = [&](const paths::BenchmarkedPath& path) {
      auto rep = ay_integral_replay(lin, path.n, path.sigma);
      double e = 0.0;
      for (std::size_t i = 0; i < rep.size(); ++i)
        e = std::max(e, std::abs(rep[i] -
                                 azema_yor_value(lin, path.n[i], path.sigma[i])));
      return e;
    };
    s_f += sup_err(pf) * sup_err(pf);
    s_c += sup_err(pc) * sup_err(pc);
  }
  const double ratio = std::sqrt(s_c / s_f);
  CHECK(ratio > std::sqrt(2.0) * 0.7);
  CHECK(ratio < std::sqrt(2.0) * 1.3);
}

TEST_CASE("representation integrand h") {
  CHECK(representation_integrand(constant_payoff(4.0), 1.3) == 0.0);
  auto put = put_payoff(2.5);
  CHECK(representation_integrand(put, 1.0) ==
        doctest::Approx(-0.91629073187415507).epsilon(1e-14));
  CHECK(representation_integrand(put, 2.5) == 0.0);
  CHECK(representation_integrand(put, 3.0) == 0.0);
}

TEST_CASE("representation replay tracks the conditional law") {
  auto c = constant_payoff(2.0);
  std::vector<double> n = {1.0, 1.2, 0.7};
  std::vector<double> sigma, imin;
  paths::running_extrema(n, &sigma, &imin);
  for (double v : representation_replay(c, n, sigma))
    CHECK(v == doctest::Approx(2.0));

  auto put = put_payoff(2.5);
  const sim::GbmModel model{0.2};
  const auto grid = paths::TimeGrid::uniform(2.0, 1e-3);
  double worst = 0.0;
  for (int p = 0; p < 50; ++p) {
    num::RngStream rng(909, p);
    auto path = sim::simulate_gbm_path(model, grid, rng, 1.0);
    auto rep = representation_replay(put, path.n, path.sigma);
    for (std::size_t i = 0; i < rep.size(); ++i)
      worst = std::max(
          worst, std::abs(rep[i] - conditional_max_expectation(
                                       put, path.n[i], path.sigma[i])));
  }
  CHECK(worst < 0.05);
}

TEST_CASE("E[ln max] = 1 for N0 = 1 by quadrature") {
  // u-integral route evaluates int_0^1 ln(1/u) du numerically
  CHECK(conditional_max_expectation_uform(log_payoff(), 1.0, 1.0) ==
        doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("terminal representation replay is centered at E f(max)") {
  // the replay is a discrete martingale transform, so its terminal mean
  // equals (K-1) - ln K regardless of the step size
  auto put = put_payoff(2.5);
  const sim::GbmModel model{0.2};
  const auto grid = paths::TimeGrid::uniform(5.0, 0.01);
  const int n = 2000;
  double sum = 0.0, sumsq = 0.0;
  for (int p = 0; p < n; ++p) {
    num::RngStream rng(1212, p);
    auto path = sim::simulate_gbm_path(model, grid, rng, 1.0);
    const double v = representation_replay(put, path.n, path.sigma).back();
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sumsq / n - mean * mean) / (n - 1.0));
  CHECK(std::abs(mean - 0.58370926812584493) <= 4.0 * se);
}

TEST_CASE("convergence-band negative control: a 4x step gap is rejected") {
  // the sqrt(2) +-30% band used by the replay checks must flag a pair of
  // resolutions that differ by 4x (expected error ratio 2)
  MaxPayoffSpec lin;
  lin.label = "2y";
  lin.f = [](double y) { return 2.0 * y; };
  lin.primitive = [](double z) { return z * z; };
  const sim::GbmModel model{0.2};
  const auto fine = paths::TimeGrid::uniform(3.0, 5e-4);
  const auto coarse = paths::TimeGrid::uniform(3.0, 2e-3);
  double s_f = 0.0, s_c = 0.0;
  for (int p = 0; p < 200; ++p) {
    num::RngStream rng(1313, p);
    std::vector<double> z(fine.size() - 1);
    for (auto& v : z) v = rng.gauss();
    auto pf = sim::simulate_gbm_path_from_normals(model, fine, z, 1.0);
    std::vector<double> zc(coarse.size() - 1);
    for (std::size_t i = 0; i < zc.size(); ++i)
      zc[i] = (z[4 * i] + z[4 * i + 1] + z[4 * i + 2] + z[4 * i + 3]) / 2.0;
    auto pc = sim::simulate_gbm_path_from_normals(model, coarse, zc, 1.0);
    auto sup_err = [&](const paths::BenchmarkedPath& path) {
      auto rep = ay_integral_replay(lin, path.n, path.sigma);
      double e = 0.0;
      for (std::size_t i = 0; i < rep.size(); ++i)
        e = std::max(e, std::abs(rep[i] - azema_yor_value(lin, path.n[i],
                                                          path.sigma[i])));
      return e;
    };
    s_f += sup_err(pf) * sup_err(pf);
    s_c += sup_err(pc) * sup_err(pc);
  }
  const double ratio = std::sqrt(s_c / s_f);
  const bool in_band = ratio > std::sqrt(2.0) * 0.7 && ratio < std::sqrt(2.0) * 1.3;
  CHECK_FALSE(in_band);
}
