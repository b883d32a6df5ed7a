#include <cmath>
#include <limits>
#include <vector>

#include <doctest.h>

#include "febb/identification.hpp"
#include "synthetic.hpp"

using namespace febb;
using doctest::Approx;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const double kW = micrometres(82.0);
const double kT = micrometres(8.4);

}  // namespace

TEST_CASE("closed-form modulus") {
  const std::vector<double> ones = {1.0, 1.0};
  const std::vector<double> y = {2.0, 4.0};
  CHECK(optimal_modulus(ones, y) == Approx(3.0));
  const std::vector<double> r = {1.0, 2.0};
  CHECK(optimal_modulus(r, r) == Approx(1.0));
  const std::vector<double> empty;
  CHECK_THROWS_AS(optimal_modulus(empty, empty), InvalidInput);
  CHECK_THROWS_AS(optimal_modulus(ones, std::vector<double>{1.0}), InvalidInput);
  CHECK_THROWS_AS(optimal_modulus(std::vector<double>{0.0, 1.0}, y), InvalidInput);
}

TEST_CASE("closed-form modulus minimizes the squared error") {
  const std::vector<double> r = {0.91, 0.95, 0.97, 0.99};
  const std::vector<double> y = {6.1, 6.6, 6.7, 6.9};
  auto sse = [&](double e) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += (e * r[i] - y[i]) * (e * r[i] - y[i]);
    return s;
  };
  const double best = optimal_modulus(r, y);
  for (int k = -1000; k <= 1000; ++k) CHECK(sse(best) <= sse(best + 1e-3 * k) + 1e-15);
}

TEST_CASE("admissible half-width") {
  // 600 um with ell = 60 um: every m works, the smallest allowed is taken.
  CHECK(admissible_half_width(micrometres(600), micrometres(60)) == 10);
  // 1000 * m / 60 is an integer for m a multiple of 3.
  CHECK(admissible_half_width(micrometres(1000), micrometres(60)) == 12);
  // N = 5m/3 < 2m + 2 for every m.
  CHECK_FALSE(admissible_half_width(micrometres(100), micrometres(60)).has_value());
  AdmissibilityRule narrow{10, 11};
  CHECK_FALSE(admissible_half_width(micrometres(1000), micrometres(60), narrow).has_value());
  CHECK_THROWS_AS(admissible_params(micrometres(100), 0.5, micrometres(60)), InvalidInput);
  const auto p = admissible_params(micrometres(1000), 0.5, micrometres(60));
  CHECK(p.m() == 12);
  CHECK(build_grid(micrometres(1000), p).intervals == 200);
}

TEST_CASE("predicted modulus in the classical limit") {
  for (double t_um : {8.4, 14.4}) {
    for (double l_um : synthetic::kLengthsUm) {
      for (double ell_um : {20.0, 60.0, 150.0}) {
        const double e = predict_enl(micrometres(l_um), micrometres(10 * t_um), micrometres(t_um),
                                     1.0, micrometres(ell_um), gigapascals(6.9));
        CHECK(rel(e, gigapascals(6.9)) <= 0.005);
      }
    }
  }
}

TEST_CASE("predicted modulus scales with E and ignores the probe load") {
  const double l = micrometres(700), ell = micrometres(60);
  const double base = predict_enl(l, kW, kT, 0.6, ell, gigapascals(5.0));
  CHECK(rel(predict_enl(l, kW, kT, 0.6, ell, gigapascals(10.0)), 2.0 * base) <= 1e-12);
  PredictionOptions heavy;
  heavy.probe_load = 3.7;
  CHECK(rel(predict_enl(l, kW, kT, 0.6, ell, gigapascals(5.0), heavy), base) <= 1e-12);
  heavy.probe_load = 0.0;
  CHECK_THROWS_AS(predict_enl(l, kW, kT, 0.6, ell, gigapascals(5.0), heavy), InvalidInput);
  CHECK_THROWS_AS(predict_enl(l, kW, kT, 0.6, ell, -1.0), InvalidInput);
}

TEST_CASE("predicted modulus against the normalized tip") {
  // E_NL = E / normalized_tip, up to the alpha = 1 discretization error of the
  // same grid, which this identity carries explicitly.
  for (double alpha : {0.3, 0.8}) {
    for (double l_um : {450.0, 800.0}) {
      const double l = micrometres(l_um), ell = micrometres(60), e = gigapascals(6.9);
      const auto params = admissible_params(l, alpha, ell);
      const BeamSpec spec{l, kW, kT, e, 1.0};
      const double nt = normalized_tip(spec, params);
      const double w1 = tip_deflection(solve_beam(spec, params.with_alpha(1.0)));
      const double w_analytic = -4.0 * l * l * l / (e * kW * kT * kT * kT);
      const double expected = e / nt * (w_analytic / w1);
      CHECK(rel(predict_enl(l, kW, kT, alpha, ell, e), expected) <= 1e-10);
      CHECK(rel(predict_enl(l, kW, kT, alpha, ell, e), e / nt) <= 0.005);
    }
  }
}

TEST_CASE("predicted modulus approaches E for long beams") {
  const double e = gigapascals(6.9);
  for (double ell_um : {20.0, 60.0}) {
    double prev = std::numeric_limits<double>::infinity();
    for (double l_um : synthetic::kLengthsUm) {
      const double enl = predict_enl(micrometres(l_um), kW, kT, 0.8, micrometres(ell_um), e);
      if (l_um >= 10.0 * ell_um) CHECK(rel(enl, e) <= 0.05);
      // Softer than the local beam, approaching E from below.
      CHECK(enl < e);
      CHECK(std::abs(enl - e) <= prev);
      prev = std::abs(enl - e);
    }
  }
}

TEST_CASE("objective") {
  const synthetic::Truth truth;
  const auto data = synthetic::make_dataset(truth);
  const std::vector<double> exact = {truth.alpha_thin, truth.alpha_thick};
  CHECK(objective(data, exact, truth.ell, truth.modulus) == 0.0);
  const std::vector<double> off = {0.7, 0.4};
  const double o1 = objective(data, off, truth.ell, truth.modulus);
  CHECK(o1 > 0.0);
  CHECK(objective(data, exact, truth.ell, 1.01 * truth.modulus) > 0.0);
  CHECK_THROWS_AS(objective(data, std::vector<double>{0.5}, truth.ell, truth.modulus),
                  InvalidInput);
}

TEST_CASE("grid fit recovers the generating parameters") {
  const synthetic::Truth truth;
  const auto data = synthetic::make_dataset(truth);
  std::vector<double> alphas;
  for (int k = 3; k <= 10; ++k) alphas.push_back(k / 10.0);
  std::vector<double> ells;
  for (double um : {40.0, 50.0, 60.0, 70.0, 80.0}) ells.push_back(micrometres(um));
  const FitResult r = fit(data, alphas, ells);
  REQUIRE(r.alpha_per_group.size() == 2);
  CHECK(r.alpha_per_group[0] == Approx(0.8));
  CHECK(r.alpha_per_group[1] == Approx(0.4));
  CHECK(r.ell == Approx(truth.ell));
  CHECK(rel(r.modulus, truth.modulus) <= 1e-9);
  CHECK(r.objective <= 1e-12 * truth.modulus * truth.modulus);
  REQUIRE(r.predicted.size() == 2);
  CHECK(r.predicted[1].size() == synthetic::kLengthsUm.size());
  CHECK(rel(r.predicted[0][0], data[0].records[0].enl) <= 1e-9);

  const FitResult again = fit(data, alphas, ells);
  CHECK(again.alpha_per_group == r.alpha_per_group);
  CHECK(again.ell == r.ell);
  CHECK(again.modulus == r.modulus);
  CHECK(again.objective == r.objective);
}

TEST_CASE("fit restricted to alpha = 1 returns the classical modulus") {
  const synthetic::Truth truth;
  auto data = synthetic::make_dataset(truth);
  data.resize(1);
  const std::vector<double> classical = {1.0};
  std::vector<double> ells;
  for (double um : {40.0, 60.0, 80.0}) ells.push_back(micrometres(um));
  const FitResult r = fit(data, classical, ells);
  CHECK(r.alpha_per_group == std::vector<double>{1.0});
  std::vector<double> ones(data[0].records.size(), 1.0), y;
  for (const auto& rec : data[0].records) y.push_back(rec.enl);
  CHECK(rel(r.modulus, optimal_modulus(ones, y)) <= 0.005);
}

TEST_CASE("fit argument checks") {
  const auto data = synthetic::make_dataset();
  const std::vector<double> a = {0.5};
  const std::vector<double> l = {micrometres(60)};
  const std::vector<double> none;
  CHECK_THROWS_AS(fit(std::vector<SeriesGroup>{}, a, l), InvalidInput);
  CHECK_THROWS_AS(fit(data, none, l), InvalidInput);
  CHECK_THROWS_AS(fit(data, a, none), InvalidInput);
  CHECK_THROWS_AS(fit(data, std::vector<double>{1.5}, l), InvalidInput);
  // No ell is admissible for 450 um beams at 400 um.
  CHECK_THROWS_AS(fit(data, a, std::vector<double>{micrometres(400)}), InvalidInput);
  std::vector<double> big(200);
  for (int k = 0; k < 200; ++k) big[k] = (k + 1) / 200.0;
  const std::vector<SeriesGroup> three = {data[0], data[1], data[0]};
  CHECK_THROWS_AS(fit(three, big, l), InvalidInput);
  SeriesGroup lonely = data[0];
  lonely.records.resize(1);
  CHECK_THROWS_AS(fit(std::vector<SeriesGroup>{lonely}, a, l), InvalidInput);
  SeriesGroup mixed = data[0];
  mixed.records[1].thickness *= 1.5;
  CHECK_THROWS_AS(mixed.validate(), InvalidInput);
}

TEST_CASE("default grids") {
  const auto a = default_alpha_grid();
  REQUIRE(a.size() == 20);
  CHECK(a.front() == Approx(0.05));
  CHECK(a.back() == 1.0);
  const auto l = default_ell_grid();
  REQUIRE(l.size() == 20);
  CHECK(l.front() == Approx(1e-5));
  CHECK(l.back() == Approx(2e-4));
}
