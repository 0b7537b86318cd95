#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "orbitlab/salas.hpp"
#include "orbitlab/weight_families.hpp"
#include "oracles.hpp"

using namespace orbitlab;

namespace {

// direct-product oracle for the four statistics
double hyper_oracle(const WeightSequence& w, i64 k, i64 n) {
  double mb = -1e300, mf = 1e300;
  for (i64 j = -k; j <= k; ++j) {
    mb = std::max(mb, oracles::log2_beta_scan(w, j - n, j));
    mf = std::min(mf, oracles::log2_beta_scan(w, j, j + n));
  }
  return std::max(mb, -mf);
}
double super_oracle(const WeightSequence& w, i64 k, i64 n) {
  double mb = -1e300, mf = 1e300;
  for (i64 j = -k; j <= k; ++j) {
    mb = std::max(mb, oracles::log2_beta_scan(w, j - n, j));
    mf = std::min(mf, oracles::log2_beta_scan(w, j, j + n));
  }
  return mb - mf;
}

}  // namespace

TEST_CASE("statistics are identically one for the unweighted shift") {
  WeightSequence one = unweighted_shift();
  for (i64 k : {0, 1, 3})
    for (i64 n : {1, 5, 77}) {
      CHECK(salas_hyper_log2(one, k, n) == 0.0);
      CHECK(salas_super_log2(one, k, n) == 0.0);
      auto [h, s] = salas_simplified_log2(one, k, n);
      CHECK(h == 0.0);
      CHECK(s == 0.0);
    }
}

TEST_CASE("frozen values against the direct-product oracle") {
  WeightSequence cs = chan_sanders_shift();
  // k = 0, n = 5: backward window product is 2 (only w_0), forward is 2^6
  CHECK(salas_hyper_log2(cs, 0, 5) == Catch::Approx(1.0));
  CHECK(salas_hyper_log2(cs, 0, 5) == Catch::Approx(hyper_oracle(cs, 0, 5)));
  CHECK(salas_super_log2(cs, 0, 5) == Catch::Approx(-5.0));
  CHECK(salas_super_log2(cs, 0, 5) == Catch::Approx(super_oracle(cs, 0, 5)));
  auto [h, s] = salas_simplified_log2(cs, 0, 5);
  CHECK(h == Catch::Approx(1.0));   // max{beta(-4,0), 1/beta(1,5)} = 2
  CHECK(s == Catch::Approx(-4.0));  // beta(-4,0)/beta(1,5) = 2 * 2^-5

  WeightSequence p18 = prop18_shift();
  CHECK(salas_hyper_log2(p18, 0, 2) == 0.0);  // w_-2..w_2 all equal 1
  auto [h8, s8] = salas_simplified_log2(p18, 0, 8);
  CHECK(s8 == Catch::Approx(-1.0));  // beta(-7,0) / beta(1,8) = 1/2
}

TEST_CASE("simplified and windowed forms on random weights") {
  std::mt19937 rng(3);
  for (int t = 0; t < 25; ++t) {
    double amp = 0.2 + 0.4 * double(t % 5) / 5.0;
    WeightSequence w = custom_shift(
        [amp, t](double n) { return amp * std::sin(0.29 * n + t); }, std::exp2(-0.7),
        std::exp2(0.7), "rw");
    i64 k = i64(rng() % 4), n = 1 + i64(rng() % 60);
    CHECK(salas_hyper_log2(w, k, n) == Catch::Approx(hyper_oracle(w, k, n)).margin(1e-10));
    CHECK(salas_super_log2(w, k, n) == Catch::Approx(super_oracle(w, k, n)).margin(1e-10));
  }
}

TEST_CASE("window-passing inequalities with the explicit constant") {
  // beta(m-n+1,m) >= d_m beta(j-n,j) and beta(m+1,m+n) <= beta(j,j+n)/d_m
  // for |j| < m, with d_m = max{1,||w||}^{-2m} min_{-m<=a<=b<=m} beta(a,b)
  std::mt19937 rng(17);
  for (int t = 0; t < 20; ++t) {
    double amp = 0.15 + 0.3 * double(t % 4) / 4.0;
    WeightSequence w = custom_shift(
        [amp, t](double n) { return amp * std::cos(0.41 * n + 2.0 * t); }, std::exp2(-0.5),
        std::exp2(0.5), "rw2");
    i64 m = 1 + i64(rng() % 4);
    double log2_wsup = std::log2(std::max(1.0, w.upper_bound()));
    double min_beta = 1e300;
    for (i64 a = -m; a <= m; ++a)
      for (i64 b = a; b <= m; ++b) min_beta = std::min(min_beta, log2_beta(w, double(a), double(b)));
    double d_m = -2.0 * double(m) * log2_wsup + min_beta;
    for (i64 n = 1; n <= 50; ++n)
      for (i64 j = -m + 1; j < m; ++j) {
        CHECK(log2_beta(w, double(m - n + 1), double(m)) >=
              d_m + log2_beta(w, double(j - n), double(j)) - 1e-10);
        CHECK(log2_beta(w, double(m + 1), double(m + n)) <=
              log2_beta(w, double(j), double(j + n)) - d_m + 1e-10);
      }
  }
}

TEST_CASE("symmetric families pin the centered super statistic at w_0/w_n") {
  WeightSequence w = prop19_shift(3.0);
  for (i64 n : {2, 5, 19, 100, 1000}) {
    auto [h, s] = salas_simplified_log2(w, 0, n);
    CHECK(s == Catch::Approx(w.log_weight(0.0) - w.log_weight(double(n))).margin(1e-10));
  }
  // windowed form at k = 0 is exactly 1 for symmetric weights
  for (i64 n : {2, 5, 19, 100}) CHECK(salas_super_log2(w, 0, n) == Catch::Approx(0.0).margin(1e-10));
}

TEST_CASE("criterion verdicts") {
  // unweighted, super: statistic identically 1 -> violated via constant floor
  {
    CriterionVerdict v = evaluate_criterion(make_salas_rule(unweighted_shift(), StatKind::super),
                                            3, 1000);
    CHECK(v.verdict == CriterionOutcome::violated);
    REQUIRE(v.floor_evidence.has_value());
    CHECK(v.floor_evidence->log2_floor == 0.0);
    CHECK(v.running_min_log2 >= -1e-12);
  }
  // chan_sanders, super: decays like 2^{2k-n} -> consistent at horizon
  {
    CriterionVerdict v = evaluate_criterion(make_salas_rule(chan_sanders_shift(), StatKind::super),
                                            3, 1000, -20.0);
    CHECK(v.verdict == CriterionOutcome::consistent_at_horizon);
    for (const auto& pk : v.per_k) CHECK(pk.min_log2 < -20.0);
  }
  // chan_sanders, hyper: floor at one -> violated
  {
    CriterionVerdict v = evaluate_criterion(make_salas_rule(chan_sanders_shift(), StatKind::hyper),
                                            3, 10000);
    CHECK(v.verdict == CriterionOutcome::violated);
    for (const auto& pk : v.per_k) CHECK(pk.min_log2 >= -1e-12);
  }
  // prop19, super: symmetry floor -> violated
  {
    CriterionVerdict v = evaluate_criterion(make_salas_rule(prop19_shift(3.0), StatKind::super),
                                            2, 500);
    CHECK(v.verdict == CriterionOutcome::violated);
    CHECK(v.floor_evidence->rationale.find("symmetric") != std::string::npos);
  }
  // no floor, no decay: inconclusive
  {
    WeightSequence w = custom_shift([](double n) { return n >= 0 && n < 3 ? 1.0 : 0.0; },
                                    1.0, 2.0, "bump");
    StatRule r = make_salas_rule(w, StatKind::super);
    r.floor.reset();
    CriterionVerdict v = evaluate_criterion(r, 1, 50, -20.0);
    CHECK(v.verdict == CriterionOutcome::inconclusive);
  }
}

TEST_CASE("series sink receives every entry in order") {
  std::vector<std::tuple<i64, i64, double>> rows;
  evaluate_criterion(make_salas_rule(chan_sanders_shift(), StatKind::super), 1, 10, -20.0,
                     [&rows](i64 k, i64 n, double s) { rows.emplace_back(k, n, s); });
  REQUIRE(rows.size() == 20);
  CHECK(std::get<0>(rows[0]) == 0);
  CHECK(std::get<1>(rows[0]) == 1);
  CHECK(std::get<0>(rows[19]) == 1);
  CHECK(std::get<1>(rows[19]) == 10);
}
