#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "orbitlab/weight_families.hpp"
#include "orbitlab/zvector.hpp"

using namespace orbitlab;

namespace {

ZVector random_vector(std::mt19937& rng, int max_support = 8, i64 span = 40) {
  std::uniform_int_distribution<i64> idx(-span, span);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  ZVector x;
  int n = 1 + int(rng() % unsigned(max_support));
  for (int i = 0; i < n; ++i) x.set(idx(rng), {U(rng), U(rng)});
  return x;
}

WeightSequence random_bounded_weights(unsigned seed) {
  double amp = 0.25 + 0.5 * double(seed % 7) / 7.0;
  return custom_shift(
      [amp, seed](double n) { return amp * std::sin(0.13 * n + double(seed % 11)); },
      std::exp2(-1.0), std::exp2(1.0), "rnd");
}

}  // namespace

TEST_CASE("shift action on basis vectors") {
  WeightSequence one = unweighted_shift();
  WeightSequence cs = chan_sanders_shift();

  // T e_0 = w_0 e_{-1}
  ZVector e0 = ZVector::basis(0);
  ZVector t = apply_shift(cs, e0, 1);
  CHECK(t.support() == std::vector<i64>{-1});
  CHECK(t.at(-1) == cplx{2.0, 0.0});

  CHECK(apply_shift(one, e0, 7).support() == std::vector<i64>{-7});

  // band family: T^8 e_8 = beta(1,8) e_0 = 2 e_0
  ZVector e8 = ZVector::basis(8);
  ZVector s = apply_shift(prop18_shift(), e8, 8);
  CHECK(s.support() == std::vector<i64>{0});
  CHECK(s.at(0).real() == Catch::Approx(2.0));
}

TEST_CASE("shift composition, inverse, support transport") {
  std::mt19937 rng(42);
  for (int t = 0; t < 40; ++t) {
    WeightSequence w = random_bounded_weights(unsigned(t));
    ZVector x = random_vector(rng);
    i64 m = i64(rng() % 21) - 10, n = i64(rng() % 21) - 10;
    ZVector ab = apply_shift(w, apply_shift(w, x, m), n);
    ZVector once = apply_shift(w, x, m + n);
    REQUIRE(ab.support() == once.support());
    for (i64 idx : once.support())
      CHECK(std::abs(ab.at(idx) - once.at(idx)) <= 1e-10 * std::abs(once.at(idx)));

    ZVector back = apply_shift(w, apply_shift(w, x, n), -n);
    REQUIRE(back.support() == x.support());
    for (i64 idx : x.support())
      CHECK(std::abs(back.at(idx) - x.at(idx)) <= 1e-10 * std::abs(x.at(idx)));

    // supp(T^n x) = supp(x) - n
    auto s0 = x.support();
    auto s1 = apply_shift(w, x, n).support();
    REQUIRE(s0.size() == s1.size());
    for (size_t i = 0; i < s0.size(); ++i) CHECK(s1[i] == s0[i] - n);
  }
}

TEST_CASE("gamma and pnorm") {
  ZVector zero;
  CHECK(zero.gamma() == 0);
  CHECK(pnorm(zero, 2.0).is_zero());

  ZVector e0 = ZVector::basis(0);
  for (double p : {1.0, 2.0, 3.0}) CHECK(pnorm(e0, p).linear() == Catch::Approx(1.0));
  CHECK(pnorm(e0, std::numeric_limits<double>::infinity()).linear() == Catch::Approx(1.0));

  ZVector x = ZVector::basis(0);
  x.set(1, 1.0);
  CHECK(pnorm(x, 2.0).linear() == Catch::Approx(std::sqrt(2.0)));

  ZVector y;
  y.set(0, 3.0);
  y.set(1, 4.0);
  CHECK(pnorm(y, std::numeric_limits<double>::infinity()).linear() == Catch::Approx(4.0));
  CHECK(y.gamma() == 1);
  CHECK_THROWS_AS(pnorm(y, 0.5), std::domain_error);
}

TEST_CASE("norm transport bounds under shift powers") {
  // ||T^{-n}x|| <= ||x|| c^{2 gamma(x)} / beta(1,n), ||T^n x|| <= ||x|| beta(1-n,0) c^{2 gamma(x)}
  std::mt19937 rng(7);
  for (int t = 0; t < 60; ++t) {
    WeightSequence w = random_bounded_weights(unsigned(100 + t));
    double c = std::max(w.upper_bound(), 1.0 / w.lower_bound());
    ZVector x = random_vector(rng, 6, 12);
    double p = 2.0 + double(t % 3);
    i64 n = 1 + i64(rng() % 40);
    double g = double(x.gamma());
    double lhs_minus = pnorm(apply_shift(w, x, -n), p).log2();
    double rhs_minus =
        pnorm(x, p).log2() + 2 * g * std::log2(c) - log2_beta(w, 1, double(n));
    CHECK(lhs_minus <= rhs_minus + 1e-9);
    double lhs_plus = pnorm(apply_shift(w, x, n), p).log2();
    double rhs_plus =
        pnorm(x, p).log2() + 2 * g * std::log2(c) + log2_beta(w, double(1 - n), 0.0);
    CHECK(lhs_plus <= rhs_plus + 1e-9);
  }
}

TEST_CASE("entries stay in log form when the linear scale overflows") {
  WeightSequence cs = chan_sanders_shift();
  ZVector e = ZVector::basis(3000);
  ZVector big = apply_shift(cs, e, 3000);  // coefficient beta(1,3000) = 2^3000 at e_0
  CHECK(big.magnitude_at(0).log2() == Catch::Approx(3000.0));
  CHECK_THROWS_AS(big.at(0), std::domain_error);  // never silently overflows
  ZVector back = apply_shift(cs, big, -3000);
  CHECK(back.at(3000).real() == Catch::Approx(1.0));
}

TEST_CASE("pairings") {
  ZVector x = ZVector::basis(2, {1.0, 1.0});
  ZVector y = ZVector::basis(2, {0.0, 1.0});
  CHECK(dual_pair(x, y) == cplx{-1.0, 1.0});
  CHECK(inner2(x, y) == cplx{1.0, -1.0});
  CHECK(supports_disjoint(ZVector::basis(0), ZVector::basis(1)));
  CHECK_FALSE(supports_disjoint(x, y));
}
