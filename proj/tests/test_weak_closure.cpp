#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "orbitlab/shift_candidate.hpp"
#include "orbitlab/weak_closure.hpp"
#include "orbitlab/weight_families.hpp"

using namespace orbitlab;

TEST_CASE("weak-closure divergence verdicts") {
  // c == 1, q = 2: partial sum is N+1, diverging
  {
    DivergenceVerdict v = weak_closure_divergence([](i64) { return 1.0; }, 2.0, 10000);
    CHECK(v.partial_sum == Catch::Approx(10001.0));
    CHECK(v.trend == Trend::diverging_at_horizon);
  }
  // c_n = n (n >= 1), q = 2: converges to pi^2/6, matched via the tail bound
  {
    DivergenceVerdict v = weak_closure_divergence(PowerSeq{1.0}, 2.0, 100000);
    REQUIRE(v.certified);
    CHECK(v.trend == Trend::converging_at_horizon);
    REQUIRE(v.oracle_limit.has_value());
    CHECK(*v.oracle_limit == Catch::Approx(M_PI * M_PI / 6.0).margin(1e-3));
  }
  // zero coefficient short-circuits
  {
    DivergenceVerdict v =
        weak_closure_divergence([](i64 n) { return n == 7 ? 0.0 : 1.0; }, 2.0, 100);
    CHECK(v.zero_coefficient_short_circuit);
    CHECK(v.certified);
  }
  // coefficient family alpha(m) = 2^{-n} phi_2(m)^{-1/2}: sums 2^{-2n} H_J
  {
    int nn = 3;
    double scale = std::exp2(-double(nn));
    auto c = [scale](i64 j) { return 1.0 / (scale / std::sqrt(double(j + 1))); };
    DivergenceVerdict v = weak_closure_divergence(c, 2.0, 100000);
    double hj = 0.0;
    for (i64 j = 1; j <= 100001; ++j) hj += 1.0 / double(j);
    CHECK(v.partial_sum == Catch::Approx(std::exp2(-2.0 * nn) * hj).epsilon(1e-9));
    CHECK(v.trend == Trend::diverging_at_horizon);
  }
  CHECK_THROWS_AS(weak_closure_divergence([](i64) { return 1.0; }, 0.9, 10),
                  std::domain_error);
}

TEST_CASE("divergence verdict matches the integral-test oracle on powers") {
  for (double s : {0.2, 0.5, 1.0, 2.0})
    for (double q : {1.5, 2.0, 3.0}) {
      DivergenceVerdict v = weak_closure_divergence(PowerSeq{s}, q, 100000);
      INFO("s=" << s << " q=" << q);
      if (s * q > 1.0) {
        CHECK(v.trend == Trend::converging_at_horizon);
        CHECK(v.certified);
      } else {
        CHECK(v.trend == Trend::diverging_at_horizon);
      }
    }
}

TEST_CASE("gram two-sequence bound") {
  // orthonormal family: c = 0, bound = 1
  {
    std::vector<ZVector> gs;
    for (i64 i = 0; i < 6; ++i) gs.push_back(ZVector::basis(i));
    GramStats g = gram_two_sequence_bound(gs);
    CHECK(g.c == 0.0);
    CHECK(g.bound() == Catch::Approx(1.0));
  }
  // |<g_n,g_m>| = 2^{-n} (n > m), norms <= 2: c -> 1/9, bound -> sqrt(4 + sqrt(2/9))
  {
    size_t N = 40;
    GramStats g = gram_two_sequence_bound(N, [](size_t a, size_t b) {
      if (a == b) return cplx{4.0, 0.0};  // ||g|| = 2
      return cplx{std::exp2(-double(std::max(a, b) + 1)), 0.0};
    });
    CHECK(g.d == Catch::Approx(2.0));
    CHECK(g.c == Catch::Approx(1.0 / 9.0).margin(1e-9));
    CHECK(g.bound() == Catch::Approx(std::sqrt(4.0 + std::sqrt(2.0 / 9.0))).margin(1e-6));
    CHECK(g.bound() == Catch::Approx(2.1146).margin(1e-3));
  }
  // repeated identical unit vector: c grows with the horizon, no certificate
  {
    std::vector<ZVector> gs(30, ZVector::basis(0));
    GramStats g = gram_two_sequence_bound(gs);
    CHECK(g.c == Catch::Approx(30.0 * 29.0 / 2.0));
  }
}

TEST_CASE("gram bound controls random combinations (200 trials)") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    size_t count = 3 + rng() % 6;
    std::vector<ZVector> gs(count);
    for (auto& g : gs)
      for (int e = 0; e < 5; ++e) g.set(i64(rng() % 12), {U(rng), U(rng)});
    GramStats st = gram_two_sequence_bound(gs);
    size_t pick = 1 + rng() % count;
    std::vector<double> a(pick);
    double a2 = 0.0;
    for (auto& x : a) { x = U(rng); a2 += x * x; }
    ZVector sum;
    for (size_t i = 0; i < pick; ++i) sum.add_scaled(gs[i], a[i]);
    double lhs = sum.empty() ? 0.0 : pnorm(sum, 2.0).linear();
    CHECK(lhs <= st.bound() * std::sqrt(a2) + 1e-9);
  }
}

TEST_CASE("perturbation bound") {
  auto zero = [](i64) { return 0.0; };
  PerturbationBound b0 = p_sequence_perturbation_bound(1.5, zero, 100, 1.0);
  CHECK(b0.certified);
  CHECK(b0.constant == Catch::Approx(1.5));

  // deltas 2^{-n}, q = 1: constant 1 + 2
  auto geo = [](i64 n) { return std::exp2(-double(n)); };
  auto geo_tail = [](i64 N) { return TailBound{0.0, std::exp2(-double(N))}; };
  PerturbationBound b1 = p_sequence_perturbation_bound(1.0, geo, 60, 1.0, geo_tail);
  CHECK(b1.certified);
  CHECK(b1.constant == Catch::Approx(3.0).margin(1e-9));

  // stagewise 2^{-k} gaps at exponent q: constant 1 + (sum 2^{-kq})^{1/q}
  double q = 1.5;
  PerturbationBound b2 = p_sequence_perturbation_bound(1.0, geo, 60, q, geo_tail);
  double expect = 1.0 + std::pow(1.0 / (1.0 - std::exp2(-q)), 1.0 / q);
  CHECK(b2.constant == Catch::Approx(expect).margin(1e-6));

  // non-summable gaps without a tail bound: no certificate
  PerturbationBound b3 = p_sequence_perturbation_bound(1.0, [](i64) { return 0.5; }, 200, 2.0);
  CHECK_FALSE(b3.certified);
}

TEST_CASE("closedness certificates by norm growth") {
  auto pow2 = [](i64 n) { return std::exp2(double(n)); };
  ClosednessVerdict banach = closedness_certificate(pow2, SpaceKind::banach, 200, 2.0,
                                                   [](i64 N) {
                                                     return TailBound{0.0, std::exp2(-double(N))};
                                                   });
  CHECK(banach.exponent_a == 1.0);
  CHECK(banach.certificate);
  CHECK(banach.series.partial_sum == Catch::Approx(2.0).margin(1e-9));

  auto root = [](i64 n) { return std::sqrt(double(n + 1)); };
  ClosednessVerdict hil = closedness_certificate(root, SpaceKind::hilbert, 100000);
  CHECK(hil.exponent_a == 2.0);
  CHECK_FALSE(hil.certificate);  // harmonic series diverges

  CHECK_THROWS_AS(closedness_certificate(pow2, SpaceKind::lp, 100, 0.9), std::domain_error);
}

TEST_CASE("closedness and weak-closure certificates exclude each other on c_n e_n") {
  // in l_p with p > 2: if sum c^{-q} diverges (zero in the weak closure),
  // no norm-growth certificate can fire, and vice versa
  std::mt19937 rng(4);
  for (int t = 0; t < 40; ++t) {
    double p = 2.5 + (t % 5) * 0.5;
    double q = p / (p - 1.0);
    double s = 0.05 + 0.15 * double(rng() % 12);  // c_n = (n+1)^s
    ClosednessVerdict closed = closedness_certificate(
        [s](i64 n) { return std::pow(double(n + 1), s); }, SpaceKind::lp, 4000, p,
        power_inverse_series(PowerSeq{s}, std::min(2.0, q) * (1.0 - 1e-6)).tail);
    DivergenceVerdict open = weak_closure_divergence(PowerSeq{s}, q, 4000);
    bool both = closed.certificate && open.trend == Trend::diverging_at_horizon;
    INFO("p=" << p << " s=" << s);
    CHECK_FALSE(both);
  }
}

TEST_CASE("row sums") {
  // all-ones
  {
    std::vector<std::vector<double>> a(8, std::vector<double>(8, 1.0));
    RowSumReport r = row_sum_check(a, 2.0);
    CHECK(r.half_index_bound_ok);
    CHECK(r.sorted_sums.front() == 8.0);
  }
  // upper-triangular ones: sorted row sums are exactly 1..n
  {
    size_t n = 12;
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i; j < n; ++j) a[i][j] = 1.0;
    RowSumReport r = row_sum_check(a, 1.5);
    CHECK(r.half_index_bound_ok);
    for (size_t j = 0; j < n; ++j) CHECK(r.sorted_sums[j] == double(j + 1));
  }
  // zero matrix violates the hypothesis
  {
    std::vector<std::vector<double>> z(3, std::vector<double>(3, 0.0));
    CHECK_THROWS_AS(row_sum_check(z, 2.0), std::domain_error);
  }
  // 100 random hypothesis-satisfying matrices keep S_(j) >= j/2
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    size_t n = 2 + rng() % 49;
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i; j < n; ++j) {
        double x = 3.0 * U(rng), y = 3.0 * U(rng);
        if (std::max(x, y) < 1.0) {
          if (rng() % 2) x = 1.0 + U(rng);
          else y = 1.0 + U(rng);
        }
        a[i][j] = x;
        a[j][i] = (i == j) ? x : y;
      }
    for (size_t i = 0; i < n; ++i) a[i][i] = std::max(a[i][i], 1.0);
    RowSumReport r = row_sum_check(a, 2.0);
    CHECK(r.half_index_bound_ok);
  }
}

TEST_CASE("antisupercyclicity statistic for shifts") {
  WeightSequence one = unweighted_shift();
  auto series = antisupercyclicity_stat_shift(one, ZVector::basis(0), ZVector::basis(5),
                                              -8, 8, 2.0);
  for (const auto& [n, v] : series) {
    if (n == -5) CHECK(v == Catch::Approx(1.0));
    else CHECK(v == 0.0);
  }
  CHECK_THROWS_AS(antisupercyclicity_stat_shift(one, ZVector{}, ZVector::basis(0), 0, 3, 2.0),
                  std::domain_error);
}

TEST_CASE("ratio bound along an orbit of the symmetric family") {
  // at the center m = 0, symmetry gives beta(1,n)/beta(-n+1,0) = w_n/w_0,
  // so stat(n) <= |x_n| / (c |x_0|) with c = 1/upper, and the bound is
  // square-summable whenever x is
  WeightSequence w = prop19_shift(3.0);
  ZVector x = ZVector::basis(0, 0.3);
  std::mt19937 rng(8);
  for (int j = 1; j <= 24; ++j)
    if (rng() % 2) x.set(3 * j, std::exp2(-0.5 * j) * (rng() % 2 ? 1.0 : -1.0));

  double c_floor = 1.0 / w.upper_bound();
  auto series = antisupercyclicity_stat_shift(w, x, ZVector::basis(0), 0, 120, 2.0);
  double bound_sq_sum = 0.0;
  for (const auto& [n, v] : series) {
    double bound = std::abs(x.at(n)) / (c_floor * std::abs(x.at(0)));
    CHECK(v <= bound + 1e-9);
    bound_sq_sum += bound * bound;
  }
  CHECK(bound_sq_sum < 1e4);  // square-summable bound series
}

TEST_CASE("orbit density certificate: trivial self-family passes") {
  WeightSequence one = unweighted_shift();
  ZVector u = ZVector::basis(0, 1.0);
  OrbitFamilySpec spec;
  spec.label = "self";
  for (i64 k = 0; k < 64; ++k) spec.indices.push_back(k);
  spec.alpha = [](i64) { return cplx{1.0, 0.0}; };
  spec.beta_coef = [](i64) { return cplx{1.0, 0.0}; };
  spec.gamma_pow = [](i64) { return i64{0}; };
  spec.q = 2.0;
  spec.alpha_tail = [](i64) {
    return TailBound{std::numeric_limits<double>::infinity(),
                     std::numeric_limits<double>::infinity()};
  };
  OrbitTargetReport rep = check_orbit_family(one, u, u, spec, 3.0);
  CHECK(rep.c1.ok);
  CHECK(rep.c1.kind == PseqEvidence::Kind::zero_family);
  CHECK(rep.c2.trend == Trend::diverging_at_horizon);
  OrbitDensityCertificate cert = make_orbit_density_certificate({rep}, true);
  CHECK(cert.pass);
  CHECK(cert.hypercyclic_mode);
}
