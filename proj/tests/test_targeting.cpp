#include <catch2/catch_amalgamated.hpp>

#include "orbitlab/circle/targeting.hpp"

using namespace orbitlab;

TEST_CASE("full-circle step toward target 1") {
  // single arc, mu = lebesgue, c = (1): nu is a step approximation whose
  // k-th coefficient lands within eps of 1
  CircleMeasure leb = CircleMeasure::lebesgue();
  std::vector<Arc> arcs = uniform_partition(1);
  std::vector<cplx> c{cplx{1.0, 0.0}};
  std::vector<TrigPoly> tests{TrigPoly::constant(1.0)};
  TargetingStepResult r = fourier_targeting_step(leb, arcs, c, 0, 0.08, tests);
  CHECK(r.k > 0);
  for (const auto& ck : r.checks) {
    INFO(ck.id << " observed " << ck.observed << " bound " << ck.bound);
    CHECK(ck.pass);
  }
  CHECK(std::abs(r.nu.fourier(r.k) - cplx{1.0, 0.0}) < 0.08);
  CHECK(r.nu.is_probability(1e-9));
}

TEST_CASE("two arcs with unit targets keep arc masses and pin coefficients") {
  CircleMeasure leb = CircleMeasure::lebesgue();
  std::vector<Arc> arcs = uniform_partition(2);
  std::vector<cplx> c{cplx{1.0, 0.0}, cplx{1.0, 0.0}};
  std::vector<TrigPoly> tests{TrigPoly::monomial(1), TrigPoly::monomial(-2)};
  TargetingStepResult r = fourier_targeting_step(leb, arcs, c, 3, 0.15, tests);
  CHECK(r.k > 3);
  CHECK(r.check("B1").observed <= 1e-12);
  CHECK(r.check("B2").observed < 0.15);
  CHECK(r.check("B3").observed < 0.15);
  for (size_t j = 0; j < arcs.size(); ++j)
    CHECK(std::abs(r.nu.restrict(arcs[j]).fourier(r.k) - 0.5 * c[j]) < 0.15);
}

TEST_CASE("mixed phases and magnitudes, a < 1") {
  CircleMeasure mu;
  mu.add_segment(0.0, 0.5, 1.2);
  mu.add_segment(0.5, 1.0, 0.8);
  std::vector<Arc> arcs = uniform_partition(2);
  std::vector<cplx> c{std::polar(0.45, 1.1), std::polar(0.3, -2.0)};
  std::vector<TrigPoly> tests{TrigPoly::constant(1.0), TrigPoly::monomial(1)};
  TargetingStepResult r = fourier_targeting_step(mu, arcs, c, 0, 0.1, tests);
  for (const auto& ck : r.checks) {
    INFO(ck.id);
    CHECK(ck.pass);
  }
  // B4 bound is 2a with a = 0.45
  CHECK(r.check("B4").bound == Catch::Approx(0.9 + 1e-9));
  CHECK(r.check("B4").observed <= 0.9 + 1e-9);
}

TEST_CASE("precondition failures") {
  CircleMeasure leb = CircleMeasure::lebesgue();
  auto arcs = uniform_partition(2);
  CHECK_THROWS_AS(fourier_targeting_step(leb, arcs, {cplx{1.0, 0.0}}, 0, 0.1, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(fourier_targeting_step(leb, arcs, {cplx{0.0, 0.0}, cplx{1.0, 0.0}}, 0, 0.1, {}),
                  std::invalid_argument);
  CircleMeasure half;  // not a probability on the arcs
  half.add_segment(0.0, 0.5, 1.0);
  CHECK_THROWS_AS(
      fourier_targeting_step(half, arcs, {cplx{1.0, 0.0}, cplx{1.0, 0.0}}, 0, 0.1, {}),
      std::invalid_argument);
}
