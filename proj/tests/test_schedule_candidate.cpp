#include <catch2/catch_amalgamated.hpp>

#include "orbitlab/shift_candidate.hpp"
#include "orbitlab/weight_families.hpp"

using namespace orbitlab;

namespace {

// r_n = 2^{n+4}: same growth as the standard choice, with early headroom so
// small stages already admit nonzero support caps
ShiftCertificate shifted_lnlog(double p, int r_shift = 4) {
  ShiftCertificate c = lnlog_certificate(p);
  c.log2_r = [r_shift](i64 n) { return double(n + r_shift); };
  c.name += "+r" + std::to_string(r_shift);
  return c;
}

}  // namespace

TEST_CASE("single-target schedule on the first progression") {
  // need = 1 with a == 1 from index 1 -> m_0 = 1, p_0 = 2, A_0 = {3, 5, 7, ...}
  ZVector x0 = ZVector::basis(0, 0.5);
  TargetSchedule s = build_target_schedule({x0}, [](i64 n) { return n >= 1 ? 1.0 : 0.0; },
                                           2.0, 1 << 12);
  REQUIRE(s.entries().size() == 1);
  CHECK(s.entries()[0].prime == 2);
  CHECK(s.entries()[0].density == Catch::Approx(0.5));
  for (i64 m : {3, 5, 7, 9, 101}) CHECK(s.target_index_at(m).value() == 0);
  for (i64 m : {0, 1, 2, 4, 6, 100}) CHECK_FALSE(s.target_index_at(m).has_value());
  CHECK(s.value_at(4).empty());  // kappa = 0 off the progressions
}

TEST_CASE("two targets live on disjoint progressions") {
  ZVector x0 = ZVector::basis(0, 0.5);
  ZVector x1 = ZVector::basis(1, 0.25);
  auto a = [](i64 n) { return n >= 1 ? 2.0 : 0.0; };
  TargetSchedule s = build_target_schedule({x0, x1}, a, 2.0, 1 << 12);
  REQUIRE(s.entries().size() == 2);
  CHECK(s.entries()[0].prime == 2);
  CHECK(s.entries()[1].prime == 3);
  // A_1 = {2(3j+1) : j >= 1} = {8, 14, 20, ...}
  for (i64 m : {8, 14, 20}) CHECK(s.target_index_at(m).value() == 1);
  for (i64 m = 0; m <= 2000; ++m) {
    auto j0 = s.target_index_at(m);
    if (!j0) continue;
    // progressions are disjoint: membership is unique by construction;
    // verify against the defining congruences
    i64 P = s.entries()[*j0].prefix_product, q = m / P;
    CHECK(m % P == 0);
    CHECK(q % s.entries()[*j0].prime == 1);
  }
}

TEST_CASE("targets beyond the cap are reported unassigned") {
  ZVector big = ZVector::basis(40, 1.0);  // gamma = 40 but a stays below 3
  TargetSchedule s = build_target_schedule({big}, [](i64) { return 2.0; }, 2.0, 1 << 10);
  CHECK(s.entries().empty());
  REQUIRE(s.unassigned().size() == 1);
}

TEST_CASE("support caps for the unweighted shift") {
  SupportCaps caps = derive_support_caps(unweighted_shift(), shifted_lnlog(3.0), 8, 20000);
  REQUIRE(caps.a.size() == 8);
  for (size_t i = 1; i < caps.a.size(); ++i) CHECK(caps.a[i] >= caps.a[i - 1]);
  // a_n c^{2 a_n} <= alpha_n with c = 1 reduces to a_n <= ln(n+2)
  for (size_t n = 0; n < caps.a.size(); ++n)
    CHECK(double(caps.a[n]) <= std::log(double(n) + 2.0));
  // gap condition (an3)
  ShiftCertificate cert = shifted_lnlog(3.0);
  for (size_t n = 2; n < caps.a.size(); ++n)
    CHECK(double(caps.a[n] + caps.a[n - 1]) <
          cert.r(i64(n)) - cert.r(i64(n) - 1) - cert.r(i64(n) - 2));
  // W3 tail indices for the log-series certificate live far beyond any horizon
  for (size_t k = 1; k < caps.m_k.size(); ++k)
    if (!caps.m_k[k]) CHECK(caps.m_k_log2_estimate[k] > 20.0);
}

TEST_CASE("candidate build: disjoint summands, norm identity, y+z bookkeeping") {
  WeightSequence w = unweighted_shift();
  ShiftCertificate cert = shifted_lnlog(3.0);
  const i64 stages = 40;
  SupportCaps caps = derive_support_caps(w, cert, stages, 20000);
  auto a_rule = [&caps, stages](i64 n) {
    return double(caps.a[size_t(std::min(n, stages - 1))]);
  };
  ZVector x0 = ZVector::basis(0, 0.5);
  ZVector x1 = ZVector::basis(0, 0.25);
  x1.set(1, 0.25);
  ZVector x2 = ZVector::basis(-1, 0.75);
  TargetSchedule kappa = build_target_schedule({x0, x1, x2}, a_rule, cert.p, stages);
  CHECK(kappa.entries().size() == 3);

  CandidateBuild b = build_shift_candidate(w, cert, kappa, caps, stages);
  REQUIRE_FALSE(b.u.empty());
  CHECK(b.active_stages.size() >= 3);
  CHECK(b.norm_identity_gap < 1e-9);
  CHECK(b.yz_disjoint_ok);

  // support of each summand sits inside the window |idx - r_n| <= a_n
  for (size_t i = 0; i < b.summands.size(); ++i) {
    i64 n = b.active_stages[i];
    i64 rn = i64(std::llround(cert.r(n)));
    for (i64 idx : b.summands[i].support())
      CHECK(std::llabs(idx - rn) <= caps.a[size_t(n)]);
  }
}

TEST_CASE("stage-1 truncation is a single scaled shift of the first target") {
  WeightSequence w = unweighted_shift();
  ShiftCertificate cert = shifted_lnlog(3.0);
  SupportCaps caps = derive_support_caps(w, cert, 8, 4000);
  ZVector x0 = ZVector::basis(0, 0.5);
  auto a_rule = [&caps](i64 n) { return double(caps.a[size_t(std::min<i64>(n, 7))]); };
  TargetSchedule kappa = build_target_schedule({x0}, a_rule, cert.p, 8);
  // the first progression index within 8 stages
  i64 first = -1;
  for (i64 m = 0; m < 8 && first < 0; ++m)
    if (kappa.target_index_at(m)) first = m;
  REQUIRE(first > 0);
  CandidateBuild b = build_shift_candidate(w, cert, kappa, caps, first + 1);
  REQUIRE(b.summands.size() == 1);
  CHECK(pnorm(b.u, cert.p).linear() ==
        Catch::Approx(cert.rho(first) * pnorm(x0, cert.p).linear()));
}

TEST_CASE("support collisions are an error, never silently merged") {
  WeightSequence w = unweighted_shift();
  ShiftCertificate cert = lnlog_certificate(3.0);  // r_n = 2^n: tight early gaps
  cert.log2_r = [](i64 n) { return double(n); };
  SupportCaps caps;
  caps.a = {13, 13, 13, 13, 13, 13};  // deliberately violates the gap caps
  caps.m_k.assign(6, std::nullopt);
  caps.m_k_log2_estimate.assign(6, 0.0);
  ZVector wide;  // gamma = 12: windows around r_3 = 8 and r_5 = 32 meet at 20
  for (i64 i = -12; i <= 12; ++i) wide.set(i, 0.5);
  TargetSchedule kappa =
      build_target_schedule({wide}, [](i64 n) { return n >= 1 ? 13.0 : 0.0; }, 3.0, 64);
  CHECK_THROWS_AS(build_shift_candidate(w, cert, kappa, caps, 6), construction_error);
}
