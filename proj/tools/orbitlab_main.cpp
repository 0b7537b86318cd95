// orbitlab: criteria statistics, closure certificates and measure
// constructions for bilateral weighted shifts, from reproducible configs.
//
// Exit codes: 0 = run completed with a positive verdict, 1 = run completed
// with a negative verdict (still a valid analysis), 2 = usage or config
// error, 3 = internal check violation.

#include <CLI11.hpp>
#include <ctime>
#include <iostream>
#include <optional>

#include "orbitlab/orbitlab.hpp"

using namespace orbitlab;

namespace {

std::string iso_timestamp() {
  char buf[32];
  std::time_t t = std::time(nullptr);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void stamp(Report& rep) { rep.kv("generated_at", iso_timestamp()); }

WeightSequence family_from(const std::string& tag, double p) {
  return weight_family_by_name(tag, p);
}

int run_criteria(const std::string& family, double p, const std::string& stat_name, i64 kmax,
                 i64 horizon, double tol_log2, const std::string& out,
                 const std::string& csv) {
  WeightSequence w = family_from(family, p);
  StatKind kind;
  if (stat_name == "hyper") kind = StatKind::hyper;
  else if (stat_name == "super") kind = StatKind::super;
  else if (stat_name == "hyper-simplified") kind = StatKind::hyper_simplified;
  else if (stat_name == "super-simplified") kind = StatKind::super_simplified;
  else throw CLI::ValidationError("--stat", "unknown statistic " + stat_name);

  StatRule rule = make_salas_rule(w, kind);
  std::optional<CsvWriter> series;
  if (!csv.empty()) series.emplace(csv, std::vector<std::string>{"k", "n", "log2_stat"});
  std::function<void(i64, i64, double)> sink;
  if (series)
    sink = [&series](i64 k, i64 n, double s) {
      series->row({std::to_string(k), std::to_string(n), fmt_full(s)});
    };
  CriterionVerdict v = evaluate_criterion(rule, kmax, horizon, tol_log2, sink);

  Report rep("criteria run");
  stamp(rep);
  rep.section("config");
  rep.kv("family", w.name());
  rep.kv("statistic", stat_name);
  rep.kv("k_max", kmax);
  rep.kv("horizon", horizon);
  rep.kv("tol_log2", tol_log2);
  rep.section("verdict");
  rep.kv("outcome", std::string(to_string(v.verdict)));
  rep.kv("running_min_log2", v.running_min_log2);
  if (v.floor_evidence) {
    rep.kv("floor_log2", v.floor_evidence->log2_floor);
    rep.kv("floor_rationale", v.floor_evidence->rationale);
  }
  rep.section("per_k");
  for (const auto& pk : v.per_k) {
    rep.kv("min_log2_at_k" + std::to_string(pk.k), pk.min_log2);
    rep.kv("argmin_n_at_k" + std::to_string(pk.k), pk.argmin_n);
  }
  if (!out.empty()) rep.write(out);
  else std::cout << rep.text();
  return v.verdict == CriterionOutcome::violated ? 1 : 0;
}

int run_certify_shift(const std::string& family, double p, const std::string& cert_name,
                      i64 horizon, const std::string& out, const std::string& csv) {
  WeightSequence w = family_from(family, p);
  ShiftCertificate cert;
  if (cert_name == "lnlog") cert = lnlog_certificate(p);
  else if (cert_name == "prop18") cert = prop18_certificate(p);
  else if (cert_name == "prop19") cert = prop19_certificate(p);
  else throw CLI::ValidationError("--cert", "unknown certificate " + cert_name);

  WReport rep = check_shift_certificate(w, cert, horizon);

  Report r("shift certificate run");
  stamp(r);
  r.section("config");
  r.kv("family", w.name());
  r.kv("certificate", cert.name);
  r.kv("p", rep.p);
  r.kv("horizon", rep.horizon);
  r.section("conditions");
  for (const auto& c : rep.conditions) {
    r.kv(c.id, std::string(to_string(c.status)) + (c.certified ? " (certified)" : ""));
    r.kv(c.id + "_detail", c.detail);
  }
  r.kv("reindex_offset", rep.reindex_offset);
  r.kv("w3_sum", rep.w3_sum);
  r.kv("w3_last_decade_relative_increment", rep.w3_last_decade_relative_increment);
  r.kv("w4_sum", rep.w4_sum);
  r.kv("w4_decade_ratio", rep.w4_decade_ratio);
  r.section("verdict");
  r.kv("overall", rep.overall_pass ? "pass" : "fail");
  if (!csv.empty()) {
    CsvWriter cw(csv, {"condition", "n", "value"});
    for (const auto& c : rep.conditions)
      for (const auto& [n, v] : c.series)
        cw.row({c.id, std::to_string(n), fmt_full(v)});
  }
  if (!out.empty()) r.write(out);
  else std::cout << r.text();
  return rep.overall_pass ? 0 : 1;
}

int run_certify_closedness(const std::string& norms, double s, const std::string& space,
                           double p, i64 horizon, const std::string& out) {
  std::function<double(i64)> rule;
  std::function<TailBound(i64)> tail;
  if (norms == "pow2") {
    rule = [](i64 n) { return std::exp2(double(n)); };
    tail = [](i64 N) { return TailBound{0.0, std::exp2(-double(N))}; };
  } else if (norms == "sqrt") {
    rule = [](i64 n) { return std::sqrt(double(n + 1)); };
  } else if (norms == "poly") {
    rule = [s](i64 n) { return std::pow(double(n + 1), s); };
  } else {
    throw CLI::ValidationError("--norms", "unknown norm rule " + norms);
  }
  SpaceKind sk;
  if (space == "hilbert") sk = SpaceKind::hilbert;
  else if (space == "lp") sk = SpaceKind::lp;
  else if (space == "banach") sk = SpaceKind::banach;
  else throw CLI::ValidationError("--space", "unknown space " + space);

  ClosednessVerdict v = closedness_certificate(rule, sk, horizon, p, tail);
  Report r("closedness certificate run");
  stamp(r);
  r.section("config");
  r.kv("norms", norms);
  r.kv("space", space);
  r.kv("horizon", horizon);
  r.section("verdict");
  r.kv("exponent_a", v.exponent_a);
  r.kv("partial_sum", v.series.partial_sum);
  r.kv("trend", std::string(to_string(v.series.trend)));
  r.kv("certificate", v.certificate);
  r.kv("certified_tail", v.certified_tail);
  if (!out.empty()) r.write(out);
  else std::cout << r.text();
  return v.certificate ? 0 : 1;
}

int run_certify_divergence(double s, double q, i64 horizon, const std::string& out) {
  DivergenceVerdict v = weak_closure_divergence(PowerSeq{s}, q, horizon);
  Report r("weak-closure divergence run");
  stamp(r);
  r.section("config");
  r.kv("coefficients", "(n+1)^" + fmt_full(s));
  r.kv("q", q);
  r.kv("horizon", horizon);
  r.section("verdict");
  r.kv("partial_sum", v.partial_sum);
  r.kv("trend", std::string(to_string(v.trend)));
  r.kv("certified", v.certified);
  if (!out.empty()) r.write(out);
  else std::cout << r.text();
  return v.trend == Trend::diverging_at_horizon ? 0 : 1;
}

int run_measure(int stages, int h_count, double delta_log2, const std::string& prefix) {
  RajchmanConfig cfg;
  cfg.stages = stages;
  cfg.h_count = h_count;
  cfg.delta_log2 = delta_log2;
  RajchmanResult res = run_rajchman_program(cfg);

  Report r("measure construction run");
  stamp(r);
  r.section("config");
  r.kv("stages", i64(stages));
  r.kv("h_count", i64(h_count));
  r.kv("delta_log2", delta_log2);
  r.section("stages");
  for (const auto& st : res.construction.stage) {
    std::string tag = "stage" + std::to_string(st.n);
    r.kv(tag + "_k", st.k);
    r.kv(tag + "_j", st.j);
    r.kv(tag + "_m", to_string_u128(st.m));
    r.kv(tag + "_epsilon", st.epsilon);
    for (const auto& c : st.checks) {
      r.kv(tag + "_" + c.id,
           std::string(c.pass ? "pass" : "FAIL") + " observed=" + fmt_full(c.observed) +
               " bound=" + fmt_full(c.bound));
    }
  }
  r.section("final");
  r.kv("lines", i64(res.construction.final_measure().line_count()));
  r.kv("gram_sum", res.gram_sum);
  r.kv("gram_bound_constant", res.gram.bound());
  r.kv("positivity_floor", res.construction.positivity_floor);
  for (const auto& [n, d, v] : res.construction.final_pairings)
    r.kv("pairing_g" + std::to_string(n) + "_g" + std::to_string(d), v);
  for (const auto& [i, v] : res.family_divergence)
    r.kv("family" + std::to_string(i) + "_trend", std::string(to_string(v.trend)));
  r.section("verdict");
  r.kv("all_checks_pass", res.construction.all_checks_pass);
  r.kv("pass", res.pass);
  r.write(prefix + ".report.txt");

  save_measure_file(prefix + ".measure.txt", res.construction.final_measure());

  CsvWriter cw(prefix + ".fourier.csv", {"kind", "stage_or_freq", "aux", "value"});
  for (const auto& d : res.decay)
    cw.row({"decay_window", std::to_string(d.n), std::to_string(d.j), fmt_full(d.max_abs)});
  for (const auto& [w, v] : res.coefficient_windows)
    cw.row({"dyadic_window", std::to_string(w), "", fmt_full(v)});
  const auto& lines = res.construction.final_measure().lines();
  for (const auto& [q, c] : lines)
    if (std::llabs(q) <= 64)
      cw.row({"line", std::to_string(q), fmt_full(c.real()), fmt_full(c.imag())});
  return res.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"operator-dynamics certificates and circle-measure constructions"};
  app.set_config("--config", "", "read options from an ini file");
  app.require_subcommand(1);

  std::string family = "unweighted", stat = "super", out, csv;
  double p = 3.0, tol_log2 = -20.0;
  i64 kmax = 3, horizon = 1000;

  auto* criteria = app.add_subcommand("criteria", "liminf criteria statistics for shifts");
  criteria->add_option("--family", family, "weight family");
  criteria->add_option("--p", p, "parameter for prop19 weights");
  criteria->add_option("--stat", stat, "hyper|super|hyper-simplified|super-simplified");
  criteria->add_option("--kmax", kmax, "largest window center k");
  criteria->add_option("--horizon", horizon, "largest n");
  criteria->add_option("--tol-log2", tol_log2, "consistency tolerance, log2 scale");
  criteria->add_option("--out", out, "report path (stdout if empty)");
  criteria->add_option("--csv", csv, "series CSV path");

  std::string cert_kind = "shift-cert", cert_name = "lnlog", norms = "pow2", space = "banach";
  double exponent_s = 1.0, q = 2.0;
  auto* certify = app.add_subcommand("certify", "closure and shift certificates");
  certify->add_option("--kind", cert_kind, "shift-cert|closedness|divergence");
  certify->add_option("--family", family, "weight family (shift-cert)");
  certify->add_option("--p", p, "exponent p");
  certify->add_option("--cert", cert_name, "lnlog|prop18|prop19");
  certify->add_option("--horizon", horizon, "series horizon");
  certify->add_option("--norms", norms, "pow2|sqrt|poly (closedness)");
  certify->add_option("--exponent", exponent_s, "s for poly norms / power coefficients");
  certify->add_option("--space", space, "hilbert|lp|banach (closedness)");
  certify->add_option("--q", q, "dual exponent (divergence)");
  certify->add_option("--out", out, "report path (stdout if empty)");
  certify->add_option("--csv", csv, "series CSV path");

  int stages = 3, h_count = 4;
  double delta_log2 = 1.0;
  std::string prefix = "measure_run";
  auto* measure = app.add_subcommand("measure", "staged circle-measure construction");
  measure->add_option("--stages", stages, "number of stages");
  measure->add_option("--h-count", h_count, "test-function count");
  measure->add_option("--delta-log2", delta_log2, "delta_n = 2^{-delta_log2 * n}");
  measure->add_option("--out-prefix", prefix, "output file prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (criteria->parsed())
      return run_criteria(family, p, stat, kmax, horizon, tol_log2, out, csv);
    if (certify->parsed()) {
      if (cert_kind == "shift-cert")
        return run_certify_shift(family, p, cert_name, horizon, out, csv);
      if (cert_kind == "closedness")
        return run_certify_closedness(norms, exponent_s, space, p, horizon, out);
      if (cert_kind == "divergence")
        return run_certify_divergence(exponent_s, q, horizon, out);
      std::cerr << "unknown --kind " << cert_kind << "\n";
      return 2;
    }
    if (measure->parsed())
      return run_measure(stages, h_count, delta_log2, prefix);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const internal_check_error& e) {
    std::cerr << "internal check violation: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
