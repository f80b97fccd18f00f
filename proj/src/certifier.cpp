#include "regrobust/certifier.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <set>

#include "regrobust/robustness.hpp"
#include "regrobust/serialize.hpp"

namespace regrobust {

namespace {

Decimal to_decimal(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return Decimal(std::string(buf, res.ptr));
}

// The formulas are evaluated to 50 digits; a result within 1e-40 of an
// integer is that integer (0.05 * 600 must floor to 30, not 29).
Decimal snap(const Decimal& x) {
  const Decimal r = boost::multiprecision::round(x);
  if (boost::multiprecision::abs(x - r) < Decimal("1e-40")) return r;
  return x;
}

void check_open_unit(double x, const char* name) {
  if (!(x > 0 && x < 1)) throw InvalidArgument(std::string(name) + " must lie in (0, 1)");
}

double bound(double eta, std::int64_t m) {
  // 1 - eta^(1/m) without cancellation
  return -std::expm1(std::log(eta) / static_cast<double>(m));
}

}  // namespace

std::int64_t sample_size(const Decimal& epsilon, const Decimal& gamma) {
  if (!(epsilon > 0 && epsilon < 1) || !(gamma > 0 && gamma < 1))
    throw InvalidArgument("sample_size needs epsilon and gamma in (0, 1)");
  const Decimal x = snap(boost::multiprecision::log(1 / epsilon) / (2 * gamma * gamma));
  return boost::multiprecision::ceil(x).convert_to<std::int64_t>();
}

std::int64_t sample_size(double epsilon, double gamma) {
  return sample_size(to_decimal(epsilon), to_decimal(gamma));
}

std::int64_t d_max(std::int64_t n, const Decimal& p) {
  if (!(p >= 0 && p <= 1)) throw InvalidArgument("p must lie in [0, 1]");
  if (n < 0) throw InvalidArgument("n must be non-negative");
  const Decimal x = snap(Decimal(n) * (1 - p));
  return boost::multiprecision::floor(x).convert_to<std::int64_t>();
}

std::int64_t d_max(std::int64_t n, double p) { return d_max(n, to_decimal(p)); }

AcceptBounds accept_bounds(std::int64_t n, std::int64_t m_plus, std::int64_t m_minus, double eta,
                           double eta_plus, double eta_minus) {
  for (double e : {eta, eta_plus, eta_minus})
    if (!(e > 0 && e <= 1)) throw InvalidArgument("confidence parameters must lie in (0, 1]");
  AcceptBounds b;
  if (n > 0) b.lambda_ub = bound(eta, n);
  if (m_plus > 0) b.theta_plus_ub = bound(eta_plus, m_plus);
  if (m_minus > 0) b.theta_minus_ub = bound(eta_minus, m_minus);
  return b;
}

void CertificationParams::validate() const {
  check_open_unit(p, "p");
  check_open_unit(epsilon, "epsilon");
  check_open_unit(gamma, "gamma");
  check_open_unit(eta, "eta");
  check_open_unit(eta_plus, "eta_plus");
  check_open_unit(eta_minus, "eta_minus");
  // gamma = 1 - p is allowed (the default 0.95 / 0.05 sits on the boundary)
  if (gamma > 1 - p + 1e-12) throw InvalidArgument("gamma must not exceed 1 - p");
  if (std::abs(eta_plus + eta_minus - eta) > 1e-12) throw InvalidArgument("eta_plus + eta_minus must equal eta");
  if (delta.sign() <= 0) throw InvalidArgument("delta must be positive");
}

StabilityResult stability_check(const Dra& dra, const Sequence& w, const Raa& metric, const Rational& delta,
                                std::size_t max_vertices) {
  RobustnessQuery q{dra, w, metric, delta, Side::Auto, max_vertices};
  const RobustnessVerdict v = check_robustness(q);
  StabilityResult r;
  if (v.robust) return r;
  if (!v.witness) throw Error("non-robust verdict without a witness");
  const Sequence& cex = v.witness->w;
  const ExtendedCost d = evaluate(metric, w, cex);
  if (accepts(dra, cex) == accepts(dra, w) || !d.finite() || !(d.value() < delta))
    throw Error("flip witness failed re-verification");
  r.stable = false;
  r.flip_witness = cex;
  r.distance = d.value();
  return r;
}

const char* outcome_str(CertOutcome o) {
  switch (o) {
    case CertOutcome::Accept: return "accept";
    case CertOutcome::Refine: return "refine";
    case CertOutcome::NonRobust: return "non-robust";
  }
  return "?";
}

namespace {

std::string decimal12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json optional_bound(const std::optional<double>& b) { return b ? json(decimal12(*b)) : json(nullptr); }

}  // namespace

json cert_json(const CertResult& r) {
  json j{{"outcome", outcome_str(r.outcome)},
         {"n", r.n},
         {"d_max", r.d_max},
         {"processed", r.processed},
         {"disagreements", r.disagreements},
         {"m_plus", r.m_plus},
         {"m_minus", r.m_minus},
         {"oracle_queries", r.oracle_queries}};
  switch (r.outcome) {
    case CertOutcome::Accept:
      j["agreement_lb"] = decimal12(r.agreement_lb);
      j["lambda_ub"] = optional_bound(r.bounds.lambda_ub);
      j["theta_plus_ub"] = optional_bound(r.bounds.theta_plus_ub);
      j["theta_minus_ub"] = optional_bound(r.bounds.theta_minus_ub);
      break;
    case CertOutcome::Refine: {
      json cexs = json::array();
      for (const auto& c : r.counterexamples) cexs.push_back({{"seq", sequence_to_json(c.seq)}, {"label", c.label ? 1 : 0}});
      j["counterexamples"] = cexs;
      break;
    }
    case CertOutcome::NonRobust:
      j["w"] = sequence_to_json(r.w);
      j["cex"] = sequence_to_json(r.cex);
      j["distance"] = r.distance.str();
      break;
  }
  j["transcript"] = r.transcript;
  return j;
}

CertResult run_certification(Oracle& oracle, const Dra& dra, const SequenceSource& sampler, const Raa& metric,
                             const CertificationParams& params) {
  params.validate();
  CertResult r;
  r.n = sample_size(params.epsilon, params.gamma);
  r.d_max = d_max(r.n, params.p);
  const std::size_t queries_before = oracle.queries();
  std::vector<LabelledSequence> disagreeing;
  std::set<Sequence> known_stable;

  auto finish = [&](CertOutcome o) {
    r.outcome = o;
    r.oracle_queries = oracle.queries() - queries_before;
    return r;
  };

  for (std::int64_t i = 0; i < r.n; ++i) {
    const Sequence w = sampler();
    const bool nl = oracle.label(w);
    const bool al = accepts(dra, w);
    ++r.processed;
    json entry{{"i", i}, {"seq", sequence_to_json(w)}, {"oracle", nl ? 1 : 0}, {"dra", al ? 1 : 0}};

    if (nl != al) {
      ++r.disagreements;
      disagreeing.push_back({w, nl});
      entry["event"] = "disagree";
      r.transcript.push_back(entry);
      if (static_cast<std::int64_t>(disagreeing.size()) > r.d_max) {
        r.counterexamples = std::move(disagreeing);
        return finish(CertOutcome::Refine);
      }
      continue;
    }

    (al ? r.m_plus : r.m_minus) += 1;
    if (params.stability_dedup && known_stable.count(w)) {
      entry["event"] = "stable-cached";
      r.transcript.push_back(entry);
      continue;
    }
    const StabilityResult st = stability_check(dra, w, metric, params.delta, params.max_vertices);
    if (st.stable) {
      if (params.stability_dedup) known_stable.insert(w);
      entry["event"] = "stable";
      r.transcript.push_back(entry);
      continue;
    }
    const Sequence& cex = *st.flip_witness;
    const bool ncex = oracle.label(cex);
    entry["cex"] = sequence_to_json(cex);
    entry["oracle_cex"] = ncex ? 1 : 0;
    if (ncex == nl) {
      // the oracle does not flip, so the hypothesis is wrong at cex
      entry["event"] = "spurious";
      r.transcript.push_back(entry);
      r.counterexamples = {{cex, ncex}};
      return finish(CertOutcome::Refine);
    }
    entry["event"] = "non-robust";
    r.transcript.push_back(entry);
    r.w = w;
    r.cex = cex;
    r.distance = st.distance;
    return finish(CertOutcome::NonRobust);
  }

  r.agreement_lb = params.p - params.gamma;
  r.bounds = accept_bounds(r.n, r.m_plus, r.m_minus, params.eta, params.eta_plus, params.eta_minus);
  return finish(CertOutcome::Accept);
}

Dra learn(const SampleSet& s, const LearnerOptions& opts) {
  if (opts.method == LearnerOptions::Method::Smt) return synthesize(s, opts.smt).dra;
  const SearchSpace space = SearchSpace::build(opts.states, opts.registers, opts.constants, opts.max_cells);
  return local_search(s, space, opts.search).dra;
}

namespace {

void add_sample(SampleSet& s, std::set<Sequence>& seen, const Sequence& w, bool label) {
  if (w.empty() || !seen.insert(w).second) return;
  (label ? s.positives : s.negatives).push_back(w);
}

}  // namespace

ExtractionResult extraction_loop(const LearnerOptions& learner, Oracle& oracle, const SequenceSource& sampler,
                                 const Raa& metric, const CertificationParams& params,
                                 const ExtractionOptions& opts) {
  params.validate();
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  auto remaining = [&] {
    return opts.budget - std::chrono::duration<double>(clock::now() - start).count();
  };
  std::optional<Dra> last;
  auto exhausted = [&](const std::string& why) { return ExtractionBudgetExhausted(why, last); };
  if (remaining() <= 0) throw exhausted("extraction budget exhausted before the first hypothesis");

  ExtractionResult res;
  std::set<Sequence> seen;
  for (std::size_t i = 0; i < opts.seed_samples; ++i) {
    const Sequence w = sampler();
    add_sample(res.samples, seen, w, oracle.label(w));
  }
  res.log.push_back("seed set: " + std::to_string(res.samples.positives.size()) + " positive, " +
                    std::to_string(res.samples.negatives.size()) + " negative");

  for (int round = 1; round <= opts.max_rounds; ++round) {
    if (remaining() <= 0) throw exhausted("extraction budget exhausted after " + std::to_string(round - 1) + " rounds");
    LearnerOptions lo = learner;
    lo.smt.budget = std::min(lo.smt.budget, remaining());
    lo.search.max_time = std::min(lo.search.max_time, remaining());
    Dra hyp = learn(res.samples, lo);
    last = hyp;
    if (remaining() <= 0) throw exhausted("extraction budget exhausted while learning");
    CertResult cert = run_certification(oracle, hyp, sampler, metric, params);
    res.rounds = round;
    res.log.push_back("round " + std::to_string(round) + ": " + outcome_str(cert.outcome) + " after " +
                      std::to_string(cert.processed) + " samples, score on " + std::to_string(res.samples.size()) +
                      " samples " + score(hyp, res.samples).str());
    if (cert.outcome != CertOutcome::Refine) {
      res.dra = std::move(hyp);
      res.cert = std::move(cert);
      return res;
    }
    ++res.refinements;
    for (const auto& c : cert.counterexamples) add_sample(res.samples, seen, c.seq, c.label);
  }
  throw exhausted("no accepted hypothesis within " + std::to_string(opts.max_rounds) + " rounds");
}

}  // namespace regrobust
