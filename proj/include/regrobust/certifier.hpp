#pragma once

// Statistical certification of a DRA against a black-box oracle: a
// Hoeffding-sized agreement test that also checks delta-stability of the DRA
// at every agreed sample, and the extraction loop that alternates learning
// and certification.

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cstdint>
#include <functional>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "regrobust/errors.hpp"
#include "regrobust/localsearch.hpp"
#include "regrobust/oracle.hpp"
#include "regrobust/raa.hpp"
#include "regrobust/samples.hpp"
#include "regrobust/smt.hpp"

namespace regrobust {

using Decimal = boost::multiprecision::cpp_dec_float_50;

// ceil(ln(1/epsilon) / (2 gamma^2)), evaluated with 50 digits. Doubles are
// read as their shortest decimal form, so 0.05 means exactly 5/100.
std::int64_t sample_size(const Decimal& epsilon, const Decimal& gamma);
std::int64_t sample_size(double epsilon, double gamma);
// floor(n (1 - p))
std::int64_t d_max(std::int64_t n, const Decimal& p);
std::int64_t d_max(std::int64_t n, double p);

struct AcceptBounds {
  std::optional<double> lambda_ub;       // 1 - eta^(1/n), absent for n = 0
  std::optional<double> theta_plus_ub;   // 1 - eta_plus^(1/m_plus), absent for m_plus = 0
  std::optional<double> theta_minus_ub;  // 1 - eta_minus^(1/m_minus), absent for m_minus = 0
};

AcceptBounds accept_bounds(std::int64_t n, std::int64_t m_plus, std::int64_t m_minus, double eta,
                           double eta_plus, double eta_minus);
inline AcceptBounds accept_bounds(std::int64_t n, std::int64_t m_plus, std::int64_t m_minus, double eta) {
  return accept_bounds(n, m_plus, m_minus, eta, eta / 2, eta / 2);
}

struct CertificationParams {
  double p = 0.95;        // target agreement
  double epsilon = 0.05;  // error probability
  double gamma = 0.05;    // tolerance, gamma <= 1 - p
  Rational delta = Rational(1);
  double eta = 0.05;
  double eta_plus = 0.025;  // eta_plus + eta_minus = eta
  double eta_minus = 0.025;
  bool stability_dedup = false;  // skip sequences already found stable in this run
  std::size_t max_vertices = 2'000'000;
  void validate() const;  // InvalidArgument
};

struct StabilityResult {
  bool stable = true;
  std::optional<Sequence> flip_witness;  // verified: label flips, distance < delta
  Rational distance;
};

StabilityResult stability_check(const Dra& dra, const Sequence& w, const Raa& metric, const Rational& delta,
                                std::size_t max_vertices = 2'000'000);

// Draws one sequence; may throw SamplerExhausted.
using SequenceSource = std::function<Sequence()>;

enum class CertOutcome { Accept, Refine, NonRobust };
const char* outcome_str(CertOutcome o);

struct LabelledSequence {
  Sequence seq;
  bool label = false;  // the oracle's label
};

struct CertResult {
  CertOutcome outcome = CertOutcome::Accept;
  std::int64_t n = 0;
  std::int64_t d_max = 0;
  std::size_t processed = 0;
  std::size_t disagreements = 0;
  std::int64_t m_plus = 0;  // agreed positives
  std::int64_t m_minus = 0;
  // Accept
  double agreement_lb = 0;
  AcceptBounds bounds;
  // Refine
  std::vector<LabelledSequence> counterexamples;
  // NonRobust
  Sequence w;
  Sequence cex;
  Rational distance;
  std::size_t oracle_queries = 0;
  nlohmann::json transcript = nlohmann::json::array();  // one entry per processed sample
};

nlohmann::json cert_json(const CertResult& r);

// Samples are processed strictly in draw order; the first refinement or
// non-robustness event ends the run.
CertResult run_certification(Oracle& oracle, const Dra& dra, const SequenceSource& sampler, const Raa& metric,
                             const CertificationParams& params);

struct LearnerOptions {
  enum class Method { Smt, LocalSearch };
  Method method = Method::LocalSearch;
  SynthesisOptions smt;
  int states = 2;
  int registers = 1;
  std::vector<Rational> constants;
  int max_cells = 3;
  SearchConfig search;
};

Dra learn(const SampleSet& s, const LearnerOptions& opts);

struct ExtractionOptions {
  std::size_t seed_samples = 200;  // draws labelled by the oracle before the first hypothesis
  int max_rounds = 10;             // certification runs
  double budget = 600;             // seconds, wall clock
};

struct ExtractionResult {
  Dra dra;
  CertResult cert;  // Accept or NonRobust
  int rounds = 0;
  int refinements = 0;
  SampleSet samples;
  std::vector<std::string> log;
};

struct ExtractionBudgetExhausted : BudgetExhausted {
  ExtractionBudgetExhausted(const std::string& what, std::optional<Dra> last)
      : BudgetExhausted(what), last_hypothesis(std::move(last)) {}
  std::optional<Dra> last_hypothesis;
};

ExtractionResult extraction_loop(const LearnerOptions& learner, Oracle& oracle, const SequenceSource& sampler,
                                 const Raa& metric, const CertificationParams& params,
                                 const ExtractionOptions& opts);

}  // namespace regrobust
