// regrobust: robustness checking, learning and certification of register
// automata from the command line.
//
// Exit codes: 0 success, 1 negative outcome (non-robust, refine, budget
// exhausted), 2 usage or input error, 3 internal error. Diagnostics go to
// stderr as one JSON object per line.

#include <omp.h>
#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "regrobust/benchmarks.hpp"
#include "regrobust/certifier.hpp"
#include "regrobust/localsearch.hpp"
#include "regrobust/metrics.hpp"
#include "regrobust/robustness.hpp"
#include "regrobust/samples.hpp"
#include "regrobust/serialize.hpp"
#include "regrobust/smt.hpp"

using namespace regrobust;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string sha256(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

// What a command produced: the main output, where it goes, and the exit code.
struct Output {
  std::string text;
  int code = 0;
};

struct Common {
  std::uint64_t seed = 0;
  std::string out;  // file, empty = stdout
};

Rational rational_arg(const std::string& s, const char* name) {
  try {
    return Rational::parse(s);
  } catch (const ParseError& e) {
    throw InvalidArgument(std::string("--") + name + ": " + e.what());
  }
}

std::vector<Rational> rational_list(const std::string& s) {
  if (s.empty()) return {};
  return parse_sequence(s);
}

SequenceSource markov_source(const std::string& bench, double noise, int max_len, std::uint64_t seed) {
  auto sampler = std::make_shared<MarkovSampler>(build_sampler(parse_benchmark(bench), noise, max_len, seed));
  return [sampler] { return sampler->draw().seq; };
}

// --- robust ------------------------------------------------------------------

struct RobustArgs {
  std::string dra, metric = "last_letter", v, delta, side = "auto";
  std::size_t max_vertices = 2'000'000;
};

Output cmd_robust(const RobustArgs& a) {
  RobustnessQuery q{load_dra(a.dra), parse_sequence(a.v), build_metric(parse_metric(a.metric)),
                    rational_arg(a.delta, "delta"), parse_side(a.side), a.max_vertices};
  const RobustnessVerdict v = check_robustness(q);
  return {verdict_json(v).dump(2) + "\n", v.robust ? 0 : 1};
}

// --- distance ----------------------------------------------------------------

struct DistanceArgs {
  std::string metric = "edit", v, w;
};

Output cmd_distance(const DistanceArgs& a) {
  const Raa raa = build_metric(parse_metric(a.metric));
  return {evaluate(raa, parse_sequence(a.v), parse_sequence(a.w)).str() + "\n", 0};
}

// --- learn -------------------------------------------------------------------

struct LearnArgs {
  std::string method = "localsearch", samples;
  // smt
  int max_states = 4, max_registers = 2, max_constants = 2;
  double timeout = 30, budget = 300;
  std::string solver;
  // localsearch
  int states = 2, registers = 1, max_cells = 3, restarts = 5;
  std::string constants;
  std::size_t max_iter = 100000;
  double max_time = 60;
};

LearnerOptions learner_options(const LearnArgs& a, std::uint64_t seed) {
  LearnerOptions lo;
  if (a.method == "smt") lo.method = LearnerOptions::Method::Smt;
  else if (a.method == "localsearch") lo.method = LearnerOptions::Method::LocalSearch;
  else throw InvalidArgument("--method must be smt or localsearch");
  lo.smt.max_states = a.max_states;
  lo.smt.max_registers = a.max_registers;
  lo.smt.max_constants = a.max_constants;
  lo.smt.solver.timeout = a.timeout;
  lo.smt.solver.command = a.solver;
  lo.smt.budget = a.budget;
  if (!a.constants.empty() && lo.method == LearnerOptions::Method::Smt) lo.smt.constant_pool = rational_list(a.constants);
  lo.states = a.states;
  lo.registers = a.registers;
  lo.constants = rational_list(a.constants);
  lo.max_cells = a.max_cells;
  lo.search.max_iteration = a.max_iter;
  lo.search.max_time = a.max_time;
  lo.search.restarts = a.restarts;
  lo.search.seed = seed;
  return lo;
}

Output cmd_learn(const LearnArgs& a, std::uint64_t seed) {
  const SampleSet s = load_samples(a.samples);
  const LearnerOptions lo = learner_options(a, seed);
  json out;
  if (lo.method == LearnerOptions::Method::Smt) {
    const SynthesisResult r = synthesize(s, lo.smt);
    out = {{"dra", to_json(r.dra)},
           {"shape", {{"states", r.params.n}, {"registers", r.params.k}, {"constants", r.params.c}}},
           {"candidates", r.candidates},
           {"blocking_clauses", r.blocking_clauses},
           {"score", score(r.dra, s).str()}};
  } else {
    const SearchSpace space = SearchSpace::build(lo.states, lo.registers, lo.constants, lo.max_cells);
    const LocalSearchResult r = local_search(s, space, lo.search);
    json climbs = json::array();
    for (const auto& c : r.climbs) climbs.push_back({{"score", c.score.str()}, {"iterations", c.iterations}});
    out = {{"dra", to_json(r.dra)}, {"score", r.score.str()}, {"climbs", climbs}};
  }
  return {out.dump(2) + "\n", 0};
}

// --- certify / extract -------------------------------------------------------

struct CertArgs {
  std::string oracle, sampler, metric = "last_letter", delta = "1";
  double noise = 0.5, p = 0.95, epsilon = 0.05, gamma = 0.05, eta = 0.05, timeout = 10;
  double eta_plus = -1, eta_minus = -1;  // default eta / 2
  int max_len = 10;
  bool stability_dedup = false;
  std::size_t max_vertices = 2'000'000;
};

CertificationParams cert_params(const CertArgs& a) {
  CertificationParams p;
  p.p = a.p;
  p.epsilon = a.epsilon;
  p.gamma = a.gamma;
  p.delta = rational_arg(a.delta, "delta");
  p.eta = a.eta;
  p.eta_plus = a.eta_plus < 0 ? a.eta / 2 : a.eta_plus;
  p.eta_minus = a.eta_minus < 0 ? a.eta / 2 : a.eta_minus;
  p.stability_dedup = a.stability_dedup;
  p.max_vertices = a.max_vertices;
  p.validate();
  return p;
}

Output cmd_certify(const CertArgs& a, const std::string& dra_path, std::uint64_t seed) {
  const CertificationParams params = cert_params(a);
  auto oracle = make_oracle(a.oracle, ProtocolOptions{a.timeout});
  const CertResult r = run_certification(*oracle, load_dra(dra_path), markov_source(a.sampler, a.noise, a.max_len, seed),
                                         build_metric(parse_metric(a.metric)), params);
  return {cert_json(r).dump(2) + "\n", r.outcome == CertOutcome::Accept ? 0 : 1};
}

struct ExtractArgs {
  std::size_t seed_samples = 200;
  int max_rounds = 10;
  double budget = 600;
};

Output cmd_extract(const CertArgs& a, const LearnArgs& l, const ExtractArgs& e, std::uint64_t seed) {
  const CertificationParams params = cert_params(a);
  auto oracle = make_oracle(a.oracle, ProtocolOptions{a.timeout});
  ExtractionOptions opts{e.seed_samples, e.max_rounds, e.budget};
  try {
    const ExtractionResult r = extraction_loop(learner_options(l, seed), *oracle,
                                               markov_source(a.sampler, a.noise, a.max_len, seed),
                                               build_metric(parse_metric(a.metric)), params, opts);
    json out{{"dra", to_json(r.dra)},      {"certification", cert_json(r.cert)},
             {"rounds", r.rounds},         {"refinements", r.refinements},
             {"samples", r.samples.size()}, {"log", r.log}};
    return {out.dump(2) + "\n", r.cert.outcome == CertOutcome::Accept ? 0 : 1};
  } catch (const ExtractionBudgetExhausted& ex) {
    json out{{"outcome", "budget-exhausted"}, {"message", ex.what()}};
    if (ex.last_hypothesis) out["last_hypothesis"] = to_json(*ex.last_hypothesis);
    return {out.dump(2) + "\n", 1};
  }
}

// --- sample / eval / fixtures ------------------------------------------------

struct SampleArgs {
  std::string benchmark;
  std::size_t pos = 100, neg = 100;
  int max_len = 10;
  double noise = 0.5;
};

Output cmd_sample(const SampleArgs& a, std::uint64_t seed) {
  MarkovSampler sampler = build_sampler(parse_benchmark(a.benchmark), a.noise, a.max_len, seed);
  const LabelledDataset d = generate(sampler, a.pos, a.neg);
  std::ostringstream os;
  for (const auto& r : d.records)
    os << json{{"seq", sequence_to_json(r.seq)}, {"label", r.accepted ? 1 : 0}}.dump() << "\n";
  return {os.str(), 0};
}

Output cmd_eval(const std::string& dra, const std::string& samples) {
  const Dra a = load_dra(dra);
  const SampleSet s = load_samples(samples);
  json out{{"score", score(a, s).str()}, {"correct", correct_serial(a, s)}, {"total", s.size()}};
  return {out.dump() + "\n", 0};
}

Output cmd_fixtures(const std::string& dir) {
  std::filesystem::create_directories(dir);
  json written = json::array();
  for (auto id : all_benchmarks()) {
    std::string name = benchmark_name(id);
    for (auto& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    const std::string path = dir + "/" + name + ".json";
    write_file(path, fixture_json(id));
    written.push_back(path);
  }
  return {written.dump(2) + "\n", 0};
}

// --- driver ------------------------------------------------------------------

// Help, version or a command-line error: print text and exit with code.
struct CliExit {
  int code;
  std::string text;
};

struct Run {
  Output output;
  std::string command;
  std::string config;  // resolved options as TOML
  std::uint64_t seed = 0;
  std::string out_path;
};

Run dispatch(const std::vector<std::string>& args) {
  CLI::App app{"regrobust: register-automata robustness and extraction"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "TOML file mirroring the flags; flags take precedence");
  app.require_subcommand(1);
  int jobs = 0;
  app.add_option("--jobs", jobs, "threads for restarts and sample scoring (0 = all)");

  std::map<std::string, Common> commons;
  auto add_common = [&](CLI::App* sub, std::uint64_t default_seed) {
    Common& c = commons[sub->get_name()];
    c.seed = default_seed;
    sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
    sub->add_option("--out", c.out, "write the result here instead of stdout");
  };

  RobustArgs ra;
  auto* robust = app.add_subcommand("robust", "check delta-robustness of a DRA at a sequence");
  robust->add_option("--dra", ra.dra, "automaton JSON")->required();
  robust->add_option("--metric", ra.metric)->capture_default_str();
  robust->add_option("--v", ra.v, "sequence, e.g. \"0,-1,5\"")->required();
  robust->add_option("--delta", ra.delta, "radius (decimal or n/d)")->required();
  robust->add_option("--side", ra.side, "auto, flip-to-reject or flip-to-accept")->capture_default_str();
  robust->add_option("--max-vertices", ra.max_vertices)->capture_default_str();

  DistanceArgs da;
  auto* distance = app.add_subcommand("distance", "evaluate a metric automaton on two sequences");
  distance->add_option("--metric", da.metric)->capture_default_str();
  distance->add_option("--v", da.v)->required();
  distance->add_option("--w", da.w)->required();

  LearnArgs la;
  auto add_learner = [&](CLI::App* sub) {
    sub->add_option("--max-states", la.max_states)->capture_default_str();
    sub->add_option("--max-registers", la.max_registers)->capture_default_str();
    sub->add_option("--max-constants", la.max_constants)->capture_default_str();
    sub->add_option("--timeout", la.timeout, "seconds per check-sat")->capture_default_str();
    sub->add_option("--solver", la.solver, "SMT-LIB v2 solver command (default $REGROBUST_SOLVER or z3)");
    sub->add_option("--states", la.states)->capture_default_str();
    sub->add_option("--registers", la.registers)->capture_default_str();
    sub->add_option("--constants", la.constants, "constant pool, e.g. \"0,5\"");
    sub->add_option("--max-cells", la.max_cells)->capture_default_str();
    sub->add_option("--max-iter", la.max_iter)->capture_default_str();
    sub->add_option("--max-time", la.max_time, "seconds per climb")->capture_default_str();
    sub->add_option("--restarts", la.restarts)->capture_default_str();
  };
  auto* learn = app.add_subcommand("learn", "learn a DRA consistent with a sample set");
  learn->add_option("--method", la.method, "smt or localsearch")->capture_default_str();
  learn->add_option("--samples", la.samples, "JSON-lines sample set")->required();
  learn->add_option("--budget", la.budget, "seconds, smt only")->capture_default_str();
  add_learner(learn);

  CertArgs ca;
  std::string cert_dra;
  auto add_cert = [&](CLI::App* sub) {
    sub->add_option("--oracle", ca.oracle, "dra:FILE, tcp:HOST:PORT or a command")->required();
    sub->add_option("--sampler", ca.sampler, "benchmark whose Markov sampler draws sequences")->required();
    sub->add_option("--noise", ca.noise)->capture_default_str();
    sub->add_option("--max-len", ca.max_len)->capture_default_str();
    sub->add_option("--metric", ca.metric)->capture_default_str();
    sub->add_option("--delta", ca.delta)->capture_default_str();
    sub->add_option("--p", ca.p)->capture_default_str();
    sub->add_option("--epsilon", ca.epsilon)->capture_default_str();
    sub->add_option("--gamma", ca.gamma)->capture_default_str();
    sub->add_option("--eta", ca.eta)->capture_default_str();
    sub->add_option("--eta-plus", ca.eta_plus, "default eta/2");
    sub->add_option("--eta-minus", ca.eta_minus, "default eta/2");
    sub->add_flag("--stability-dedup", ca.stability_dedup, "skip sequences already found stable");
    sub->add_option("--oracle-timeout", ca.timeout, "seconds per oracle answer")->capture_default_str();
    sub->add_option("--max-vertices", ca.max_vertices)->capture_default_str();
  };
  auto* certify = app.add_subcommand("certify", "certify a DRA against an oracle");
  certify->add_option("--dra", cert_dra)->required();
  add_cert(certify);

  ExtractArgs ea;
  auto* extract = app.add_subcommand("extract", "learn and certify until accepted or non-robust");
  add_cert(extract);
  extract->add_option("--learner", la.method, "smt or localsearch")->capture_default_str();
  extract->add_option("--seed-samples", ea.seed_samples)->capture_default_str();
  extract->add_option("--max-rounds", ea.max_rounds)->capture_default_str();
  extract->add_option("--budget", ea.budget, "seconds, wall clock")->capture_default_str();
  add_learner(extract);

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "draw a labelled sample set from a benchmark");
  sample->add_option("--benchmark", sa.benchmark)->required();
  sample->add_option("--pos", sa.pos)->capture_default_str();
  sample->add_option("--neg", sa.neg)->capture_default_str();
  sample->add_option("--max-len", sa.max_len)->capture_default_str();
  sample->add_option("--noise", sa.noise)->capture_default_str();

  std::string eval_dra, eval_samples;
  auto* eval = app.add_subcommand("eval", "score a DRA on a sample set");
  eval->add_option("--dra", eval_dra)->required();
  eval->add_option("--samples", eval_samples)->required();

  std::string fixture_dir = "benchmarks";
  auto* fixtures = app.add_subcommand("fixtures", "write the benchmark automata as JSON");
  fixtures->add_option("--out-dir", fixture_dir)->capture_default_str();

  add_common(robust, 0);
  add_common(distance, 0);
  add_common(learn, 42);
  add_common(certify, 7);
  add_common(extract, 7);
  add_common(sample, 1);
  add_common(eval, 0);
  add_common(fixtures, 0);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    const int code = app.exit(e, out, err);
    throw CliExit{code == 0 ? 0 : 2, code == 0 ? out.str() : err.str()};
  }
  if (jobs > 0) omp_set_num_threads(jobs);

  auto* sub = app.get_subcommands().front();
  const Common& common = commons[sub->get_name()];
  Run run;
  run.seed = common.seed;
  run.out_path = common.out;
  run.config = sub->config_to_str(true, false);
  run.command = sub->get_name();
  if (sub == robust) run.output = cmd_robust(ra);
  else if (sub == distance) run.output = cmd_distance(da);
  else if (sub == learn) run.output = cmd_learn(la, common.seed);
  else if (sub == certify) run.output = cmd_certify(ca, cert_dra, common.seed);
  else if (sub == extract) run.output = cmd_extract(ca, la, ea, common.seed);
  else if (sub == sample) run.output = cmd_sample(sa, common.seed);
  else if (sub == eval) run.output = cmd_eval(eval_dra, eval_samples);
  else run.output = cmd_fixtures(fixture_dir);
  return run;
}

void diagnostic(const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << std::endl;
}

json manifest_json(const Run& run, const std::vector<std::string>& args, double seconds) {
  json versions{{"regrobust", kVersion}, {"cxx", __VERSION__}};
  return {{"command", run.command},
          {"argv", args},
          {"config", run.config},
          {"seed", run.seed},
          {"versions", versions},
          {"timings", {{"wall_seconds", seconds}}},
          {"exit_code", run.output.code},
          {"output_sha256", sha256(run.output.text)}};
}

int execute(const std::vector<std::string>& args, const std::string& manifest_path) {
  const auto start = std::chrono::steady_clock::now();
  Run run = dispatch(args);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (run.out_path.empty()) std::cout << run.output.text << std::flush;
  else write_file(run.out_path, run.output.text);
  const json m = manifest_json(run, args, seconds);
  if (manifest_path.empty()) std::cerr << json{{"manifest", m}}.dump() << std::endl;
  else write_file(manifest_path, m.dump(2) + "\n");
  return run.output.code;
}

// Re-runs the recorded arguments and compares the output digest.
int replay(const std::string& manifest_path) {
  const json m = parse_json_text(read_file(manifest_path));
  auto args = m.at("argv").get<std::vector<std::string>>();
  // The recorded config replaces the original file, which may have changed.
  const std::string config_path = manifest_path + ".config.toml";
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") {
      write_file(config_path, "[" + m.at("command").get<std::string>() + "]\n" + m.at("config").get<std::string>());
      args[i + 1] = config_path;
    }
  Run run = dispatch(args);
  const std::string digest = sha256(run.output.text);
  const bool same = digest == m.at("output_sha256").get<std::string>() && run.output.code == m.at("exit_code");
  std::cout << run.output.text << std::flush;
  std::cerr << json{{"replay", same ? "identical" : "different"}, {"output_sha256", digest}}.dump() << std::endl;
  return same ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  // --manifest FILE and "replay FILE" are handled here so that they are not
  // part of the recorded arguments.
  std::string manifest_path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--manifest") {
      manifest_path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
  try {
    if (!args.empty() && args[0] == "replay") {
      if (args.size() != 2) {
        diagnostic("usage", "regrobust replay MANIFEST");
        return 2;
      }
      return replay(args[1]);
    }
    return execute(args, manifest_path);
  } catch (const CliExit& e) {
    if (e.code == 0) std::cout << e.text;
    else diagnostic("usage", e.text);
    return e.code;
  } catch (const InvalidArgument& e) {
    diagnostic("usage", e.what());
    return 2;
  } catch (const ParseError& e) {
    diagnostic("input", e.what());
    return 2;
  } catch (const BudgetExhausted& e) {
    diagnostic("budget", e.what());
    return 1;
  } catch (const Error& e) {
    diagnostic("internal", e.what());
    return 3;
  } catch (const std::exception& e) {
    diagnostic("internal", e.what());
    return 3;
  }
}
