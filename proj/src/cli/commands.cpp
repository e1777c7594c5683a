#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "symcap/capopt.hpp"
#include "symcap/channels.hpp"
#include "symcap/cli.hpp"
#include "symcap/group_json.hpp"
#include "symcap/infocap.hpp"
#include "symcap/matrix_json.hpp"
#include "symcap/parallel.hpp"
#include "symcap/standard_symmetry.hpp"

namespace symcap::cli {

using nlohmann::json;

namespace {

constexpr int kDefaultProp1Samples = 100000;

struct Options {
  std::string config_path;
  std::string inline_config;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::string output;
  std::string format = "json";
  bool bits = false;
  unsigned threads = 0;
  std::string suite;  // verify only
};

struct Outcome {
  json result;
  int code = kOk;
  std::string summary;
  std::string csv;  // preformatted rows for verify; empty means flatten `result`
};

struct UsageError : Error {
  using Error::Error;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string matrix_text(const ComplexMatrix& m) {
  std::ostringstream os;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << "  [";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const Complex z = m(i, j);
      os << (j ? ", " : "") << num(std::abs(z.real()) < 5e-13 ? 0.0 : z.real());
      if (std::abs(z.imag()) >= 5e-13) os << (z.imag() < 0 ? "-" : "+") << num(std::abs(z.imag())) << "i";
    }
    os << "]\n";
  }
  return os.str();
}

std::string timestamp_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::uint64_t resolve_seed(const Options& opt, const json& cfg) {
  if (opt.seed) return *opt.seed;
  if (cfg.contains("seed")) return cfg.at("seed").get<std::uint64_t>();
  if (const char* env = std::getenv("SYMCAP_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw UsageError("SYMCAP_SEED must be an unsigned integer");
    return v;
  }
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

json load_config(const Options& opt) {
  json cfg = json::object();
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) throw UsageError("cannot open config '" + opt.config_path + "'");
    try {
      cfg = json::parse(in);
    } catch (const json::parse_error& e) {
      throw UsageError("config '" + opt.config_path + "' is not valid JSON: " + e.what());
    }
  }
  if (!opt.inline_config.empty()) {
    try {
      cfg.merge_patch(json::parse(opt.inline_config));
    } catch (const json::parse_error& e) {
      throw UsageError(std::string("--set is not valid JSON: ") + e.what());
    }
  }
  if (!cfg.is_object()) throw UsageError("config must be a JSON object");
  return cfg;
}

OptConfig opt_config(const json& cfg, std::uint64_t seed) {
  OptConfig o;
  o.seed = seed;
  if (cfg.contains("opt")) {
    const json& j = cfg.at("opt");
    o.n_saa_samples = j.value("n_saa_samples", o.n_saa_samples);
    o.n_eval_samples = j.value("n_eval_samples", o.n_eval_samples);
    o.max_iters = j.value("max_iters", o.max_iters);
    o.conv_tol = j.value("conv_tol", o.conv_tol);
    o.fixed_step = j.value("fixed_step", o.fixed_step);
    const std::string rule = j.value("step_rule", std::string("backtracking"));
    if (rule == "fixed") {
      o.step_rule = StepRule::kFixed;
    } else if (rule != "backtracking") {
      throw UsageError("step_rule must be \"backtracking\" or \"fixed\"");
    }
  }
  return o;
}

const json& require_key(const json& cfg, const char* key) {
  if (!cfg.contains(key)) throw UsageError(std::string("config needs \"") + key + "\"");
  return cfg.at(key);
}

void flatten(const json& j, const std::string& prefix, std::ostringstream& os) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
    }
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), os);
  } else {
    std::string value = j.is_string() ? j.get<std::string>() : j.dump();
    if (value.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : value) {
        if (c == '"') quoted += '"';
        quoted += c;
      }
      value = quoted + "\"";
    }
    os << prefix << ',' << value << '\n';
  }
}

// ---------------------------------------------------------------------------------------------

Outcome cmd_capacity(const json& cfg, const Options& opt, std::uint64_t seed, double unit) {
  const ChannelModel model = channel_from_json(require_key(cfg, "channel"));
  const SymmetryGroup g = cfg.contains("group") ? group_from_json(cfg.at("group")) : known_symmetry_group(model);
  OptConfig o = opt_config(cfg, seed);
  if (opt.samples) o.n_saa_samples = *opt.samples;
  const CapacityResult r = optimize_capacity(model, g, o);

  Outcome out;
  out.result = to_json(r, unit);
  out.result["channel"] = channel_to_json(model);
  out.result["group"] = group_to_json(g);
  out.code = r.converged ? kOk : kNotConverged;
  std::ostringstream s;
  const char* u = opt.bits ? "bits" : "nats";
  s << "capacity = " << num(r.capacity.value * unit) << " +- " << num(r.capacity.std_error * unit) << " "
    << u << " (objective " << num(r.saa_value * unit) << ", " << r.iterations << " iterations"
    << (r.converged ? "" : ", NOT converged") << ")\n";
  s << "reduced set: " << r.reduced_set.describe() << "\n";
  s << "q_star =\n" << matrix_text(r.q_star.matrix());
  out.summary = s.str();
  return out;
}

Outcome cmd_average(const json& cfg) {
  const SymmetryGroup g = group_from_json(require_key(cfg, "group"));
  const ComplexMatrix a = matrix_from_json(require_key(cfg, "matrix"));
  const ComplexMatrix avg = average(g, a);
  Outcome out;
  out.result["group"] = group_to_json(g);
  out.result["average"] = matrix_to_json(avg);
  std::ostringstream s;
  s << "A_G(A) =\n" << matrix_text(avg);
  try {
    const ReducedSet set = averaged_set(g);
    out.result["reduced_set"] = reduced_set_to_json(set);
    s << "reduced set: " << set.describe() << "\n";
  } catch (const Error& e) {
    out.result["reduced_set"] = nullptr;
    out.result["reduced_set_error"] = e.what();
    s << "reduced set: unavailable (" << e.what() << ")\n";
  }
  out.summary = s.str();
  return out;
}

Outcome cmd_verify(const json& cfg, const Options& opt, std::uint64_t seed, double unit) {
  static const std::vector<std::string> kAll = {"prop1",       "thm1b",       "corollary1",
                                                "corollary2",  "corollary3",  "corollary4",
                                                "corollary5",  "corollary6",  "sec5"};
  std::vector<std::string> suites;
  if (opt.suite == "all") {
    suites = kAll;
  } else if (std::find(kAll.begin(), kAll.end(), opt.suite) != kAll.end()) {
    suites = {opt.suite};
  } else {
    throw UsageError("unknown suite '" + opt.suite + "' (expected prop1, thm1b, corollary1..6, sec5 or all)");
  }
  OptConfig o = opt_config(cfg, seed);
  const int prop1_n = opt.samples.value_or(cfg.value("prop1_samples", kDefaultProp1Samples));
  if (opt.samples) o.n_eval_samples = *opt.samples;
  const int inclusion_q = cfg.value("inclusion_samples", 50);

  Outcome out;
  json reports = json::array();
  std::ostringstream s, csv;
  csv << kCsvHeader << '\n';
  bool all_pass = true;
  for (const auto& name : suites) {
    VerificationReport r;
    if (name == "prop1") {
      r = run_prop1_suite(o, prop1_n);
    } else if (name == "thm1b") {
      r = run_inclusion_suite(o, inclusion_q);
    } else if (name == "sec5") {
      r = run_section_five_suite(o);
    } else {
      r = run_corollary_suite(std::stoi(name.substr(9)), o);
    }
    all_pass = all_pass && r.pass();
    reports.push_back(to_json(r, unit));
    csv << to_csv_rows(r, unit);
    for (const auto& c : r.checks) {
      s << (c.pass ? "PASS " : "FAIL ") << r.suite << ": " << c.description << " (margin "
        << num(c.information ? c.margin * unit : c.margin) << ")\n";
    }
  }
  s << (all_pass ? "overall: PASS\n" : "overall: FAIL\n");
  out.result = {{"suite", opt.suite}, {"pass", all_pass}, {"reports", reports}};
  out.code = all_pass ? kOk : kVerifyFailed;
  out.summary = s.str();
  out.csv = csv.str();
  return out;
}

UnitaryMatrix unitary_input(const json& j, int n, RandomStream& rng) {
  if (j.is_string()) {
    if (j.get<std::string>() != "haar") throw UsageError("unitary inputs are matrices or \"haar\"");
    return haar_sample(SymmetryGroup::full_unitary(n), rng);
  }
  const ComplexMatrix m = matrix_from_json(j);
  if (m.rows() != m.cols()) throw UsageError("unitary input must be square");
  if (!UnitaryMatrix::is_unitary(m, 1e-8)) throw UsageError("input is not unitary within 1e-8");
  // Re-unitarize the last few ulps so downstream checks see an exact unitary.
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return UnitaryMatrix(svd.matrixU() * svd.matrixV().adjoint());
}

json verdict_json(const IndependenceVerdict& v, const PhaseVector& phases) {
  return {{"independent", v.independent}, {"relation", v.relation}, {"residual", v.residual},
          {"bound", v.bound},             {"exact", v.exact},       {"phases", phases.values}};
}

Outcome cmd_symcheck(const json& cfg, std::uint64_t seed) {
  const json v1j = cfg.value("v1", json("haar"));
  const json v2j = cfg.value("v2", json("haar"));
  int n = cfg.value("n", 3);
  if (v1j.is_array()) n = static_cast<int>(v1j.size());
  else if (v2j.is_array()) n = static_cast<int>(v2j.size());
  RandomStream rng(seed, 0x73796dULL);
  const UnitaryMatrix v1 = unitary_input(v1j, n, rng);
  const UnitaryMatrix v2 = unitary_input(v2j, n, rng);
  if (v1.dim() != v2.dim()) throw UsageError("V1 and V2 must have the same size");
  const int bound = cfg.value("bound", kDefaultRelationBound);
  const double tol = cfg.value("tol", kDefaultRelationTol);
  std::optional<double> entry_tol;
  if (cfg.contains("entry_tol")) entry_tol = cfg.at("entry_tol").get<double>();

  const TwoSymmetryReport r = check_two_symmetry_condition(v1, v2, entry_tol, bound, tol);
  const auto e1 = unitary_eigendecomposition(v1);
  const auto e2 = unitary_eigendecomposition(v2);
  const ReducedSet meet = intersect_torus_fixed_sets(e1.basis, e2.basis, entry_tol);

  Outcome out;
  out.result = {{"v1", matrix_to_json(v1.matrix())},
                {"v2", matrix_to_json(v2.matrix())},
                {"v1_standard", verdict_json(r.first, e1.phases)},
                {"v2_standard", verdict_json(r.second, e2.phases)},
                {"min_overlap_entry", r.min_overlap_entry},
                {"entry_tol", r.entry_tol},
                {"nonzero_overlap", r.min_overlap_entry > r.entry_tol},
                {"verdict", r.isotropic_optimal ? "isotropic_optimal" : "inconclusive"},
                {"reason", r.reason},
                {"torus_intersection", reduced_set_to_json(meet)}};
  std::ostringstream s;
  s << "V1 standard: " << (r.first.independent ? "yes" : "no") << "\n";
  s << "V2 standard: " << (r.second.independent ? "yes" : "no") << "\n";
  s << "min |(W1* W2)_ij| = " << num(r.min_overlap_entry) << " (tol " << num(r.entry_tol) << ")\n";
  s << "torus intersection: " << meet.describe() << "\n";
  s << "verdict: " << (r.isotropic_optimal ? "isotropic_optimal" : "inconclusive");
  if (!r.reason.empty()) s << " (" << r.reason << ")";
  s << "\n";
  out.summary = s.str();
  return out;
}

Outcome cmd_finiteness(const json& cfg, std::uint64_t seed) {
  const ChannelModel model = channel_from_json(require_key(cfg, "channel"));
  const std::vector<long> sizes = cfg.value("sizes", std::vector<long>{1000, 10000, 100000});
  const double threshold = cfg.value("slope_threshold", kDefaultSlopeThreshold);
  RandomStream rng(seed, 0x66696eULL);
  const FinitenessReport r = finiteness_diagnostic(model, sizes, rng, threshold);
  Outcome out;
  out.result = to_json(r);
  out.result["channel"] = channel_to_json(model);
  out.code = r.verdict == FinitenessVerdict::kFiniteLikely ? kOk : kInfiniteSuspected;
  std::ostringstream s;
  for (const auto& [n, v] : r.running_means) s << "n = " << n << ": E log(1+||H||) ~ " << num(v) << "\n";
  s << "slope " << num(r.slope) << " per e-fold, verdict " << to_string(r.verdict) << " (heuristic)\n";
  out.summary = s.str();
  return out;
}

void add_common(CLI::App* sub, Options& opt) {
  sub->add_option("--config", opt.config_path, "JSON config file");
  sub->add_option("--set", opt.inline_config, "inline JSON merged over the config");
  sub->add_option("--seed", opt.seed, "random seed (default: config, then SYMCAP_SEED, then random)");
  sub->add_option("--samples", opt.samples, "sample count override")->check(CLI::PositiveNumber);
  sub->add_option("--output", opt.output, "report path ('-' for stdout)");
  sub->add_option("--format", opt.format, "report format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_flag("--bits", opt.bits, "report information in bits instead of nats");
  sub->add_option("--threads", opt.threads, "worker thread cap (0 = hardware)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symmetry-reduced MIMO capacity toolkit", "symcap"};
  app.require_subcommand(1);
  Options opt;
  CLI::App* capacity = app.add_subcommand("capacity", "optimize the input covariance");
  CLI::App* avg = app.add_subcommand("average", "closed-form group average of a matrix");
  CLI::App* verify = app.add_subcommand("verify", "run verification suites");
  CLI::App* symcheck = app.add_subcommand("symcheck", "two-symmetry isotropy check");
  CLI::App* finiteness = app.add_subcommand("finiteness", "heavy-tail capacity diagnostic");
  for (CLI::App* sub : {capacity, avg, verify, symcheck, finiteness}) add_common(sub, opt);
  verify->add_option("suite", opt.suite, "prop1, thm1b, corollary1..6, sec5 or all")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const json cfg = load_config(opt);
    if (opt.threads > 0) set_thread_limit(opt.threads);
    const double unit = opt.bits ? 1.0 / std::log(2.0) : 1.0;

    std::string command;
    Outcome result;
    std::uint64_t seed = 0;
    if (*avg) {
      command = "average";
      result = cmd_average(cfg);
    } else {
      seed = resolve_seed(opt, cfg);
      if (*capacity) {
        command = "capacity";
        result = cmd_capacity(cfg, opt, seed, unit);
      } else if (*verify) {
        command = "verify";
        result = cmd_verify(cfg, opt, seed, unit);
      } else if (*symcheck) {
        command = "symcheck";
        result = cmd_symcheck(cfg, seed);
      } else {
        command = "finiteness";
        result = cmd_finiteness(cfg, seed);
      }
    }

    json report = {{"command", command},
                   {"seed", seed},
                   {"unit", opt.bits ? "bits" : "nats"},
                   {"exit_code", result.code},
                   {"result", result.result},
                   {"timestamp", timestamp_utc()}};
    std::string text;
    if (opt.format == "csv") {
      if (!result.csv.empty()) {
        text = result.csv;
      } else {
        std::ostringstream os;
        os << "key,value\n";
        json flat = report;
        flat.erase("timestamp");
        flatten(flat, "", os);
        os << "timestamp," << report["timestamp"].get<std::string>() << '\n';
        text = os.str();
      }
    } else {
      text = report.dump(2) + "\n";
    }

    out << result.summary;
    if (command != "average") out << "seed: " << seed << "\n";
    if (opt.output == "-") {
      out << text;
    } else if (!opt.output.empty()) {
      std::ofstream file(opt.output, std::ios::binary);
      if (!file) throw UsageError("cannot write '" + opt.output + "'");
      file << text;
    }
    return result.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace symcap::cli
