#include "palab/experiment.hpp"

#include "palab/coding.hpp"
#include "palab/distill.hpp"
#include "palab/infotheory.hpp"
#include "palab/privstate.hpp"
#include "palab/samplers.hpp"
#include "palab/serialize.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace palab {

namespace {

constexpr int kSchemaVersion = 1;

std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double round12(double x) { return std::isfinite(x) ? std::stod(fmt12(x)) : x; }

// Cells are numbers, integers, strings or booleans.
struct Table {
  std::string anchor;
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
  json summary = json::object();
  std::vector<json> failures;

  void fail(std::string check, json detail) {
    detail["check"] = std::move(check);
    failures.push_back(std::move(detail));
  }
};

std::string cell_text(const json& v) {
  if (v.is_number_float()) return fmt12(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

json rounded(const json& v) {
  if (v.is_number_float()) return round12(v.get<double>());
  if (v.is_object() || v.is_array()) {
    json out = v;
    for (auto& e : out) e = rounded(e);
    return out;
  }
  return v;
}

json config_json(const ExperimentConfig& c) {
  return {{"experiment", std::string(to_string(c.experiment))},
          {"n", c.n},
          {"theta", round12(c.theta)},
          {"delta", round12(c.delta)},
          {"epsilon", round12(c.epsilon)},
          {"margin", round12(c.margin)},
          {"seed", c.seed},
          {"trials", c.trials}};
}

std::string render(const ExperimentConfig& c, const Table& t) {
  if (c.format == Format::json) {
    json rows = json::array();
    for (const auto& r : t.rows) rows.push_back(rounded(json(r)));
    json j{{"schema_version", kSchemaVersion},
           {"experiment", std::string(to_string(c.experiment))},
           {"anchor", t.anchor},
           {"config", config_json(c)},
           {"columns", t.columns},
           {"rows", rows},
           {"summary", rounded(t.summary)},
           {"failures", rounded(json(t.failures))},
           {"passed", t.failures.empty()}};
    return j.dump(2) + "\n";
  }
  std::string out = "# anchor: " + t.anchor + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + cell_text(r[i]);
    out += "\n";
  }
  const json summary = rounded(t.summary);
  for (const auto& [k, v] : summary.items()) out += "# summary," + k + "," + v.dump() + "\n";
  for (const auto& f : t.failures) out += "# failure," + rounded(f).dump() + "\n";
  return out;
}

double holevo_of_attack(double theta) {
  return key_rates(purify_with_shield(theta_attack(theta))).psd;
}

std::size_t dim_1_to_4(Rng& rng) { return static_cast<std::size_t>(rng() % 4) + 1; }

// Checked before any trial of a sweep runs.
void require_within_cap(double stored, const char* what) {
  if (stored > static_cast<double>(kDefaultDimensionCap))
    throw ResourceError(std::string(what) + " would hold " + fmt12(stored) + " entries, cap is " +
                        std::to_string(kDefaultDimensionCap));
}

Table run_rates(const ExperimentConfig& c) {
  Table t;
  t.anchor = "secret key rates: 1 - I(K:E) by privacy amplification vs chi by private-state distillation";
  t.columns = {"theta", "rate_pa", "rate_psd", "oracle", "deviation"};
  const auto rates = key_rates(purify_with_shield(theta_attack(c.theta)));
  const double oracle = 1.0 - binary_entropy((1.0 + std::abs(std::cos(c.theta))) / 2.0);
  const double dev = std::max(std::abs(rates.pa - rates.psd), std::abs(rates.pa - oracle));
  t.rows.push_back({c.theta, rates.pa, rates.psd, oracle, dev});
  if (dev > 1e-9) t.fail("rate_equality", {{"deviation", dev}, {"limit", 1e-9}});
  return t;
}

Table run_distill_sweep(const ExperimentConfig& c) {
  Table t;
  t.anchor = "private-state distillation: success probability of the untwisted pretty good measurement";
  t.columns = {"n", "m", "theta", "seed", "trial", "P_s", "epsilon", "fidelity_sq",
               "trace_distance", "rate_pa", "rate_psd"};
  const auto psi = purify_with_shield(theta_attack(c.theta));
  require_within_cap(std::pow(static_cast<double>(psi.dimension()), c.n), "n-copy state");
  const auto rates = key_rates(psi);
  std::uint64_t index = 0;
  json means = json::object();
  double previous = -1.0;
  bool nondecreasing = true;
  for (unsigned n = std::min(2U, c.n); n <= c.n; ++n) {
    const std::size_t m = announced_bits(rates.psd, n, c.margin);
    const auto big = n_copies(psi, n);
    double sum = 0.0;
    for (unsigned trial = 0; trial < c.trials; ++trial, ++index) {
      Rng rng = trial_rng(c.seed, index);
      const auto o = distill_block(big, n, m, rng);
      sum += o.success_probability;
      t.rows.push_back({n, m, c.theta, c.seed, trial, o.success_probability, o.privacy_epsilon,
                        o.fidelity_sq, o.trace_distance, rates.pa, rates.psd});
      const double fid_gap = std::abs(o.success_probability - o.fidelity_sq);
      if (fid_gap > 1e-9)
        t.fail("ps_equals_fidelity", {{"n", n}, {"trial", trial}, {"deviation", fid_gap}});
      const double limit = 2.0 * std::sqrt(std::max(0.0, 1.0 - o.success_probability));
      if (o.trace_distance > limit + 1e-9)
        t.fail("privacy_bound", {{"n", n}, {"trial", trial}, {"trace_distance", o.trace_distance},
                                 {"limit", limit}});
    }
    const double mean = sum / c.trials;
    means[std::to_string(n)] = mean;
    if (previous >= 0.0 && mean < previous - 1e-12) nondecreasing = false;
    previous = mean;
  }
  t.summary["mean_P_s"] = means;
  t.summary["nondecreasing_in_n"] = nondecreasing;
  return t;
}

Table run_equivalence(const ExperimentConfig& c) {
  Table t;
  t.anchor = "classical privacy amplification commutes with private-state distillation";
  t.columns = {"n", "m", "theta", "seed", "trial", "hash", "key_deviation", "eve_deviation",
               "max_deviation"};
  const auto psi = purify_with_shield(theta_attack(c.theta));
  std::size_t m = announced_bits(holevo_of_attack(c.theta), c.n, c.margin);
  if (c.n >= 2) m = std::clamp<std::size_t>(m, 1, c.n - 1);
  double worst = 0.0;
  for (unsigned trial = 0; trial < c.trials; ++trial) {
    Rng rng = trial_rng(c.seed, trial);
    const auto u = random_full_rank_hash(m, c.n, rng);
    const auto r = equivalence_check(psi, c.n, u);
    std::string hash;
    for (const auto& row : u.to_strings()) hash += (hash.empty() ? "" : "|") + row;
    t.rows.push_back({c.n, m, c.theta, c.seed, trial, hash, r.key_deviation, r.eve_deviation,
                      r.max_deviation});
    worst = std::max(worst, r.max_deviation);
    if (!r.passed) t.fail("equivalence", {{"trial", trial}, {"max_deviation", r.max_deviation}, {"limit", 1e-9}});
  }
  t.summary["max_deviation"] = worst;
  return t;
}

Table run_coding_bound(const ExperimentConfig& c) {
  Table t;
  t.anchor = "hashed classical-quantum coding: exact decoding error vs the analytic bound";
  t.columns = {"n", "delta", "epsilon", "output_bits", "exact_error", "bound", "seed", "trial"};
  Vector phi0 = Vector::Zero(2), phi1(2);
  phi0(0) = 1.0;
  phi1 << std::cos(c.theta), std::sin(c.theta);
  Ensemble ens{{0.5, 0.5}, {projector(phi0), projector(phi1)}};
  require_within_cap(std::exp2(2.0 * c.n), "n-letter density matrix");
  const double h = shannon_entropy(ens.probabilities), chi = holevo_chi(ens);
  json means = json::object();
  double previous = 2.0;
  bool nonincreasing = true;
  std::uint64_t index = 0;
  for (unsigned n = std::min(2U, c.n); n <= c.n; ++n) {
    const std::size_t size = choose_output_size(h, chi, c.delta, n);
    const std::size_t bits = static_cast<std::size_t>(std::countr_zero(size));
    const CodingInstance inst{ens, n, size, c.delta, c.epsilon};
    const double bound = coding_error_bound(inst);
    double sum = 0.0;
    for (unsigned trial = 0; trial < c.trials; ++trial, ++index) {
      Rng rng = trial_rng(c.seed, index);
      const auto f = random_linear_hash(bits, n, rng);
      const double exact = coding_error_exact(inst, f);
      sum += exact;
      t.rows.push_back({n, c.delta, c.epsilon, bits, exact, bound, c.seed, trial});
      if (exact > bound + 1e-12)
        t.fail("exact_below_bound", {{"n", n}, {"trial", trial}, {"exact", exact}, {"bound", bound}});
    }
    const double mean = sum / c.trials;
    means[std::to_string(n)] = mean;
    if (mean > previous + 1e-12) nonincreasing = false;
    previous = mean;
  }
  t.summary["mean_exact_error"] = means;
  t.summary["nonincreasing_in_n"] = nonincreasing;
  return t;
}

Table run_checker_fuzz(const ExperimentConfig& c) {
  Table t;
  t.anchor = "private-state characterizations: identical Eve marginals vs orthogonal Bob+shield states";
  t.columns = {"trial", "family", "ds", "de", "condition_a", "condition_b", "condition_bprime",
               "eve_marginal", "orthogonality", "agree"};
  std::size_t agreed = 0, private_count = 0;
  for (unsigned trial = 0; trial < c.trials; ++trial) {
    Rng rng = trial_rng(c.seed, trial);
    const auto family = checker_family(trial);
    const std::size_t ds = dim_1_to_4(rng), de = dim_1_to_4(rng);
    const auto gamma = sample_checker_state(family, ds, de, rng);
    const auto d = diagnose(gamma, 1e-8);
    const bool agree = *d.eve_marginal_verdict == *d.orthogonality_verdict;
    agreed += agree;
    private_count += *d.eve_marginal_verdict;
    t.rows.push_back({trial, std::string(to_string(family)), ds, de, d.condition_a_deviation,
                      *d.condition_b_deviation, *d.condition_bprime_deviation,
                      *d.eve_marginal_verdict, *d.orthogonality_verdict, agree});
    if (!agree) t.fail("verdicts_agree", {{"trial", trial}, {"family", std::string(to_string(family))}});
  }
  t.summary["agreement_rate"] = static_cast<double>(agreed) / c.trials;
  t.summary["private_verdicts"] = private_count;
  return t;
}

Table run_uncertainty_fuzz(const ExperimentConfig& c) {
  Table t;
  t.anchor = "uncertainty principle: H(Z|E) + H(X|BS) >= 1 with equality structure on private states";
  t.columns = {"trial", "family", "ds", "de", "h_z_given_e", "h_x_given_bs", "sum"};
  double min_sum = 2.0;
  for (unsigned trial = 0; trial < c.trials; ++trial) {
    Rng rng = trial_rng(c.seed, trial);
    const bool priv = trial % 2 == 0;
    const std::size_t ds = dim_1_to_4(rng), de = dim_1_to_4(rng);
    const auto gamma = sample_checker_state(priv ? CheckerFamily::private_state : CheckerFamily::haar,
                                            ds, de, rng);
    const auto u = uncertainty_check(gamma);
    const double sum = u.h_z_given_e + u.h_x_given_bs;
    min_sum = std::min(min_sum, sum);
    t.rows.push_back({trial, priv ? "private" : "haar", ds, de, u.h_z_given_e, u.h_x_given_bs, sum});
    if (sum < 1.0 - 1e-9) t.fail("entropy_sum", {{"trial", trial}, {"sum", sum}});
    if (priv && (std::abs(u.h_z_given_e - 1.0) > 1e-9 || std::abs(u.h_x_given_bs) > 1e-9))
      t.fail("private_values", {{"trial", trial}, {"h_z_given_e", u.h_z_given_e},
                                {"h_x_given_bs", u.h_x_given_bs}});
  }
  t.summary["min_sum"] = min_sum;
  return t;
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto res = std::from_chars(value.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end)
    throw UsageError("invalid value '" + std::string(value) + "' for " + std::string(key));
  return out;
}

}  // namespace

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::rates: return "rates";
    case Experiment::distill_sweep: return "distill-sweep";
    case Experiment::equivalence: return "equivalence";
    case Experiment::coding_bound: return "coding-bound";
    case Experiment::checker_fuzz: return "checker-fuzz";
    case Experiment::uncertainty_fuzz: return "uncertainty-fuzz";
  }
  return "unknown";
}

Experiment experiment_from_string(std::string_view s) {
  for (auto e : {Experiment::rates, Experiment::distill_sweep, Experiment::equivalence,
                 Experiment::coding_bound, Experiment::checker_fuzz, Experiment::uncertainty_fuzz})
    if (to_string(e) == s) return e;
  throw UsageError("unknown experiment '" + std::string(s) + "'");
}

void ExperimentConfig::validate() const {
  if (n < 1 || n > 12) throw UsageError("n must lie in 1..12");
  if (trials < 1) throw UsageError("trials must be at least 1");
  if (!std::isfinite(theta)) throw UsageError("theta must be finite");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw UsageError("delta must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw UsageError("epsilon must lie in (0, 1)");
  if (!std::isfinite(margin)) throw UsageError("margin must be finite");
}

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value) {
  if (key == "experiment") c.experiment = experiment_from_string(value);
  else if (key == "n") c.n = parse_number<unsigned>(key, value);
  else if (key == "theta") c.theta = parse_number<double>(key, value);
  else if (key == "delta") c.delta = parse_number<double>(key, value);
  else if (key == "epsilon") c.epsilon = parse_number<double>(key, value);
  else if (key == "margin") c.margin = parse_number<double>(key, value);
  else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "trials") c.trials = parse_number<unsigned>(key, value);
  else if (key == "out") c.out_path = std::string(value);
  else if (key == "format") {
    if (value == "csv") c.format = Format::csv;
    else if (value == "json") c.format = Format::json;
    else throw UsageError("format must be csv or json");
  } else {
    throw UsageError("unknown setting '" + std::string(key) + "'");
  }
}

void apply_json(ExperimentConfig& c, const json& j) {
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (v.is_string()) apply_setting(c, key, v.get<std::string>());
    else if (v.is_number()) apply_setting(c, key, v.dump());
    else throw UsageError("config value for '" + key + "' must be a string or number");
  }
}

Report run(const ExperimentConfig& config) {
  config.validate();
  Table t;
  switch (config.experiment) {
    case Experiment::rates: t = run_rates(config); break;
    case Experiment::distill_sweep: t = run_distill_sweep(config); break;
    case Experiment::equivalence: t = run_equivalence(config); break;
    case Experiment::coding_bound: t = run_coding_bound(config); break;
    case Experiment::checker_fuzz: t = run_checker_fuzz(config); break;
    case Experiment::uncertainty_fuzz: t = run_uncertainty_fuzz(config); break;
  }
  Report r;
  r.text = render(config, t);
  r.passed = t.failures.empty();
  for (const auto& f : t.failures) r.failures.push_back(rounded(f).dump());
  if (!config.out_path.empty()) {
    std::ofstream out(config.out_path, std::ios::binary);
    if (!out) throw UsageError("cannot open output file '" + config.out_path + "'");
    out << r.text;
    r.wrote_file = true;
  }
  return r;
}

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::usage: return 2;
    case ErrorCode::resource: return 3;
    default: return 1;
  }
}

std::string experiment_help() {
  return R"(Experiments and CSV columns (JSON reports carry the same rows plus
schema_version, config, summary and failures):
  rates             theta,rate_pa,rate_psd,oracle,deviation
  distill-sweep     n,m,theta,seed,trial,P_s,epsilon,fidelity_sq,trace_distance,rate_pa,rate_psd
                    (block lengths 2..n, m = ceil(n (1 - chi) + margin))
  equivalence       n,m,theta,seed,trial,hash,key_deviation,eve_deviation,max_deviation
  coding-bound      n,delta,epsilon,output_bits,exact_error,bound,seed,trial
                    (block lengths 2..n, ensemble {1/2 |0>, 1/2 cos(theta)|0> + sin(theta)|1>})
  checker-fuzz      trial,family,ds,de,condition_a,condition_b,condition_bprime,eve_marginal,orthogonality,agree
  uncertainty-fuzz  trial,family,ds,de,h_z_given_e,h_x_given_bs,sum
CSV reports start with '# anchor:' and end with '# summary,...' and '# failure,{json}' lines.
Exit status: 0 all checks passed, 1 a check failed, 2 usage error, 3 dimension cap exceeded.
)";
}

}  // namespace palab
