// subshift-forge: command-line driver for towers, witnesses, correlators and
// spectral scans. Exit codes: 0 success, 2 input error, 3 contract violation.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "subshift/automaton.hpp"
#include "subshift/correlator.hpp"
#include "subshift/errors.hpp"
#include "subshift/kernels.hpp"
#include "subshift/rng.hpp"
#include "subshift/serialize.hpp"
#include "subshift/spectra.hpp"
#include "subshift/tower.hpp"
#include "subshift/witness.hpp"

using namespace subshift;

namespace {

constexpr std::size_t kMaxDepth = 2;         // X_3 is far beyond desk-scale memory
constexpr std::size_t kMaxHorizon = 1 << 24;

struct Common {
  std::uint64_t seed = 0;
  std::string out;
  std::string csv;
};

// Artifacts carry the config hash of everything except output paths.
Provenance provenance(const std::string& command, const Json& config, std::uint64_t seed) {
  Json c = config;
  c["command"] = command;
  return {SUBSHIFT_VERSION, seed, hex64(fnv1a64(c.dump()))};
}

void emit_json(const std::string& path, Json body, const Provenance& p, int indent = 2) {
  Json doc;
  doc["provenance"] = provenance_json(p);
  for (auto& [k, v] : body.items()) doc[k] = std::move(v);
  const std::string text = doc.dump(indent) + "\n";
  if (path.empty() || path == "-") std::cout << text;
  else write_text_file(path, text);
}

// CSV files stay plain RFC-4180; their provenance goes next to them.
template <class Writer>
void emit_csv(const std::string& path, const Provenance& p, Writer&& write) {
  if (path.empty()) return;
  std::ostringstream s;
  write(s);
  write_text_file(path, s.str());
  Json meta;
  meta["provenance"] = provenance_json(p);
  meta["csv"] = path;
  meta["csv_fnv1a64"] = hex64(fnv1a64(s.str()));
  write_text_file(path + ".meta.json", meta.dump(2) + "\n");
}

std::vector<double> signal_samples(const std::string& spec, std::size_t n, std::uint64_t seed) {
  if (spec == "zero") return std::vector<double>(n, 0.0);
  if (spec == "seeded-random-pm1") {
    Rng rng(derive_seed(seed, 0x5167));
    std::vector<double> out(n);
    for (auto& x : out) x = uniform_below(rng, 2) ? 1.0 : -1.0;
    return out;
  }
  if (spec.rfind("cosine:", 0) == 0) {
    double theta = 0.0;
    try {
      std::size_t used = 0;
      theta = std::stod(spec.substr(7), &used);
      if (used != spec.size() - 7) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw InputError("bad cosine frequency in '" + spec + "'");
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
      out[i] = std::cos(2.0 * std::numbers::pi * std::fmod(theta * static_cast<double>(i), 1.0));
    return out;
  }
  if (spec.rfind("csv:", 0) == 0) {
    std::ifstream in(spec.substr(4));
    if (!in) throw InputError("cannot open '" + spec.substr(4) + "'");
    std::vector<double> out = read_series_csv(in);
    if (out.size() < n) throw InputError("CSV signal has fewer than N values");
    out.resize(n);
    return out;
  }
  throw InputError("unknown signal source '" + spec +
                   "' (expected seeded-random-pm1, cosine:THETA, csv:PATH or zero)");
}

// Series for scans: any signal source, plus sturmian:THETA[:RHO] and
// witness:REPORT.json (the witness point read as +-1).
std::vector<double> scan_series(const std::string& spec, std::size_t n, std::uint64_t seed) {
  if (spec.rfind("sturmian:", 0) == 0) {
    std::string rest = spec.substr(9);
    double rho = 0.0;
    if (auto colon = rest.find(':'); colon != std::string::npos) {
      rho = std::stod(rest.substr(colon + 1));
      rest = rest.substr(0, colon);
    }
    return sign_series(sturmian_word(std::stod(rest), rho, n).word);
  }
  if (spec.rfind("witness:", 0) == 0) {
    const Json report = read_json_file(spec.substr(8));
    if (!report.contains("point") || !report["point"].is_string())
      throw InputError("witness report has no point");
    std::vector<double> out = sign_series(Word::parse(sign_alphabet(), report["point"].get<std::string>()));
    if (out.size() < n) throw InputError("witness point shorter than N");
    out.resize(n);
    return out;
  }
  return signal_samples(spec, n, seed);
}

std::vector<std::size_t> parse_list(const std::string& text, const char* what) {
  std::vector<std::size_t> out;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw InputError(std::string("bad ") + what + " entry '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InputError(std::string("empty ") + what);
  return out;
}

ShiftAutomaton load_system(const std::string& system, const std::string& file) {
  if (!file.empty()) return automaton_from_json(read_json_file(file));
  return builtin_system(system);
}

void print_tower(const TowerSpec& spec) {
  for (const auto& lv : spec.levels) {
    std::printf("level %zu: states %zu", lv.index, lv.automaton.num_states());
    if (lv.index) std::printf(", L %zu, K %zu, window %zu", lv.L, lv.K, lv.window());
    if (lv.entropy) std::printf(", entropy %.12f", *lv.entropy);
    std::printf(", |W| %zu\n", lv.W.size());
    std::printf("  W = %s\n", lv.W.to_string().c_str());
  }
}

std::vector<std::size_t> schedule_for(const std::string& text, std::size_t depth) {
  std::vector<std::size_t> schedule = text.empty() ? default_schedule(depth) : parse_list(text, "schedule");
  validate_schedule(schedule);
  if (schedule.size() < depth) throw InputError("schedule has fewer entries than the depth");
  return schedule;
}

int run(int argc, char** argv) {
  CLI::App app{"Nested mixing subshifts, Bohr-chaos witnesses and spectral probes"};
  app.set_version_flag("--version", std::string(SUBSHIFT_VERSION));
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub, bool csv) {
    sub->add_option("--seed", common.seed, "Seed echoed into every artifact")->capture_default_str();
    sub->add_option("-o,--out", common.out, "JSON output path ('-' or empty: stdout)");
    if (csv) sub->add_option("--csv", common.csv, "CSV output path");
  };

  // tower
  std::size_t depth = 2;
  std::string schedule_text;
  bool no_entropy = false;
  auto* tower = app.add_subcommand("tower", "Build X_0 ... X_D and write the tower JSON");
  tower->add_option("--depth", depth, "Tower depth D")->capture_default_str();
  tower->add_option("--schedule", schedule_text, "Comma-separated L_1,L_2,... (default 2^(i+5))");
  tower->add_flag("--no-entropy", no_entropy, "Skip per-level entropy");
  add_common(tower, false);

  // witness
  std::string tower_file, signal = "seeded-random-pm1";
  std::size_t horizon = 1 << 16, checkpoint_base = 3;
  auto* witness = app.add_subcommand("witness", "Construct a witness point for a bounded signal");
  witness->add_option("--tower", tower_file, "Tower JSON from the tower command");
  witness->add_option("--depth", depth, "Depth when building the tower in-process")->capture_default_str();
  witness->add_option("--schedule", schedule_text, "Schedule when building in-process");
  witness->add_option("--signal", signal, "seeded-random-pm1 | cosine:THETA | csv:PATH | zero")->capture_default_str();
  witness->add_option("-N,--horizon", horizon, "Signal length N")->capture_default_str();
  witness->add_option("--checkpoint-base", checkpoint_base, "Checkpoints base * 2^k <= N")->capture_default_str();
  add_common(witness, true);

  // correlate
  std::string system = "goldenmean", automaton_file, prefixes_text;
  std::size_t l = 12, budget = 4096;
  double r = 1.0 / 3.0;
  std::optional<std::size_t> u_override;
  std::size_t corr_horizon = 100000;
  auto* correlate = app.add_subcommand("correlate", "Low-overlap pair, coded point and correlation table");
  correlate->add_option("--system", system, "Builtin system (full2, goldenmean)")->capture_default_str();
  correlate->add_option("--automaton", automaton_file, "Automaton JSON instead of a builtin");
  correlate->add_option("--l", l, "Block length l")->capture_default_str();
  correlate->add_option("--r", r, "Overlap fraction for the search")->capture_default_str();
  correlate->add_option("--u", u_override, "Gap length (default: certified gap of the system)");
  correlate->add_option("--budget", budget, "Sampling budget of the pair search")->capture_default_str();
  correlate->add_option("--signal", signal, "seeded-random-pm1 | cosine:THETA | csv:PATH | zero")->capture_default_str();
  correlate->add_option("-N,--horizon", corr_horizon, "Signal length N")->capture_default_str();
  correlate->add_option("--prefixes", prefixes_text, "Comma-separated N values (default 3*2^k and N)");
  add_common(correlate, true);

  // scan
  std::string series = "sturmian:0.6180339887498949";
  std::size_t grid = 256;
  std::size_t scan_n = 100000;
  auto* scan = app.add_subcommand("scan", "Weyl averages on a uniform angle grid");
  scan->add_option("--series", series,
                   "sturmian:THETA[:RHO] | witness:REPORT | cosine:THETA | csv:PATH | seeded-random-pm1 | zero")
      ->capture_default_str();
  scan->add_option("--grid", grid, "Grid size")->capture_default_str();
  scan->add_option("-N,--horizon", scan_n, "Series length")->capture_default_str();
  scan->add_option("--prefixes", prefixes_text, "Comma-separated prefixes (default 1000,10000,N)");
  add_common(scan, true);

  // entropy / mixing / gap
  std::string W_text;
  std::optional<std::size_t> gap_bound;
  std::vector<CLI::App*> sys_cmds;
  auto* entropy_cmd = app.add_subcommand("entropy", "Topological entropy of a system");
  auto* mixing_cmd = app.add_subcommand("mixing", "Mixing test of a system");
  auto* gap_cmd = app.add_subcommand("gap", "Gap constant K for a marker word W");
  for (auto* sub : {entropy_cmd, mixing_cmd, gap_cmd}) {
    sub->add_option("--system", system, "Builtin system (full2, goldenmean)")->capture_default_str();
    sub->add_option("--automaton", automaton_file, "Automaton JSON instead of a builtin");
    add_common(sub, false);
  }
  gap_cmd->add_option("--W", W_text, "Marker word (space-separated names or compact run)");
  gap_cmd->add_option("--bound", gap_bound, "Search cap (default 10 * states * max(|W|, 1))");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  kernels::configure_threads_from_env();

  if (tower->parsed()) {
    if (depth > kMaxDepth) throw InputError("depth above the resource cap of " + std::to_string(kMaxDepth));
    const auto schedule = schedule_for(schedule_text, depth);
    ExtendOptions opts;
    opts.compute_entropy = !no_entropy;
    const TowerSpec spec = build_tower(schedule, depth, opts);
    print_tower(spec);
    Json config{{"depth", depth}, {"schedule", schedule}, {"entropy", !no_entropy}};
    if (!common.out.empty()) // Compact: deep levels carry hundreds of thousands of edges.
      emit_json(common.out, tower_to_json(spec), provenance("tower", config, common.seed), -1);
    return 0;
  }

  if (witness->parsed()) {
    if (horizon == 0 || horizon > kMaxHorizon) throw InputError("horizon N out of range");
    TowerSpec spec;
    Json config{{"signal", signal}, {"N", horizon}, {"checkpoint_base", checkpoint_base}};
    if (!tower_file.empty()) {
      spec = tower_from_json(read_json_file(tower_file));
      config["tower_hash"] = hex64(fnv1a64(tower_to_json(spec).dump()));
    } else {
      if (depth > kMaxDepth) throw InputError("depth above the resource cap of " + std::to_string(kMaxDepth));
      spec = build_tower(schedule_for(schedule_text, depth), depth);
      config["depth"] = depth;
      config["schedule"] = spec.schedule;
    }
    SignalSeries sig = make_signal(signal_samples(signal, horizon, common.seed),
                                   geometric_checkpoints(horizon, checkpoint_base));
    const WitnessReport report = build_witness(sig, spec);
    const Provenance p = provenance("witness", config, common.seed);
    std::printf("witness: depth %zu, N %zu, bound factor %.6f%s\n", report.depth, report.signal_length,
                report.bound_factor, report.degenerate ? " (degenerate: zero sums, equality holds)" : "");
    const auto& last = report.sums.back();
    if (!last.empty())
      std::printf("  final checkpoint N_k %zu: dot %s, abs %s\n", last.back().N_k,
                  format_double(last.back().dot).c_str(), format_double(last.back().abs).c_str());
    if (!common.out.empty()) emit_json(common.out, witness_to_json(report), p);
    emit_csv(common.csv, p, [&](std::ostream& s) { write_witness_csv(s, report); });
    return 0;
  }

  if (correlate->parsed()) {
    const ShiftAutomaton a = load_system(system, automaton_file);
    const std::size_t u = u_override ? *u_override : specification_gap(a);
    if (l < 3 * u)
      throw InputError("need l >= 3u for unique parsing: l = " + std::to_string(l) + ", u = " + std::to_string(u));
    PairSearchOptions opts;
    opts.r = r;
    opts.seed = common.seed;
    opts.budget = budget;
    const PairSearchResult found = find_low_overlap_pair(a, l, opts);
    if (!found.pair) throw InputError("none at this length: no pair found for l = " + std::to_string(l) + "; raise l");
    const CorrelatorPlan plan(a, found.pair->first, found.pair->second, u, found.origin);
    if (corr_horizon == 0 || corr_horizon > kMaxHorizon) throw InputError("horizon N out of range");
    const SignalSeries sig = make_signal(signal_samples(signal, corr_horizon, common.seed), {});
    const CodedPoint coded = build_coded_point(plan, sig, corr_horizon);
    std::vector<std::size_t> prefixes;
    if (prefixes_text.empty()) {
      prefixes = geometric_checkpoints(corr_horizon);
      if (prefixes.empty() || prefixes.back() != corr_horizon) prefixes.push_back(corr_horizon);
    } else {
      prefixes = parse_list(prefixes_text, "prefixes");
    }
    const auto rows = evaluate_correlation(plan, coded, sig, prefixes);
    Json config{{"system", automaton_file.empty() ? system : "file"}, {"l", l}, {"r", r}, {"u", u},
                {"budget", budget}, {"signal", signal}, {"N", corr_horizon}, {"prefixes", prefixes}};
    if (!automaton_file.empty()) config["automaton_hash"] = hex64(fnv1a64(automaton_to_json(a).dump()));
    const Provenance p = provenance("correlate", config, common.seed);
    double worst = 0.0;
    for (const auto& row : rows) worst = std::max(worst, std::abs(row.corr - row.bound));
    std::printf("plan: l %zu, u %zu, t %zu, alpha %s, beta %s (%s)\n", plan.l(), plan.u(), coded.t,
                plan.alpha().to_string().c_str(), plan.beta().to_string().c_str(), plan.origin().c_str());
    std::printf("exactness: max |corr - bound| = %.3e\n", worst);
    Json body = plan_to_json(plan, &coded);
    body["max_exactness_error"] = worst;
    if (!common.out.empty()) emit_json(common.out, std::move(body), p);
    emit_csv(common.csv, p, [&](std::ostream& s) { write_correlation_csv(s, rows); });
    if (worst > 1e-12) throw ContractViolation("correlation exactness identity failed");
    return 0;
  }

  if (scan->parsed()) {
    if (scan_n == 0 || scan_n > kMaxHorizon) throw InputError("horizon N out of range");
    std::vector<std::size_t> prefixes;
    if (prefixes_text.empty()) {
      for (std::size_t p : {std::size_t{1000}, std::size_t{10000}})
        if (p < scan_n) prefixes.push_back(p);
      prefixes.push_back(scan_n);
    } else {
      prefixes = parse_list(prefixes_text, "prefixes");
    }
    const std::vector<double> values = scan_series(series, scan_n, common.seed);
    const SpectralScan result = spectral_scan(values, grid, prefixes, series);
    Json config{{"series", series}, {"grid", grid}, {"N", scan_n}, {"prefixes", prefixes}};
    const Provenance p = provenance("scan", config, common.seed);
    Json peaks = Json::array();
    for (std::size_t i = 0; i < result.prefixes.size(); ++i) {
      const std::size_t j = result.peak(i);
      std::printf("N %zu: peak angle %s magnitude %s\n", result.prefixes[i],
                  format_double(result.xi_grid[j]).c_str(), format_double(result.magnitude(i, j)).c_str());
      peaks.push_back({{"N", result.prefixes[i]}, {"angle", result.xi_grid[j]}, {"magnitude", result.magnitude(i, j)}});
    }
    if (!common.out.empty())
      emit_json(common.out, Json{{"series_id", series}, {"grid", grid}, {"peaks", peaks}}, p);
    emit_csv(common.csv, p, [&](std::ostream& s) { write_scan_csv(s, result); });
    return 0;
  }

  const ShiftAutomaton a = load_system(system, automaton_file);
  Json config{{"system", automaton_file.empty() ? system : "file"}};
  if (!automaton_file.empty()) config["automaton_hash"] = hex64(fnv1a64(automaton_to_json(a).dump()));
  const ShiftAutomaton e = essentialize(a);
  if (e.empty()) throw EmptySubshiftError("the system is empty after essentialization");

  if (entropy_cmd->parsed()) {
    const EntropyResult res = entropy_detail(e);
    std::printf("entropy %.15f (spectral radius %.15f, %zu iterations%s)\n", res.entropy,
                res.spectral_radius, res.iterations, res.converged ? "" : ", not converged");
    if (!common.out.empty())
      emit_json(common.out,
                Json{{"entropy", res.entropy}, {"spectral_radius", res.spectral_radius},
                     {"iterations", res.iterations}, {"converged", res.converged}},
                provenance("entropy", config, common.seed));
    return 0;
  }
  if (mixing_cmd->parsed()) {
    const bool mixing = is_mixing(e);
    std::printf("%s: %s (%zu essential states)\n", a.name().empty() ? "system" : a.name().c_str(),
                mixing ? "mixing" : "not mixing", e.num_states());
    if (!common.out.empty())
      emit_json(common.out, Json{{"mixing", mixing}, {"states", e.num_states()}},
                provenance("mixing", config, common.seed));
    return 0;
  }
  // gap
  const Word W = Word::parse(e.alphabet(), W_text);
  if (!is_allowable(e, W)) throw InputError("W is not allowable in the system");
  if (!is_mixing(e)) throw InputError("gap constants need a mixing system");
  const std::size_t bound = gap_bound ? *gap_bound : default_gap_bound(e, W);
  const GapCertificate cert = gap_constant(e, W, bound);
  config["W"] = W.to_names();
  config["bound"] = bound;
  std::printf("K = %zu (verified up to %zu; %zu source / %zu target contexts%s)\n", cert.K,
              cert.verified_bound, cert.source_contexts, cert.target_contexts,
              cert.state_pair_fallback ? ", state-pair fallback" : "");
  if (!common.out.empty())
    emit_json(common.out,
              Json{{"W", word_to_json(W)}, {"K", cert.K}, {"verified_bound", cert.verified_bound},
                   {"source_contexts", cert.source_contexts}, {"target_contexts", cert.target_contexts},
                   {"state_pair_fallback", cert.state_pair_fallback}},
              provenance("gap", config, common.seed));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ContractViolation& e) {
    std::fprintf(stderr, "contract violation: %s\n", e.what());
    return 3;
  } catch (const FillError& e) {
    std::fprintf(stderr, "contract violation (fill): %s\n", e.what());
    return 3;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
}
