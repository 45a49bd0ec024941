#include "subshift/serialize.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "subshift/errors.hpp"

namespace subshift {

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, value >>= 4) out[i] = digits[value & 15];
  return out;
}

Json provenance_json(const Provenance& p) {
  Json j;
  j["tool"] = "subshift-forge";
  j["version"] = p.version;
  j["seed"] = p.seed;
  j["config_hash"] = p.config_hash;
  return j;
}

std::string format_double(double x) {
  if (!std::isfinite(x)) throw InputError("cannot format a non-finite number");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Json alphabet_to_json(const Alphabet& a) { return Json(a.names()); }

AlphabetPtr alphabet_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("alphabet must be a JSON array of names");
  std::vector<std::string> names;
  for (const auto& n : j) {
    if (!n.is_string()) throw InputError("alphabet names must be strings");
    names.push_back(n.get<std::string>());
  }
  return make_alphabet(std::move(names));
}

Json word_to_json(const Word& w) { return Json(w.to_names()); }

Word word_from_json(const AlphabetPtr& alphabet, const Json& j) {
  if (!j.is_array()) throw InputError("word must be a JSON array of symbol names");
  std::vector<Symbol> data;
  data.reserve(j.size());
  for (const auto& n : j) {
    if (!n.is_string()) throw InputError("word symbols must be strings");
    data.push_back(alphabet->code(n.get_ref<const std::string&>()));
  }
  return Word(alphabet, std::move(data));
}

Json automaton_to_json(const ShiftAutomaton& a) {
  Json j;
  if (!a.name().empty()) j["name"] = a.name();
  j["alphabet"] = alphabet_to_json(*a.alphabet());
  Json states = Json::array();
  for (std::size_t s = 0; s < a.num_states(); ++s) states.push_back(s);
  j["states"] = std::move(states);
  Json edges = Json::array();
  for (StateId s = 0; s < a.num_states(); ++s)
    for (Symbol c = 0; c < a.alphabet_size(); ++c)
      if (StateId t = a.next(s, c); t != kNoState)
        edges.push_back(Json::array({s, a.alphabet()->name(c), t}));
  j["edges"] = std::move(edges);
  return j;
}

ShiftAutomaton automaton_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw InputError("automaton must be a JSON object");
    AlphabetPtr alphabet = alphabet_from_json(j.at("alphabet"));
    const Json& states = j.at("states");
    std::size_t n = 0;
    if (states.is_number_unsigned()) {
      n = states.get<std::size_t>();
    } else if (states.is_array()) {
      n = states.size();
      for (std::size_t i = 0; i < n; ++i)
        if (!states[i].is_number_unsigned() || states[i].get<std::size_t>() != i)
          throw InputError("automaton states must be the ids 0 .. n-1 in order");
    } else {
      throw InputError("automaton 'states' must be an array of ids or a count");
    }
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) throw InputError("edges must be [from, symbol, to] triples");
      const auto from = e[0].get<std::size_t>();
      const auto to = e[2].get<std::size_t>();
      if (from >= n || to >= n) throw InputError("edge references an unknown state");
      const Symbol c = e[1].is_string() ? alphabet->code(e[1].get_ref<const std::string&>())
                                        : alphabet->code(std::to_string(e[1].get<long long>()));
      edges.push_back({static_cast<StateId>(from), c, static_cast<StateId>(to)});
    }
    std::string name = j.contains("name") ? j["name"].get<std::string>() : std::string{};
    return ShiftAutomaton::from_edges(std::move(alphabet), n, edges, std::move(name));
  } catch (const nlohmann::json::exception& ex) {
    throw InputError(std::string("malformed automaton JSON: ") + ex.what());
  }
}

std::vector<std::string> builtin_system_names() { return {"full2", "goldenmean"}; }

ShiftAutomaton builtin_system(std::string_view name) {
  // Embedded as JSON so the builtins go through the same loader as files.
  static const char* kFull2 = R"({"name":"full2","alphabet":["0","1"],"states":[0],
    "edges":[[0,"0",0],[0,"1",0]]})";
  static const char* kGoldenMean = R"({"name":"goldenmean","alphabet":["0","1"],"states":[0,1],
    "edges":[[0,"0",0],[0,"1",1],[1,"0",0]]})";
  if (name == "full2") return automaton_from_json(Json::parse(kFull2));
  if (name == "goldenmean") return automaton_from_json(Json::parse(kGoldenMean));
  throw InputError("unknown builtin system '" + std::string(name) + "' (expected full2 or goldenmean)");
}

Json tower_to_json(const TowerSpec& spec) {
  Json j;
  j["schedule"] = spec.schedule;
  Json levels = Json::array();
  for (const auto& lv : spec.levels) {
    Json l;
    l["index"] = lv.index;
    l["L"] = lv.L;
    l["K"] = lv.K;
    l["window"] = lv.window();
    l["W_prev"] = word_to_json(lv.W_prev);
    l["W"] = word_to_json(lv.W);
    l["entropy"] = lv.entropy ? Json(*lv.entropy) : Json(nullptr);
    l["num_states"] = lv.automaton.num_states();
    l["automaton"] = automaton_to_json(lv.automaton);
    levels.push_back(std::move(l));
  }
  j["levels"] = std::move(levels);
  return j;
}

TowerSpec tower_from_json(const Json& j) {
  try {
    TowerSpec spec;
    spec.schedule = j.at("schedule").get<std::vector<std::size_t>>();
    for (const auto& l : j.at("levels")) {
      TowerLevel lv;
      lv.index = l.at("index").get<std::size_t>();
      lv.L = l.at("L").get<std::size_t>();
      lv.K = l.at("K").get<std::size_t>();
      lv.automaton = automaton_from_json(l.at("automaton"));
      lv.W_prev = word_from_json(lv.automaton.alphabet(), l.at("W_prev"));
      lv.W = word_from_json(lv.automaton.alphabet(), l.at("W"));
      if (l.contains("entropy") && !l["entropy"].is_null()) lv.entropy = l["entropy"].get<double>();
      if (lv.index != spec.levels.size()) throw InputError("tower levels out of order");
      spec.levels.push_back(std::move(lv));
    }
    if (spec.levels.empty()) throw InputError("tower has no levels");
    validate_schedule(spec.schedule);
    if (spec.schedule.size() < spec.depth()) throw InputError("tower schedule shorter than its depth");
    return spec;
  } catch (const nlohmann::json::exception& ex) {
    throw InputError(std::string("malformed tower JSON: ") + ex.what());
  }
}

Json witness_to_json(const WitnessReport& r) {
  Json j;
  j["depth"] = r.depth;
  j["schedule"] = r.schedule;
  j["signal_length"] = r.signal_length;
  j["working_length"] = r.working_length;
  j["bound_factor"] = r.bound_factor;
  j["factors"] = r.factors;
  j["degenerate"] = r.degenerate;
  if (r.degenerate) j["note"] = "sum |a_n| vanishes at some checkpoint; the bound holds with equality there";
  Json sums = Json::array();
  for (std::size_t level = 0; level < r.sums.size(); ++level) {
    for (const auto& s : r.sums[level]) {
      sums.push_back({{"level", level}, {"k", s.k}, {"N_k", s.N_k}, {"dot_sum", s.dot},
                      {"abs_sum", s.abs}, {"bound", r.factors[level] * s.abs}});
    }
  }
  j["sums"] = std::move(sums);
  Json mods = Json::array();
  for (const auto& m : r.log) mods.push_back(Json::array({m.level, m.block, m.v_index, m.start, m.kept}));
  j["modifications_columns"] = Json::array({"level", "block", "v_index", "start", "kept"});
  j["modifications"] = std::move(mods);
  j["point"] = r.point.to_string();
  return j;
}

Json plan_to_json(const CorrelatorPlan& plan, const CodedPoint* coded) {
  Json j;
  j["system"] = plan.automaton().name();
  j["automaton"] = automaton_to_json(plan.automaton());
  j["alpha"] = word_to_json(plan.alpha());
  j["beta"] = word_to_json(plan.beta());
  j["l"] = plan.l();
  j["u"] = plan.u();
  j["overlaps"] = {{"alpha_beta", plan.overlaps().between},
                   {"alpha_self", plan.overlaps().alpha_self},
                   {"beta_self", plan.overlaps().beta_self}};
  j["origin"] = plan.origin();
  if (coded) {
    j["t"] = coded->t;
    j["horizon"] = coded->horizon;
    j["phase_mean"] = coded->phase_mean;
    j["blocks"] = coded->block_symbols.size();
    j["point_length"] = coded->point.size();
  }
  return j;
}

void write_witness_csv(std::ostream& out, const WitnessReport& r) {
  out << "level,k,N_k,dot_sum,abs_sum,bound\r\n";
  for (std::size_t level = 0; level < r.sums.size(); ++level)
    for (const auto& s : r.sums[level])
      out << level << ',' << s.k << ',' << s.N_k << ',' << format_double(s.dot) << ','
          << format_double(s.abs) << ',' << format_double(r.factors[level] * s.abs) << "\r\n";
}

void write_correlation_csv(std::ostream& out, const std::vector<CorrelationRow>& rows) {
  out << "N,corr,abs_avg,bound\r\n";
  for (const auto& row : rows)
    out << row.N << ',' << format_double(row.corr) << ',' << format_double(row.abs_avg) << ','
        << format_double(row.bound) << "\r\n";
}

void write_scan_csv(std::ostream& out, const SpectralScan& scan) {
  out << "angle,N,magnitude\r\n";
  for (std::size_t p = 0; p < scan.prefixes.size(); ++p)
    for (std::size_t j = 0; j < scan.xi_grid.size(); ++j)
      out << format_double(scan.xi_grid[j]) << ',' << scan.prefixes[p] << ','
          << format_double(scan.magnitude(p, j)) << "\r\n";
}

namespace {

std::string trim(std::string s) {
  const auto notspace = [](unsigned char c) { return !std::isspace(c) && c != '"'; };
  while (!s.empty() && !notspace(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && !notspace(s[i])) ++i;
  return s.substr(i);
}

bool parse_number(const std::string& field, double& out) {
  if (field.empty()) return false;
  const char* first = field.data();
  const char* last = first + field.size();
  if (*first == '+') ++first;
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last && std::isfinite(out);
}

}  // namespace

std::vector<double> read_series_csv(std::istream& in) {
  std::vector<double> out;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::string field = trim(line.substr(0, line.find(',')));
    double v = 0.0;
    if (!parse_number(field, v)) {
      if (row == 1) continue;  // header
      throw InputError("malformed CSV value '" + field + "' on row " + std::to_string(row));
    }
    out.push_back(v);
  }
  if (out.empty()) throw InputError("CSV series is empty");
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& ex) {
    throw InputError("malformed JSON in '" + path + "': " + ex.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw InputError("write failed for '" + path + "'");
}

}  // namespace subshift
