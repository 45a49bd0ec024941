#pragma once

// JSON / CSV persistence. Automata use the schema
//   {"alphabet": [names], "states": [ids], "edges": [[from, symbol, to]]}
// with symbols written by name. Doubles are printed in shortest round-trip
// form so equal inputs give byte-identical files.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "subshift/automaton.hpp"
#include "subshift/correlator.hpp"
#include "subshift/spectra.hpp"
#include "subshift/tower.hpp"
#include "subshift/witness.hpp"
#include "subshift/words.hpp"

namespace subshift {

using Json = nlohmann::ordered_json;

// Tool version, seed and configuration hash stamped into every artifact.
struct Provenance {
  std::string version;
  std::uint64_t seed = 0;
  std::string config_hash;  // 16 hex digits
};

std::uint64_t fnv1a64(std::string_view text);
std::string hex64(std::uint64_t value);
Json provenance_json(const Provenance& p);

Json alphabet_to_json(const Alphabet& a);
AlphabetPtr alphabet_from_json(const Json& j);

Json word_to_json(const Word& w);
Word word_from_json(const AlphabetPtr& alphabet, const Json& j);

Json automaton_to_json(const ShiftAutomaton& a);
ShiftAutomaton automaton_from_json(const Json& j);

// "full2" or "goldenmean"; throws InputError for other names.
ShiftAutomaton builtin_system(std::string_view name);
std::vector<std::string> builtin_system_names();

Json tower_to_json(const TowerSpec& spec);
TowerSpec tower_from_json(const Json& j);

Json witness_to_json(const WitnessReport& r);
Json plan_to_json(const CorrelatorPlan& plan, const CodedPoint* coded = nullptr);

// RFC-4180 CSV writers; every file ends with a newline.
void write_witness_csv(std::ostream& out, const WitnessReport& r);
void write_correlation_csv(std::ostream& out, const std::vector<CorrelationRow>& rows);
void write_scan_csv(std::ostream& out, const SpectralScan& scan);

// Shortest round-trip decimal form of a double.
std::string format_double(double x);

// One value per row taken from the first field; a non-numeric first row is
// treated as a header. Throws InputError on anything malformed.
std::vector<double> read_series_csv(std::istream& in);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace subshift
