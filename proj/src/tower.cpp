#include "subshift/tower.hpp"

#include <string>

#include "subshift/errors.hpp"

namespace subshift {

std::vector<std::size_t> default_schedule(std::size_t depth) {
  if (depth > 20) throw InputError("tower depth above 20 is outside the supported range");
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i <= depth; ++i) out.push_back(std::size_t{1} << (i + 5));
  return out;
}

double schedule_loss(const std::vector<std::size_t>& schedule, std::size_t upto) {
  double loss = 0.0;
  for (std::size_t i = 0; i < upto && i < schedule.size(); ++i)
    loss += 16.0 / static_cast<double>(schedule[i]);
  return loss;
}

void validate_schedule(const std::vector<std::size_t>& schedule) {
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] == 0 || schedule[i] % 8 != 0)
      throw InputError("schedule entry L_" + std::to_string(i + 1) + " = " +
                       std::to_string(schedule[i]) + " must be a positive multiple of 8");
  }
  if (schedule_loss(schedule, schedule.size()) >= 1.0)
    throw InputError("schedule violates sum of 16/L_i < 1");
}

Word build_minimality_word(const ShiftAutomaton& a, std::size_t n) {
  if (a.empty()) throw InputError("build_minimality_word on an empty automaton");
  const Word none(a.alphabet());
  if (n == 0) return none;
  const auto words = allowable_words(a, n);
  Word out = words.front();
  StateSet tail = exit_states(a, out);
  for (std::size_t i = 1; i < words.size(); ++i) {
    const Word& u = words[i];
    if (contains(out, u)) continue;
    const StateSet entry = entry_states(a, u);
    // Shortest gap that glues; mixing guarantees one exists.
    std::optional<Word> gap;
    const std::size_t limit = default_gap_bound(a, none) + a.num_states();
    for (std::size_t g = 0; g <= limit && !gap; ++g) {
      try {
        gap = fill_between(a, tail, entry, g, none);
      } catch (const FillError&) {
      }
    }
    if (!gap) throw FillError("no gap joins '" + u.to_string() + "' to the minimality word");
    out += *gap;
    out += u;
    tail = advance(a, tail, (*gap + u).symbols());
  }
  return out;
}

TowerSpec initial_tower(std::vector<std::size_t> schedule) {
  validate_schedule(schedule);
  TowerSpec spec;
  spec.schedule = std::move(schedule);
  TowerLevel zero;
  zero.index = 0;
  zero.automaton = full_shift(sign_alphabet());
  zero.W_prev = Word(sign_alphabet());
  zero.W = Word::parse(sign_alphabet(), "-1 1");
  spec.levels.push_back(std::move(zero));
  return spec;
}

TowerSpec extend_tower(const TowerSpec& spec, const ExtendOptions& opts) {
  if (spec.levels.empty()) throw InputError("extend_tower needs level 0");
  const std::size_t i = spec.levels.size();
  if (spec.schedule.size() < i)
    throw InputError("schedule has no entry L_" + std::to_string(i));
  validate_schedule(spec.schedule);
  const TowerLevel& parent = spec.levels.back();

  TowerLevel level;
  level.index = i;
  level.L = spec.schedule[i - 1];
  level.W_prev = parent.W;
  const auto cert = gap_constant(parent.automaton, parent.W,
                                 default_gap_bound(parent.automaton, parent.W), opts.exec);
  level.K = cert.K;
  level.automaton = window_restriction(parent.automaton, parent.W, level.L * level.K);
  level.automaton.set_name("X_" + std::to_string(i));
  if (!is_mixing(level.automaton))
    throw ContractViolation("level " + std::to_string(i) + " restriction is not mixing");
  level.W = build_minimality_word(level.automaton, i + 1);
  if (opts.compute_entropy) level.entropy = entropy_detail(level.automaton, opts.exec).entropy;

  TowerSpec out = spec;
  out.levels.push_back(std::move(level));
  return out;
}

TowerSpec build_tower(std::vector<std::size_t> schedule, std::size_t depth,
                      const ExtendOptions& opts) {
  if (schedule.size() < depth) throw InputError("schedule shorter than the requested depth");
  TowerSpec spec = initial_tower(std::move(schedule));
  if (opts.compute_entropy) spec.levels[0].entropy = entropy_detail(spec.levels[0].automaton).entropy;
  for (std::size_t d = 0; d < depth; ++d) spec = extend_tower(spec, opts);
  return spec;
}

}  // namespace subshift
