#pragma once

// Finite words over small named alphabets and the combinatorics built on
// them: borders (overlaps), pattern occurrences and first-return times.
//
// Indexing is 0-based throughout. A word a of length r is a[0] ... a[r-1];
// suffix_k(a) = a[r-k .. r) and prefix_k(a) = a[0 .. k).

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace subshift {

using Symbol = std::uint8_t;

class Alphabet {
 public:
  // Names must be distinct and at least two; codes are assigned in order.
  explicit Alphabet(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(Symbol code) const { return names_.at(code); }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<Symbol> find(std::string_view name) const;
  Symbol code(std::string_view name) const;  // throws InputError

  // True when every name is a single character, so words print without
  // separators.
  bool compact() const { return compact_; }

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.names_ == b.names_;
  }

 private:
  std::vector<std::string> names_;
  bool compact_ = true;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

AlphabetPtr make_alphabet(std::vector<std::string> names);

// {-1, 1}, the alphabet of the sign points.
AlphabetPtr sign_alphabet();
// {0, 1}.
AlphabetPtr binary_alphabet();

bool same_alphabet(const AlphabetPtr& a, const AlphabetPtr& b);

class Word {
 public:
  Word() = default;
  explicit Word(AlphabetPtr alphabet, std::vector<Symbol> data = {});

  // Accepts whitespace-separated names ("-1 1"), or for compact alphabets a
  // run of single characters ("aab").
  static Word parse(AlphabetPtr alphabet, std::string_view text);

  const AlphabetPtr& alphabet() const { return alphabet_; }
  std::span<const Symbol> symbols() const { return data_; }
  const std::vector<Symbol>& data() const { return data_; }

  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  Symbol operator[](std::size_t i) const { return data_[i]; }

  Word slice(std::size_t pos, std::size_t len) const;
  Word operator+(const Word& rhs) const;
  Word& operator+=(const Word& rhs);

  std::string to_string() const;
  std::vector<std::string> to_names() const;

  friend bool operator==(const Word& a, const Word& b);

 private:
  AlphabetPtr alphabet_;
  std::vector<Symbol> data_;
};

// Longest k with suffix_k(a) = prefix_k(b) or suffix_k(b) = prefix_k(a),
// 0 if none. Requires a != b, both nonempty, same alphabet.
std::size_t overlap(const Word& a, const Word& b);

// Longest proper border of a (k < |a|). Requires |a| >= 1.
std::size_t self_overlap(const Word& a);

enum class Recurrence {
  kAnyShift,       // min k > 0
  kPastOwnLength,  // min k > n - 1
};

// First k (per `variant`) with x[k .. k+n) = x[0 .. n) and k + n <= |x|;
// nullopt when the prefix never recurs inside the finite word.
std::optional<std::size_t> recurrence_time(const Word& x, std::size_t n,
                                           Recurrence variant = Recurrence::kAnyShift);

// All start indices of pattern in text, ascending, overlaps included.
std::vector<std::size_t> occurrences(const Word& pattern, const Word& text);
bool contains(const Word& text, const Word& pattern);

// Failure function of a symbol sequence: pi[i] is the length of the longest
// proper border of s[0 .. i].
std::vector<std::size_t> border_table(std::span<const Symbol> s);

// Deterministic string-matching automaton for one pattern. States are the
// lengths 0 .. |W|-1 of the currently matched prefix; a step reports whether
// an occurrence of W ended on the symbol just read.
class PatternMatcher {
 public:
  PatternMatcher(std::span<const Symbol> pattern, std::size_t alphabet_size);

  struct Step {
    std::uint32_t state;
    bool completed;
  };

  std::size_t pattern_size() const { return size_; }
  // Number of states; 1 for the empty pattern.
  std::size_t num_states() const { return size_ == 0 ? 1 : size_; }
  // State right after an occurrence completes.
  std::uint32_t after_match() const { return after_match_; }

  Step step(std::uint32_t state, Symbol c) const {
    return table_[state * alphabet_size_ + c];
  }

 private:
  std::size_t size_;
  std::size_t alphabet_size_;
  std::uint32_t after_match_ = 0;
  std::vector<Step> table_;
};

}  // namespace subshift
