#include "subshift/words.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "subshift/errors.hpp"

namespace subshift {

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() < 2) throw InputError("alphabet needs at least two symbols");
  if (names_.size() > 256) throw InputError("alphabet larger than 256 symbols");
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw InputError("alphabet symbol names must be nonempty");
    if (std::any_of(n.begin(), n.end(), [](unsigned char ch) { return std::isspace(ch); }))
      throw InputError("alphabet symbol '" + n + "' contains whitespace");
    if (!seen.insert(n).second) throw InputError("duplicate alphabet symbol '" + n + "'");
    if (n.size() != 1) compact_ = false;
  }
}

std::optional<Symbol> Alphabet::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<Symbol>(i);
  return std::nullopt;
}

Symbol Alphabet::code(std::string_view name) const {
  if (auto c = find(name)) return *c;
  throw InputError("unknown symbol '" + std::string(name) + "'");
}

AlphabetPtr make_alphabet(std::vector<std::string> names) {
  return std::make_shared<const Alphabet>(std::move(names));
}

AlphabetPtr sign_alphabet() {
  static const AlphabetPtr a = make_alphabet({"-1", "1"});
  return a;
}

AlphabetPtr binary_alphabet() {
  static const AlphabetPtr a = make_alphabet({"0", "1"});
  return a;
}

bool same_alphabet(const AlphabetPtr& a, const AlphabetPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

Word::Word(AlphabetPtr alphabet, std::vector<Symbol> data)
    : alphabet_(std::move(alphabet)), data_(std::move(data)) {
  if (!alphabet_) throw InputError("word without alphabet");
  for (Symbol c : data_)
    if (c >= alphabet_->size()) throw InputError("symbol code out of range for alphabet");
}

Word Word::parse(AlphabetPtr alphabet, std::string_view text) {
  std::vector<Symbol> out;
  const bool has_space = std::any_of(text.begin(), text.end(),
                                     [](unsigned char ch) { return std::isspace(ch); });
  if (!has_space && alphabet->compact()) {
    for (char ch : text) out.push_back(alphabet->code(std::string_view(&ch, 1)));
  } else {
    std::size_t i = 0;
    while (i < text.size()) {
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
      if (j > i) out.push_back(alphabet->code(text.substr(i, j - i)));
      i = j;
    }
  }
  return Word(std::move(alphabet), std::move(out));
}

Word Word::slice(std::size_t pos, std::size_t len) const {
  if (pos > data_.size() || len > data_.size() - pos)
    throw InputError("word slice out of range");
  return Word(alphabet_, std::vector<Symbol>(data_.begin() + pos, data_.begin() + pos + len));
}

Word Word::operator+(const Word& rhs) const {
  Word out = *this;
  out += rhs;
  return out;
}

Word& Word::operator+=(const Word& rhs) {
  if (!same_alphabet(alphabet_, rhs.alphabet_)) throw InputError("alphabet mismatch in concatenation");
  data_.insert(data_.end(), rhs.data_.begin(), rhs.data_.end());
  return *this;
}

std::string Word::to_string() const {
  std::string out;
  const bool compact = alphabet_ && alphabet_->compact();
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!compact && i) out += ' ';
    out += alphabet_->name(data_[i]);
  }
  return out;
}

std::vector<std::string> Word::to_names() const {
  std::vector<std::string> out;
  out.reserve(data_.size());
  for (Symbol c : data_) out.push_back(alphabet_->name(c));
  return out;
}

bool operator==(const Word& a, const Word& b) {
  return a.data_ == b.data_ && same_alphabet(a.alphabet_, b.alphabet_);
}

std::vector<std::size_t> border_table(std::span<const Symbol> s) {
  std::vector<std::size_t> pi(s.size(), 0);
  for (std::size_t i = 1; i < s.size(); ++i) {
    std::size_t k = pi[i - 1];
    while (k > 0 && s[i] != s[k]) k = pi[k - 1];
    if (s[i] == s[k]) ++k;
    pi[i] = k;
  }
  return pi;
}

namespace {

// Longest k <= min(|a|, |b|) with suffix_k(a) = prefix_k(b): failure function
// of b # a where # never matches.
std::size_t suffix_prefix(std::span<const Symbol> a, std::span<const Symbol> b) {
  constexpr int kSeparator = -1;
  std::vector<int> s;
  s.reserve(a.size() + b.size() + 1);
  for (Symbol c : b) s.push_back(c);
  s.push_back(kSeparator);
  for (Symbol c : a) s.push_back(c);
  std::vector<std::size_t> pi(s.size(), 0);
  for (std::size_t i = 1; i < s.size(); ++i) {
    std::size_t k = pi[i - 1];
    while (k > 0 && s[i] != s[k]) k = pi[k - 1];
    if (s[i] == s[k]) ++k;
    pi[i] = k;
  }
  return pi.back();
}

void require_same(const Word& a, const Word& b) {
  if (!same_alphabet(a.alphabet(), b.alphabet())) throw InputError("alphabet mismatch");
}

}  // namespace

std::size_t overlap(const Word& a, const Word& b) {
  require_same(a, b);
  if (a.empty() || b.empty()) throw InputError("overlap of an empty word");
  if (a == b) throw InputError("overlap needs two different words; use self_overlap");
  return std::max(suffix_prefix(a.symbols(), b.symbols()), suffix_prefix(b.symbols(), a.symbols()));
}

std::size_t self_overlap(const Word& a) {
  if (a.empty()) throw InputError("self_overlap of the empty word");
  return border_table(a.symbols()).back();
}

std::vector<std::size_t> occurrences(const Word& pattern, const Word& text) {
  require_same(pattern, text);
  if (pattern.empty()) throw InputError("empty pattern");
  const auto p = pattern.symbols();
  const auto t = text.symbols();
  const auto pi = border_table(p);
  std::vector<std::size_t> out;
  std::size_t k = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    while (k > 0 && (k == p.size() || t[i] != p[k])) k = pi[k - 1];
    if (t[i] == p[k]) ++k;
    if (k == p.size()) out.push_back(i + 1 - p.size());
  }
  return out;
}

bool contains(const Word& text, const Word& pattern) {
  if (pattern.empty()) return true;
  if (pattern.size() > text.size()) return false;
  return !occurrences(pattern, text).empty();
}

std::optional<std::size_t> recurrence_time(const Word& x, std::size_t n, Recurrence variant) {
  if (n == 0) throw InputError("recurrence_time needs n >= 1");
  if (n > x.size()) throw InputError("recurrence_time: n exceeds the available prefix");
  const std::size_t min_k = variant == Recurrence::kAnyShift ? 1 : n;
  for (std::size_t k : occurrences(x.slice(0, n), x))
    if (k >= min_k) return k;
  return std::nullopt;
}

PatternMatcher::PatternMatcher(std::span<const Symbol> pattern, std::size_t alphabet_size)
    : size_(pattern.size()), alphabet_size_(alphabet_size) {
  const std::size_t states = num_states();
  table_.resize(states * alphabet_size_);
  if (size_ == 0) {
    for (std::size_t c = 0; c < alphabet_size_; ++c) table_[c] = {0, true};
    return;
  }
  const auto pi = border_table(pattern);
  after_match_ = static_cast<std::uint32_t>(pi.back());
  // Standard KMP automaton; a completed match falls back to its border.
  for (std::size_t j = 0; j < states; ++j) {
    for (std::size_t c = 0; c < alphabet_size_; ++c) {
      std::size_t k = j;
      while (k > 0 && pattern[k] != c) k = pi[k - 1];
      if (pattern[k] == c) ++k;
      if (k == size_) {
        table_[j * alphabet_size_ + c] = {after_match_, true};
      } else {
        table_[j * alphabet_size_ + c] = {static_cast<std::uint32_t>(k), false};
      }
    }
  }
}

}  // namespace subshift
