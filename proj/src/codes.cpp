#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "knotscope/codes.hpp"
#include "knotscope/error.hpp"

namespace knotscope {

namespace {

std::vector<long> parse_integers(std::string_view text) {
  std::vector<long> out;
  std::size_t i = 0;
  auto is_sep = [](char ch) {
    return ch == ' ' || ch == '\t' || ch == ',' || ch == '\n' || ch == '\r' || ch == '(' ||
           ch == ')' || ch == '[' || ch == ']' || ch == '{' || ch == '}';
  };
  while (i < text.size()) {
    if (is_sep(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !is_sep(text[j]))
      ++j;
    std::string_view tok = text.substr(i, j - i);
    std::string_view digits = tok;
    if (!digits.empty() && digits.front() == '+')
      digits.remove_prefix(1);
    long value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty())
      fail(ErrorCode::ParseError, "not an integer: '" + std::string(tok) + "'");
    out.push_back(value);
    i = j;
  }
  return out;
}

} // namespace

// ----------------------------------------------------------------- DTCode

DTCode::DTCode(std::vector<int> values) : values_(std::move(values)) {
  const int c = crossings();
  std::vector<bool> seen(static_cast<std::size_t>(c) + 1, false);
  for (int v : values_) {
    if (v % 2 != 0)
      fail(ErrorCode::OddValue, "DT code value " + std::to_string(v) + " is odd");
    int mag = v < 0 ? -v : v;
    if (mag < 2 || mag > 2 * c)
      fail(ErrorCode::WrongRange, "DT code value " + std::to_string(v) + " outside {2, ..., " +
                                      std::to_string(2 * c) + "}");
    if (seen[mag / 2])
      fail(ErrorCode::DuplicateMagnitude,
           "DT code magnitude " + std::to_string(mag) + " appears twice");
    seen[mag / 2] = true;
  }
}

bool DTCode::all_positive() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](int v) { return v > 0; });
}

std::string DTCode::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < values_.size(); ++i)
    os << (i ? " " : "") << values_[i];
  return os.str();
}

DTCode parse_dt(std::string_view text) {
  std::vector<int> values;
  for (long v : parse_integers(text)) {
    if (v < -(1L << 20) || v > (1L << 20))
      fail(ErrorCode::WrongRange, "DT code value " + std::to_string(v) + " out of range");
    values.push_back(static_cast<int>(v));
  }
  return DTCode(std::move(values));
}

bool dt_less(const DTCode& a, const DTCode& b) {
  auto key = [](int v) { return std::pair<int, int>(v < 0 ? -v : v, v < 0 ? 1 : 0); };
  auto av = a.values();
  auto bv = b.values();
  return std::lexicographical_compare(av.begin(), av.end(), bv.begin(), bv.end(),
                                      [&](int x, int y) { return key(x) < key(y); });
}

// -------------------------------------------------------------- GaussCode

GaussCode::GaussCode(std::vector<GaussEntry> entries) : entries_(std::move(entries)) {
  if (entries_.size() % 2 != 0)
    fail(ErrorCode::InvalidGauss, "Gauss code has odd length");
  const int c = crossings();
  std::vector<int> over(static_cast<std::size_t>(c) + 1, 0);
  std::vector<int> under(static_cast<std::size_t>(c) + 1, 0);
  for (const auto& e : entries_) {
    if (e.crossing < 1 || e.crossing > c)
      fail(ErrorCode::InvalidGauss,
           "Gauss label " + std::to_string(e.crossing) + " outside 1.." + std::to_string(c));
    if (e.sign < -1 || e.sign > 1)
      fail(ErrorCode::InvalidGauss, "Gauss sign must be -1, 0 or +1");
    (e.over ? over : under)[e.crossing]++;
  }
  for (int k = 1; k <= c; ++k)
    if (over[k] != 1 || under[k] != 1)
      fail(ErrorCode::InvalidGauss,
           "crossing " + std::to_string(k) + " must appear once over and once under");
}

std::string GaussCode::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    os << (i ? " " : "") << (entries_[i].over ? "" : "-") << entries_[i].crossing;
  return os.str();
}

GaussCode parse_gauss(std::string_view text) {
  std::map<long, int> relabel;
  std::vector<GaussEntry> entries;
  for (long v : parse_integers(text)) {
    if (v == 0)
      fail(ErrorCode::ParseError, "Gauss code label 0 is not allowed");
    long label = v < 0 ? -v : v;
    auto [it, inserted] = relabel.try_emplace(label, static_cast<int>(relabel.size()) + 1);
    entries.push_back(GaussEntry{it->second, v > 0, 0});
  }
  return GaussCode(std::move(entries));
}

GaussCode dt_to_gauss(const DTCode& code) {
  const int c = code.crossings();
  std::vector<GaussEntry> entries(static_cast<std::size_t>(2 * c));
  auto values = code.values();
  for (int i = 0; i < c; ++i) {
    int even = values[i] < 0 ? -values[i] : values[i];
    bool even_over = values[i] > 0;
    entries[2 * i] = GaussEntry{i + 1, !even_over, 0};
    entries[even - 1] = GaussEntry{i + 1, even_over, 0};
  }
  return GaussCode(std::move(entries));
}

namespace {

// DT code of the sequence visited as seq[start], seq[start+dir], ...
bool dt_from_rotation(std::span<const GaussEntry> seq, int start, int dir, std::vector<int>& out) {
  const int n = static_cast<int>(seq.size());
  const int c = n / 2;
  std::vector<int> odd_pos(static_cast<std::size_t>(c) + 1, 0);
  std::vector<int> even_pos(static_cast<std::size_t>(c) + 1, 0);
  std::vector<bool> even_under(static_cast<std::size_t>(c) + 1, false);
  for (int k = 0; k < n; ++k) {
    const auto& e = seq[((start + dir * k) % n + n) % n];
    int pos = k + 1;
    auto label = static_cast<std::size_t>(e.crossing);
    if (pos % 2 == 1) {
      if (odd_pos[label] != 0)
        return false;
      odd_pos[label] = pos;
    } else {
      if (even_pos[label] != 0)
        return false;
      even_pos[label] = pos;
      even_under[label] = !e.over;
    }
  }
  out.assign(static_cast<std::size_t>(c), 0);
  for (int k = 1; k <= c; ++k) {
    auto idx = static_cast<std::size_t>((odd_pos[k] - 1) / 2);
    out[idx] = even_under[k] ? -even_pos[k] : even_pos[k];
  }
  return true;
}

} // namespace

DTCode gauss_to_dt(const GaussCode& gauss) {
  std::vector<int> values;
  if (!dt_from_rotation(gauss.entries(), 0, 1, values))
    fail(ErrorCode::NonRealizable, "Gauss code visits a crossing twice with the same parity");
  return DTCode(std::move(values));
}

DTCode canonical_dt(const GaussCode& gauss) {
  const int n = static_cast<int>(gauss.size());
  if (n == 0)
    return DTCode();
  std::vector<int> values;
  bool have = false;
  DTCode best;
  for (int dir : {1, -1}) {
    for (int s = 0; s < n; ++s) {
      if (!dt_from_rotation(gauss.entries(), s, dir, values))
        fail(ErrorCode::NonRealizable, "Gauss code visits a crossing twice with the same parity");
      DTCode candidate(values);
      if (!have || dt_less(candidate, best)) {
        best = std::move(candidate);
        have = true;
      }
    }
  }
  return best;
}

DTCode canonical_dt(const DTCode& code) { return canonical_dt(dt_to_gauss(code)); }

} // namespace knotscope
