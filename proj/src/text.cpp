#include "ontoground/text.hpp"

#include <algorithm>
#include <cctype>

namespace ontoground::text {

std::string fold_case(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    unsigned char uc = static_cast<unsigned char>(c);
    out.push_back(uc < 0x80 ? static_cast<char>(std::tolower(uc)) : c);
  }
  return out;
}

int count_tokens(std::string_view s) {
  int count = 0;
  bool in_token = false;
  for (char c : s) {
    bool ws = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!ws && !in_token) {
      ++count;
      in_token = true;
    } else if (ws) {
      in_token = false;
    }
  }
  return count;
}

bool is_word_char(char c) {
  unsigned char uc = static_cast<unsigned char>(c);
  if (uc >= 0x80) return true;  // treat UTF-8 continuation/lead bytes as word content
  return std::isalnum(uc) != 0 || c == '_';
}

std::vector<Span> word_spans(std::string_view s) {
  std::vector<Span> spans;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!is_word_char(s[i])) {
      ++i;
      continue;
    }
    std::size_t begin = i;
    while (i < s.size() && is_word_char(s[i])) ++i;
    spans.push_back({begin, i, std::string(s.substr(begin, i - begin))});
  }
  return spans;
}

std::vector<std::string> folded_terms(std::string_view s) {
  std::vector<std::string> terms;
  for (const auto& span : word_spans(s)) terms.push_back(fold_case(span.token));
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  return terms;
}

bool contains_term(std::string_view hay_folded, std::string_view term_folded) {
  if (term_folded.empty()) return false;
  std::size_t pos = 0;
  while ((pos = hay_folded.find(term_folded, pos)) != std::string_view::npos) {
    bool left_ok = pos == 0 || !is_word_char(hay_folded[pos - 1]);
    std::size_t after = pos + term_folded.size();
    bool right_ok = after >= hay_folded.size() || !is_word_char(hay_folded[after]);
    if (left_ok && right_ok) return true;
    ++pos;
  }
  return false;
}

int bounded_edit_distance(std::string_view a, std::string_view b, int limit) {
  // Optimal string alignment distance: insert, delete, substitute, and
  // transposition of adjacent characters each cost 1.
  int la = static_cast<int>(a.size());
  int lb = static_cast<int>(b.size());
  if (std::abs(la - lb) > limit) return limit + 1;
  std::vector<int> prev2(lb + 1), prev(lb + 1), cur(lb + 1);
  for (int j = 0; j <= lb; ++j) prev[j] = j;
  for (int i = 1; i <= la; ++i) {
    cur[0] = i;
    int row_min = cur[0];
    for (int j = 1; j <= lb; ++j) {
      int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) {
        cur[j] = std::min(cur[j], prev2[j - 2] + 1);
      }
      row_min = std::min(row_min, cur[j]);
    }
    if (row_min > limit) return limit + 1;
    prev2 = prev;
    std::swap(prev, cur);
  }
  return std::min(prev[lb], limit + 1);
}

std::vector<Span> split_sentences(std::string_view s) {
  std::vector<Span> out;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    bool terminator = c == '!' || c == '?' || c == ';' || c == '\n';
    if (c == '.') {
      // A period between digits is a decimal point, not a terminator.
      bool decimal = i > 0 && i + 1 < s.size() &&
                     std::isdigit(static_cast<unsigned char>(s[i - 1])) &&
                     std::isdigit(static_cast<unsigned char>(s[i + 1]));
      terminator = !decimal;
    }
    if (terminator) {
      if (i + 1 > begin) out.push_back({begin, i + 1, std::string(s.substr(begin, i + 1 - begin))});
      begin = i + 1;
    }
  }
  if (begin < s.size()) out.push_back({begin, s.size(), std::string(s.substr(begin))});
  return out;
}

bool parse_number(std::string_view s, std::size_t pos, double& value, std::size_t& end) {
  std::size_t i = pos;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  std::size_t digits_start = i;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i == digits_start) return false;
  if (i < s.size() && s[i] == '.' && i + 1 < s.size() &&
      std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  }
  value = std::stod(std::string(s.substr(pos, i - pos)));
  end = i;
  return true;
}

}  // namespace ontoground::text
