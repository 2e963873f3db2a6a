#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "boolkill/error.hpp"
#include "boolkill/logic.hpp"

namespace boolkill {

// Rendered context + question. Line i (0-based) describes S_i; the final
// line is "Is S{question_index} true or false?".
struct RenderedSample {
  std::string text;
  std::size_t question_index = 0;
};

struct ParsedSample {
  std::vector<Statement> statements;
  std::string fact_text;
  std::size_t question_index = 0;

  friend bool operator==(const ParsedSample&, const ParsedSample&) = default;
};

struct ParseOptions {
  // Also accept the unprefixed listing ("S1 is a false statement." as the
  // bare line describing S1, asserting on S0) and fact text wrapped over
  // several lines before the first statement.
  bool accept_unprefixed = false;
};

namespace detail {

inline std::string statement_body(const Statement& s) {
  if (const auto* a = std::get_if<Assert>(&s)) {
    return "S" + std::to_string(a->target) + (a->polarity ? " is a true statement." : " is a false statement.");
  }
  const auto& c = std::get<Connect>(s);
  const std::string l = "S" + std::to_string(c.left);
  const std::string r = "S" + std::to_string(c.right);
  if (c.op == Op::Or) {
    return c.polarity ? "Either " + l + " or " + r + " is a true statement."
                      : "It is false that either " + l + " or " + r + " is a true statement.";
  }
  return c.polarity ? "Both " + l + " and " + r + " are true statements."
                    : "It is false that both " + l + " and " + r + " are true statements.";
}

inline bool has_line_break(std::string_view s) {
  return s.find('\n') != std::string_view::npos || s.find('\r') != std::string_view::npos;
}

inline std::string_view trim(std::string_view s) {
  auto ws = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

// Cursor over one line. Every consume_* either advances or leaves the
// cursor untouched and returns false/nullopt.
class LineCursor {
 public:
  explicit LineCursor(std::string_view line) : rest_(line) {}

  bool literal(std::string_view lit) {
    if (rest_.substr(0, lit.size()) != lit) return false;
    rest_.remove_prefix(lit.size());
    return true;
  }

  // "S" followed by a canonical decimal (no sign, no leading zeros).
  std::optional<std::size_t> statement_ref() {
    if (rest_.empty() || rest_.front() != 'S') return std::nullopt;
    std::string_view digits = rest_.substr(1);
    std::size_t n = 0;
    while (n < digits.size() && std::isdigit(static_cast<unsigned char>(digits[n]))) ++n;
    if (n == 0 || (n > 1 && digits[0] == '0')) return std::nullopt;
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + n, value);
    if (ec != std::errc{}) return std::nullopt;
    rest_.remove_prefix(1 + n);
    return value;
  }

  bool done() const { return rest_.empty(); }
  std::string_view rest() const { return rest_; }

 private:
  std::string_view rest_;
};

// Parses "S{j} is a {true|false} statement." and the connective forms.
// Returns nullopt when the body matches none of the templates.
inline std::optional<Statement> parse_body(std::string_view body) {
  {
    LineCursor c(body);
    if (auto j = c.statement_ref()) {
      if (c.literal(" is a true statement.") && c.done()) return Assert{*j, true};
      LineCursor d(body);
      d.statement_ref();
      if (d.literal(" is a false statement.") && d.done()) return Assert{*j, false};
    }
  }
  auto connective = [&](std::string_view lead, std::string_view mid, std::string_view tail, Op op,
                        bool polarity) -> std::optional<Statement> {
    LineCursor c(body);
    if (!c.literal(lead)) return std::nullopt;
    auto a = c.statement_ref();
    if (!a || !c.literal(mid)) return std::nullopt;
    auto b = c.statement_ref();
    if (!b || !c.literal(tail) || !c.done()) return std::nullopt;
    return Connect{op, *a, *b, polarity};
  };
  if (auto s = connective("Either ", " or ", " is a true statement.", Op::Or, true)) return s;
  if (auto s = connective("Both ", " and ", " are true statements.", Op::And, true)) return s;
  if (auto s = connective("It is false that either ", " or ", " is a true statement.", Op::Or, false)) return s;
  if (auto s = connective("It is false that both ", " and ", " are true statements.", Op::And, false)) return s;
  return std::nullopt;
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (true) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

inline void check_references(const Statement& s, std::size_t pos, std::size_t line_no) {
  auto check = [&](std::size_t ref) {
    if (ref >= pos) {
      throw ParseError(line_no, "S" + std::to_string(pos) + " makes a forward reference to S" + std::to_string(ref));
    }
  };
  if (const auto* a = std::get_if<Assert>(&s)) {
    check(a->target);
  } else {
    const auto& c = std::get<Connect>(s);
    check(c.left);
    check(c.right);
    if (c.left == c.right) {
      throw ParseError(line_no, "S" + std::to_string(pos) + " connects S" + std::to_string(c.left) + " with itself");
    }
  }
}

}  // namespace detail

inline RenderedSample render(const std::vector<Statement>& statements, std::string_view fact_text) {
  if (detail::trim(fact_text).empty()) throw DataError("fact text is empty");
  if (detail::has_line_break(fact_text)) throw DataError("fact text contains a line break");
  validate(statements);
  std::string text = "S0: ";
  text += fact_text;
  for (std::size_t i = 1; i <= statements.size(); ++i) {
    text += "\nS" + std::to_string(i) + ": " + detail::statement_body(statements[i - 1]);
  }
  text += "\nIs S" + std::to_string(statements.size()) + " true or false?";
  return {std::move(text), statements.size()};
}

inline RenderedSample render(const Chain& chain, std::string_view fact_text) {
  return render(chain.statements, fact_text);
}

inline ParsedSample parse(std::string_view text, const ParseOptions& options = {}) {
  const auto lines = detail::split_lines(text);
  if (lines.size() < 2) throw ParseError(lines.size(), "expected a fact line and a question line");

  ParsedSample out;
  {
    detail::LineCursor c(lines[0]);
    if (!c.literal("S0: ")) throw ParseError(1, "expected \"S0: <fact>\"");
    if (detail::trim(c.rest()).empty()) throw ParseError(1, "empty fact text");
    out.fact_text = std::string(c.rest());
  }

  std::size_t i = 1;
  const std::size_t last = lines.size() - 1;
  bool in_fact = options.accept_unprefixed;
  for (; i < last; ++i) {
    const std::size_t line_no = i + 1;
    const std::size_t pos = out.statements.size() + 1;
    detail::LineCursor c(lines[i]);
    std::optional<Statement> stmt;

    if (auto n = c.statement_ref(); n && c.literal(": ")) {
      if (*n != pos) {
        throw ParseError(line_no, "expected S" + std::to_string(pos) + ", found S" + std::to_string(*n));
      }
      stmt = detail::parse_body(c.rest());
      if (!stmt) throw ParseError(line_no, "unrecognized statement \"" + std::string(lines[i]) + "\"");
    } else if (options.accept_unprefixed) {
      stmt = detail::parse_body(lines[i]);
      if (stmt) {
        const auto* a = std::get_if<Assert>(&*stmt);
        if (a == nullptr || a->target != pos) {
          throw ParseError(line_no, "unprefixed statement must read \"S" + std::to_string(pos) +
                                        " is a true|false statement.\"");
        }
        stmt = Assert{pos - 1, a->polarity};
      } else if (in_fact && !detail::trim(lines[i]).empty()) {
        out.fact_text += " ";
        out.fact_text += detail::trim(lines[i]);
        continue;
      } else {
        throw ParseError(line_no, "unrecognized statement \"" + std::string(lines[i]) + "\"");
      }
    } else if (lines[i].starts_with("Is ")) {
      throw ParseError(line_no, "the question must be the last line");
    } else {
      throw ParseError(line_no, "expected \"S" + std::to_string(pos) + ": ...\"");
    }
    in_fact = false;
    detail::check_references(*stmt, pos, line_no);
    out.statements.push_back(*stmt);
  }

  detail::LineCursor q(lines[last]);
  std::optional<std::size_t> target;
  if (!q.literal("Is ") || !(target = q.statement_ref()) || !q.literal(" true or false?") || !q.done()) {
    throw ParseError(last + 1, "expected \"Is S<k> true or false?\"");
  }
  if (*target > out.statements.size()) {
    throw ParseError(last + 1, "question targets nonexistent statement S" + std::to_string(*target));
  }
  out.question_index = *target;
  return out;
}

// "{premise} So, {hypothesis}" with surrounding whitespace trimmed.
inline std::string join_fact(std::string_view premise, std::string_view hypothesis) {
  premise = detail::trim(premise);
  hypothesis = detail::trim(hypothesis);
  if (premise.empty()) throw DataError("empty premise");
  if (hypothesis.empty()) throw DataError("empty hypothesis");
  if (detail::has_line_break(premise) || detail::has_line_break(hypothesis)) {
    throw DataError("premise or hypothesis contains a line break");
  }
  std::string out(premise);
  out += " So, ";
  out += hypothesis;
  return out;
}

// Whitespace-separated tokens whose alphabetic core equals `word`,
// ignoring case ("false?" and "False" both count as "false").
inline std::size_t count_word(std::string_view text, std::string_view word) {
  std::size_t count = 0;
  std::size_t i = 0;
  auto is_space = [](char ch) { return std::isspace(static_cast<unsigned char>(ch)) != 0; };
  auto is_alnum = [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) != 0; };
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    std::string_view tok = text.substr(i, j - i);
    while (!tok.empty() && !is_alnum(tok.front())) tok.remove_prefix(1);
    while (!tok.empty() && !is_alnum(tok.back())) tok.remove_suffix(1);
    if (tok.size() == word.size() &&
        std::equal(tok.begin(), tok.end(), word.begin(), [](char a, char b) {
          return std::tolower(static_cast<unsigned char>(a)) == std::tolower(static_cast<unsigned char>(b));
        })) {
      ++count;
    }
    i = j;
  }
  return count;
}

inline std::size_t count_tokens(std::string_view text) {
  std::size_t count = 0;
  bool in_token = false;
  for (char ch : text) {
    const bool space = std::isspace(static_cast<unsigned char>(ch)) != 0;
    if (!space && !in_token) ++count;
    in_token = !space;
  }
  return count;
}

}  // namespace boolkill
