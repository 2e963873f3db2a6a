#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "boolkill/error.hpp"

namespace boolkill {

// Truth value of a statement. The numeric encoding follows the label
// convention y in {0, 1} with 0 = True and 1 = False.
enum class Truth : std::uint8_t { True = 0, False = 1 };

constexpr Truth negate(Truth t) { return t == Truth::True ? Truth::False : Truth::True; }
constexpr bool to_bool(Truth t) { return t == Truth::True; }
constexpr Truth from_bool(bool b) { return b ? Truth::True : Truth::False; }
constexpr std::string_view to_string(Truth t) { return t == Truth::True ? "true" : "false"; }

inline Truth parse_truth(std::string_view s) {
  if (s == "true") return Truth::True;
  if (s == "false") return Truth::False;
  throw DataError("expected \"true\" or \"false\", got \"" + std::string(s) + "\"");
}

enum class Op : std::uint8_t { And, Or };

// "S{i}: S{target} is a {true|false} statement."
struct Assert {
  std::size_t target = 0;
  bool polarity = true;

  friend bool operator==(const Assert&, const Assert&) = default;
};

// "S{i}: Either S{left} or S{right} is a true statement." (Or) and
// "S{i}: Both S{left} and S{right} are true statements." (And). A false
// polarity negates the combined value.
struct Connect {
  Op op = Op::And;
  std::size_t left = 0;
  std::size_t right = 0;
  bool polarity = true;

  friend bool operator==(const Connect&, const Connect&) = default;
};

using Statement = std::variant<Assert, Connect>;

// A fact's truth followed by k statements. Statement i (1-based) may only
// reference positions 0..i-1, where position 0 is the fact itself.
struct Chain {
  Truth fact_truth = Truth::True;
  std::vector<Statement> statements;

  std::size_t depth() const { return statements.size(); }

  friend bool operator==(const Chain&, const Chain&) = default;
};

inline bool is_not_only(const std::vector<Statement>& statements) {
  for (const auto& s : statements) {
    if (std::holds_alternative<Connect>(s)) return false;
  }
  return true;
}

// Throws StructureError on the first statement that breaks the reference
// rules.
inline void validate(const std::vector<Statement>& statements) {
  for (std::size_t pos = 1; pos <= statements.size(); ++pos) {
    const auto& s = statements[pos - 1];
    auto check = [pos](std::size_t ref) {
      if (ref >= pos) {
        throw StructureError("S" + std::to_string(pos) + " references S" + std::to_string(ref) +
                             ", which is not an earlier statement");
      }
    };
    if (const auto* a = std::get_if<Assert>(&s)) {
      check(a->target);
    } else {
      const auto& c = std::get<Connect>(s);
      check(c.left);
      check(c.right);
      if (c.left == c.right) {
        throw StructureError("S" + std::to_string(pos) + " connects S" + std::to_string(c.left) +
                             " with itself");
      }
    }
  }
}

// Truth values t_1..t_k of every statement, computed by the forward
// recursion: a false assertion negates its target, a true one copies it.
inline std::vector<Truth> eval_trace(const Chain& chain) {
  validate(chain.statements);
  std::vector<Truth> values;
  values.reserve(chain.depth() + 1);
  values.push_back(chain.fact_truth);
  for (const auto& s : chain.statements) {
    Truth t;
    if (const auto* a = std::get_if<Assert>(&s)) {
      t = a->polarity ? values[a->target] : negate(values[a->target]);
    } else {
      const auto& c = std::get<Connect>(s);
      const bool l = to_bool(values[c.left]);
      const bool r = to_bool(values[c.right]);
      const bool v = c.op == Op::And ? (l && r) : (l || r);
      t = from_bool(c.polarity ? v : !v);
    }
    values.push_back(t);
  }
  values.erase(values.begin());
  return values;
}

inline Truth final_label(const Chain& chain) {
  const auto trace = eval_trace(chain);
  return trace.empty() ? chain.fact_truth : trace.back();
}

// Boolean expression over the single variable t0 (the fact).
struct BooleanExpr {
  enum class Kind { Fact, Not, And, Or };

  Kind kind = Kind::Fact;
  std::shared_ptr<const BooleanExpr> lhs;
  std::shared_ptr<const BooleanExpr> rhs;
};

using ExprPtr = std::shared_ptr<const BooleanExpr>;

// Expression for the last statement of the chain (or the bare fact when
// the chain is empty). Subexpressions are shared, not copied.
inline ExprPtr compile_expression(const std::vector<Statement>& statements) {
  validate(statements);
  auto make = [](BooleanExpr::Kind kind, ExprPtr l = nullptr, ExprPtr r = nullptr) {
    return std::make_shared<const BooleanExpr>(BooleanExpr{kind, std::move(l), std::move(r)});
  };
  std::vector<ExprPtr> nodes{make(BooleanExpr::Kind::Fact)};
  for (const auto& s : statements) {
    if (const auto* a = std::get_if<Assert>(&s)) {
      nodes.push_back(a->polarity ? nodes[a->target] : make(BooleanExpr::Kind::Not, nodes[a->target]));
    } else {
      const auto& c = std::get<Connect>(s);
      auto joined = make(c.op == Op::And ? BooleanExpr::Kind::And : BooleanExpr::Kind::Or, nodes[c.left],
                         nodes[c.right]);
      nodes.push_back(c.polarity ? joined : make(BooleanExpr::Kind::Not, joined));
    }
  }
  return nodes.back();
}

// Substitutes the fact value into the tree and reduces it bottom-up.
inline bool substitute(const BooleanExpr& e, bool fact) {
  switch (e.kind) {
    case BooleanExpr::Kind::Fact:
      return fact;
    case BooleanExpr::Kind::Not:
      return !substitute(*e.lhs, fact);
    case BooleanExpr::Kind::And:
      return substitute(*e.lhs, fact) && substitute(*e.rhs, fact);
    case BooleanExpr::Kind::Or:
      return substitute(*e.lhs, fact) || substitute(*e.rhs, fact);
  }
  return false;
}

// Independent of eval_trace: goes through the expression tree only.
inline Truth brute_force_eval(const Chain& chain) {
  return from_bool(substitute(*compile_expression(chain.statements), to_bool(chain.fact_truth)));
}

// Number of false assertions mod 2. For NOT-only chains the final label is
// the fact truth flipped this many times.
inline int false_assert_parity(const std::vector<Statement>& statements) {
  int parity = 0;
  for (const auto& s : statements) {
    const auto* a = std::get_if<Assert>(&s);
    if (a == nullptr) throw DataError("parity law applies only to chains without connectives");
    if (!a->polarity) parity ^= 1;
  }
  return parity;
}

inline int false_assert_parity(const Chain& chain) { return false_assert_parity(chain.statements); }

}  // namespace boolkill
