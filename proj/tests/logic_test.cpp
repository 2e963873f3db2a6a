#include <gtest/gtest.h>

#include "boolkill/builder.hpp"
#include "boolkill/logic.hpp"
#include "support/fixtures.hpp"

namespace boolkill {
namespace {

constexpr Truth T = Truth::True;
constexpr Truth F = Truth::False;

TEST(Truth, EncodingAndInvolution) {
  EXPECT_EQ(static_cast<int>(T), 0);
  EXPECT_EQ(static_cast<int>(F), 1);
  EXPECT_EQ(negate(negate(T)), T);
  EXPECT_EQ(negate(negate(F)), F);
  EXPECT_EQ(parse_truth("true"), T);
  EXPECT_THROW(parse_truth("True"), DataError);
}

TEST(EvalTrace, EarthIsFlat) {
  const Chain c{F, {Assert{0, false}, Assert{1, false}, Assert{2, true}}};
  EXPECT_EQ(eval_trace(c), (std::vector<Truth>{T, F, F}));
  EXPECT_EQ(final_label(c), F);
}

TEST(EvalTrace, EmptyChain) { EXPECT_TRUE(eval_trace(Chain{T, {}}).empty()); }

TEST(EvalTrace, ConnectiveOverFact) {
  // t1 = not True = False, t2 = False and True = False
  const Chain c{T, {Assert{0, false}, Connect{Op::And, 1, 0, true}}};
  EXPECT_EQ(eval_trace(c), (std::vector<Truth>{F, F}));
}

TEST(EvalTrace, NegatedConnective) {
  const Chain c{T, {Assert{0, false}, Connect{Op::Or, 1, 0, false}}};
  EXPECT_EQ(eval_trace(c), (std::vector<Truth>{F, F}));
}

TEST(EvalTrace, RejectsForwardAndSelfReferences) {
  EXPECT_THROW(eval_trace(Chain{T, {Assert{1, true}}}), StructureError);
  EXPECT_THROW(eval_trace(Chain{T, {Assert{0, true}, Assert{5, false}}}), StructureError);
  EXPECT_THROW(eval_trace(Chain{T, {Assert{0, true}, Connect{Op::Or, 1, 1, true}}}), StructureError);
  EXPECT_THROW(eval_trace(Chain{T, {Assert{0, true}, Connect{Op::Or, 2, 0, true}}}), StructureError);
}

TEST(FinalLabel, Examples) {
  // Mercury fact, S1 false, S2 true, S3 false.
  EXPECT_EQ(final_label(Chain{T, {Assert{0, false}, Assert{1, true}, Assert{2, false}}}), T);
  EXPECT_EQ(final_label(Chain{T, {Assert{0, true}}}), T);
  EXPECT_EQ(final_label(Chain{F, {Assert{0, true}}}), F);
  EXPECT_EQ(final_label(Chain{T, {Assert{0, false}, Assert{1, false}}}), T);
  EXPECT_EQ(final_label(Chain{F, {}}), F);
}

TEST(BruteForce, Examples) {
  EXPECT_EQ(brute_force_eval(Chain{T, {Assert{0, false}, Assert{1, true}, Assert{2, false}}}), T);
  EXPECT_EQ(brute_force_eval(Chain{T, {Assert{0, true}}}), T);
  EXPECT_EQ(brute_force_eval(Chain{T, {Assert{0, false}, Assert{1, false}}}), T);
  EXPECT_EQ(brute_force_eval(Chain{F, {Assert{0, true}}}), F);
  // t2 = False or True
  EXPECT_EQ(brute_force_eval(Chain{T, {Assert{0, false}, Connect{Op::Or, 1, 0, true}}}), T);
  EXPECT_THROW(brute_force_eval(Chain{T, {Assert{3, true}}}), StructureError);
}

TEST(Parity, Examples) {
  EXPECT_EQ(false_assert_parity({Assert{0, false}, Assert{1, false}, Assert{2, true}}), 0);
  EXPECT_EQ(false_assert_parity(std::vector<Statement>{}), 0);
  EXPECT_EQ(false_assert_parity({Assert{0, false}}), 1);
  EXPECT_THROW(false_assert_parity({Assert{0, false}, Connect{Op::And, 1, 0, true}}), DataError);
}

TEST(Properties, OracleEquivalenceOnGeneralChains) {
  Rng rng(7);
  for (int n = 0; n < 3000; ++n) {
    const auto c = testing::random_general_chain(rng, rng.between(0, 12), n % 2 == 1);
    ASSERT_EQ(final_label(c), brute_force_eval(c)) << "chain #" << n;
  }
}

TEST(Properties, ParityLawOnNotOnlyChains) {
  Rng rng(11);
  for (int n = 0; n < 2000; ++n) {
    Chain c{rng.coin() ? T : F, {}};
    const std::size_t k = rng.between(0, 12);
    for (std::size_t i = 1; i <= k; ++i) c.statements.push_back(Assert{i - 1, rng.coin()});
    const Truth expected = false_assert_parity(c) ? negate(c.fact_truth) : c.fact_truth;
    ASSERT_EQ(final_label(c), expected);
  }
}

TEST(Properties, IdentityAndInvolution) {
  Rng rng(13);
  for (int n = 0; n < 500; ++n) {
    auto c = testing::random_general_chain(rng, rng.between(1, 10), true);
    const Truth before = final_label(c);
    const std::size_t last = c.depth();

    auto with_identity = c;
    with_identity.statements.push_back(Assert{last, true});
    const auto trace = eval_trace(with_identity);
    ASSERT_EQ(trace[last], trace[last - 1]);

    auto with_double_negation = c;
    with_double_negation.statements.push_back(Assert{last, false});
    with_double_negation.statements.push_back(Assert{last + 1, false});
    ASSERT_EQ(final_label(with_double_negation), before);
  }
}

TEST(Properties, ConnectiveBiasOverGeneratedChains) {
  Rng rng(17);
  std::size_t and_n = 0, and_false = 0, or_n = 0, or_true = 0;
  for (int n = 0; n < 20000; ++n) {
    const auto c = random_chain(rng, rng.between(2, 8), Mode::NotAndOr, ConnectivePlacement::Final,
                                rng.coin() ? T : F);
    const auto& conn = std::get<Connect>(c.statements.back());
    const Truth label = final_label(c);
    if (conn.op == Op::And) {
      ++and_n;
      and_false += label == F;
    } else {
      ++or_n;
      or_true += label == T;
    }
  }
  EXPECT_GT(static_cast<double>(and_false) / and_n, 0.5);
  EXPECT_GT(static_cast<double>(or_true) / or_n, 0.5);
}

}  // namespace
}  // namespace boolkill
