#include <doctest.h>

#include <numeric>

#include "omnistream/aria.hpp"
#include "omnistream/error.hpp"
#include "omnistream/rng.hpp"
#include "oracles/aria_oracle.hpp"

using namespace omnistream;
using namespace omnistream::aria;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an omnistream::Error");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("plan_eager examples") {
  CHECK(plan_eager(AriaBudget::from_totals(1, 0)).str() == "T");
  CHECK(plan_eager(AriaBudget::from_totals(2, 4)).str() == "TSSTSS");
  CHECK(plan_eager(AriaBudget::from_totals(3, 2)).str() == "TTSTS");
  CHECK(plan_eager(AriaBudget::from_totals(0, 0)).str().empty());
}

TEST_CASE("plan_eager examples match the enumeration oracle") {
  // T=2,S=4 and T=3,S=2: the earliest-placement schedule is the unique plan
  // whose k-th S sits at the brute-force minimum for every k.
  for (auto [t, s] : {std::pair{2, 4}, std::pair{3, 2}}) {
    const auto b = AriaBudget::from_totals(t, s);
    const auto plans = oracle::all_valid_plans(t, s, b.ratio.num(), b.ratio.den());
    const auto best = oracle::earliest_positions_bruteforce(plans, s);
    std::string expected(static_cast<std::size_t>(t + s), 'T');
    for (auto i : best) expected[i] = 'S';
    CHECK(plan_eager(b).str() == expected);
  }
}

TEST_CASE("speech without text is infeasible") {
  CHECK(code_of([] { AriaBudget::from_totals(0, 3); }) == ErrorCode::kInfeasibleRatio);
  CHECK(code_of([] { plan_eager(AriaBudget::with_ratio(0, 1, Rational(5, 1))); }) ==
        ErrorCode::kInfeasibleRatio);
  // Supplied ratio tighter than S/T cannot finish the speech.
  CHECK(code_of([] { plan_eager(AriaBudget::with_ratio(2, 4, Rational(1, 1))); }) ==
        ErrorCode::kInfeasibleRatio);
  CHECK(code_of([] { plan_eager(AriaBudget::with_ratio(2, 1, Rational(0, 1))); }) ==
        ErrorCode::kInfeasibleRatio);
}

TEST_CASE("a looser supplied ratio still yields a valid complete plan") {
  const auto b = AriaBudget::with_ratio(3, 2, Rational(1, 1));
  const auto plan = plan_eager(b);
  CHECK(plan.str() == "TSTST");
  CHECK_FALSE(check_plan(plan.slots, b).has_value());
}

TEST_CASE("resume examples") {
  const auto b24 = AriaBudget::from_totals(2, 4);
  CHECK(resume(b24, {2, 0}).str() == "SSSS");
  const auto b32 = AriaBudget::from_totals(3, 2);
  CHECK(resume(b32, {0, 0}).str() == plan_eager(b32).str());
  CHECK(code_of([&] { resume(b24, {0, 1}); }) == ErrorCode::kInvalidPrefix);
  CHECK(code_of([&] { resume(b24, {3, 0}); }) == ErrorCode::kInvalidPrefix);
  CHECK(code_of([&] { resume(b24, {2, 5}); }) == ErrorCode::kInvalidPrefix);
  CHECK(resume(b24, {2, 4}).str().empty());
}

TEST_CASE("check_plan examples") {
  const auto b = AriaBudget::from_totals(2, 4);
  CHECK_FALSE(check_plan(plan_eager(b).slots, b).has_value());

  const auto v = check_plan(parse_slots("STSSTS"), b);
  REQUIRE(v.has_value());
  CHECK(v->kind == ConstraintViolation::Kind::kPrefixRatio);
  CHECK(v->index == 0);
  CHECK(v->prefix == PrefixCount{0, 1});

  for (int t = 1; t <= 6; ++t) {
    for (int s = 0; s <= 9; ++s) {
      const auto bb = AriaBudget::from_totals(t, s);
      const std::string all_text_first = std::string(t, 'T') + std::string(s, 'S');
      CHECK_FALSE(check_plan(parse_slots(all_text_first), bb).has_value());
    }
  }
}

TEST_CASE("check_plan flags count mismatches separately") {
  const auto b = AriaBudget::from_totals(2, 4);
  const auto v = check_plan(parse_slots("TSSTS"), b);
  REQUIRE(v.has_value());
  CHECK(v->kind == ConstraintViolation::Kind::kCountMismatch);
  CHECK(v->index == 5);
  CHECK(v->prefix == PrefixCount{2, 3});
}

TEST_CASE("first_speech_text_need") {
  CHECK(first_speech_text_need(Rational(2, 1)) == 1);
  CHECK(first_speech_text_need(Rational(2, 3)) == 2);
  CHECK(first_speech_text_need(Rational(1, 1)) == 1);
  CHECK(first_speech_text_need(Rational(1, 7)) == 7);
  CHECK(code_of([] { first_speech_text_need(Rational(0, 1)); }) == ErrorCode::kZeroRatio);
}

TEST_CASE("eager placement is simultaneously earliest for every k (exhaustive, T+S <= 12)") {
  for (int t = 0; t <= 12; ++t) {
    for (int s = 0; t + s <= 12; ++s) {
      if (t == 0 && s > 0) continue;
      const auto b = AriaBudget::from_totals(t, s);
      const auto plan = plan_eager(b).str();
      const auto plans = oracle::all_valid_plans(t, s, b.ratio.num(), b.ratio.den());
      REQUIRE_FALSE(plans.empty());
      const auto best = oracle::earliest_positions_bruteforce(plans, s);
      std::size_t k = 0;
      for (std::size_t i = 0; i < plan.size(); ++i) {
        if (plan[i] == 'S') CHECK(i == best[k++]);
      }
      CHECK(k == static_cast<std::size_t>(s));
    }
  }
}

TEST_CASE("safety, completeness and tightness on random budgets") {
  SplitMix64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const std::int64_t t = rng.uniform(1, 10'000);
    const std::int64_t s = rng.uniform(0, 10'000);
    const auto b = AriaBudget::from_totals(t, s);
    const auto plan = plan_eager(b);
    REQUIRE_FALSE(check_plan(plan.slots, b).has_value());
    const auto speech = std::count(plan.slots.begin(), plan.slots.end(), StreamSymbol::kSpeech);
    CHECK(speech == s);
    CHECK(static_cast<std::int64_t>(plan.slots.size()) - speech == t);
    // Terminal prefix meets the bound with equality when R == S/T.
    CHECK(s * b.ratio.den() == b.ratio.num() * t);
    CHECK(plan.str() == oracle::earliest_plan_closed_form(t, s, b.ratio.num(), b.ratio.den()));
  }
}

TEST_CASE("resume after any cut of a valid plan completes it") {
  SplitMix64 rng(99);
  for (int i = 0; i < 300; ++i) {
    const std::int64_t t = rng.uniform(1, 40);
    const std::int64_t s = rng.uniform(0, 80);
    const auto b = AriaBudget::from_totals(t, s);
    // Valid but non-eager plan: all text first.
    const auto lazy = parse_slots(std::string(t, 'T') + std::string(s, 'S'));
    for (const auto& plan : {plan_eager(b).slots, lazy}) {
      const auto cut = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(plan.size())));
      PrefixCount prefix;
      for (std::size_t j = 0; j < cut; ++j) prefix.record(plan[j]);
      auto joined = std::vector<StreamSymbol>(plan.begin(), plan.begin() + static_cast<std::ptrdiff_t>(cut));
      const auto rest = resume(b, prefix);
      joined.insert(joined.end(), rest.slots.begin(), rest.slots.end());
      CHECK_FALSE(check_plan(joined, b).has_value());
    }
  }
}

TEST_CASE("appending text never creates a violation") {
  SplitMix64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    const Rational r(rng.uniform(0, 9), rng.uniform(1, 9));
    PrefixCount p{rng.uniform(0, 50), 0};
    p.speech_emitted = r.num() * p.text_emitted / r.den();  // largest valid s
    REQUIRE(prefix_ok(p, r));
    p.record(StreamSymbol::kText);
    CHECK(prefix_ok(p, r));
  }
}

TEST_CASE("incremental planner reproduces plan_eager") {
  const auto b = AriaBudget::from_totals(7, 11);
  IncrementalPlanner planner(b.ratio, b.text_total, b.speech_total);
  std::vector<StreamSymbol> slots;
  while (auto s = planner.next(true, true)) slots.push_back(*s);
  CHECK(to_string(slots) == plan_eager(b).str());
}

TEST_CASE("incremental planner in open-ended mode") {
  IncrementalPlanner planner(Rational(3, 2));
  CHECK_FALSE(planner.can_emit_speech());
  CHECK(code_of([&] { planner.emit(StreamSymbol::kSpeech); }) == ErrorCode::kInvalidPrefix);
  planner.emit(StreamSymbol::kText);
  CHECK(planner.next(false, true) == StreamSymbol::kSpeech);
  CHECK(planner.next(false, true) == std::nullopt);  // 2*2 > 3*1
  CHECK(planner.next(true, true) == StreamSymbol::kText);
  CHECK(planner.prefix() == PrefixCount{2, 1});
}

TEST_CASE("parse_slots rejects unknown characters") {
  CHECK(to_string(parse_slots("TSST")) == "TSST");
  CHECK(code_of([] { parse_slots("TX"); }) == ErrorCode::kInvalidArgument);
}
