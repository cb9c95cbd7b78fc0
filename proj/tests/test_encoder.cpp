#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"
#include "mras/encoder.hpp"

using namespace mras;
using namespace mras::test;

namespace {

int choose2(int x) { return x * (x - 1) / 2; }

// every clause size the sub-encoders emit is derivable from the system's
// dimensions; recomputing them here pins each stage independently
struct Expected {
  int R, n, k, A;
  explicit Expected(const Mra& mra, int horizon)
      : R(mra.resource_count()),
        n(mra.agent_count()),
        k(horizon),
        A(2 * R + 2) {}

  int state_space() const { return (k + 1) * R * (1 + choose2(n + 1)) + R; }
  int actions() const { return n * k * (1 + choose2(A)) + n * k * (2 * R + 1); }
  int evolution() const { return R * k * (8 * n + 1); }
  int uniformity() const {
    // per step pair: pairown defs, sameown defs, the eq def, act propagation
    int per_pair = R * (n + 1) * 3 + R * (n + 2) + (R + 1) + n * A;
    return choose2(k) * per_pair;
  }
  int aux_res() const { return R * (k + 1 + 1 + n * k); }
};

bool has_clause(const std::vector<Clause>& clauses, Clause want) {
  std::sort(want.begin(), want.end());
  for (Clause c : clauses) {
    std::sort(c.begin(), c.end());
    if (c == want) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("per-stage clause counts match their closed forms") {
  Mra mex = load_fixture("mex.mra");
  Expected ex(mex, 4);

  Encoding enc;
  enc.mra = mex;
  enc.options = {OptMode::Res, -1};
  enc.horizon = 4;

  CHECK(encode_state_space(enc) == ex.state_space());
  CHECK(encode_actions_and_protocol(enc) == ex.actions());
  CHECK(encode_evolution(enc) == ex.evolution());
  CHECK(encode_uniformity(enc) == ex.uniformity());
  int goal_clauses = encode_goals(enc);
  // two single-type goals contribute one clause each; the two two-type goals
  // allocate a window indicator per start (5 each) with one clause per type
  CHECK(goal_clauses == 1 + 1 + (5 * 2 + 1) + (5 * 2 + 1));
  CHECK(encode_aux_res(enc) == ex.aux_res());
  CHECK(encode_soft(enc) == 6);

  CHECK(static_cast<int>(enc.formula.hard.clauses.size()) ==
        ex.state_space() + ex.actions() + ex.evolution() + ex.uniformity() +
            goal_clauses + ex.aux_res());
}

TEST_CASE("a full res-mode build of the example has the frozen dimensions") {
  Mra mex = load_fixture("mex.mra");
  Encoding enc = build(mex, {OptMode::Res, -1});

  CHECK(enc.horizon == 4);
  CHECK(enc.formula.hard.num_vars == 562);
  CHECK(enc.formula.hard.clauses.size() == 3114);
  CHECK(enc.formula.softs.size() == 6);

  // soft weights are the resource prices, in declaration order
  std::vector<Weight> weights;
  for (const SoftUnit& s : enc.formula.softs) weights.push_back(s.weight);
  CHECK(weights == std::vector<Weight>{1, 1, 2, 2, 3, 3});
  for (int r = 0; r < 6; ++r) CHECK(enc.formula.softs[r].lit == enc.nu_res[r]);

  // the variable registry names what it allocated
  CHECK(enc.pool.describe(enc.own[0][0][0], mex) == "own(t1#1,t0,free)");
  CHECK(enc.pool.describe(enc.own[2][3][1], mex) == "own(t2#1,t3,a1)");
  CHECK(enc.pool.describe(enc.act[0][0][4], mex) == "act(a1,t0,request t3#1)");
  CHECK(enc.pool.describe(enc.act[2][1][13], mex) == "act(a3,t1,idle)");
  CHECK(enc.pool.describe(enc.nu_res[3], mex) == "unused(t2#2)");
}

TEST_CASE("initial state and one-hot ownership are hard facts") {
  Mra mex = load_fixture("mex.mra");
  Encoding enc = build(mex, {OptMode::None, -1});

  // every resource starts free
  for (int r = 0; r < 6; ++r)
    CHECK(has_clause(enc.formula.hard.clauses, {enc.own[r][0][0]}));
  // owners are mutually exclusive
  CHECK(has_clause(enc.formula.hard.clauses, {-enc.own[0][1][1], -enc.own[0][1][2]}));
  // and someone (possibly "free") always owns
  CHECK(has_clause(enc.formula.hard.clauses,
                   {enc.own[0][1][0], enc.own[0][1][1], enc.own[0][1][2],
                    enc.own[0][1][3]}));
}

TEST_CASE("single-type deadline-1 goals flatten to ownership literals") {
  Mra mex = load_fixture("mex.mra");
  Encoding enc = build(mex, {OptMode::None, -1});

  // goal 2: a1 holds some t3 instance at state 0 or 1; state 0 is all-free,
  // so the clause names instances 5 and 6 at both steps
  CHECK(has_clause(enc.formula.hard.clauses,
                   {enc.own[4][0][1], enc.own[5][0][1], enc.own[4][1][1],
                    enc.own[5][1][1]}));
  // goal 4 is the same shape for a3 over t2
  CHECK(has_clause(enc.formula.hard.clauses,
                   {enc.own[2][0][3], enc.own[3][0][3], enc.own[2][1][3],
                    enc.own[3][1][3]}));
}

TEST_CASE("mode none strips optimization structure") {
  Mra mex = load_fixture("mex.mra");
  Encoding enc = build(mex, {OptMode::None, -1});
  CHECK(enc.formula.softs.empty());
  CHECK(std::all_of(enc.nu_res.begin(), enc.nu_res.end(), [](int v) { return v == 0; }));
  CHECK(enc.nu_agt.empty());
}

TEST_CASE("mra mode needs unowned goals and prices agents") {
  Mra mex = load_fixture("mex.mra");
  CHECK_THROWS_AS(build(mex, {OptMode::Mra, -1}), ValidationError);

  Mra gen = load_fixture("mex_general.mra");
  Encoding enc = build(gen, {OptMode::Mra, -1});
  CHECK(enc.formula.softs.size() == 6 + 3);
  CHECK(enc.formula.softs.back().weight == 5);  // the agent price
  CHECK(enc.nu_agt.size() == 3);
  CHECK(enc.pool.describe(enc.nu_agt[2], gen) == "unused(a3)");

  // res mode on the same system prices only resources
  CHECK(build(gen, {OptMode::Res, -1}).formula.softs.size() == 6);
}

TEST_CASE("horizon override and unreachable deadlines") {
  Mra mex = load_fixture("mex.mra");
  CHECK_THROWS_AS(build(mex, {OptMode::Res, 3}), DeadlineExceedsHorizonError);

  Encoding wide = build(mex, {OptMode::Res, 6});
  CHECK(wide.horizon == 6);
  CHECK(wide.own[0].size() == 7);  // states 0..6
}

TEST_CASE("period windows allocate hold chains once per (resource, start)") {
  Mra mra = make_mra(1, {1}, {2});
  mra.goals.push_back(make_goal({0}, 2, 3, 1));
  mra.goals.push_back(make_goal({0}, 2, 3, 1));  // identical twin

  Encoding twin = build(mra, {OptMode::None, -1});

  Mra single = mra;
  single.goals.pop_back();
  Encoding alone = build(single, {OptMode::None, -1});

  // the twin goal reuses the cached hold variables: no new variables, one
  // more goal clause, no extra hold-definition clauses
  CHECK(twin.formula.hard.num_vars == alone.formula.hard.num_vars);
  CHECK(twin.formula.hard.clauses.size() == alone.formula.hard.clauses.size() + 1);

  // hold h -> own at every instant of the window
  int h = 0;
  for (int v = 1; v <= twin.formula.hard.num_vars; ++v)
    if (twin.pool.key(v).kind == VarKey::Kind::Hold) {
      h = v;
      break;
    }
  REQUIRE(h != 0);
  const VarKey& key = twin.pool.key(h);
  CHECK(key.d == 2);  // the period
  for (int u = key.c; u <= key.c + key.d; ++u)
    CHECK(has_clause(twin.formula.hard.clauses, {-h, twin.own[key.a][u][key.b]}));
}

TEST_CASE("action indices round-trip") {
  Mra mex = load_fixture("mex.mra");
  Encoding enc = build(mex, {OptMode::None, -1});
  CHECK(enc.action_count() == 14);
  for (int i = 0; i < enc.action_count(); ++i)
    CHECK(enc.action_index(enc.action_of(i)) == i);
  CHECK(enc.action_index(Action::request(3)) == 3);
  CHECK(enc.action_index(Action::release(3)) == 9);
  CHECK(enc.action_index(Action::release_all()) == 12);
  CHECK(enc.action_index(Action::idle()) == 13);
}
