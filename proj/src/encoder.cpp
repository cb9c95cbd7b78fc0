#include "mras/encoder.hpp"

#include <map>
#include <sstream>
#include <tuple>

namespace mras {

int VarPool::fresh(const VarKey& key) {
  keys_.push_back(key);
  return static_cast<int>(keys_.size()) - 1;
}

std::string VarPool::describe(int var, const Mra& mra) const {
  if (var <= 0 || var > num_vars()) return "?";
  const VarKey& k = keys_[var];
  const int R = mra.resource_count();
  std::ostringstream out;
  auto owner = [&](int o) { return o == 0 ? std::string("free") : mra.agent_name(o); };
  switch (k.kind) {
    case VarKey::Kind::Own:
      out << "own(" << mra.resource_name(k.a) << ",t" << k.b << "," << owner(k.c) << ")";
      break;
    case VarKey::Kind::Act: {
      out << "act(" << mra.agent_name(k.a) << ",t" << k.b << ",";
      if (k.c < R)
        out << "request " << mra.resource_name(k.c);
      else if (k.c < 2 * R)
        out << "release " << mra.resource_name(k.c - R);
      else if (k.c == 2 * R)
        out << "release_all";
      else
        out << "idle";
      out << ")";
      break;
    }
    case VarKey::Kind::NuRes:
      out << "unused(" << mra.resource_name(k.a) << ")";
      break;
    case VarKey::Kind::NuAgt:
      out << "unused(" << mra.agent_name(k.a) << ")";
      break;
    case VarKey::Kind::Eq:
      out << "eq(t" << k.a << ",t" << k.b << ")";
      break;
    case VarKey::Kind::SoleReq:
      out << "sole(" << mra.resource_name(k.a) << ",t" << k.b << ","
          << mra.agent_name(k.c) << ")";
      break;
    case VarKey::Kind::PairOwn:
      out << "pairown(" << mra.resource_name(k.a) << ",t" << k.b << ",t" << k.c << ","
          << owner(k.d) << ")";
      break;
    case VarKey::Kind::SameOwn:
      out << "sameown(" << mra.resource_name(k.a) << ",t" << k.b << ",t" << k.c << ")";
      break;
    case VarKey::Kind::Window:
      out << "window(goal" << k.a + 1 << "," << mra.agent_name(k.b) << ",t" << k.c << ")";
      break;
    case VarKey::Kind::Hold:
      out << "hold(" << mra.resource_name(k.a) << "," << mra.agent_name(k.b) << ",t"
          << k.c << ",p" << k.d << ")";
      break;
  }
  return out.str();
}

int Encoding::action_index(const Action& a) const {
  const int R = mra.resource_count();
  switch (a.kind) {
    case ActionKind::Request:
      return a.resource;
    case ActionKind::Release:
      return R + a.resource;
    case ActionKind::ReleaseAll:
      return 2 * R;
    case ActionKind::Idle:
      return 2 * R + 1;
  }
  return -1;
}

Action Encoding::action_of(int index) const {
  const int R = mra.resource_count();
  if (index < R) return Action::request(index);
  if (index < 2 * R) return Action::release(index - R);
  if (index == 2 * R) return Action::release_all();
  return Action::idle();
}

namespace {

void add(Encoding& enc, Clause clause) {
  enc.formula.hard.clauses.push_back(std::move(clause));
}

// At-least-one plus pairwise at-most-one.
int exactly_one(Encoding& enc, const std::vector<int>& vars) {
  Clause alo;
  for (int v : vars) alo.push_back(v);
  add(enc, std::move(alo));
  int count = 1;
  for (std::size_t i = 0; i < vars.size(); ++i)
    for (std::size_t j = i + 1; j < vars.size(); ++j) {
      add(enc, {-vars[i], -vars[j]});
      ++count;
    }
  return count;
}

int clause_count(const Encoding& enc) {
  return static_cast<int>(enc.formula.hard.clauses.size());
}

void sync_vars(Encoding& enc) {
  enc.formula.hard.num_vars = enc.pool.num_vars();
}

}  // namespace

int encode_state_space(Encoding& enc) {
  const int before = clause_count(enc);
  const int R = enc.mra.resource_count();
  const int n = enc.mra.agent_count();
  const int k = enc.horizon;

  enc.own.assign(R, std::vector<std::vector<int>>(k + 1, std::vector<int>(n + 1, 0)));
  for (int r = 0; r < R; ++r)
    for (int t = 0; t <= k; ++t)
      for (int o = 0; o <= n; ++o)
        enc.own[r][t][o] = enc.pool.fresh({VarKey::Kind::Own, r, t, o});

  for (int r = 0; r < R; ++r)
    for (int t = 0; t <= k; ++t) exactly_one(enc, enc.own[r][t]);

  // Everything starts free.
  for (int r = 0; r < R; ++r) add(enc, {enc.own[r][0][0]});

  sync_vars(enc);
  return clause_count(enc) - before;
}

int encode_actions_and_protocol(Encoding& enc) {
  const int before = clause_count(enc);
  const int R = enc.mra.resource_count();
  const int n = enc.mra.agent_count();
  const int k = enc.horizon;
  const int m = enc.action_count();

  enc.act.assign(n, std::vector<std::vector<int>>(k, std::vector<int>(m, 0)));
  for (int a = 1; a <= n; ++a)
    for (int t = 0; t < k; ++t)
      for (int i = 0; i < m; ++i)
        enc.act[a - 1][t][i] = enc.pool.fresh({VarKey::Kind::Act, a, t, i});

  for (int a = 1; a <= n; ++a)
    for (int t = 0; t < k; ++t) {
      exactly_one(enc, enc.act[a - 1][t]);
      for (int r = 0; r < R; ++r) {
        // request needs the resource free, release needs ownership
        add(enc, {-enc.act[a - 1][t][r], enc.own[r][t][0]});
        add(enc, {-enc.act[a - 1][t][R + r], enc.own[r][t][a]});
      }
      // release-all needs at least one held resource
      Clause some{-enc.act[a - 1][t][2 * R]};
      for (int r = 0; r < R; ++r) some.push_back(enc.own[r][t][a]);
      add(enc, std::move(some));
    }

  sync_vars(enc);
  return clause_count(enc) - before;
}

int encode_evolution(Encoding& enc) {
  const int before = clause_count(enc);
  const int R = enc.mra.resource_count();
  const int n = enc.mra.agent_count();
  const int k = enc.horizon;

  for (int r = 0; r < R; ++r)
    for (int t = 0; t < k; ++t) {
      std::vector<int> sole(n + 1, 0);
      for (int a = 1; a <= n; ++a) {
        int s = enc.pool.fresh({VarKey::Kind::SoleReq, r, t, a});
        sole[a] = s;
        // s -> a requests r and nobody else does
        add(enc, {-s, enc.act[a - 1][t][r]});
        Clause back{s, -enc.act[a - 1][t][r]};
        for (int b = 1; b <= n; ++b)
          if (b != a) {
            add(enc, {-s, -enc.act[b - 1][t][r]});
            back.push_back(enc.act[b - 1][t][r]);
          }
        add(enc, std::move(back));
      }

      // free + unique requester -> handed over; free + contention -> free
      for (int a = 1; a <= n; ++a)
        add(enc, {-enc.own[r][t][0], -sole[a], enc.own[r][t + 1][a]});
      Clause stay{-enc.own[r][t][0]};
      for (int a = 1; a <= n; ++a) stay.push_back(sole[a]);
      stay.push_back(enc.own[r][t + 1][0]);
      add(enc, std::move(stay));

      // owned: released -> free, otherwise kept
      for (int a = 1; a <= n; ++a) {
        add(enc, {-enc.own[r][t][a], -enc.act[a - 1][t][R + r], enc.own[r][t + 1][0]});
        add(enc, {-enc.own[r][t][a], -enc.act[a - 1][t][2 * R], enc.own[r][t + 1][0]});
        add(enc, {-enc.own[r][t][a], enc.act[a - 1][t][R + r], enc.act[a - 1][t][2 * R],
                  enc.own[r][t + 1][a]});
      }
    }

  sync_vars(enc);
  return clause_count(enc) - before;
}

int encode_uniformity(Encoding& enc) {
  const int before = clause_count(enc);
  const int R = enc.mra.resource_count();
  const int n = enc.mra.agent_count();
  const int k = enc.horizon;
  const int m = enc.action_count();

  for (int t = 0; t < k; ++t)
    for (int u = t + 1; u < k; ++u) {
      std::vector<int> same(R, 0);
      for (int r = 0; r < R; ++r) {
        std::vector<int> pair(n + 1, 0);
        for (int o = 0; o <= n; ++o) {
          int p = enc.pool.fresh({VarKey::Kind::PairOwn, r, t, u, o});
          pair[o] = p;
          add(enc, {-p, enc.own[r][t][o]});
          add(enc, {-p, enc.own[r][u][o]});
          add(enc, {p, -enc.own[r][t][o], -enc.own[r][u][o]});
        }
        int s = enc.pool.fresh({VarKey::Kind::SameOwn, r, t, u});
        same[r] = s;
        Clause def{-s};
        for (int o = 0; o <= n; ++o) {
          def.push_back(pair[o]);
          add(enc, {s, -pair[o]});
        }
        add(enc, std::move(def));
      }
      int eq = enc.pool.fresh({VarKey::Kind::Eq, t, u});
      Clause whole{eq};
      for (int r = 0; r < R; ++r) {
        add(enc, {-eq, same[r]});
        whole.push_back(-same[r]);
      }
      add(enc, std::move(whole));

      // equal states repeat the profile
      for (int a = 1; a <= n; ++a)
        for (int i = 0; i < m; ++i)
          add(enc, {-eq, -enc.act[a - 1][t][i], enc.act[a - 1][u][i]});
    }

  sync_vars(enc);
  return clause_count(enc) - before;
}

int encode_goals(Encoding& enc) {
  const int before = clause_count(enc);
  const int n = enc.mra.agent_count();
  const int k = enc.horizon;

  // (resource, agent, start, period) -> variable meaning "held throughout"
  std::map<std::tuple<int, int, int, int>, int> hold_cache;
  auto hold_lit = [&](int r, int a, int t, int p) {
    if (p == 0) return enc.own[r][t][a];
    auto key = std::make_tuple(r, a, t, p);
    auto it = hold_cache.find(key);
    if (it != hold_cache.end()) return it->second;
    int h = enc.pool.fresh({VarKey::Kind::Hold, r, a, t, p});
    for (int u = t; u <= t + p; ++u) add(enc, {-h, enc.own[r][u][a]});
    hold_cache.emplace(key, h);
    return h;
  };

  for (std::size_t g = 0; g < enc.mra.goals.size(); ++g) {
    const Goal& goal = enc.mra.goals[g];
    if (goal.deadline > k)
      throw DeadlineExceedsHorizonError(
          "goal " + std::to_string(g + 1) + " has deadline " +
          std::to_string(goal.deadline) + " beyond the horizon " + std::to_string(k));

    std::vector<int> candidates;
    if (goal.owner)
      candidates.push_back(*goal.owner);
    else
      for (int a = 1; a <= n; ++a) candidates.push_back(a);

    Clause satisfied;
    for (int a : candidates)
      for (int t = 0; t + goal.period <= goal.deadline; ++t) {
        if (goal.types.size() == 1) {
          // single-type window: the window indicator would be a plain
          // disjunction, so splice the hold literals in directly
          for (int r : enc.mra.resources_of_type(goal.types[0]))
            satisfied.push_back(hold_lit(r, a, t, goal.period));
        } else {
          int w = enc.pool.fresh({VarKey::Kind::Window, static_cast<int>(g), a, t});
          for (int type : goal.types) {
            Clause c{-w};
            for (int r : enc.mra.resources_of_type(type))
              c.push_back(hold_lit(r, a, t, goal.period));
            add(enc, std::move(c));
          }
          satisfied.push_back(w);
        }
      }
    add(enc, std::move(satisfied));
  }

  sync_vars(enc);
  return clause_count(enc) - before;
}

int encode_aux_res(Encoding& enc) {
  const int before = clause_count(enc);
  const int R = enc.mra.resource_count();
  const int n = enc.mra.agent_count();
  const int k = enc.horizon;

  enc.nu_res.assign(R, 0);
  for (int r = 0; r < R; ++r) {
    int nu = enc.pool.fresh({VarKey::Kind::NuRes, r});
    enc.nu_res[r] = nu;
    Clause back{nu};
    for (int t = 0; t <= k; ++t) {
      add(enc, {-nu, enc.own[r][t][0]});
      back.push_back(-enc.own[r][t][0]);
    }
    add(enc, std::move(back));
    // Unused resources are never requested, so dropping them from the
    // emitted system cannot strand a request. Rerouting such requests to
    // idle keeps the run's states unchanged (the requester never wins the
    // contention anyway), so no cheaper strategy is lost.
    for (int a = 1; a <= n; ++a)
      for (int t = 0; t < k; ++t) add(enc, {-nu, -enc.act[a - 1][t][r]});
  }

  sync_vars(enc);
  return clause_count(enc) - before;
}

int encode_aux_agt(Encoding& enc) {
  const int before = clause_count(enc);
  const int R = enc.mra.resource_count();
  const int n = enc.mra.agent_count();
  const int k = enc.horizon;
  const int idle = 2 * R + 1;

  enc.nu_agt.assign(n, 0);
  for (int a = 1; a <= n; ++a) {
    int nu = enc.pool.fresh({VarKey::Kind::NuAgt, a});
    enc.nu_agt[a - 1] = nu;
    Clause back{nu};
    for (int r = 0; r < R; ++r)
      for (int t = 0; t <= k; ++t) {
        add(enc, {-nu, -enc.own[r][t][a]});
        back.push_back(enc.own[r][t][a]);
      }
    add(enc, std::move(back));
    // Same pruning guarantee as for resources: an agent that never holds
    // anything sits idle, so dropping it leaves every contention outcome
    // and hence every state untouched.
    for (int t = 0; t < k; ++t) add(enc, {-nu, enc.act[a - 1][t][idle]});
  }

  sync_vars(enc);
  return clause_count(enc) - before;
}

int encode_soft(Encoding& enc) {
  int added = 0;
  if (!enc.nu_res.empty()) {
    for (int r = 0; r < enc.mra.resource_count(); ++r) {
      Weight price = enc.mra.price(r);
      if (price > 0) {
        enc.formula.softs.push_back({enc.nu_res[r], price});
        ++added;
      }
    }
  }
  if (!enc.nu_agt.empty()) {
    Weight price = enc.mra.agent_price.value_or(0);
    if (price > 0)
      for (int a = 1; a <= enc.mra.agent_count(); ++a) {
        enc.formula.softs.push_back({enc.nu_agt[a - 1], price});
        ++added;
      }
  }
  return added;
}

Encoding build(const Mra& mra, const EncodeOptions& options) {
  validate(mra);
  if (options.mode == OptMode::Mra && !mra.general_mode())
    throw ValidationError(
        "agent-cost optimization applies only to systems with unowned goals");

  Encoding enc;
  enc.mra = mra;
  enc.options = options;
  int k = 0;
  for (const Goal& goal : mra.goals) k = std::max(k, goal.deadline);
  if (options.horizon_override >= 0) k = options.horizon_override;
  enc.horizon = k;

  encode_state_space(enc);
  encode_actions_and_protocol(enc);
  encode_evolution(enc);
  encode_uniformity(enc);
  encode_goals(enc);
  if (options.mode != OptMode::None) {
    encode_aux_res(enc);
    if (options.mode == OptMode::Mra) encode_aux_agt(enc);
    encode_soft(enc);
  }
  return enc;
}

}  // namespace mras
