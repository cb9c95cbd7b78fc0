#include "mras/spec_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace mras {

std::string ParseError::format(const std::string& msg, int line, int col) {
  std::ostringstream out;
  if (line > 0) {
    out << "line " << line;
    if (col > 0) out << ", col " << col;
    out << ": ";
  }
  out << msg;
  return out.str();
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
      return false;
  return true;
}

long long parse_int(const std::string& tok, int line, const std::string& what) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError("expected an integer for " + what + ", got '" + tok + "'", line);
  }
  if (pos != tok.size())
    throw ParseError("trailing characters after " + what + ": '" + tok + "'", line);
  return v;
}

Weight parse_weight(const std::string& tok, int line, const std::string& what) {
  if (tok.empty() || tok[0] == '-')
    throw ParseError(what + " must be a non-negative integer, got '" + tok + "'", line);
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError(what + " out of range or not a number: '" + tok + "'", line);
  }
  if (pos != tok.size())
    throw ParseError("trailing characters after " + what + ": '" + tok + "'", line);
  return v;
}

struct SectionLine {
  int line;
  std::string text;
};

}  // namespace

// ---------------------------------------------------------------------------
// .mra
// ---------------------------------------------------------------------------

Mra parse_mra(const std::string& text) {
  static const std::vector<std::string> kSections = {"agents", "resource_types",
                                                     "agent_price", "goals"};
  std::map<std::string, std::vector<SectionLine>> sections;
  std::map<std::string, int> section_line;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  std::string current;
  while (std::getline(in, raw)) {
    ++lineno;
    std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;

    std::string head;
    for (const std::string& s : kSections) {
      if (line.rfind(s + ":", 0) == 0) {
        head = s;
        break;
      }
    }
    if (!head.empty()) {
      if (section_line.count(head))
        throw ParseError("duplicate section '" + head + "' (first at line " +
                             std::to_string(section_line[head]) + ")",
                         lineno);
      section_line[head] = lineno;
      current = head;
      std::string rest = trim(line.substr(head.size() + 1));
      if (!rest.empty()) sections[head].push_back({lineno, rest});
      else sections[head];  // section may be present with no inline entry
      continue;
    }
    if (current.empty())
      throw ParseError("content before any section header: '" + line + "'", lineno);
    sections[current].push_back({lineno, line});
  }

  Mra mra;

  // agents
  auto ag = sections.find("agents");
  if (ag == sections.end()) throw ParseError("missing 'agents:' section");
  for (const SectionLine& entry : ag->second) {
    for (const std::string& name : tokens(entry.text)) {
      if (!valid_name(name))
        throw ParseError("invalid agent name '" + name + "'", entry.line);
      mra.agent_names.push_back(name);
    }
  }

  // resource types
  auto rt = sections.find("resource_types");
  if (rt == sections.end()) throw ParseError("missing 'resource_types:' section");
  for (const SectionLine& entry : rt->second) {
    std::vector<std::string> toks = tokens(entry.text);
    ResourceType type;
    if (!valid_name(toks[0]))
      throw ParseError("invalid resource type name '" + toks[0] + "'", entry.line);
    type.name = toks[0];
    bool have_price = false, have_count = false;
    for (std::size_t i = 1; i < toks.size(); ++i) {
      std::size_t eq = toks[i].find('=');
      if (eq == std::string::npos)
        throw ParseError("expected key=value, got '" + toks[i] + "'", entry.line);
      std::string key = toks[i].substr(0, eq), val = toks[i].substr(eq + 1);
      if (key == "price") {
        if (have_price) throw ParseError("duplicate price", entry.line);
        type.price = parse_weight(val, entry.line, "price");
        have_price = true;
      } else if (key == "count") {
        if (have_count) throw ParseError("duplicate count/instances", entry.line);
        long long n = parse_int(val, entry.line, "count");
        if (n < 0) throw ParseError("count must be >= 0", entry.line);
        for (long long k = 1; k <= n; ++k) type.instances.push_back(static_cast<int>(k));
        have_count = true;
      } else if (key == "instances") {
        if (have_count) throw ParseError("duplicate count/instances", entry.line);
        for (const std::string& part : split(val, ',')) {
          long long k = parse_int(part, entry.line, "instance label");
          if (k < 1) throw ParseError("instance labels are 1-based", entry.line);
          type.instances.push_back(static_cast<int>(k));
        }
        have_count = true;
      } else {
        throw ParseError("unknown key '" + key + "' in resource type", entry.line);
      }
    }
    if (!have_price) throw ParseError("resource type without price=", entry.line);
    if (!have_count)
      throw ParseError("resource type needs count= or instances=", entry.line);
    mra.types.push_back(std::move(type));
  }
  rebuild_resources(mra);

  // agent price
  auto ap = sections.find("agent_price");
  if (ap != sections.end()) {
    if (ap->second.size() != 1 || tokens(ap->second[0].text).size() != 1)
      throw ParseError("agent_price takes exactly one value",
                       ap->second.empty() ? section_line["agent_price"]
                                          : ap->second[0].line);
    mra.agent_price = parse_weight(tokens(ap->second[0].text)[0],
                                   ap->second[0].line, "agent_price");
  }

  // goals
  auto gl = sections.find("goals");
  if (gl == sections.end()) throw ParseError("missing 'goals:' section");
  for (const SectionLine& entry : gl->second) {
    Goal goal;
    bool have_types = false, have_period = false, have_deadline = false;
    for (const std::string& tok : tokens(entry.text)) {
      std::size_t eq = tok.find('=');
      if (eq == std::string::npos)
        throw ParseError("expected key=value, got '" + tok + "'", entry.line);
      std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
      if (key == "owner") {
        if (goal.owner) throw ParseError("duplicate owner", entry.line);
        int a = mra.find_agent(val);
        if (a < 0) throw ParseError("unknown agent '" + val + "'", entry.line);
        goal.owner = a;
      } else if (key == "types") {
        if (have_types) throw ParseError("duplicate types", entry.line);
        for (const std::string& part : split(val, ',')) {
          int t = mra.find_type(part);
          if (t < 0)
            throw ParseError("unknown resource type '" + part + "' in goal",
                             entry.line);
          goal.types.push_back(t);
        }
        have_types = true;
      } else if (key == "period") {
        long long p = parse_int(val, entry.line, "period");
        if (p < 0) throw ParseError("period must be >= 0", entry.line);
        goal.period = static_cast<int>(p);
        have_period = true;
      } else if (key == "deadline") {
        long long d = parse_int(val, entry.line, "deadline");
        if (d < 1) throw ParseError("deadline must be >= 1", entry.line);
        goal.deadline = static_cast<int>(d);
        have_deadline = true;
      } else {
        throw ParseError("unknown key '" + key + "' in goal", entry.line);
      }
    }
    if (!have_types) throw ParseError("goal without types=", entry.line);
    if (!have_period) throw ParseError("goal without period=", entry.line);
    if (!have_deadline) throw ParseError("goal without deadline=", entry.line);
    mra.goals.push_back(std::move(goal));
  }

  validate(mra);
  return mra;
}

std::string emit_mra(const Mra& mra) {
  std::ostringstream out;
  out << "agents:";
  for (const std::string& name : mra.agent_names) out << ' ' << name;
  out << "\n\nresource_types:\n";
  for (const ResourceType& type : mra.types) {
    out << "  " << type.name << " price=" << type.price;
    bool contiguous = true;
    for (std::size_t i = 0; i < type.instances.size(); ++i)
      if (type.instances[i] != static_cast<int>(i) + 1) contiguous = false;
    if (contiguous) {
      out << " count=" << type.instances.size();
    } else {
      out << " instances=";
      for (std::size_t i = 0; i < type.instances.size(); ++i)
        out << (i ? "," : "") << type.instances[i];
    }
    out << '\n';
  }
  if (mra.agent_price) out << "\nagent_price: " << *mra.agent_price << '\n';
  out << "\ngoals:\n";
  for (const Goal& goal : mra.goals) {
    out << "  ";
    if (goal.owner) out << "owner=" << mra.agent_name(*goal.owner) << ' ';
    out << "types=";
    for (std::size_t i = 0; i < goal.types.size(); ++i)
      out << (i ? "," : "") << mra.types[goal.types[i]].name;
    out << " period=" << goal.period << " deadline=" << goal.deadline << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// .sched
// ---------------------------------------------------------------------------

namespace {

Action parse_action(const std::string& text, const Mra& mra, int line) {
  std::vector<std::string> toks = tokens(text);
  if (toks.empty()) throw ParseError("empty action", line);
  if (toks[0] == "idle") {
    if (toks.size() != 1) throw ParseError("idle takes no argument", line);
    return Action::idle();
  }
  if (toks[0] == "release_all") {
    if (toks.size() != 1) throw ParseError("release_all takes no argument", line);
    return Action::release_all();
  }
  if (toks[0] == "request" || toks[0] == "release") {
    if (toks.size() != 2)
      throw ParseError(toks[0] + " needs exactly one resource", line);
    int r = mra.find_resource(toks[1]);
    if (r < 0) throw ParseError("unknown resource '" + toks[1] + "'", line);
    return toks[0] == "request" ? Action::request(r) : Action::release(r);
  }
  throw ParseError("unknown action '" + toks[0] + "'", line);
}

}  // namespace

Schedule parse_schedule(const std::string& text, const Mra& mra) {
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool header_seen = false;
  Schedule schedule(mra.agent_count());
  std::vector<bool> row_seen(mra.agent_count(), false);

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "schedule:")
        throw ParseError("expected 'schedule:' header, got '" + line + "'", lineno);
      header_seen = true;
      continue;
    }
    std::size_t colon = line.find(':');
    if (colon == std::string::npos)
      throw ParseError("expected '<agent>: actions', got '" + line + "'", lineno);
    std::string name = trim(line.substr(0, colon));
    int agent = mra.find_agent(name);
    if (agent < 0) throw ParseError("unknown agent '" + name + "'", lineno);
    if (row_seen[agent - 1])
      throw ParseError("duplicate row for agent '" + name + "'", lineno);
    row_seen[agent - 1] = true;

    std::string rest = trim(line.substr(colon + 1));
    if (!rest.empty()) {
      for (const std::string& field : split(rest, '|'))
        schedule[agent - 1].push_back(parse_action(trim(field), mra, lineno));
    }
  }
  if (!header_seen) throw ParseError("missing 'schedule:' header");
  for (int a = 1; a <= mra.agent_count(); ++a)
    if (!row_seen[a - 1])
      throw ParseError("no schedule row for agent '" + mra.agent_name(a) + "'");
  for (int a = 2; a <= mra.agent_count(); ++a)
    if (schedule[a - 1].size() != schedule[0].size())
      throw ParseError("schedule rows differ in length");
  return schedule;
}

std::string emit_schedule(const Mra& mra, const Schedule& schedule) {
  std::ostringstream out;
  out << "schedule:\n";
  for (int a = 1; a <= mra.agent_count(); ++a) {
    out << "  " << mra.agent_name(a) << ':';
    const auto& row = schedule[a - 1];
    for (std::size_t t = 0; t < row.size(); ++t)
      out << (t ? " | " : " ") << to_string(row[t], mra);
    out << '\n';
  }
  return out.str();
}

std::string emit_run_report(const Mra& mra, const Schedule& schedule, const Run& run) {
  std::ostringstream out;
  out << emit_schedule(mra, schedule) << '\n';

  out << "run:\n";
  for (std::size_t t = 0; t < run.states.size(); ++t) {
    out << "  t=" << t << ':';
    bool any = false;
    for (int r = 0; r < mra.resource_count(); ++r) {
      if (run.states[t][r] != kUnallocated) {
        out << ' ' << mra.resource_name(r) << '='
            << mra.agent_name(run.states[t][r]);
        any = true;
      }
    }
    if (!any) out << " all free";
    out << '\n';
  }

  out << "\ngoals:\n";
  for (std::size_t g = 0; g < mra.goals.size(); ++g) {
    const Goal& goal = mra.goals[g];
    out << "  goal " << g + 1 << " [";
    if (goal.owner) out << "owner=" << mra.agent_name(*goal.owner) << ' ';
    out << "types=";
    for (std::size_t i = 0; i < goal.types.size(); ++i)
      out << (i ? "," : "") << mra.types[goal.types[i]].name;
    out << " period=" << goal.period << " deadline=" << goal.deadline << "]: ";
    if (run.horizon() < goal.deadline) {
      out << "undetermined (run ends at t=" << run.horizon() << ", deadline "
          << goal.deadline << ")\n";
      continue;
    }
    if (goal.owner) {
      out << (goal_satisfied(run, goal, *goal.owner, mra) ? "satisfied"
                                                          : "not satisfied");
    } else {
      int by = 0;
      for (int a = 1; a <= mra.agent_count() && by == 0; ++a)
        if (goal_satisfied(run, goal, a, mra)) by = a;
      if (by)
        out << "satisfied by " << mra.agent_name(by);
      else
        out << "not satisfied";
    }
    out << '\n';
  }

  auto list_resources = [&](const std::vector<int>& rs) {
    if (rs.empty()) return std::string("(none)");
    std::string s;
    for (std::size_t i = 0; i < rs.size(); ++i)
      s += (i ? " " : "") + mra.resource_name(rs[i]);
    return s;
  };
  std::vector<int> used_r = used_resources(run, mra);
  std::vector<int> unused_r;
  for (int r = 0; r < mra.resource_count(); ++r)
    if (std::find(used_r.begin(), used_r.end(), r) == used_r.end())
      unused_r.push_back(r);
  std::vector<int> used_a = used_agents(run, mra);
  std::vector<int> unused_a;
  for (int a = 1; a <= mra.agent_count(); ++a)
    if (std::find(used_a.begin(), used_a.end(), a) == used_a.end())
      unused_a.push_back(a);

  out << "\ncosts:\n";
  out << "  resource cost: " << resource_cost(run, mra) << '\n';
  if (mra.agent_price) {
    out << "  agent cost: " << agent_cost(run, mra) << '\n';
    out << "  total cost: " << mra_cost(run, mra) << '\n';
  }

  out << "\ncomponents:\n";
  out << "  used resources: " << list_resources(used_r) << '\n';
  out << "  unused resources: " << list_resources(unused_r) << '\n';
  out << "  used agents: ";
  if (used_a.empty()) out << "(none)";
  for (std::size_t i = 0; i < used_a.size(); ++i)
    out << (i ? " " : "") << mra.agent_name(used_a[i]);
  out << "\n  unused agents: ";
  if (unused_a.empty()) out << "(none)";
  for (std::size_t i = 0; i < unused_a.size(); ++i)
    out << (i ? " " : "") << mra.agent_name(unused_a[i]);
  out << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// WCNF
// ---------------------------------------------------------------------------

std::string emit_wcnf(const MaxSatInstance& inst, WcnfFormat format) {
  int num_vars = inst.hard.num_vars;
  for (const Clause& c : inst.hard.clauses)
    for (Lit l : c) num_vars = std::max(num_vars, std::abs(l));
  for (const SoftUnit& s : inst.softs) num_vars = std::max(num_vars, std::abs(s.lit));

  const Weight top = 1 + inst.total_soft_weight();
  std::ostringstream out;
  if (format == WcnfFormat::Classic) {
    out << "p wcnf " << num_vars << ' '
        << inst.hard.clauses.size() + inst.softs.size() << ' ' << top << '\n';
  }
  for (const Clause& c : inst.hard.clauses) {
    if (format == WcnfFormat::Classic)
      out << top;
    else
      out << 'h';
    for (Lit l : c) out << ' ' << l;
    out << " 0\n";
  }
  for (const SoftUnit& s : inst.softs) out << s.weight << ' ' << s.lit << " 0\n";
  return out.str();
}

ParsedWcnf parse_wcnf(const std::string& text) {
  ParsedWcnf parsed;
  bool classic = false;
  bool header_seen = false;
  Weight top = 0;
  int declared_vars = 0;
  int max_var = 0;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == 'c') continue;
    if (line.rfind("p ", 0) == 0) {
      std::vector<std::string> toks = tokens(line);
      if (toks.size() != 5 || toks[1] != "wcnf")
        throw ParseError("malformed header '" + line + "'", lineno);
      declared_vars = static_cast<int>(parse_int(toks[2], lineno, "variable count"));
      parse_int(toks[3], lineno, "clause count");  // informational
      top = parse_weight(toks[4], lineno, "top weight");
      classic = true;
      header_seen = true;
      continue;
    }

    std::vector<std::string> toks = tokens(line);
    bool hard = false;
    Weight weight = 0;
    std::size_t first = 1;
    if (toks[0] == "h") {
      hard = true;
    } else {
      weight = parse_weight(toks[0], lineno, "clause weight");
      if (header_seen && weight >= top) {
        if (weight > top)
          throw ParseError("clause weight exceeds the top weight", lineno);
        hard = true;
      }
    }
    Clause clause;
    bool terminated = false;
    for (std::size_t i = first; i < toks.size(); ++i) {
      long long l = parse_int(toks[i], lineno, "literal");
      if (l == 0) {
        if (i + 1 != toks.size())
          throw ParseError("literals after the 0 terminator", lineno);
        terminated = true;
        break;
      }
      max_var = std::max(max_var, static_cast<int>(std::llabs(l)));
      clause.push_back(static_cast<Lit>(l));
    }
    if (!terminated) throw ParseError("clause line without 0 terminator", lineno);
    if (hard) {
      parsed.hard.push_back(std::move(clause));
    } else {
      if (weight == 0) throw ParseError("soft clause with weight 0", lineno);
      parsed.soft.emplace_back(std::move(clause), weight);
    }
  }
  if (classic) {
    if (max_var > declared_vars)
      throw ParseError("a literal exceeds the declared variable count of " +
                       std::to_string(declared_vars));
    parsed.num_vars = declared_vars;
  } else {
    parsed.num_vars = max_var;
  }
  return parsed;
}

MaxSatInstance to_maxsat(const ParsedWcnf& parsed) {
  MaxSatInstance inst;
  inst.hard.num_vars = parsed.num_vars;
  inst.hard.clauses = parsed.hard;
  std::map<Lit, Weight> merged;
  for (const auto& [clause, weight] : parsed.soft) {
    if (clause.size() != 1 || clause[0] <= 0)
      throw NotUnitSoftError(
          "soft clauses must be positive unit literals for the builtin optimizer");
    merged[clause[0]] += weight;
  }
  for (const auto& [lit, weight] : merged) inst.softs.push_back({lit, weight});
  return inst;
}

// ---------------------------------------------------------------------------
// solver output
// ---------------------------------------------------------------------------

SolverVerdict parse_solver_output(const std::string& text, int var_count) {
  SolverVerdict verdict;
  bool status_seen = false;
  std::vector<std::string> value_tokens;

  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (line[0] == 's' && (line.size() == 1 || std::isspace(static_cast<unsigned char>(line[1])))) {
      std::string status = trim(line.substr(1));
      if (status == "OPTIMUM FOUND")
        verdict.status = SolverStatus::OptimumFound;
      else if (status == "UNSATISFIABLE")
        verdict.status = SolverStatus::Unsatisfiable;
      else
        verdict.status = SolverStatus::Unknown;
      status_seen = true;
    } else if (line[0] == 'o' &&
               (line.size() == 1 || std::isspace(static_cast<unsigned char>(line[1])))) {
      std::string rest = trim(line.substr(1));
      try {
        verdict.objective = parse_weight(rest, 0, "objective");
      } catch (const ParseError&) {
        throw MalformedOutputError("malformed objective line: '" + line + "'");
      }
    } else if (line[0] == 'v' &&
               (line.size() == 1 || std::isspace(static_cast<unsigned char>(line[1])))) {
      for (const std::string& tok : tokens(line.substr(1)))
        value_tokens.push_back(tok);
    }
  }
  if (!status_seen)
    throw MalformedOutputError("solver output contains no 's' status line");
  if (verdict.status != SolverStatus::OptimumFound) return verdict;
  if (value_tokens.empty())
    throw MalformedOutputError("optimum reported without any 'v' model line");

  // Binary form: all tokens are 0/1 digit runs and together cover exactly one
  // digit per variable. Anything else is read as signed literals.
  std::size_t digits = 0;
  bool binary = true;
  for (const std::string& tok : value_tokens) {
    for (char c : tok) {
      if (c != '0' && c != '1') binary = false;
      ++digits;
    }
  }
  binary = binary && digits == static_cast<std::size_t>(var_count);

  verdict.model.assign(var_count + 1, false);
  if (binary) {
    int v = 1;
    for (const std::string& tok : value_tokens)
      for (char c : tok) verdict.model[v++] = c == '1';
  } else {
    for (const std::string& tok : value_tokens) {
      long long l = 0;
      std::size_t pos = 0;
      try {
        l = std::stoll(tok, &pos);
      } catch (const std::exception&) {
        throw MalformedOutputError("malformed literal '" + tok + "' in model");
      }
      if (pos != tok.size())
        throw MalformedOutputError("malformed literal '" + tok + "' in model");
      if (l == 0) continue;  // terminator
      long long v = std::llabs(l);
      if (v > var_count)
        throw MalformedOutputError("model mentions variable " + std::to_string(v) +
                                   " beyond the declared " + std::to_string(var_count));
      verdict.model[static_cast<std::size_t>(v)] = l > 0;
    }
  }
  return verdict;
}

std::string emit_solver_output(const MaxSatResult& result, int num_vars) {
  std::ostringstream out;
  if (!result) {
    out << "s UNSATISFIABLE\n";
    return out.str();
  }
  out << "s OPTIMUM FOUND\n";
  out << "o " << result->forfeited << '\n';
  out << 'v';
  for (int v = 1; v <= num_vars; ++v)
    out << ' ' << (v < static_cast<int>(result->assignment.size()) && result->assignment[v]
                       ? v
                       : -v);
  out << " 0\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// files
// ---------------------------------------------------------------------------

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << text;
  if (!out) throw Error("write failed: " + path);
}

}  // namespace mras
