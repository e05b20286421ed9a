#include "esst/concrete/interpreter.hpp"

#include <deque>
#include <sstream>
#include <unordered_map>

#include "esst/logic/solver.hpp"

namespace esst::concrete {

using logic::Assign;
using logic::Assume;
using logic::PrimCall;
using sched::Status;

std::size_t Configuration::hash() const {
  std::size_t h = sched.hash();
  auto mix = [&](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  for (Loc l : locs) mix(static_cast<std::size_t>(l));
  for (long v : values) mix(static_cast<std::size_t>(v));
  return h;
}

Configuration initial_configuration(const System& sys) {
  Configuration c;
  for (const auto& cfg : sys.cfgs) c.locs.push_back(cfg.entry);
  c.values.assign(sys.vars.size(), 0);
  c.sched = sched::initial_state(sys.topo);
  return c;
}

long eval_term(const System& sys, const Configuration& c, const logic::LinearTerm& t) {
  const logic::Rational r = t.evaluate([&](VarId v) { return logic::Rational(c.values[sys.slot_of(v)]); });
  return r.get_num().get_si();
}

bool eval_formula(const System& sys, const Configuration& c, const logic::Formula& f) {
  return f.holds([&](VarId v) { return logic::Rational(c.values[sys.slot_of(v)]); });
}

std::pair<long, sched::SchedulerState> eval_rhs(const System& sys, const Configuration& c, int thread,
                                                 const logic::Operation& op, std::optional<long> havoc) {
  if (const auto* a = std::get_if<Assign>(&op)) {
    if (!a->value) {
      if (!havoc) throw std::invalid_argument("havoc value missing");
      return {*havoc, c.sched};
    }
    return {eval_term(sys, c, *a->value), c.sched};
  }
  if (const auto* p = std::get_if<PrimCall>(&op)) {
    auto r = sched::sexec(c.sched, *p, thread, sys.topo);
    return {r.value, std::move(r.state)};
  }
  throw std::invalid_argument("eval_rhs on an assume");
}

bool is_error(const System& sys, const Configuration& c) {
  for (std::size_t t = 0; t < sys.cfgs.size(); ++t)
    if (sys.cfgs[t].is_error(c.locs[t])) return true;
  return false;
}

std::optional<Configuration> apply(const System& sys, const Configuration& c, const Step& s) {
  if (is_error(sys, c)) return std::nullopt;
  const int running = c.sched.running();
  switch (s.kind) {
    case Step::Kind::Scheduler: {
      if (running >= 0) return std::nullopt;
      for (auto& ch : sched::sched(c.sched)) {
        if (ch.thread != s.thread) continue;
        Configuration n = c;
        n.sched = std::move(ch.state);
        return n;
      }
      return std::nullopt;
    }
    case Step::Kind::Exit: {
      if (running != s.thread) return std::nullopt;
      const Cfg& cfg = sys.cfgs[static_cast<std::size_t>(s.thread)];
      if (c.locs[static_cast<std::size_t>(s.thread)] != cfg.exit) return std::nullopt;
      Configuration n = c;
      n.sched = sched::on_thread_exit(c.sched, s.thread);
      return n;
    }
    case Step::Kind::Thread: {
      if (running != s.thread) return std::nullopt;
      const Cfg& cfg = sys.cfgs[static_cast<std::size_t>(s.thread)];
      if (s.edge < 0 || static_cast<std::size_t>(s.edge) >= cfg.edges.size()) return std::nullopt;
      const auto& e = cfg.edges[static_cast<std::size_t>(s.edge)];
      if (e.src != c.locs[static_cast<std::size_t>(s.thread)]) return std::nullopt;
      Configuration n = c;
      if (const auto* as = std::get_if<Assume>(&e.op)) {
        if (!eval_formula(sys, c, as->cond)) return std::nullopt;
      } else {
        const auto* a = std::get_if<Assign>(&e.op);
        if (a && !a->value && !s.havoc) return std::nullopt;
        auto [v, st] = eval_rhs(sys, c, s.thread, e.op, s.havoc);
        n.sched = std::move(st);
        for (VarId x : logic::vars_written(e.op)) n.values[static_cast<std::size_t>(sys.slot_of(x))] = v;
      }
      n.locs[static_cast<std::size_t>(s.thread)] = e.dst;
      if (e.dst == cfg.exit && n.sched.status[static_cast<std::size_t>(s.thread)].kind == Status::Running)
        n.sched = sched::on_thread_exit(n.sched, s.thread);
      return n;
    }
  }
  return std::nullopt;
}

std::vector<std::pair<Step, Configuration>> step(const System& sys, const Configuration& c,
                                                 const std::vector<long>& value_set) {
  std::vector<std::pair<Step, Configuration>> out;
  if (is_error(sys, c)) return out;
  const int running = c.sched.running();
  if (running < 0) {
    for (auto& ch : sched::sched(c.sched)) {
      Step s{Step::Kind::Scheduler, ch.thread, -1, std::nullopt, ch.end_of_instant};
      Configuration n = c;
      n.sched = std::move(ch.state);
      out.emplace_back(s, std::move(n));
    }
    return out;
  }
  const Cfg& cfg = sys.cfgs[static_cast<std::size_t>(running)];
  const Loc here = c.locs[static_cast<std::size_t>(running)];
  if (here == cfg.exit) {
    Step s{Step::Kind::Exit, running, -1, std::nullopt, false};
    if (auto n = apply(sys, c, s)) out.emplace_back(s, std::move(*n));
    return out;
  }
  for (int ei : cfg.outgoing(here)) {
    const auto& e = cfg.edges[static_cast<std::size_t>(ei)];
    const auto* a = std::get_if<Assign>(&e.op);
    if (a && !a->value) {
      for (long v : value_set) {
        Step s{Step::Kind::Thread, running, ei, v, false};
        if (auto n = apply(sys, c, s)) out.emplace_back(s, std::move(*n));
      }
    } else {
      Step s{Step::Kind::Thread, running, ei, std::nullopt, false};
      if (auto n = apply(sys, c, s)) out.emplace_back(s, std::move(*n));
    }
  }
  return out;
}

ReachResult bounded_reach(const System& sys, const ReachOptions& opts) {
  struct Entry {
    int parent;
    Step via;
    int depth;
  };
  ReachResult res;
  std::vector<Configuration> configs;
  std::vector<Entry> info;
  std::unordered_map<Configuration, int, ConfigurationHash> index;
  configs.push_back(initial_configuration(sys));
  info.push_back({-1, Step{}, 0});
  index.emplace(configs[0], 0);
  std::deque<int> queue{0};
  auto build_trace = [&](int id) {
    std::vector<int> chain;
    for (int k = id; k >= 0; k = info[static_cast<std::size_t>(k)].parent) chain.push_back(k);
    Trace t;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      if (it != chain.rbegin()) t.steps.push_back(info[static_cast<std::size_t>(*it)].via);
      t.configs.push_back(configs[static_cast<std::size_t>(*it)]);
    }
    return t;
  };
  if (is_error(sys, configs[0])) {
    res.verdict = ReachVerdict::Unsafe;
    res.trace = build_trace(0);
    res.states = 1;
    return res;
  }
  while (!queue.empty()) {
    const int id = queue.front();
    queue.pop_front();
    const int d = info[static_cast<std::size_t>(id)].depth;
    if (d >= opts.depth) {
      res.depth_limited = true;
      continue;
    }
    auto succ = step(sys, configs[static_cast<std::size_t>(id)], opts.value_set);
    for (auto& [s, n] : succ) {
      if (index.count(n)) continue;
      if (configs.size() >= opts.max_states) throw logic::CapacityError("bounded_reach state cap exceeded");
      const int nid = static_cast<int>(configs.size());
      index.emplace(n, nid);
      configs.push_back(std::move(n));
      info.push_back({id, s, d + 1});
      if (is_error(sys, configs.back())) {
        res.verdict = ReachVerdict::Unsafe;
        res.trace = build_trace(nid);
        res.states = configs.size();
        return res;
      }
      queue.push_back(nid);
    }
  }
  res.states = configs.size();
  return res;
}

std::optional<Trace> replay(const System& sys, const std::vector<Step>& steps) {
  Trace t;
  t.configs.push_back(initial_configuration(sys));
  for (const auto& s : steps) {
    auto n = apply(sys, t.configs.back(), s);
    if (!n) return std::nullopt;
    t.steps.push_back(s);
    t.configs.push_back(std::move(*n));
  }
  return t;
}

bool check_trace(const System& sys, const Trace& t) {
  if (t.configs.size() != t.steps.size() + 1) return false;
  if (t.configs.empty() || !(t.configs.front() == initial_configuration(sys))) return false;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    auto n = apply(sys, t.configs[i], t.steps[i]);
    if (!n || !(*n == t.configs[i + 1])) return false;
  }
  return true;
}

std::string location_name(Loc l) { return "l" + std::to_string(l); }

namespace {

std::string op_text(const System& sys, const Step& s) {
  if (s.kind == Step::Kind::Exit) return "exit";
  const auto& e = sys.cfgs[static_cast<std::size_t>(s.thread)].edges[static_cast<std::size_t>(s.edge)];
  std::string text = logic::to_string(e.op);
  if (s.havoc) text += " [= " + std::to_string(*s.havoc) + "]";
  return text;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string render_text(const System& sys, const Trace& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const Step& s = t.steps[i];
    const std::string& name = sys.topo.threads[static_cast<std::size_t>(s.thread)];
    os << '#' << (i + 1) << ' ';
    if (s.kind == Step::Kind::Scheduler) {
      os << "[scheduler] -> running=" << name;
      if (s.end_of_instant) os << " (end of instant)";
    } else {
      const Loc src = t.configs[i].locs[static_cast<std::size_t>(s.thread)];
      const Loc dst = t.configs[i + 1].locs[static_cast<std::size_t>(s.thread)];
      os << "[thread " << name << "] " << location_name(src) << " --" << op_text(sys, s) << "--> "
         << location_name(dst);
    }
    os << '\n';
  }
  return os.str();
}

std::string render_structured(const System& sys, const Trace& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const Step& s = t.steps[i];
    const std::string& name = sys.topo.threads[static_cast<std::size_t>(s.thread)];
    os << "step=" << (i + 1);
    switch (s.kind) {
      case Step::Kind::Scheduler:
        os << " kind=sched thread=" << name << " eoi=" << (s.end_of_instant ? 1 : 0);
        break;
      case Step::Kind::Exit: os << " kind=exit thread=" << name; break;
      case Step::Kind::Thread:
        os << " kind=thread thread=" << name << " edge=" << s.edge
           << " src=" << location_name(t.configs[i].locs[static_cast<std::size_t>(s.thread)])
           << " dst=" << location_name(t.configs[i + 1].locs[static_cast<std::size_t>(s.thread)]);
        if (s.havoc) os << " value=" << *s.havoc;
        os << " op=" << quote(op_text(sys, s));
        break;
    }
    if (!(t.configs[i].sched == t.configs[i + 1].sched))
      os << " sched=" << quote(t.configs[i + 1].sched.to_string(sys.topo));
    os << '\n';
  }
  return os.str();
}

std::vector<Step> parse_structured(const System& sys, const std::string& text) {
  std::vector<Step> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::map<std::string, std::string> kv;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && line[i] == ' ') ++i;
      const std::size_t eq = line.find('=', i);
      if (eq == std::string::npos) break;
      const std::string key = line.substr(i, eq - i);
      i = eq + 1;
      std::string val;
      if (i < line.size() && line[i] == '"') {
        ++i;
        while (i < line.size() && line[i] != '"') {
          if (line[i] == '\\' && i + 1 < line.size()) ++i;
          val += line[i++];
        }
        ++i;
      } else {
        while (i < line.size() && line[i] != ' ') val += line[i++];
      }
      kv[key] = val;
    }
    Step s;
    const int th = sys.topo.thread_index(kv.at("thread"));
    if (th < 0) throw std::invalid_argument("unknown thread in trace: " + kv.at("thread"));
    s.thread = th;
    const std::string& kind = kv.at("kind");
    if (kind == "sched") {
      s.kind = Step::Kind::Scheduler;
      s.end_of_instant = kv.count("eoi") && kv["eoi"] == "1";
    } else if (kind == "exit") {
      s.kind = Step::Kind::Exit;
    } else if (kind == "thread") {
      s.kind = Step::Kind::Thread;
      s.edge = std::stoi(kv.at("edge"));
      if (kv.count("value")) s.havoc = std::stol(kv["value"]);
    } else {
      throw std::invalid_argument("unknown step kind: " + kind);
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace esst::concrete
