#include "aprx/smc.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

#include "aprx/errors.hpp"

namespace aprx {

const char* propertyText(Property p) {
  switch (p) {
    case Property::Deadlock: return "deadlock";
    case Property::Livelock: return "livelock";
    case Property::AfHalt: return "afHalt";
    case Property::Behavior: return "behavior";
  }
  return "?";
}

std::size_t GlobalStateHash::operator()(const GlobalState& s) const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (i * 8)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  for (auto v : s.procLoc) mix(static_cast<std::uint64_t>(v));
  for (auto v : s.locals) mix(static_cast<std::uint64_t>(v));
  for (auto v : s.shared) mix(static_cast<std::uint64_t>(v));
  for (auto v : s.lockOwner) mix(static_cast<std::uint64_t>(v));
  for (auto v : s.outputs) mix(static_cast<std::uint64_t>(v));
  mix(static_cast<std::uint64_t>(s.fault));
  return static_cast<std::size_t>(h);
}

bool StateGraph::procHalted(const GlobalState& s, int proc) const {
  return s.procLoc[proc] == cfg.perProc[proc].exit;
}

bool StateGraph::allHalted(const GlobalState& s) const {
  for (std::size_t i = 0; i < s.procLoc.size(); ++i)
    if (!procHalted(s, static_cast<int>(i))) return false;
  return true;
}

// ---- transition function ------------------------------------------------------

namespace {

struct Engine {
  const Program* p;
  const StateGraph* g;
  std::int64_t bound;
  std::size_t statesSeen = 0;  // for cap diagnostics

  std::int64_t rd(const GlobalState& s, int proc, const VarRef& ref) const {
    return ref.scope == VarScope::Shared
               ? s.shared[ref.slot]
               : s.locals[g->localBase[proc] + ref.slot];
  }

  // Int128 avoids intermediate overflow; the bound caps stored values.
  __int128 eval(const GlobalState& s, int proc, const Expr& e, bool& fault) const {
    switch (e.kind) {
      case Expr::Kind::Const:
        return static_cast<__int128>(e.value.convert_to<long long>());
      case Expr::Kind::Var:
        return rd(s, proc, e.ref);
      case Expr::Kind::Neg:
        return -eval(s, proc, *e.lhs, fault);
      case Expr::Kind::Binary: {
        __int128 l = eval(s, proc, *e.lhs, fault);
        __int128 r = eval(s, proc, *e.rhs, fault);
        if (fault) return 0;
        switch (e.op) {
          case ArithOp::Add: return l + r;
          case ArithOp::Sub: return l - r;
          case ArithOp::Mul: return l * r;
          case ArithOp::Div:
            if (r == 0) {
              fault = true;
              return 0;
            }
            return l / r;
        }
      }
    }
    return 0;
  }

  bool evalB(const GlobalState& s, int proc, const BExpr& b, bool& fault) const {
    switch (b.kind) {
      case BExpr::Kind::Cmp: {
        __int128 l = eval(s, proc, *b.lhs, fault);
        __int128 r = eval(s, proc, *b.rhs, fault);
        switch (b.rel) {
          case RelOp::Lt: return l < r;
          case RelOp::Le: return l <= r;
          case RelOp::Gt: return l > r;
          case RelOp::Ge: return l >= r;
          case RelOp::Eq: return l == r;
          case RelOp::Ne: return l != r;
        }
        return false;
      }
      case BExpr::Kind::And:
        return evalB(s, proc, *b.a, fault) && evalB(s, proc, *b.b, fault);
      case BExpr::Kind::Or:
        return evalB(s, proc, *b.a, fault) || evalB(s, proc, *b.b, fault);
      case BExpr::Kind::Not:
        return !evalB(s, proc, *b.a, fault);
    }
    return false;
  }

  std::int64_t clamp(__int128 v, const std::string& var) const {
    if (v > bound || v < -static_cast<__int128>(bound))
      throw ValueBoundExceeded(bound, var, statesSeen);
    return static_cast<std::int64_t>(v);
  }

  bool enabled(const GlobalState& s, int proc) const {
    if (s.fault != FaultKind::None) return false;
    const ProcCfg& pc = g->cfg.perProc[proc];
    if (s.procLoc[proc] == pc.exit) return false;
    const CfgNode& n = pc.nodes[s.procLoc[proc]];
    if (n.kind == NodeKind::Action && n.s->kind == Stmt::Kind::Lock)
      return s.lockOwner[n.s->mutexIdx] == -1;
    return true;
  }

  // Precondition: enabled(s, proc).
  GlobalState apply(const GlobalState& s, int proc) const {
    GlobalState t = s;
    const ProcCfg& pc = g->cfg.perProc[proc];
    const CfgNode& n = pc.nodes[s.procLoc[proc]];
    bool fault = false;
    if (n.kind == NodeKind::Branch) {
      bool v = evalB(s, proc, *n.s->cond, fault);
      if (fault) {
        t.fault = FaultKind::Exception;
        return t;
      }
      t.procLoc[proc] = v ? n.onTrue : n.onFalse;
      return t;
    }
    const Stmt& st = *n.s;
    switch (st.kind) {
      case Stmt::Kind::Assign: {
        __int128 v = eval(s, proc, *st.expr, fault);
        if (fault) {
          t.fault = FaultKind::Exception;
          return t;
        }
        std::int64_t cv = clamp(v, st.var);
        if (st.ref.scope == VarScope::Shared)
          t.shared[st.ref.slot] = cv;
        else
          t.locals[g->localBase[proc] + st.ref.slot] = cv;
        break;
      }
      case Stmt::Kind::Output: {
        __int128 v = eval(s, proc, *st.expr, fault);
        if (fault) {
          t.fault = FaultKind::Exception;
          return t;
        }
        std::int64_t cv = clamp(v, "output");
        t.outputs.insert(std::lower_bound(t.outputs.begin(), t.outputs.end(), cv), cv);
        break;
      }
      case Stmt::Kind::Lock:
        t.lockOwner[st.mutexIdx] = static_cast<std::int8_t>(proc);
        break;
      case Stmt::Kind::Unlock:
        if (s.lockOwner[st.mutexIdx] != proc) {
          t.fault = FaultKind::Crash;
          return t;
        }
        t.lockOwner[st.mutexIdx] = -1;
        break;
      case Stmt::Kind::Skip:
      case Stmt::Kind::Halt:
        break;
      case Stmt::Kind::If:
      case Stmt::Kind::While:
        break;  // branches handled above
    }
    t.procLoc[proc] = n.next;
    return t;
  }
};

}  // namespace

StateGraph explore(const Program& p, const std::map<std::string, Int>& input,
                   const SmcConfig& cfg) {
  StateGraph g;
  g.program = &p;
  g.cfg = buildCfg(p);
  int base = 0;
  for (const auto& proc : p.procs) {
    g.localBase.push_back(base);
    base += static_cast<int>(proc.localSlots.size());
  }

  GlobalState init;
  init.procLoc.resize(p.procs.size());
  for (std::size_t i = 0; i < p.procs.size(); ++i)
    init.procLoc[i] = static_cast<std::int32_t>(g.cfg.perProc[i].entry);
  init.locals.assign(static_cast<std::size_t>(base), 0);
  init.shared.resize(p.sharedSlots.size());
  init.lockOwner.assign(p.mutexes.size(), -1);

  Engine eng{&p, &g, cfg.valueBound};
  auto asI64 = [&](const Int& v, const std::string& var) {
    if (v > cfg.valueBound || v < -Int(cfg.valueBound))
      throw ValueBoundExceeded(cfg.valueBound, var, 0);
    return v.convert_to<std::int64_t>();
  };
  for (std::size_t i = 0; i < p.sharedDecls.size(); ++i)
    init.shared[i] = asI64(p.sharedDecls[i].init, p.sharedDecls[i].name);
  if (p.kind == ProgramKind::Sequential) {
    for (std::size_t i = 0; i < p.procs[0].params.size(); ++i) {
      auto it = input.find(p.procs[0].params[i]);
      init.locals[i] = it == input.end() ? 0 : asI64(it->second, p.procs[0].params[i]);
    }
  } else {
    for (std::size_t i = p.sharedDecls.size(); i < p.sharedSlots.size(); ++i) {
      auto it = input.find(p.sharedSlots[i]);
      init.shared[i] = it == input.end() ? 0 : asI64(it->second, p.sharedSlots[i]);
    }
  }

  std::unordered_map<GlobalState, int, GlobalStateHash> index;
  auto intern = [&](GlobalState&& s, int parent, int viaProc, StmtId viaStmt) {
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(g.states.size());
    if (static_cast<std::size_t>(id) >= cfg.stateCap)
      throw StateSpaceExceeded(cfg.stateCap, g.states.size());
    index.emplace(s, id);
    g.states.push_back(std::move(s));
    g.out.emplace_back();
    g.parent.push_back(parent);
    g.parentProc.push_back(viaProc);
    g.parentStmt.push_back(viaStmt);
    return id;
  };

  intern(std::move(init), -1, -1, 0);
  for (int cur = 0; cur < static_cast<int>(g.states.size()); ++cur) {
    eng.statesSeen = g.states.size();
    for (int proc = 0; proc < static_cast<int>(p.procs.size()); ++proc) {
      // copy: intern() may reallocate g.states
      GlobalState s = g.states[static_cast<std::size_t>(cur)];
      if (!eng.enabled(s, proc)) continue;
      const CfgNode& n = g.cfg.perProc[proc].nodes[s.procLoc[proc]];
      GlobalState succ = eng.apply(s, proc);
      int to = intern(std::move(succ), cur, proc, n.stmt);
      g.out[static_cast<std::size_t>(cur)].push_back(
          Transition{cur, proc, n.stmt, to});
    }
  }
  g.exhausted = true;
  return g;
}

std::optional<GlobalState> successorState(const StateGraph& g, const GlobalState& s, int proc) {
  Engine eng{g.program, &g, std::numeric_limits<std::int64_t>::max() / 4};
  if (!eng.enabled(s, proc)) return std::nullopt;
  return eng.apply(s, proc);
}

// ---- witnesses ------------------------------------------------------------------

namespace {

std::map<std::string, std::int64_t> sharedDelta(const Program& p, const GlobalState& a,
                                                const GlobalState& b) {
  std::map<std::string, std::int64_t> d;
  for (std::size_t i = 0; i < a.shared.size(); ++i)
    if (a.shared[i] != b.shared[i]) d[p.sharedSlots[i]] = b.shared[i];
  return d;
}

std::vector<WitnessStep> pathTo(const StateGraph& g, int target) {
  std::vector<int> chain;
  for (int s = target; s != -1; s = g.parent[static_cast<std::size_t>(s)]) chain.push_back(s);
  std::reverse(chain.begin(), chain.end());
  std::vector<WitnessStep> steps;
  for (std::size_t i = 1; i < chain.size(); ++i) {
    int s = chain[i];
    WitnessStep w;
    w.procName = g.program->procs[static_cast<std::size_t>(g.parentProc[static_cast<std::size_t>(s)])].name;
    w.stmt = g.parentStmt[static_cast<std::size_t>(s)];
    w.sharedDelta = sharedDelta(*g.program, g.states[static_cast<std::size_t>(chain[i - 1])],
                                g.states[static_cast<std::size_t>(s)]);
    steps.push_back(std::move(w));
  }
  return steps;
}

std::vector<StmtId> blockedStatements(const StateGraph& g, const GlobalState& s) {
  std::vector<StmtId> out;
  for (std::size_t proc = 0; proc < s.procLoc.size(); ++proc) {
    if (g.procHalted(s, static_cast<int>(proc))) continue;
    out.push_back(g.cfg.perProc[proc].nodes[static_cast<std::size_t>(s.procLoc[proc])].stmt);
  }
  return out;
}

// ---- SCC decomposition (iterative Tarjan) --------------------------------------

struct SccInfo {
  std::vector<int> compOf;             // state -> component id
  std::vector<std::vector<int>> comps; // component id -> states
};

SccInfo tarjan(const StateGraph& g) {
  const int n = static_cast<int>(g.states.size());
  SccInfo info;
  info.compOf.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
  std::vector<bool> onStack(static_cast<std::size_t>(n), false);
  std::vector<int> stack;
  int counter = 0;

  struct Frame {
    int v;
    std::size_t edge;
  };
  for (int root = 0; root < n; ++root) {
    if (index[static_cast<std::size_t>(root)] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    index[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = counter++;
    stack.push_back(root);
    onStack[static_cast<std::size_t>(root)] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      const auto& edges = g.out[static_cast<std::size_t>(f.v)];
      if (f.edge < edges.size()) {
        int w = edges[f.edge++].to;
        if (index[static_cast<std::size_t>(w)] == -1) {
          index[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = counter++;
          stack.push_back(w);
          onStack[static_cast<std::size_t>(w)] = true;
          frames.push_back({w, 0});
        } else if (onStack[static_cast<std::size_t>(w)]) {
          low[static_cast<std::size_t>(f.v)] =
              std::min(low[static_cast<std::size_t>(f.v)], index[static_cast<std::size_t>(w)]);
        }
      } else {
        int v = f.v;
        frames.pop_back();
        if (!frames.empty())
          low[static_cast<std::size_t>(frames.back().v)] =
              std::min(low[static_cast<std::size_t>(frames.back().v)], low[static_cast<std::size_t>(v)]);
        if (low[static_cast<std::size_t>(v)] == index[static_cast<std::size_t>(v)]) {
          std::vector<int> comp;
          while (true) {
            int w = stack.back();
            stack.pop_back();
            onStack[static_cast<std::size_t>(w)] = false;
            info.compOf[static_cast<std::size_t>(w)] = static_cast<int>(info.comps.size());
            comp.push_back(w);
            if (w == v) break;
          }
          std::sort(comp.begin(), comp.end());
          info.comps.push_back(std::move(comp));
        }
      }
    }
  }
  return info;
}

struct FairScc {
  int id;
  std::vector<int> states;
  std::vector<Transition> intraEdges;
  std::vector<bool> moves;  // per proc: takes a transition inside the SCC
  int moverCount = 0;
};

// Nontrivial SCCs passing the weak-fairness filter: every proc enabled
// somewhere inside also moves inside.
std::vector<FairScc> fairSccs(const StateGraph& g) {
  SccInfo info = tarjan(g);
  const int procCount = static_cast<int>(g.program->procs.size());
  std::vector<FairScc> out;
  for (std::size_t id = 0; id < info.comps.size(); ++id) {
    const auto& comp = info.comps[id];
    std::vector<Transition> intra;
    std::vector<bool> moves(static_cast<std::size_t>(procCount), false);
    std::vector<bool> enabled(static_cast<std::size_t>(procCount), false);
    for (int s : comp) {
      for (const auto& t : g.out[static_cast<std::size_t>(s)]) {
        enabled[static_cast<std::size_t>(t.proc)] = true;
        if (info.compOf[static_cast<std::size_t>(t.to)] == static_cast<int>(id)) {
          intra.push_back(t);
          moves[static_cast<std::size_t>(t.proc)] = true;
        }
      }
    }
    if (intra.empty()) continue;  // trivial SCC without self-loop
    bool fair = true;
    for (int proc = 0; proc < procCount; ++proc)
      if (enabled[static_cast<std::size_t>(proc)] && !moves[static_cast<std::size_t>(proc)])
        fair = false;
    if (!fair) continue;
    FairScc f;
    f.id = static_cast<int>(id);
    f.states = comp;
    f.intraEdges = std::move(intra);
    f.moves = std::move(moves);
    for (bool m : f.moves) f.moverCount += m;
    out.push_back(std::move(f));
  }
  return out;
}

// A concrete cycle through the SCC that anchors at its first state and fires
// at least one transition of every proc that moves inside.
std::vector<WitnessStep> buildCycle(const StateGraph& g, const FairScc& scc) {
  const int anchor = scc.states.front();
  std::set<int> inScc(scc.states.begin(), scc.states.end());

  auto bfsPath = [&](int from, int to) {
    std::map<int, Transition> via;
    std::deque<int> q{from};
    std::set<int> seen{from};
    while (!q.empty()) {
      int cur = q.front();
      q.pop_front();
      if (cur == to && !via.empty()) break;
      for (const auto& t : g.out[static_cast<std::size_t>(cur)]) {
        if (!inScc.count(t.to) || seen.count(t.to)) continue;
        seen.insert(t.to);
        via.emplace(t.to, t);
        q.push_back(t.to);
      }
    }
    std::vector<Transition> path;
    int cur = to;
    while (cur != from) {
      auto it = via.find(cur);
      if (it == via.end()) break;  // from == to with no explicit path
      path.push_back(it->second);
      cur = it->second.from;
    }
    std::reverse(path.begin(), path.end());
    return path;
  };

  std::vector<Transition> tour;
  int cur = anchor;
  std::vector<bool> covered(scc.moves.size(), false);
  for (std::size_t proc = 0; proc < scc.moves.size(); ++proc) {
    if (!scc.moves[proc] || covered[proc]) continue;
    // nearest intra edge of this proc
    const Transition* pick = nullptr;
    for (const auto& t : scc.intraEdges)
      if (t.proc == static_cast<int>(proc)) {
        pick = &t;
        break;
      }
    for (const auto& t : bfsPath(cur, pick->from)) {
      tour.push_back(t);
      covered[static_cast<std::size_t>(t.proc)] = true;
    }
    tour.push_back(*pick);
    covered[proc] = true;
    cur = pick->to;
  }
  for (const auto& t : bfsPath(cur, anchor)) tour.push_back(t);
  if (tour.empty()) {
    // single-state SCC: use its self-loop
    for (const auto& t : scc.intraEdges)
      if (t.from == anchor && t.to == anchor) {
        tour.push_back(t);
        break;
      }
  }

  std::vector<WitnessStep> steps;
  for (const auto& t : tour) {
    WitnessStep w;
    w.procName = g.program->procs[static_cast<std::size_t>(t.proc)].name;
    w.stmt = t.stmt;
    w.sharedDelta = sharedDelta(*g.program, g.states[static_cast<std::size_t>(t.from)],
                                g.states[static_cast<std::size_t>(t.to)]);
    steps.push_back(std::move(w));
  }
  return steps;
}

}  // namespace

CheckResult checkDeadlock(const StateGraph& g) {
  CheckResult r;
  r.property = Property::Deadlock;
  for (std::size_t s = 0; s < g.states.size(); ++s) {
    if (!g.out[s].empty()) continue;
    if (g.allHalted(g.states[s])) continue;
    r.holds = false;
    r.witnessState = static_cast<int>(s);
    r.stem = pathTo(g, static_cast<int>(s));
    r.blockedAt = blockedStatements(g, g.states[s]);
    if (g.states[s].fault != FaultKind::None)
      r.note = g.states[s].fault == FaultKind::Crash ? "terminal crash state"
                                                     : "terminal exception state";
    return r;
  }
  return r;
}

CheckResult checkAfHalt(const StateGraph& g, const std::string& procName,
                        const std::set<StmtId>& haltingIds) {
  CheckResult r;
  r.property = Property::AfHalt;
  r.procName = procName;
  int proc = g.program->procIndex(procName);
  if (proc < 0) throw Error("no proc named '" + procName + "'");

  auto atHaltingLocation = [&](const GlobalState& s) {
    const auto& node = g.cfg.perProc[proc].nodes[static_cast<std::size_t>(s.procLoc[proc])];
    return haltingIds.count(node.stmt) > 0;
  };

  // (a) dead state with the proc short of a halting location
  for (std::size_t s = 0; s < g.states.size(); ++s) {
    if (!g.out[s].empty() || atHaltingLocation(g.states[s])) continue;
    r.holds = false;
    r.witnessState = static_cast<int>(s);
    r.stem = pathTo(g, static_cast<int>(s));
    r.blockedAt = blockedStatements(g, g.states[s]);
    r.note = "dead state";
    return r;
  }

  // (b) fair cycle on which the proc never occupies a halting location
  for (const auto& scc : fairSccs(g)) {
    bool avoids = true;
    for (int s : scc.states)
      if (atHaltingLocation(g.states[static_cast<std::size_t>(s)])) {
        avoids = false;
        break;
      }
    if (!avoids) continue;
    r.holds = false;
    r.witnessState = scc.states.front();
    r.stem = pathTo(g, scc.states.front());
    r.cycle = buildCycle(g, scc);
    r.note = "fair cycle";
    return r;
  }
  return r;
}

CheckResult checkLivelock(const StateGraph& g) {
  CheckResult r;
  r.property = Property::Livelock;
  for (const auto& scc : fairSccs(g)) {
    // Cycles confined to one proc (every other proc halted or blocked for the
    // whole SCC under fairness) are the infinite-loop root cause instead.
    if (scc.moverCount < 2) continue;
    r.holds = false;
    r.witnessState = scc.states.front();
    r.stem = pathTo(g, scc.states.front());
    r.cycle = buildCycle(g, scc);
    bool lockOp = false;
    for (const auto& t : scc.intraEdges) {
      const Stmt* st = g.program->findStmt(t.stmt);
      if (st && (st->kind == Stmt::Kind::Lock || st->kind == Stmt::Kind::Unlock)) lockOp = true;
    }
    r.note = lockOp ? "synchronization cycle" : "multi-proc cycle";
    return r;
  }
  return r;
}

CheckResult checkBehModel(const StateGraph& g, const ExpectedOutcome& expected) {
  CheckResult r;
  r.property = Property::Behavior;
  const Program& p = *g.program;
  bool sawHalted = false;
  for (std::size_t s = 0; s < g.states.size(); ++s) {
    const GlobalState& st = g.states[s];
    if (st.fault != FaultKind::None || !g.allHalted(st)) continue;
    sawHalted = true;
    bool ok = true;
    if (expected.outputs) {
      std::vector<std::int64_t> want;
      for (const Int& v : *expected.outputs) want.push_back(v.convert_to<std::int64_t>());
      std::sort(want.begin(), want.end());
      if (want != st.outputs) ok = false;
    }
    if (ok && expected.finalVars) {
      for (const auto& [name, v] : *expected.finalVars) {
        bool matched = false;
        for (std::size_t i = 0; i < p.sharedSlots.size() && !matched; ++i)
          if (p.sharedSlots[i] == name) {
            matched = true;
            if (st.shared[i] != v.convert_to<std::int64_t>()) ok = false;
          }
        if (!matched) {
          // fall back to proc locals (unambiguous names only)
          int hits = 0;
          std::int64_t got = 0;
          for (std::size_t pi = 0; pi < p.procs.size(); ++pi) {
            const auto& slots = p.procs[pi].localSlots;
            for (std::size_t i = 0; i < slots.size(); ++i)
              if (slots[i] == name) {
                ++hits;
                got = st.locals[static_cast<std::size_t>(g.localBase[pi]) + i];
              }
          }
          if (hits != 1 || got != v.convert_to<std::int64_t>()) ok = false;
        }
        if (!ok) break;
      }
    }
    if (!ok) {
      r.holds = false;
      r.witnessState = static_cast<int>(s);
      r.stem = pathTo(g, static_cast<int>(s));
      return r;
    }
  }
  if (!sawHalted) {
    r.vacuous = true;
    r.note = "no all-halted state; termination failures are reported by afHalt/deadlock";
  }
  return r;
}

std::string toDot(const StateGraph& g) {
  std::ostringstream os;
  os << "digraph states {\n";
  for (std::size_t s = 0; s < g.states.size(); ++s) {
    const GlobalState& st = g.states[s];
    os << "  s" << s << " [label=\"" << s;
    if (st.fault != FaultKind::None) os << " FAULT";
    else if (g.allHalted(st)) os << " HALT";
    os << "\"";
    if (g.out[s].empty() && !g.allHalted(st)) os << " color=red";
    os << "];\n";
  }
  for (std::size_t s = 0; s < g.states.size(); ++s)
    for (const auto& t : g.out[s])
      os << "  s" << t.from << " -> s" << t.to << " [label=\""
         << g.program->procs[static_cast<std::size_t>(t.proc)].name << ":" << t.stmt
         << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace aprx
