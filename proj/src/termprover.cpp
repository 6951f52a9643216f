#include "aprx/termprover.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "aprx/errors.hpp"

namespace aprx {

const char* answerText(Answer a) {
  switch (a) {
    case Answer::TR: return "TR";
    case Answer::NT: return "NT";
    case Answer::UN: return "UN";
  }
  return "?";
}

std::vector<const Stmt*> loopsOf(const Proc& proc) {
  std::vector<const Stmt*> loops;
  std::function<void(const Block&)> walk = [&](const Block& b) {
    for (const auto& s : b) {
      if (s->kind == Stmt::Kind::While) loops.push_back(s.get());
      walk(s->thenBlock);
      walk(s->elseBlock);
      walk(s->body);
    }
  };
  walk(proc.body);
  return loops;
}

// ---- loop relation extraction -------------------------------------------------

namespace {

struct Unsupported {
  std::string reason;
};

// Symbolic state during body walk: local slot -> affine value over the
// analysis variables (entry-state locals plus havoc variables).
class RelationBuilder {
 public:
  RelationBuilder(const Program& p, int procIdx, bool havocShared, const ProverConfig& cfg)
      : p_(p), proc_(p.procs[procIdx]), procIdx_(procIdx), havocShared_(havocShared),
        cfg_(cfg) {
    for (const auto& name : proc_.localSlots) {
      localVar_.push_back(static_cast<int>(varNames_.size()));
      varNames_.push_back(name);
    }
    stateVarCount_ = varNames_.size();
  }

  LoopRelation build(const Stmt& loop) {
    LoopRelation rel;
    rel.loopStmt = loop.id;
    rel.procIdx = procIdx_;

    std::map<int, LinExpr> identity;
    for (std::size_t i = 0; i < localVar_.size(); ++i)
      identity[static_cast<int>(i)] = LinExpr::var(localVar_[i]);

    rel.guardCases = toCases(*loop.cond, false, identity);
    if (rel.guardCases.size() > cfg_.maxGuardCases)
      throw Unsupported{"guard splits into too many cases"};

    std::vector<std::pair<std::map<int, LinExpr>, std::vector<LinCons>>> paths;
    paths.emplace_back(identity, std::vector<LinCons>{});
    walkBlock(loop.body, paths);
    for (auto& [env, cond] : paths) {
      LoopPath lp;
      lp.condition = std::move(cond);
      lp.update = std::move(env);
      rel.paths.push_back(std::move(lp));
    }

    rel.varNames = varNames_;
    rel.stateVarCount = stateVarCount_;

    // Ranking candidates: locals read in the guard or written in the body.
    std::set<int> cand;
    for (const auto& gc : rel.guardCases)
      for (const auto& c : gc)
        for (const auto& [v, k] : c.coeffs)
          if (static_cast<std::size_t>(v) < stateVarCount_) cand.insert(v);
    for (const auto& path : rel.paths)
      for (const auto& [slot, e] : path.update) {
        LinExpr ident = LinExpr::var(localVar_[static_cast<std::size_t>(slot)]);
        if (e.coeffs != ident.coeffs || e.constant != ident.constant)
          cand.insert(localVar_[static_cast<std::size_t>(slot)]);
      }
    rel.rankVars.assign(cand.begin(), cand.end());
    if (rel.rankVars.size() > cfg_.maxLoopVars)
      throw Unsupported{"loop involves too many variables for the ranking search"};
    return rel;
  }

 private:
  int freshHavoc(const std::string& hint) {
    int idx = static_cast<int>(varNames_.size());
    varNames_.push_back("havoc$" + hint + std::to_string(idx));
    return idx;
  }

  LinExpr evalLin(const Expr& e, const std::map<int, LinExpr>& env) {
    switch (e.kind) {
      case Expr::Kind::Const:
        return LinExpr(e.value);
      case Expr::Kind::Var: {
        if (e.ref.scope == VarScope::Shared) {
          if (!havocShared_) throw Unsupported{"shared variable in sequential analysis"};
          return LinExpr::var(freshHavoc(e.name));
        }
        auto it = env.find(e.ref.slot);
        if (it != env.end()) return it->second;
        return LinExpr::var(localVar_[static_cast<std::size_t>(e.ref.slot)]);
      }
      case Expr::Kind::Neg:
        return evalLin(*e.lhs, env).scaled(Int(-1));
      case Expr::Kind::Binary: {
        LinExpr l = evalLin(*e.lhs, env);
        LinExpr r = evalLin(*e.rhs, env);
        switch (e.op) {
          case ArithOp::Add: return l.add(r);
          case ArithOp::Sub: return l.add(r, Int(-1));
          case ArithOp::Mul:
            if (l.isConstant()) return r.scaled(l.constant);
            if (r.isConstant()) return l.scaled(r.constant);
            throw Unsupported{"non-linear multiplication"};
          case ArithOp::Div:
            throw Unsupported{"integer division in the analyzed fragment"};
        }
      }
    }
    throw Unsupported{"unreachable expression kind"};
  }

  // Linear atoms of a comparison, integer-tightened to ">= 0" form.
  // Returns the disjunctive cases of the (possibly negated) comparison.
  std::vector<std::vector<LinCons>> cmpCases(const BExpr& b, bool negate,
                                             const std::map<int, LinExpr>& env) {
    LinExpr l = evalLin(*b.lhs, env);
    LinExpr r = evalLin(*b.rhs, env);
    RelOp op = b.rel;
    if (negate) {
      switch (op) {
        case RelOp::Lt: op = RelOp::Ge; break;
        case RelOp::Le: op = RelOp::Gt; break;
        case RelOp::Gt: op = RelOp::Le; break;
        case RelOp::Ge: op = RelOp::Lt; break;
        case RelOp::Eq: op = RelOp::Ne; break;
        case RelOp::Ne: op = RelOp::Eq; break;
      }
    }
    auto diff = [](const LinExpr& a, const LinExpr& bb, const Int& shift) {
      LinExpr d = a;
      d.add(bb, Int(-1));
      d.constant += shift;
      return LinCons::geqZero(d);
    };
    switch (op) {
      case RelOp::Lt: return {{diff(r, l, Int(-1))}};
      case RelOp::Le: return {{diff(r, l, Int(0))}};
      case RelOp::Gt: return {{diff(l, r, Int(-1))}};
      case RelOp::Ge: return {{diff(l, r, Int(0))}};
      case RelOp::Eq: return {{diff(l, r, Int(0)), diff(r, l, Int(0))}};
      case RelOp::Ne: return {{diff(l, r, Int(-1))}, {diff(r, l, Int(-1))}};
    }
    return {};
  }

  // Disjunctive normal form with the negation pushed inward.
  std::vector<std::vector<LinCons>> toCases(const BExpr& b, bool negate,
                                            const std::map<int, LinExpr>& env) {
    switch (b.kind) {
      case BExpr::Kind::Cmp:
        return cmpCases(b, negate, env);
      case BExpr::Kind::Not:
        return toCases(*b.a, !negate, env);
      case BExpr::Kind::And:
      case BExpr::Kind::Or: {
        bool isUnion = (b.kind == BExpr::Kind::Or) != negate;
        auto left = toCases(*b.a, negate, env);
        auto right = toCases(*b.b, negate, env);
        std::vector<std::vector<LinCons>> out;
        if (isUnion) {
          out = std::move(left);
          out.insert(out.end(), right.begin(), right.end());
        } else {
          for (const auto& lc : left)
            for (const auto& rc : right) {
              std::vector<LinCons> both = lc;
              both.insert(both.end(), rc.begin(), rc.end());
              out.push_back(std::move(both));
            }
        }
        if (out.size() > cfg_.maxGuardCases) throw Unsupported{"condition splits into too many cases"};
        return out;
      }
    }
    return {};
  }

  using PathSet = std::vector<std::pair<std::map<int, LinExpr>, std::vector<LinCons>>>;

  void havocWrites(const Block& b, std::map<int, LinExpr>& env) {
    for (const auto& s : b) {
      if (s->kind == Stmt::Kind::Assign && s->ref.scope == VarScope::Local)
        env[s->ref.slot] = LinExpr::var(freshHavoc(s->var));
      havocWrites(s->thenBlock, env);
      havocWrites(s->elseBlock, env);
      havocWrites(s->body, env);
    }
  }

  void walkBlock(const Block& b, PathSet& paths) {
    for (const auto& s : b) walkStmt(*s, paths);
  }

  void walkStmt(const Stmt& s, PathSet& paths) {
    switch (s.kind) {
      case Stmt::Kind::Assign: {
        if (s.ref.scope == VarScope::Shared) return;  // untracked under havoc
        for (auto& [env, cond] : paths) {
          LinExpr v = evalLin(*s.expr, env);
          env[s.ref.slot] = std::move(v);
        }
        return;
      }
      case Stmt::Kind::If: {
        PathSet out;
        for (auto& [env, cond] : paths) {
          for (const auto& cs : toCases(*s.cond, false, env)) {
            PathSet branch{{env, cond}};
            for (const auto& c : cs) branch[0].second.push_back(c);
            walkBlock(s.thenBlock, branch);
            for (auto& pr : branch) out.push_back(std::move(pr));
          }
          for (const auto& cs : toCases(*s.cond, true, env)) {
            PathSet branch{{env, cond}};
            for (const auto& c : cs) branch[0].second.push_back(c);
            walkBlock(s.elseBlock, branch);
            for (auto& pr : branch) out.push_back(std::move(pr));
          }
        }
        if (out.size() > cfg_.maxBodyPaths) throw Unsupported{"too many body paths"};
        paths = std::move(out);
        return;
      }
      case Stmt::Kind::While: {
        // Nested loop: its effect on the outer transition is havoc on every
        // variable it writes (the loop itself is certified separately).
        for (auto& [env, cond] : paths) havocWrites(s.body, env);
        return;
      }
      case Stmt::Kind::Halt: {
        // Execution leaves the loop; this path imposes no decrease obligation.
        paths.clear();
        return;
      }
      case Stmt::Kind::Lock:
      case Stmt::Kind::Unlock:
      case Stmt::Kind::Output:
      case Stmt::Kind::Skip:
        return;
    }
  }

  const Program& p_;
  const Proc& proc_;
  int procIdx_;
  bool havocShared_;
  ProverConfig cfg_;
  std::vector<std::string> varNames_;
  std::vector<int> localVar_;  // local slot -> analysis var index
  std::size_t stateVarCount_ = 0;
};

}  // namespace

ExtractResult extractLoopRelation(const Program& p, int procIdx, const Stmt& loop,
                                  bool havocShared, const ProverConfig& cfg) {
  ExtractResult res;
  try {
    RelationBuilder builder(p, procIdx, havocShared, cfg);
    res.relation = builder.build(loop);
  } catch (const Unsupported& u) {
    res.unsupportedReason = u.reason;
  }
  return res;
}

// ---- ranking synthesis ----------------------------------------------------------

namespace {

// Deterministic candidate order: small L1 norm first, then lexicographic.
std::vector<std::vector<int>> coefficientVectors(std::size_t dims, int bound) {
  std::vector<std::vector<int>> all;
  std::vector<int> cur(dims, -bound);
  while (true) {
    bool allZero = std::all_of(cur.begin(), cur.end(), [](int c) { return c == 0; });
    if (!allZero) all.push_back(cur);
    std::size_t i = 0;
    for (; i < dims; ++i) {
      if (cur[i] < bound) {
        ++cur[i];
        break;
      }
      cur[i] = -bound;
    }
    if (i == dims) break;
  }
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    int na = 0, nb = 0;
    for (int c : a) na += std::abs(c);
    for (int c : b) nb += std::abs(c);
    if (na != nb) return na < nb;
    return a < b;
  });
  return all;
}

}  // namespace

std::optional<RankedLoop> synthesizeRanking(const LoopRelation& rel, const ProverConfig& cfg) {
  if (rel.rankVars.empty()) return std::nullopt;

  for (const auto& cand : coefficientVectors(rel.rankVars.size(), cfg.coeffBound)) {
    std::map<int, Int> coeffs;
    for (std::size_t i = 0; i < cand.size(); ++i)
      if (cand[i] != 0) coeffs[rel.rankVars[i]] = cand[i];

    // Decrease is independent of c0: r(x) - r(x') >= 1 on every case x path.
    std::vector<Implication> facts;
    bool ok = true;
    for (std::size_t ci = 0; ci < rel.guardCases.size() && ok; ++ci) {
      for (std::size_t pi = 0; pi < rel.paths.size() && ok; ++pi) {
        LinExpr delta;
        for (const auto& [v, c] : coeffs) {
          delta.add(LinExpr::var(v), c);
          // State vars are allocated in local-slot order, so v is the slot.
          auto it = rel.paths[pi].update.find(v);
          if (it != rel.paths[pi].update.end())
            delta.add(it->second, -c);
          else
            delta.add(LinExpr::var(v), -c);
        }
        delta.constant -= 1;
        Implication imp;
        imp.label = "decrease case " + std::to_string(ci) + " path " + std::to_string(pi);
        imp.antecedent = rel.guardCases[ci];
        imp.antecedent.insert(imp.antecedent.end(), rel.paths[pi].condition.begin(),
                              rel.paths[pi].condition.end());
        imp.consequent = LinCons::geqZero(delta);
        if (!implicationHolds(imp)) {
          ok = false;
          break;
        }
        facts.push_back(std::move(imp));
      }
    }
    if (!ok) continue;

    // Boundedness: guard => r(x) + c0 >= 0, smallest |c0| in [-C, C] wins.
    std::vector<int> order;
    for (int c0 = 0; c0 <= cfg.coeffBound; ++c0) {
      order.push_back(c0);
      if (c0) order.push_back(-c0);
    }
    for (int c0 : order) {
      std::vector<Implication> bounds;
      bool bok = true;
      for (std::size_t ci = 0; ci < rel.guardCases.size(); ++ci) {
        LinExpr rx;
        for (const auto& [v, c] : coeffs) rx.add(LinExpr::var(v), c);
        rx.constant += c0;
        Implication imp;
        imp.label = "bounded case " + std::to_string(ci);
        imp.antecedent = rel.guardCases[ci];
        imp.consequent = LinCons::geqZero(rx);
        if (!implicationHolds(imp)) {
          bok = false;
          break;
        }
        bounds.push_back(std::move(imp));
      }
      if (!bok) continue;
      RankedLoop out;
      out.loopStmt = rel.loopStmt;
      out.varNames = rel.varNames;
      out.coeffs = coeffs;
      out.constant = c0;
      out.implications = std::move(facts);
      for (auto& b : bounds) out.implications.push_back(std::move(b));
      return out;
    }
  }
  return std::nullopt;
}

// ---- lasso search ----------------------------------------------------------------

std::vector<std::map<std::string, Int>> inputGrid(const Program& p, const InputDomain& dom,
                                                  std::size_t cap) {
  std::vector<std::map<std::string, Int>> grid;
  const auto& params = p.inputParams;
  if (params.empty()) {
    grid.push_back({});
    return grid;
  }
  std::vector<Int> lo(params.size()), hi(params.size()), cur(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto it = dom.perParam.find(params[i]);
    if (it == dom.perParam.end()) {
      lo[i] = 0;
      hi[i] = 0;
    } else {
      lo[i] = it->second.first;
      hi[i] = it->second.second;
    }
    if (lo[i] > hi[i]) throw Error("empty domain for parameter '" + params[i] + "'");
    cur[i] = lo[i];
  }
  while (grid.size() < cap) {
    std::map<std::string, Int> point;
    for (std::size_t i = 0; i < params.size(); ++i) point[params[i]] = cur[i];
    grid.push_back(std::move(point));
    std::size_t i = params.size();
    while (i > 0) {
      --i;
      if (cur[i] < hi[i]) {
        ++cur[i];
        for (std::size_t j = i + 1; j < params.size(); ++j) cur[j] = lo[j];
        break;
      }
      if (i == 0) return grid;
    }
  }
  return grid;
}

namespace {

// Hunts for a recurrent (location, locals) state of one proc executed in
// isolation. Used directly for sequential programs.
std::optional<Lasso> lassoForProc(const Program& p, const Cfg& cfg, int procIdx,
                                  const std::map<std::string, Int>& input,
                                  std::uint64_t budget) {
  Machine m(p, cfg, input);
  const ProcCfg& pc = cfg.perProc[procIdx];
  std::unordered_set<int> headers(pc.loopHeaders.begin(), pc.loopHeaders.end());

  auto key = [&]() {
    std::ostringstream os;
    os << m.node(procIdx);
    for (const Int& v : m.locals(procIdx)) os << "|" << v;
    return os.str();
  };

  std::unordered_map<std::string, std::size_t> seen;
  std::vector<StmtId> trace;
  std::size_t firstPos = 0, secondPos = 0;
  bool found = false;
  for (std::uint64_t step = 0; step < budget; ++step) {
    if (m.halted(procIdx) || m.fault() != Machine::Fault::None || !m.enabled(procIdx)) break;
    if (headers.count(m.node(procIdx))) {
      auto [it, inserted] = seen.emplace(key(), trace.size());
      if (!inserted) {
        firstPos = it->second;
        secondPos = trace.size();
        found = true;
        break;
      }
    }
    trace.push_back(m.step(procIdx));
  }
  if (!found) return std::nullopt;

  Lasso l;
  l.input = input;
  l.procIdx = procIdx;
  l.stem.assign(trace.begin(), trace.begin() + static_cast<std::ptrdiff_t>(firstPos));
  l.cycle.assign(trace.begin() + static_cast<std::ptrdiff_t>(firstPos),
                 trace.begin() + static_cast<std::ptrdiff_t>(secondPos));
  // Replay the stem to capture the recurrent state.
  Machine m2(p, cfg, input);
  for (std::size_t i = 0; i < firstPos; ++i) m2.step(procIdx);
  l.cycleNode = m2.node(procIdx);
  l.cycleLocals = m2.locals(procIdx);
  return l;
}

bool procReadsShared(const Proc& proc) {
  bool reads = false;
  std::function<void(const Expr&)> visitE = [&](const Expr& e) {
    if (e.kind == Expr::Kind::Var && e.ref.scope == VarScope::Shared) reads = true;
    if (e.lhs) visitE(*e.lhs);
    if (e.rhs) visitE(*e.rhs);
  };
  std::function<void(const BExpr&)> visitB = [&](const BExpr& b) {
    if (b.lhs) visitE(*b.lhs);
    if (b.rhs) visitE(*b.rhs);
    if (b.a) visitB(*b.a);
    if (b.b) visitB(*b.b);
  };
  std::function<void(const Block&)> walk = [&](const Block& blk) {
    for (const auto& s : blk) {
      if (s->expr) visitE(*s->expr);
      if (s->cond) visitB(*s->cond);
      walk(s->thenBlock);
      walk(s->elseBlock);
      walk(s->body);
    }
  };
  walk(proc.body);
  return reads;
}

bool cycleTouchesLocks(const Program& p, const std::vector<StmtId>& cycle) {
  for (StmtId id : cycle) {
    const Stmt* s = p.findStmt(id);
    if (s && (s->kind == Stmt::Kind::Lock || s->kind == Stmt::Kind::Unlock)) return true;
  }
  return false;
}

}  // namespace

std::optional<Lasso> findLasso(const Program& p, const InputDomain& dom,
                               const ProverConfig& cfg) {
  if (p.kind != ProgramKind::Sequential)
    throw Error("findLasso requires a sequential program");
  Cfg graph = buildCfg(p);
  for (const auto& input : inputGrid(p, dom, cfg.gridCap)) {
    auto l = lassoForProc(p, graph, 0, input, cfg.stepBudget);
    if (l) return l;
  }
  return std::nullopt;
}

bool replayLasso(const Program& p, const Lasso& l, std::string* whyNot) {
  auto fail = [&](const std::string& msg) {
    if (whyNot) *whyNot = msg;
    return false;
  };
  Cfg graph = buildCfg(p);
  if (l.procIdx < 0 || l.procIdx >= static_cast<int>(p.procs.size()))
    return fail("proc index out of range");
  Machine m(p, graph, l.input);
  for (std::size_t i = 0; i < l.stem.size(); ++i) {
    if (!m.enabled(l.procIdx)) return fail("stem blocked at step " + std::to_string(i));
    StmtId sid = m.step(l.procIdx);
    if (sid != l.stem[i]) return fail("stem diverges at step " + std::to_string(i));
  }
  if (m.node(l.procIdx) != l.cycleNode || m.locals(l.procIdx) != l.cycleLocals)
    return fail("stem does not reach the recorded recurrent state");

  const HaltingSet hs = haltingSet(p);
  const auto& halts = hs.perProc.at(p.procs[l.procIdx].name);
  if (l.cycle.empty()) return fail("empty cycle");
  for (std::size_t i = 0; i < l.cycle.size(); ++i) {
    if (m.halted(l.procIdx)) return fail("cycle reaches the end of the proc");
    if (!m.enabled(l.procIdx)) return fail("cycle blocked at step " + std::to_string(i));
    StmtId sid = m.step(l.procIdx);
    if (sid != l.cycle[i]) return fail("cycle diverges at step " + std::to_string(i));
    if (halts.count(sid)) return fail("cycle executes a halting statement");
  }
  if (m.node(l.procIdx) != l.cycleNode || m.locals(l.procIdx) != l.cycleLocals)
    return fail("cycle does not return to the recurrent state");
  return true;
}

// ---- prove ------------------------------------------------------------------------

namespace {

struct LoopAnalysis {
  bool allCertified = true;
  RankingCertificate cert;
  std::string firstReason;
};

LoopAnalysis certifyLoops(const Program& p, int procIdx, bool havocShared,
                          const ProverConfig& cfg) {
  LoopAnalysis out;
  for (const Stmt* loop : loopsOf(p.procs[procIdx])) {
    ExtractResult ext = extractLoopRelation(p, procIdx, *loop, havocShared, cfg);
    if (!ext.relation) {
      out.allCertified = false;
      if (out.firstReason.empty())
        out.firstReason = "loop at statement " + std::to_string(loop->id) + ": " +
                          ext.unsupportedReason;
      continue;
    }
    auto ranked = synthesizeRanking(*ext.relation, cfg);
    if (!ranked) {
      out.allCertified = false;
      if (out.firstReason.empty())
        out.firstReason = "no affine ranking function (coefficients in [-" +
                          std::to_string(cfg.coeffBound) + ", " +
                          std::to_string(cfg.coeffBound) + "]) for loop at statement " +
                          std::to_string(loop->id);
      continue;
    }
    out.cert.perLoop.push_back(std::move(*ranked));
  }
  return out;
}

}  // namespace

Verdict prove(const Program& p, const InputDomain& dom, const ProverConfig& cfg) {
  if (p.kind != ProgramKind::Sequential) throw Error("prove requires a sequential program");
  Verdict v;
  LoopAnalysis loops = certifyLoops(p, 0, false, cfg);
  if (loops.allCertified) {
    v.answer = Answer::TR;
    v.ranking = std::move(loops.cert);
    return v;
  }
  if (auto l = findLasso(p, dom, cfg)) {
    v.answer = Answer::NT;
    v.lasso = std::move(l);
    return v;
  }
  v.answer = Answer::UN;
  v.reason = loops.firstReason + "; no recurrent state found on the input grid";
  return v;
}

Verdict proveProcHavoc(const Program& p, const std::string& procName, const InputDomain& dom,
                       const ProverConfig& cfg) {
  if (p.kind != ProgramKind::Concurrent)
    throw Error("proveProcHavoc requires a concurrent program");
  int procIdx = p.procIndex(procName);
  if (procIdx < 0) throw Error("no proc named '" + procName + "'");

  Verdict v;
  LoopAnalysis loops = certifyLoops(p, procIdx, true, cfg);
  if (loops.allCertified) {
    v.answer = Answer::TR;
    v.ranking = std::move(loops.cert);
    return v;
  }

  // A proc that never reads the shared store runs the same under any
  // interference; a concrete recurrent state is then a sound NT witness as
  // long as the cycle stays clear of lock operations.
  if (!procReadsShared(p.procs[procIdx])) {
    Cfg graph = buildCfg(p);
    for (const auto& input : inputGrid(p, dom, cfg.gridCap)) {
      auto l = lassoForProc(p, graph, procIdx, input, cfg.stepBudget);
      if (l && !cycleTouchesLocks(p, l->cycle)) {
        v.answer = Answer::NT;
        v.lasso = std::move(l);
        return v;
      }
    }
  }

  v.answer = Answer::UN;
  v.reason = loops.firstReason.empty()
                 ? "interference-dependent loop; havoc abstraction blocks both certificates"
                 : loops.firstReason + (procReadsShared(p.procs[procIdx])
                        ? "; proc reads the shared store, no concrete lasso search"
                        : "; no recurrent state found on the input grid");
  return v;
}

bool recheckCertificate(const RankingCertificate& cert) {
  for (const auto& loop : cert.perLoop)
    for (const auto& imp : loop.implications)
      if (!implicationHolds(imp)) return false;
  return true;
}

}  // namespace aprx
