#include "aprx/exec.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "aprx/errors.hpp"

namespace aprx {

const char* behaviorText(Behavior b) {
  switch (b) {
    case Behavior::Normal: return "normal";
    case Behavior::Crash: return "crash";
    case Behavior::Exception: return "exception";
    case Behavior::IncorrectResult: return "incorrectResult";
    case Behavior::SoftHang: return "softHang";
    case Behavior::HardHangSuspected: return "hardHangSuspected";
  }
  return "?";
}

// ---- machine -----------------------------------------------------------------

Machine::Machine(const Program& p, const Cfg& cfg, const std::map<std::string, Int>& input)
    : p_(&p), cfg_(&cfg) {
  shared_.resize(p.sharedSlots.size());
  for (std::size_t i = 0; i < p.sharedDecls.size(); ++i) shared_[i] = p.sharedDecls[i].init;
  lockOwner_.assign(p.mutexes.size(), -1);
  procs_.resize(p.procs.size());
  for (std::size_t i = 0; i < p.procs.size(); ++i) {
    procs_[i].node = cfg.perProc[i].entry;
    procs_[i].locals.assign(p.procs[i].localSlots.size(), Int(0));
  }
  if (p.kind == ProgramKind::Sequential) {
    const Proc& main = p.procs[0];
    for (std::size_t i = 0; i < main.params.size(); ++i) {
      auto it = input.find(main.params[i]);
      procs_[0].locals[i] = it == input.end() ? Int(0) : it->second;
    }
  } else {
    for (std::size_t i = p.sharedDecls.size(); i < p.sharedSlots.size(); ++i) {
      auto it = input.find(p.sharedSlots[i]);
      shared_[i] = it == input.end() ? Int(0) : it->second;
    }
  }
}

bool Machine::halted(int proc) const {
  return procs_[proc].node == cfg_->perProc[proc].exit;
}

bool Machine::allHalted() const {
  for (std::size_t i = 0; i < procs_.size(); ++i)
    if (!halted(static_cast<int>(i))) return false;
  return true;
}

bool Machine::enabled(int proc) const {
  if (fault_ != Fault::None || halted(proc)) return false;
  const CfgNode& n = cfg_->perProc[proc].nodes[procs_[proc].node];
  if (n.kind == NodeKind::Action && n.s->kind == Stmt::Kind::Lock)
    return lockOwner_[n.s->mutexIdx] == -1;
  return true;
}

bool Machine::anyEnabled() const {
  for (std::size_t i = 0; i < procs_.size(); ++i)
    if (enabled(static_cast<int>(i))) return true;
  return false;
}

Int Machine::evalExpr(const Expr& e, int proc) {
  switch (e.kind) {
    case Expr::Kind::Const:
      return e.value;
    case Expr::Kind::Var:
      return e.ref.scope == VarScope::Shared ? shared_[e.ref.slot]
                                             : procs_[proc].locals[e.ref.slot];
    case Expr::Kind::Neg:
      return -evalExpr(*e.lhs, proc);
    case Expr::Kind::Binary: {
      Int l = evalExpr(*e.lhs, proc);
      Int r = evalExpr(*e.rhs, proc);
      switch (e.op) {
        case ArithOp::Add: return l + r;
        case ArithOp::Sub: return l - r;
        case ArithOp::Mul: return l * r;
        case ArithOp::Div:
          if (r == 0) {
            fault_ = Fault::Exception;
            faultMsg_ = "division by zero";
            return Int(0);
          }
          return l / r;  // truncates toward zero
      }
    }
  }
  return Int(0);
}

bool Machine::evalBExpr(const BExpr& b, int proc) {
  switch (b.kind) {
    case BExpr::Kind::Cmp: {
      Int l = evalExpr(*b.lhs, proc);
      Int r = evalExpr(*b.rhs, proc);
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
      return evalBExpr(*b.a, proc) && evalBExpr(*b.b, proc);
    case BExpr::Kind::Or:
      return evalBExpr(*b.a, proc) || evalBExpr(*b.b, proc);
    case BExpr::Kind::Not:
      return !evalBExpr(*b.a, proc);
  }
  return false;
}

StmtId Machine::step(int proc) {
  ProcState& ps = procs_[proc];
  const ProcCfg& pc = cfg_->perProc[proc];
  const CfgNode& n = pc.nodes[ps.node];
  if (n.kind == NodeKind::Branch) {
    bool v = evalBExpr(*n.s->cond, proc);
    if (fault_ == Fault::None) ps.node = v ? n.onTrue : n.onFalse;
    return n.stmt;
  }
  const Stmt& s = *n.s;
  switch (s.kind) {
    case Stmt::Kind::Assign: {
      Int v = evalExpr(*s.expr, proc);
      if (fault_ != Fault::None) return s.id;
      if (s.ref.scope == VarScope::Shared)
        shared_[s.ref.slot] = v;
      else
        ps.locals[s.ref.slot] = v;
      break;
    }
    case Stmt::Kind::Output: {
      Int v = evalExpr(*s.expr, proc);
      if (fault_ != Fault::None) return s.id;
      outputs_.push_back(v);
      break;
    }
    case Stmt::Kind::Lock:
      lockOwner_[s.mutexIdx] = proc;  // caller checked enabled()
      break;
    case Stmt::Kind::Unlock:
      if (lockOwner_[s.mutexIdx] != proc) {
        fault_ = Fault::Crash;
        faultMsg_ = "unlock of mutex '" + s.mutexName + "' not held by proc '" +
                    p_->procs[proc].name + "'";
        return s.id;
      }
      lockOwner_[s.mutexIdx] = -1;
      break;
    case Stmt::Kind::Skip:
    case Stmt::Kind::Halt:
      break;
    case Stmt::Kind::If:
    case Stmt::Kind::While:
      break;  // unreachable: branches handled above
  }
  ps.node = n.next;
  return s.id;
}

std::string Machine::stateKey(int proc) const {
  std::ostringstream os;
  os << procs_[proc].node;
  for (const Int& v : procs_[proc].locals) os << "|" << v;
  for (const Int& v : shared_) os << "|" << v;
  for (int o : lockOwner_) os << "|" << o;
  return os.str();
}

std::map<std::string, Int> Machine::snapshotStore() const {
  std::map<std::string, Int> store;
  for (std::size_t i = 0; i < p_->sharedSlots.size(); ++i)
    store[p_->sharedSlots[i]] = shared_[i];
  if (p_->kind == ProgramKind::Sequential) {
    const Proc& main = p_->procs[0];
    for (std::size_t i = 0; i < main.localSlots.size(); ++i)
      store[main.localSlots[i]] = procs_[0].locals[i];
  } else {
    for (std::size_t pi = 0; pi < p_->procs.size(); ++pi)
      for (std::size_t i = 0; i < p_->procs[pi].localSlots.size(); ++i)
        store[p_->procs[pi].name + "." + p_->procs[pi].localSlots[i]] = procs_[pi].locals[i];
  }
  return store;
}

// ---- run -----------------------------------------------------------------------

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

void fnvMix(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (i * 8)) & 0xff;
    h *= kFnvPrime;
  }
}

std::string hexDigest(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace

RunResult run(const Program& p, const std::map<std::string, Int>& input,
              const ObserverConfig& cfg, StmtId watchStmt) {
  Cfg graph = buildCfg(p);
  Machine m(p, graph, input);
  RunResult r;
  std::uint64_t digest = kFnvOffset;
  std::mt19937_64 rng(cfg.scheduleSeed);
  const bool concurrent = p.kind == ProgramKind::Concurrent;

  while (r.steps < cfg.stepBudget) {
    if (m.fault() != Machine::Fault::None || m.allHalted()) break;
    int proc = 0;
    if (concurrent) {
      std::vector<int> ready;
      for (std::size_t i = 0; i < p.procs.size(); ++i)
        if (m.enabled(static_cast<int>(i))) ready.push_back(static_cast<int>(i));
      if (ready.empty()) {
        r.stuck = true;
        break;
      }
      proc = ready[rng() % ready.size()];
    } else if (!m.enabled(0)) {
      r.stuck = true;
      break;
    }
    StmtId sid = m.step(proc);
    ++r.steps;
    fnvMix(digest, (static_cast<std::uint64_t>(proc) << 32) | sid);
    r.coverage.insert(sid);
    if (watchStmt && sid == watchStmt && r.firstReachStep < 0)
      r.firstReachStep = static_cast<std::int64_t>(r.steps);
  }

  r.outputs = m.outputs();
  r.traceDigest = hexDigest(digest);
  if (m.fault() == Machine::Fault::Crash) {
    r.behavior = Behavior::Crash;
    r.faultMessage = m.faultMessage();
  } else if (m.fault() == Machine::Fault::Exception) {
    r.behavior = Behavior::Exception;
    r.faultMessage = m.faultMessage();
  } else if (m.allHalted()) {
    r.behavior = r.steps <= cfg.softThreshold() ? Behavior::Normal : Behavior::SoftHang;
    r.finalStore = m.snapshotStore();
  } else {
    // Budget exhausted or no enabled transition: suspected only, the prover
    // or the model checker confirms.
    r.behavior = Behavior::HardHangSuspected;
    r.steps = cfg.stepBudget;
  }
  return r;
}

// ---- test harness ----------------------------------------------------------------

namespace {

bool outputsMatch(const Program& p, const std::vector<Int>& expected,
                  const std::vector<Int>& observed) {
  if (p.kind == ProgramKind::Sequential) return expected == observed;
  std::vector<Int> a = expected, b = observed;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace

TestOutcome runTest(const Program& p, const TestCase& t, const ObserverConfig& cfg) {
  TestOutcome out;
  out.result = run(p, t.input, cfg);
  if (out.result.behavior != Behavior::Normal) return out;
  bool ok = true;
  if (t.expected.outputs && !outputsMatch(p, *t.expected.outputs, out.result.outputs))
    ok = false;
  if (ok && t.expected.finalVars) {
    for (const auto& [name, v] : *t.expected.finalVars) {
      auto it = out.result.finalStore.find(name);
      if (it == out.result.finalStore.end() || it->second != v) {
        ok = false;
        break;
      }
    }
  }
  if (ok)
    out.passed = true;
  else
    out.result.behavior = Behavior::IncorrectResult;
  return out;
}

SuiteResult evaluateSuite(const Program& p, const TestSuite& suite, const ObserverConfig& cfg) {
  SuiteResult r;
  for (std::size_t i = 0; i < suite.cases.size(); ++i) {
    r.outcomes.push_back(runTest(p, suite.cases[i], cfg));
    (r.outcomes.back().passed ? r.passing : r.failing).push_back(i);
  }
  return r;
}

BehCheck checkBeh(const Program& p, const std::vector<TestCase>& spec,
                  const ObserverConfig& cfg) {
  BehCheck c;
  for (const auto& t : spec) {
    TestOutcome out = runTest(p, t, cfg);
    if (!out.passed) {
      c.holds = false;
      c.witness = t;
      c.witnessOutcome = out;
      return c;
    }
  }
  return c;
}

// ---- .tests parser -----------------------------------------------------------------

namespace {

struct TestLexer {
  std::string src;
  std::size_t i = 0;
  int line = 1;

  void skipWs() {
    while (i < src.size()) {
      if (src[i] == '\n') { ++line; ++i; }
      else if (std::isspace(static_cast<unsigned char>(src[i]))) ++i;
      else if (src[i] == '/' && i + 1 < src.size() && src[i + 1] == '/') {
        while (i < src.size() && src[i] != '\n') ++i;
      } else break;
    }
  }

  bool eof() { skipWs(); return i >= src.size(); }

  bool tryConsume(const std::string& word) {
    skipWs();
    if (src.compare(i, word.size(), word) != 0) return false;
    // keywords must not run into an identifier tail
    if (!word.empty() && (std::isalnum(static_cast<unsigned char>(word.back())) || word.back() == '_')) {
      std::size_t end = i + word.size();
      if (end < src.size() &&
          (std::isalnum(static_cast<unsigned char>(src[end])) || src[end] == '_'))
        return false;
    }
    i += word.size();
    return true;
  }

  void consume(const std::string& word) {
    if (!tryConsume(word))
      throw ParseError("expected '" + word + "' in test file", line, 1);
  }

  std::string ident() {
    skipWs();
    std::size_t j = i;
    while (j < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
      ++j;
    if (j == i) throw ParseError("expected identifier in test file", line, 1);
    std::string s = src.substr(i, j - i);
    i = j;
    return s;
  }

  Int integer() {
    skipWs();
    bool neg = false;
    if (i < src.size() && (src[i] == '-' || src[i] == '+')) {
      neg = src[i] == '-';
      ++i;
    }
    std::size_t j = i;
    while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
    if (j == i) throw ParseError("expected integer in test file", line, 1);
    Int v(src.substr(i, j - i));
    i = j;
    return neg ? -v : v;
  }
};

}  // namespace

TestSuite parseTestSuite(const std::string& text) {
  TestSuite suite;
  TestLexer lx{text};
  while (!lx.eof()) {
    lx.consume("test");
    TestCase t;
    t.name = lx.ident();
    lx.consume("{");
    while (!lx.tryConsume("}")) {
      if (lx.tryConsume("input")) {
        if (!lx.tryConsume(";")) {
          do {
            std::string name = lx.ident();
            lx.consume("=");
            t.input[name] = lx.integer();
          } while (lx.tryConsume(","));
          lx.consume(";");
        }
      } else if (lx.tryConsume("expect")) {
        if (lx.tryConsume("output")) {
          lx.consume("=");
          lx.consume("[");
          std::vector<Int> outs;
          if (!lx.tryConsume("]")) {
            do {
              outs.push_back(lx.integer());
            } while (lx.tryConsume(","));
            lx.consume("]");
          }
          lx.consume(";");
          t.expected.outputs = std::move(outs);
        } else if (lx.tryConsume("final")) {
          auto& fv = t.expected.finalVars;
          if (!fv) fv.emplace();
          do {
            std::string name = lx.ident();
            lx.consume("=");
            (*fv)[name] = lx.integer();
          } while (lx.tryConsume(","));
          lx.consume(";");
        } else {
          throw ParseError("expected 'output' or 'final' after 'expect'", lx.line, 1);
        }
      } else {
        throw ParseError("expected 'input', 'expect' or '}' in test block", lx.line, 1);
      }
    }
    if (!t.expected.outputs && !t.expected.finalVars)
      throw ParseError("test '" + t.name + "' has no expectation", lx.line, 1);
    suite.cases.push_back(std::move(t));
  }
  return suite;
}

TestSuite loadTestSuite(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open test file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parseTestSuite(ss.str());
}

}  // namespace aprx
