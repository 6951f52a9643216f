#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "aprx/lang.hpp"

namespace aprx {

// Observable erroneous-behavior taxonomy. hardHang is never asserted by the
// interpreter alone, only suspected; the prover confirms.
enum class Behavior { Normal, Crash, Exception, IncorrectResult, SoftHang, HardHangSuspected };

const char* behaviorText(Behavior b);

struct ObserverConfig {
  std::uint64_t stepBudget = 1000000;
  std::uint64_t softHangThreshold = 0;  // 0: defaults to stepBudget / 10
  std::uint64_t scheduleSeed = 1;

  std::uint64_t softThreshold() const {
    return softHangThreshold ? softHangThreshold : stepBudget / 10;
  }
};

struct RunResult {
  Behavior behavior = Behavior::Normal;
  std::vector<Int> outputs;
  std::uint64_t steps = 0;
  std::string traceDigest;       // FNV-1a over (proc, stmt) pairs, hex
  std::set<StmtId> coverage;
  std::map<std::string, Int> finalStore;  // when terminated
  std::string faultMessage;
  bool stuck = false;            // no enabled transition before budget ran out
  std::int64_t firstReachStep = -1;  // step that first executed watchStmt, -1 if never
};

struct ExpectedOutcome {
  std::optional<std::vector<Int>> outputs;          // ordered (sequential) / multiset (concurrent)
  std::optional<std::map<std::string, Int>> finalVars;
};

struct TestCase {
  std::string name;
  std::map<std::string, Int> input;
  ExpectedOutcome expected;
};

struct TestSuite {
  std::vector<TestCase> cases;
};

// Parses the ".tests" block format:
//   test NAME { input x = 3, y = 4; expect output = [7]; expect final z = 7; }
TestSuite parseTestSuite(const std::string& text);
TestSuite loadTestSuite(const std::string& path);

// ---- stepping core ----------------------------------------------------------
//
// Shared by run(), the lasso search, and tests. One instance per execution;
// pure with respect to (program, input, seed).
class Machine {
 public:
  Machine(const Program& p, const Cfg& cfg, const std::map<std::string, Int>& input);

  enum class Fault { None, Crash, Exception };

  bool halted(int proc) const;
  bool allHalted() const;
  bool enabled(int proc) const;   // false when halted, faulted, or blocked on a lock
  bool anyEnabled() const;
  Fault fault() const { return fault_; }
  const std::string& faultMessage() const { return faultMsg_; }

  // Executes one step of proc i (must be enabled); returns the statement id.
  StmtId step(int proc);

  int node(int proc) const { return procs_[proc].node; }
  const std::vector<Int>& locals(int proc) const { return procs_[proc].locals; }
  const std::vector<Int>& shared() const { return shared_; }
  const std::vector<Int>& outputs() const { return outputs_; }
  const Program& program() const { return *p_; }

  // Control location plus every variable value of one proc (+ shared store);
  // the state key used for recurrence detection.
  std::string stateKey(int proc) const;

  std::map<std::string, Int> snapshotStore() const;

  Int evalExpr(const Expr& e, int proc);  // sets fault on division by zero
  bool evalBExpr(const BExpr& b, int proc);

 private:
  struct ProcState {
    int node = 0;
    std::vector<Int> locals;
  };

  const Program* p_;
  const Cfg* cfg_;
  std::vector<ProcState> procs_;
  std::vector<Int> shared_;
  std::vector<int> lockOwner_;  // -1 free
  std::vector<Int> outputs_;
  Fault fault_ = Fault::None;
  std::string faultMsg_;
};

// ---- operations ---------------------------------------------------------------

// Runs p under input with a step budget. Sequential programs are deterministic;
// concurrent programs use a seeded uniform scheduler. All faults are data.
RunResult run(const Program& p, const std::map<std::string, Int>& input,
              const ObserverConfig& cfg, StmtId watchStmt = 0);

struct TestOutcome {
  bool passed = false;
  RunResult result;  // behavior reclassified to IncorrectResult on output mismatch
};

TestOutcome runTest(const Program& p, const TestCase& t, const ObserverConfig& cfg);

struct SuiteResult {
  std::vector<std::size_t> passing;   // indices into suite.cases
  std::vector<std::size_t> failing;
  std::vector<TestOutcome> outcomes;  // per case, in suite order
};

SuiteResult evaluateSuite(const Program& p, const TestSuite& suite, const ObserverConfig& cfg);

struct BehCheck {
  bool holds = true;
  std::optional<TestCase> witness;
  std::optional<TestOutcome> witnessOutcome;
};

// The `patch |= phi_beh` gate: holds iff every case passes.
BehCheck checkBeh(const Program& p, const std::vector<TestCase>& spec, const ObserverConfig& cfg);

}  // namespace aprx
