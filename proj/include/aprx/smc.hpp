#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "aprx/exec.hpp"
#include "aprx/lang.hpp"

namespace aprx {

struct SmcConfig {
  std::int64_t valueBound = 1024;   // abs value cap per variable; exceeding aborts
  std::size_t stateCap = 1000000;
};

enum class FaultKind : std::int8_t { None = 0, Crash = 1, Exception = 2 };

// Canonically encoded interleaving state: equal states compare equal field by
// field. Output history is kept as a sorted multiset.
struct GlobalState {
  std::vector<std::int32_t> procLoc;
  std::vector<std::int64_t> locals;   // concatenated per-proc, layout in StateGraph
  std::vector<std::int64_t> shared;
  std::vector<std::int8_t> lockOwner;  // -1 free
  std::vector<std::int64_t> outputs;
  FaultKind fault = FaultKind::None;

  bool operator==(const GlobalState& o) const = default;
};

struct GlobalStateHash {
  std::size_t operator()(const GlobalState& s) const;
};

struct Transition {
  std::int32_t from = -1;
  std::int32_t proc = -1;
  StmtId stmt = 0;
  std::int32_t to = -1;
};

// Exhaustive interleaving graph, BFS order, deterministic numbering.
// Borrows the Program it was built from.
struct StateGraph {
  const Program* program = nullptr;
  Cfg cfg;
  std::vector<int> localBase;  // per proc offset into GlobalState::locals
  std::vector<GlobalState> states;
  std::vector<std::vector<Transition>> out;  // one edge per enabled proc
  // BFS tree for shortest witnesses
  std::vector<std::int32_t> parent;
  std::vector<std::int32_t> parentProc;
  std::vector<StmtId> parentStmt;
  int initial = 0;
  bool exhausted = false;

  bool procHalted(const GlobalState& s, int proc) const;
  bool allHalted(const GlobalState& s) const;
};

// BFS over all interleavings. lock(m) is enabled only while m is free; a
// division by zero or an unlock of an unheld mutex yields a terminal fault
// state. Throws StateSpaceExceeded / ValueBoundExceeded.
StateGraph explore(const Program& p, const std::map<std::string, Int>& input,
                   const SmcConfig& cfg);

// Recomputes the successor of a state through the transition function;
// nullopt when the proc is not enabled there. Witness replay goes through this.
std::optional<GlobalState> successorState(const StateGraph& g, const GlobalState& s, int proc);

struct WitnessStep {
  std::string procName;
  StmtId stmt = 0;
  std::map<std::string, std::int64_t> sharedDelta;
};

enum class Property { Deadlock, Livelock, AfHalt, Behavior };
const char* propertyText(Property p);

struct CheckResult {
  Property property = Property::Deadlock;
  std::string procName;  // AfHalt only
  bool holds = true;
  std::vector<WitnessStep> stem;
  std::vector<WitnessStep> cycle;        // livelock / afHalt violations
  std::vector<StmtId> blockedAt;         // deadlock: where each non-halted proc sits
  int witnessState = -1;                 // graph index of the violating/anchor state
  bool vacuous = false;                  // behavior: no all-halted state exists
  std::string note;
};

// fails iff a reachable state has no enabled transition while some proc is
// not at a halting location; shortest witness.
CheckResult checkDeadlock(const StateGraph& g);

// AF(halt) for one proc under weak fairness: fails on a dead state where the
// proc is not at a halting location, or on a fair cycle avoiding H_i.
CheckResult checkAfHalt(const StateGraph& g, const std::string& procName,
                        const std::set<StmtId>& haltingIds);

// fails iff a fair cycle moves two or more procs; single-proc cycles with the
// rest halted or blocked are the infinite-loop root cause, not livelock.
CheckResult checkLivelock(const StateGraph& g);

// holds iff every all-halted state matches the expected outputs / final store.
CheckResult checkBehModel(const StateGraph& g, const ExpectedOutcome& expected);

std::string toDot(const StateGraph& g);

}  // namespace aprx
