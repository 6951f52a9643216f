#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aprx/exec.hpp"
#include "aprx/lang.hpp"
#include "aprx/linear.hpp"

namespace aprx {

enum class Answer { TR, NT, UN };
const char* answerText(Answer a);

// Inclusive integer interval per input parameter; bounds the non-termination
// search and the execution oracle.
struct InputDomain {
  std::map<std::string, std::pair<Int, Int>> perParam;
};

struct ProverConfig {
  std::uint64_t stepBudget = 100000;  // per grid input in the lasso search
  std::size_t gridCap = 10000;        // max grid points enumerated
  int coeffBound = 3;                 // ranking coefficients searched in [-C, C]
  std::size_t maxLoopVars = 4;
  std::size_t maxBodyPaths = 64;
  std::size_t maxGuardCases = 16;
};

// Affine ranking function for one loop, with every Farkas-style fact that was
// checked, so certificates can be re-verified independently.
struct RankedLoop {
  StmtId loopStmt = 0;
  std::vector<std::string> varNames;   // analysis variables, index order
  std::map<int, Int> coeffs;           // linear part over varNames indices
  Int constant;                        // c0
  std::vector<Implication> implications;

  std::string text() const { return linExprText(coeffs, constant, varNames); }
};

struct RankingCertificate {
  std::vector<RankedLoop> perLoop;
};

// Finite witness of an infinite execution: stem to a recurrent state plus the
// cycle that returns to it. procIdx identifies the stepped proc (0 for
// sequential programs); the state is that proc's control location and locals.
struct Lasso {
  std::map<std::string, Int> input;
  int procIdx = 0;
  std::vector<StmtId> stem;
  std::vector<StmtId> cycle;
  int cycleNode = 0;
  std::vector<Int> cycleLocals;
};

struct Verdict {
  Answer answer = Answer::UN;
  std::optional<RankingCertificate> ranking;  // iff TR (may be empty: loop-free)
  std::optional<Lasso> lasso;                 // iff NT
  std::string reason;                         // iff UN
};

// ---- loop relation extraction ------------------------------------------------
//
// The supported fragment: conjunctive/disjunctive linear guards and affine
// body updates. Anything outside downgrades to UN, never aborts.
struct LoopPath {
  std::vector<LinCons> condition;          // path condition over entry state
  std::map<int, LinExpr> update;           // var index -> value at loop back-edge
};

struct LoopRelation {
  StmtId loopStmt = 0;
  int procIdx = 0;
  std::vector<std::string> varNames;             // entry-state vars + havoc vars
  std::size_t stateVarCount = 0;                 // first entries of varNames
  std::vector<std::vector<LinCons>> guardCases;  // disjuncts of the guard
  std::vector<LoopPath> paths;                   // one per feasible body path
  std::vector<int> rankVars;                     // candidate indices for ranking
};

struct ExtractResult {
  std::optional<LoopRelation> relation;
  std::string unsupportedReason;  // set when relation is empty
};

// havocShared: treat every shared-variable read as an unconstrained fresh
// value (the per-proc abstraction used for concurrent programs).
ExtractResult extractLoopRelation(const Program& p, int procIdx, const Stmt& loop,
                                  bool havocShared, const ProverConfig& cfg = {});

// Bounded search for an affine ranking function, every candidate verified by
// the exact Fourier-Motzkin implication checker before acceptance.
std::optional<RankedLoop> synthesizeRanking(const LoopRelation& rel,
                                            const ProverConfig& cfg = {});

// ---- operations ----------------------------------------------------------------

// Deterministic grid search for a recurrent state. Sequential programs only.
std::optional<Lasso> findLasso(const Program& p, const InputDomain& dom,
                               const ProverConfig& cfg = {});

// Termination of a sequential program: TR with certificate, NT with lasso, else UN.
Verdict prove(const Program& p, const InputDomain& dom, const ProverConfig& cfg = {});

// Termination of one proc of a concurrent program under havoc abstraction of
// the shared store. TR means the proc terminates regardless of interference.
Verdict proveProcHavoc(const Program& p, const std::string& procName,
                       const InputDomain& dom, const ProverConfig& cfg = {});

// Re-runs the FM checker on every stored implication.
bool recheckCertificate(const RankingCertificate& cert);

// Replays a lasso through the interpreter; on success the stem reaches the
// recorded state, the cycle returns to it, and no halting statement fires.
bool replayLasso(const Program& p, const Lasso& l, std::string* whyNot = nullptr);

// All While statements of a proc in source order (innermost loops last).
std::vector<const Stmt*> loopsOf(const Proc& proc);

// Grid enumeration helper shared with the oracle suites: at most cap points,
// deterministic order (inputParams-major).
std::vector<std::map<std::string, Int>> inputGrid(const Program& p, const InputDomain& dom,
                                                  std::size_t cap);

}  // namespace aprx
