#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace aprx {

using Int = boost::multiprecision::cpp_int;
using StmtId = std::uint32_t;

// Pseudo statement id of the implicit end-of-body location of proc i.
constexpr StmtId kEndOfBodyBase = 1000000;
inline StmtId endOfBodyId(int procIndex) { return kEndOfBodyBase + static_cast<StmtId>(procIndex); }

enum class ArithOp { Add, Sub, Mul, Div };
enum class RelOp { Lt, Le, Gt, Ge, Eq, Ne };

const char* arithOpText(ArithOp op);
const char* relOpText(RelOp op);

// Where a resolved variable lives. Concurrent input params live in the shared store.
enum class VarScope { Local, Shared };
struct VarRef {
  VarScope scope = VarScope::Local;
  int slot = -1;
};

struct Expr {
  enum class Kind { Const, Var, Binary, Neg };
  Kind kind = Kind::Const;
  Int value;         // Const
  std::string name;  // Var
  VarRef ref;        // Var, filled by resolution
  ArithOp op = ArithOp::Add;
  std::unique_ptr<Expr> lhs, rhs;  // Binary both, Neg lhs only

  std::unique_ptr<Expr> clone() const;
};

struct BExpr {
  enum class Kind { Cmp, And, Or, Not };
  Kind kind = Kind::Cmp;
  RelOp rel = RelOp::Lt;
  std::unique_ptr<Expr> lhs, rhs;  // Cmp
  std::unique_ptr<BExpr> a, b;     // And/Or both, Not a only

  std::unique_ptr<BExpr> clone() const;
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;
using Block = std::vector<StmtPtr>;

struct Stmt {
  enum class Kind { Assign, If, While, Lock, Unlock, Output, Skip, Halt };
  Kind kind = Kind::Skip;
  StmtId id = 0;
  int line = 0, col = 0;

  std::string var;  // Assign target
  VarRef ref;       // Assign target, resolved
  std::unique_ptr<Expr> expr;   // Assign rhs / Output operand
  std::unique_ptr<BExpr> cond;  // If / While
  Block thenBlock, elseBlock;   // If
  Block body;                   // While
  std::string mutexName;        // Lock / Unlock
  int mutexIdx = -1;

  StmtPtr clone() const;
};

struct SharedDecl {
  std::string name;
  Int init;
};

struct Proc {
  std::string name;
  std::vector<std::string> params;
  Block body;
  // Slot layout of the proc-local store: sequential params first, then locals
  // in first-assignment order. Concurrent params are not listed here.
  std::vector<std::string> localSlots;

  Proc() = default;
  Proc(Proc&&) = default;
  Proc& operator=(Proc&&) = default;
  Proc clone() const;
};

enum class ProgramKind { Sequential, Concurrent };

// A resolved, statically checked MiniImp program. Immutable after construction.
struct Program {
  ProgramKind kind = ProgramKind::Sequential;
  std::vector<SharedDecl> sharedDecls;      // integer shared variables (decl order)
  std::vector<std::string> mutexes;         // declared mutex names (decl order)
  std::vector<Proc> procs;
  std::vector<std::string> inputParams;     // sequential: main's params; concurrent: all proc params
  // Slot layout of the shared store: sharedDecls first, then concurrent params.
  std::vector<std::string> sharedSlots;

  Program() = default;
  Program(Program&&) = default;
  Program& operator=(Program&&) = default;
  Program clone() const;

  int procIndex(const std::string& name) const;
  const Stmt* findStmt(StmtId id) const;             // nullptr if absent
  int procOfStmt(StmtId id) const;                   // -1 if absent
  StmtId maxStmtId() const;
};

// ---- operations -----------------------------------------------------------

// Parses MiniImp source; assigns StmtIds in source order starting at 1; runs
// static checks and variable resolution. Throws ParseError / SemanticError.
Program parse(const std::string& source);

// Canonical source text; parse(prettyPrint(p)) is AST-equal to p.
std::string prettyPrint(const Program& p);

struct HaltingSet {
  std::map<std::string, std::set<StmtId>> perProc;
};

// Every halt statement plus the implicit end-of-body location, per proc.
HaltingSet haltingSet(const Program& p);

// ---- control-flow graph ---------------------------------------------------

enum class NodeKind { Action, Branch, Exit };

struct CfgNode {
  NodeKind kind = NodeKind::Exit;
  StmtId stmt = 0;          // end-of-body pseudo id for Exit nodes
  const Stmt* s = nullptr;  // null for Exit
  int next = -1;            // Action successor
  int onTrue = -1, onFalse = -1;  // Branch successors
};

struct ProcCfg {
  std::vector<CfgNode> nodes;  // deterministic numbering: statement order, Exit last
  int entry = 0;
  int exit = 0;
  std::vector<int> loopHeaders;  // node indices of While branches

  std::size_t edgeCount() const;
};

struct Cfg {
  std::vector<ProcCfg> perProc;
};

Cfg buildCfg(const Program& p);

// Structural equality (ignores ids, lines); used for patch dedup and round-trip tests.
bool astEqual(const Program& a, const Program& b);

// Variables readable at statements of proc procIdx (params, shared, locals).
std::vector<std::string> visibleVars(const Program& p, int procIdx);

}  // namespace aprx
