#include "aprx/lang.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "aprx/errors.hpp"

namespace aprx {

const char* arithOpText(ArithOp op) {
  switch (op) {
    case ArithOp::Add: return "+";
    case ArithOp::Sub: return "-";
    case ArithOp::Mul: return "*";
    case ArithOp::Div: return "/";
  }
  return "?";
}

const char* relOpText(RelOp op) {
  switch (op) {
    case RelOp::Lt: return "<";
    case RelOp::Le: return "<=";
    case RelOp::Gt: return ">";
    case RelOp::Ge: return ">=";
    case RelOp::Eq: return "==";
    case RelOp::Ne: return "!=";
  }
  return "?";
}

// ---- clone ----------------------------------------------------------------

std::unique_ptr<Expr> Expr::clone() const {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  e->value = value;
  e->name = name;
  e->ref = ref;
  e->op = op;
  if (lhs) e->lhs = lhs->clone();
  if (rhs) e->rhs = rhs->clone();
  return e;
}

std::unique_ptr<BExpr> BExpr::clone() const {
  auto b2 = std::make_unique<BExpr>();
  b2->kind = kind;
  b2->rel = rel;
  if (lhs) b2->lhs = lhs->clone();
  if (rhs) b2->rhs = rhs->clone();
  if (a) b2->a = a->clone();
  if (b) b2->b = b->clone();
  return b2;
}

static Block cloneBlock(const Block& b) {
  Block out;
  out.reserve(b.size());
  for (const auto& s : b) out.push_back(s->clone());
  return out;
}

StmtPtr Stmt::clone() const {
  auto s = std::make_unique<Stmt>();
  s->kind = kind;
  s->id = id;
  s->line = line;
  s->col = col;
  s->var = var;
  s->ref = ref;
  if (expr) s->expr = expr->clone();
  if (cond) s->cond = cond->clone();
  s->thenBlock = cloneBlock(thenBlock);
  s->elseBlock = cloneBlock(elseBlock);
  s->body = cloneBlock(body);
  s->mutexName = mutexName;
  s->mutexIdx = mutexIdx;
  return s;
}

Proc Proc::clone() const {
  Proc p;
  p.name = name;
  p.params = params;
  p.body = cloneBlock(body);
  p.localSlots = localSlots;
  return p;
}

Program Program::clone() const {
  Program p;
  p.kind = kind;
  p.sharedDecls = sharedDecls;
  p.mutexes = mutexes;
  p.inputParams = inputParams;
  p.sharedSlots = sharedSlots;
  p.procs.reserve(procs.size());
  for (const auto& pr : procs) p.procs.push_back(pr.clone());
  return p;
}

int Program::procIndex(const std::string& name) const {
  for (std::size_t i = 0; i < procs.size(); ++i)
    if (procs[i].name == name) return static_cast<int>(i);
  return -1;
}

static void forEachStmt(const Block& b, const std::function<void(const Stmt&)>& f) {
  for (const auto& s : b) {
    f(*s);
    forEachStmt(s->thenBlock, f);
    forEachStmt(s->elseBlock, f);
    forEachStmt(s->body, f);
  }
}

const Stmt* Program::findStmt(StmtId id) const {
  const Stmt* found = nullptr;
  for (const auto& pr : procs)
    forEachStmt(pr.body, [&](const Stmt& s) {
      if (s.id == id) found = &s;
    });
  return found;
}

int Program::procOfStmt(StmtId id) const {
  for (std::size_t i = 0; i < procs.size(); ++i) {
    bool found = false;
    forEachStmt(procs[i].body, [&](const Stmt& s) {
      if (s.id == id) found = true;
    });
    if (found) return static_cast<int>(i);
  }
  return -1;
}

StmtId Program::maxStmtId() const {
  StmtId m = 0;
  for (const auto& pr : procs)
    forEachStmt(pr.body, [&](const Stmt& s) { m = std::max(m, s.id); });
  return m;
}

// ---- lexer ----------------------------------------------------------------

namespace {

enum class Tok {
  Ident, Number,
  KwShared, KwMutex, KwProc, KwIf, KwElse, KwWhile, KwLock, KwUnlock,
  KwOutput, KwSkip, KwHalt,
  LBrace, RBrace, LParen, RParen, Semi, Comma,
  Assign,  // :=
  Eq,      // =
  Plus, Minus, Star, Slash,
  Lt, Le, Gt, Ge, EqEq, Ne,
  AndAnd, OrOr, Bang,
  End
};

struct Token {
  Tok tok;
  std::string text;
  int line, col;
};

const char* tokName(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "integer";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Semi: return "';'";
    case Tok::Comma: return "','";
    case Tok::Assign: return "':='";
    case Tok::Eq: return "'='";
    case Tok::End: return "end of input";
    default: return "token";
  }
}

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto push = [&](Tok t, std::string text, int l, int c) {
    out.push_back(Token{t, std::move(text), l, c});
  };
  static const std::unordered_map<std::string, Tok> keywords = {
      {"shared", Tok::KwShared}, {"mutex", Tok::KwMutex}, {"proc", Tok::KwProc},
      {"if", Tok::KwIf},         {"else", Tok::KwElse},   {"while", Tok::KwWhile},
      {"lock", Tok::KwLock},     {"unlock", Tok::KwUnlock}, {"output", Tok::KwOutput},
      {"skip", Tok::KwSkip},     {"halt", Tok::KwHalt},
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') { ++i; ++line; col = 1; continue; }
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; ++col; continue; }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    int l = line, co = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      std::string word = src.substr(i, j - i);
      auto it = keywords.find(word);
      push(it == keywords.end() ? Tok::Ident : it->second, word, l, co);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      push(Tok::Number, src.substr(i, j - i), l, co);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    auto two = [&](char a, char b) {
      return c == a && i + 1 < src.size() && src[i + 1] == b;
    };
    if (two(':', '=')) { push(Tok::Assign, ":=", l, co); i += 2; col += 2; continue; }
    if (two('=', '=')) { push(Tok::EqEq, "==", l, co); i += 2; col += 2; continue; }
    if (two('!', '=')) { push(Tok::Ne, "!=", l, co); i += 2; col += 2; continue; }
    if (two('<', '=')) { push(Tok::Le, "<=", l, co); i += 2; col += 2; continue; }
    if (two('>', '=')) { push(Tok::Ge, ">=", l, co); i += 2; col += 2; continue; }
    if (two('&', '&')) { push(Tok::AndAnd, "&&", l, co); i += 2; col += 2; continue; }
    if (two('|', '|')) { push(Tok::OrOr, "||", l, co); i += 2; col += 2; continue; }
    switch (c) {
      case '{': push(Tok::LBrace, "{", l, co); break;
      case '}': push(Tok::RBrace, "}", l, co); break;
      case '(': push(Tok::LParen, "(", l, co); break;
      case ')': push(Tok::RParen, ")", l, co); break;
      case ';': push(Tok::Semi, ";", l, co); break;
      case ',': push(Tok::Comma, ",", l, co); break;
      case '=': push(Tok::Eq, "=", l, co); break;
      case '+': push(Tok::Plus, "+", l, co); break;
      case '-': push(Tok::Minus, "-", l, co); break;
      case '*': push(Tok::Star, "*", l, co); break;
      case '/': push(Tok::Slash, "/", l, co); break;
      case '<': push(Tok::Lt, "<", l, co); break;
      case '>': push(Tok::Gt, ">", l, co); break;
      case '!': push(Tok::Bang, "!", l, co); break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", l, co);
    }
    ++i; ++col;
  }
  out.push_back(Token{Tok::End, "", line, col});
  return out;
}

// ---- parser ---------------------------------------------------------------

class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(lex(src)) {}

  Program parseProgram() {
    Program p;
    while (at(Tok::KwShared) || at(Tok::KwMutex)) {
      if (at(Tok::KwShared)) {
        advance();
        std::string name = expect(Tok::Ident).text;
        expect(Tok::Eq);
        bool neg = false;
        if (at(Tok::Minus)) { advance(); neg = true; }
        Int v(expect(Tok::Number).text);
        if (neg) v = -v;
        expect(Tok::Semi);
        p.sharedDecls.push_back(SharedDecl{name, v});
      } else {
        advance();
        std::string name = expect(Tok::Ident).text;
        expect(Tok::Semi);
        p.mutexes.push_back(name);
      }
    }
    while (at(Tok::KwProc)) p.procs.push_back(parseProc());
    if (p.procs.empty()) {
      const Token& t = cur();
      throw ParseError("expected 'proc', got " + describe(t), t.line, t.col);
    }
    expect(Tok::End);
    return p;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  bool at(Tok t) const { return cur().tok == t; }
  void advance() { if (cur().tok != Tok::End) ++pos_; }

  static std::string describe(const Token& t) {
    return t.text.empty() ? tokName(t.tok) : "'" + t.text + "'";
  }

  const Token& expect(Tok t) {
    if (!at(t)) {
      const Token& c = cur();
      throw ParseError(std::string("expected ") + tokName(t) + ", got " + describe(c),
                       c.line, c.col);
    }
    const Token& r = cur();
    advance();
    return r;
  }

  Proc parseProc() {
    expect(Tok::KwProc);
    Proc proc;
    proc.name = expect(Tok::Ident).text;
    expect(Tok::LParen);
    if (at(Tok::Ident)) {
      proc.params.push_back(expect(Tok::Ident).text);
      while (at(Tok::Comma)) {
        advance();
        proc.params.push_back(expect(Tok::Ident).text);
      }
    }
    expect(Tok::RParen);
    proc.body = parseBlock();
    return proc;
  }

  Block parseBlock() {
    expect(Tok::LBrace);
    Block b;
    while (!at(Tok::RBrace)) b.push_back(parseStmt());
    expect(Tok::RBrace);
    return b;
  }

  StmtPtr parseStmt() {
    auto s = std::make_unique<Stmt>();
    const Token& t = cur();
    s->id = nextId_++;
    s->line = t.line;
    s->col = t.col;
    switch (t.tok) {
      case Tok::Ident: {
        s->kind = Stmt::Kind::Assign;
        s->var = t.text;
        advance();
        expect(Tok::Assign);
        s->expr = parseExpr();
        expect(Tok::Semi);
        return s;
      }
      case Tok::KwIf: {
        s->kind = Stmt::Kind::If;
        advance();
        expect(Tok::LParen);
        s->cond = parseBExpr();
        expect(Tok::RParen);
        s->thenBlock = parseBlock();
        if (at(Tok::KwElse)) {
          advance();
          s->elseBlock = parseBlock();
        }
        return s;
      }
      case Tok::KwWhile: {
        s->kind = Stmt::Kind::While;
        advance();
        expect(Tok::LParen);
        s->cond = parseBExpr();
        expect(Tok::RParen);
        s->body = parseBlock();
        return s;
      }
      case Tok::KwLock:
      case Tok::KwUnlock: {
        s->kind = t.tok == Tok::KwLock ? Stmt::Kind::Lock : Stmt::Kind::Unlock;
        advance();
        expect(Tok::LParen);
        s->mutexName = expect(Tok::Ident).text;
        expect(Tok::RParen);
        expect(Tok::Semi);
        return s;
      }
      case Tok::KwOutput: {
        s->kind = Stmt::Kind::Output;
        advance();
        s->expr = parseExpr();
        expect(Tok::Semi);
        return s;
      }
      case Tok::KwSkip: {
        s->kind = Stmt::Kind::Skip;
        advance();
        expect(Tok::Semi);
        return s;
      }
      case Tok::KwHalt: {
        s->kind = Stmt::Kind::Halt;
        advance();
        expect(Tok::Semi);
        return s;
      }
      default:
        throw ParseError("expected statement, got " + describe(t), t.line, t.col);
    }
  }

  std::unique_ptr<Expr> parseExpr() {
    auto e = parseTerm();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      ArithOp op = at(Tok::Plus) ? ArithOp::Add : ArithOp::Sub;
      advance();
      auto r = parseTerm();
      auto bin = std::make_unique<Expr>();
      bin->kind = Expr::Kind::Binary;
      bin->op = op;
      bin->lhs = std::move(e);
      bin->rhs = std::move(r);
      e = std::move(bin);
    }
    return e;
  }

  std::unique_ptr<Expr> parseTerm() {
    auto e = parseFactor();
    while (at(Tok::Star) || at(Tok::Slash)) {
      ArithOp op = at(Tok::Star) ? ArithOp::Mul : ArithOp::Div;
      advance();
      auto r = parseFactor();
      auto bin = std::make_unique<Expr>();
      bin->kind = Expr::Kind::Binary;
      bin->op = op;
      bin->lhs = std::move(e);
      bin->rhs = std::move(r);
      e = std::move(bin);
    }
    return e;
  }

  std::unique_ptr<Expr> parseFactor() {
    const Token& t = cur();
    if (at(Tok::Number)) {
      auto e = std::make_unique<Expr>();
      e->kind = Expr::Kind::Const;
      e->value = Int(t.text);
      advance();
      return e;
    }
    if (at(Tok::Ident)) {
      auto e = std::make_unique<Expr>();
      e->kind = Expr::Kind::Var;
      e->name = t.text;
      advance();
      return e;
    }
    if (at(Tok::Minus)) {
      advance();
      auto e = std::make_unique<Expr>();
      e->kind = Expr::Kind::Neg;
      e->lhs = parseFactor();
      return e;
    }
    if (at(Tok::LParen)) {
      advance();
      auto e = parseExpr();
      expect(Tok::RParen);
      return e;
    }
    throw ParseError("expected expression, got " + describe(t), t.line, t.col);
  }

  // bexpr := bterm ('||' bterm)* ; bterm := bfactor ('&&' bfactor)*
  // bfactor := '!' bfactor | comparison | '(' bexpr ')'
  // A '(' is ambiguous between a boolean group and an arithmetic operand;
  // resolved by backtracking over the pre-lexed token stream.
  std::unique_ptr<BExpr> parseBExpr() {
    auto e = parseBTerm();
    while (at(Tok::OrOr)) {
      advance();
      auto r = parseBTerm();
      auto or_ = std::make_unique<BExpr>();
      or_->kind = BExpr::Kind::Or;
      or_->a = std::move(e);
      or_->b = std::move(r);
      e = std::move(or_);
    }
    return e;
  }

  std::unique_ptr<BExpr> parseBTerm() {
    auto e = parseBFactor();
    while (at(Tok::AndAnd)) {
      advance();
      auto r = parseBFactor();
      auto and_ = std::make_unique<BExpr>();
      and_->kind = BExpr::Kind::And;
      and_->a = std::move(e);
      and_->b = std::move(r);
      e = std::move(and_);
    }
    return e;
  }

  std::unique_ptr<BExpr> parseBFactor() {
    if (at(Tok::Bang)) {
      advance();
      auto n = std::make_unique<BExpr>();
      n->kind = BExpr::Kind::Not;
      n->a = parseBFactor();
      return n;
    }
    if (at(Tok::LParen)) {
      std::size_t save = pos_;
      advance();
      try {
        auto inner = parseBExpr();
        expect(Tok::RParen);
        // "(x + 1) < y" parses its paren as arithmetic, not grouping.
        if (at(Tok::Lt) || at(Tok::Le) || at(Tok::Gt) || at(Tok::Ge) ||
            at(Tok::EqEq) || at(Tok::Ne)) {
          pos_ = save;
        } else {
          return inner;
        }
      } catch (const ParseError&) {
        pos_ = save;
      }
    }
    return parseComparison();
  }

  std::unique_ptr<BExpr> parseComparison() {
    auto l = parseExpr();
    const Token& t = cur();
    RelOp op;
    switch (t.tok) {
      case Tok::Lt: op = RelOp::Lt; break;
      case Tok::Le: op = RelOp::Le; break;
      case Tok::Gt: op = RelOp::Gt; break;
      case Tok::Ge: op = RelOp::Ge; break;
      case Tok::EqEq: op = RelOp::Eq; break;
      case Tok::Ne: op = RelOp::Ne; break;
      default:
        throw ParseError("expected comparison operator, got " + describe(t), t.line, t.col);
    }
    advance();
    auto r = parseExpr();
    auto c = std::make_unique<BExpr>();
    c->kind = BExpr::Kind::Cmp;
    c->rel = op;
    c->lhs = std::move(l);
    c->rhs = std::move(r);
    return c;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  StmtId nextId_ = 1;
};

// ---- static checks + resolution ---------------------------------------------

class Resolver {
 public:
  explicit Resolver(Program& p) : p_(p) {}

  void run() {
    checkDecls();
    p_.kind = (p_.procs.size() == 1 && p_.procs[0].name == "main" &&
               p_.sharedDecls.empty() && p_.mutexes.empty())
                  ? ProgramKind::Sequential
                  : ProgramKind::Concurrent;

    for (const auto& d : p_.sharedDecls) p_.sharedSlots.push_back(d.name);
    if (p_.kind == ProgramKind::Sequential) {
      p_.inputParams = p_.procs[0].params;
    } else {
      for (const auto& pr : p_.procs)
        for (const auto& param : pr.params) {
          p_.inputParams.push_back(param);
          p_.sharedSlots.push_back(param);
        }
    }
    for (std::size_t i = 0; i < p_.procs.size(); ++i) resolveProc(static_cast<int>(i));
  }

 private:
  void checkDecls() {
    std::unordered_set<std::string> names;
    for (const auto& d : p_.sharedDecls)
      if (!names.insert(d.name).second)
        throw SemanticError("duplicate shared variable '" + d.name + "'");
    for (const auto& m : p_.mutexes)
      if (!names.insert(m).second)
        throw SemanticError("duplicate declaration '" + m + "'");
    std::unordered_set<std::string> procNames;
    for (const auto& pr : p_.procs) {
      if (!procNames.insert(pr.name).second)
        throw SemanticError("duplicate proc '" + pr.name + "'");
      for (const auto& param : pr.params)
        if (!names.insert(param).second)
          throw SemanticError("duplicate parameter '" + param + "'");
    }
    bool plainSequential = p_.procs.size() == 1 && p_.sharedDecls.empty() && p_.mutexes.empty();
    if (plainSequential && p_.procs[0].name != "main")
      throw SemanticError("sequential program must define proc 'main'");
  }

  int sharedSlot(const std::string& name) const {
    for (std::size_t i = 0; i < p_.sharedSlots.size(); ++i)
      if (p_.sharedSlots[i] == name) return static_cast<int>(i);
    return -1;
  }

  void resolveProc(int procIdx) {
    Proc& proc = p_.procs[procIdx];
    std::unordered_map<std::string, int> locals;
    proc.localSlots.clear();
    if (p_.kind == ProgramKind::Sequential) {
      for (const auto& param : proc.params) {
        locals.emplace(param, static_cast<int>(proc.localSlots.size()));
        proc.localSlots.push_back(param);
      }
    }
    resolveBlock(proc, locals, proc.body);
  }

  void resolveBlock(Proc& proc, std::unordered_map<std::string, int>& locals, Block& b) {
    for (auto& s : b) resolveStmt(proc, locals, *s);
  }

  void resolveStmt(Proc& proc, std::unordered_map<std::string, int>& locals, Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::Assign: {
        resolveExpr(proc, locals, *s.expr, s);
        int shared = sharedSlot(s.var);
        if (shared >= 0) {
          s.ref = VarRef{VarScope::Shared, shared};
        } else {
          auto it = locals.find(s.var);
          if (it == locals.end()) {
            it = locals.emplace(s.var, static_cast<int>(proc.localSlots.size())).first;
            proc.localSlots.push_back(s.var);
          }
          s.ref = VarRef{VarScope::Local, it->second};
        }
        break;
      }
      case Stmt::Kind::If:
        resolveBExpr(proc, locals, *s.cond, s);
        resolveBlock(proc, locals, s.thenBlock);
        resolveBlock(proc, locals, s.elseBlock);
        break;
      case Stmt::Kind::While:
        resolveBExpr(proc, locals, *s.cond, s);
        resolveBlock(proc, locals, s.body);
        break;
      case Stmt::Kind::Lock:
      case Stmt::Kind::Unlock: {
        if (p_.kind == ProgramKind::Sequential)
          throw SemanticError("lock statement in sequential program (line " +
                              std::to_string(s.line) + ")");
        auto it = std::find(p_.mutexes.begin(), p_.mutexes.end(), s.mutexName);
        if (it == p_.mutexes.end())
          throw SemanticError("undeclared mutex '" + s.mutexName + "' (line " +
                              std::to_string(s.line) + ")");
        s.mutexIdx = static_cast<int>(it - p_.mutexes.begin());
        break;
      }
      case Stmt::Kind::Output:
        resolveExpr(proc, locals, *s.expr, s);
        break;
      case Stmt::Kind::Skip:
      case Stmt::Kind::Halt:
        break;
    }
  }

  void resolveExpr(Proc& proc, std::unordered_map<std::string, int>& locals, Expr& e,
                   const Stmt& site) {
    switch (e.kind) {
      case Expr::Kind::Const:
        break;
      case Expr::Kind::Var: {
        int shared = sharedSlot(e.name);
        if (shared >= 0) {
          e.ref = VarRef{VarScope::Shared, shared};
          break;
        }
        auto it = locals.find(e.name);
        if (it == locals.end())
          throw SemanticError("undeclared variable '" + e.name + "' (line " +
                              std::to_string(site.line) + ")");
        e.ref = VarRef{VarScope::Local, it->second};
        break;
      }
      case Expr::Kind::Binary:
        resolveExpr(proc, locals, *e.lhs, site);
        resolveExpr(proc, locals, *e.rhs, site);
        break;
      case Expr::Kind::Neg:
        resolveExpr(proc, locals, *e.lhs, site);
        break;
    }
  }

  void resolveBExpr(Proc& proc, std::unordered_map<std::string, int>& locals, BExpr& b,
                    const Stmt& site) {
    switch (b.kind) {
      case BExpr::Kind::Cmp:
        resolveExpr(proc, locals, *b.lhs, site);
        resolveExpr(proc, locals, *b.rhs, site);
        break;
      case BExpr::Kind::And:
      case BExpr::Kind::Or:
        resolveBExpr(proc, locals, *b.a, site);
        resolveBExpr(proc, locals, *b.b, site);
        break;
      case BExpr::Kind::Not:
        resolveBExpr(proc, locals, *b.a, site);
        break;
    }
  }

  Program& p_;
};

}  // namespace

Program parse(const std::string& source) {
  Parser parser(source);
  Program p = parser.parseProgram();
  Resolver(p).run();
  return p;
}

// ---- pretty printer ---------------------------------------------------------

namespace {

void printExpr(std::ostream& os, const Expr& e, int parentPrec);

int exprPrec(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Const:
    case Expr::Kind::Var: return 3;
    case Expr::Kind::Neg: return 2;
    case Expr::Kind::Binary:
      return (e.op == ArithOp::Mul || e.op == ArithOp::Div) ? 1 : 0;
  }
  return 3;
}

void printExpr(std::ostream& os, const Expr& e, int parentPrec) {
  int prec = exprPrec(e);
  bool paren = prec < parentPrec;
  if (paren) os << "(";
  switch (e.kind) {
    case Expr::Kind::Const: os << e.value; break;
    case Expr::Kind::Var: os << e.name; break;
    case Expr::Kind::Neg:
      os << "-";
      printExpr(os, *e.lhs, 2);
      break;
    case Expr::Kind::Binary:
      printExpr(os, *e.lhs, prec);
      os << " " << arithOpText(e.op) << " ";
      // left-assoc: right operand needs one level more
      printExpr(os, *e.rhs, prec + 1);
      break;
  }
  if (paren) os << ")";
}

void printBExpr(std::ostream& os, const BExpr& b, int parentPrec) {
  // prec: Or 0, And 1, Not/Cmp 2
  switch (b.kind) {
    case BExpr::Kind::Cmp:
      printExpr(os, *b.lhs, 0);
      os << " " << relOpText(b.rel) << " ";
      printExpr(os, *b.rhs, 0);
      break;
    case BExpr::Kind::And: {
      bool paren = parentPrec > 1;
      if (paren) os << "(";
      printBExpr(os, *b.a, 1);
      os << " && ";
      printBExpr(os, *b.b, 2);
      if (paren) os << ")";
      break;
    }
    case BExpr::Kind::Or: {
      bool paren = parentPrec > 0;
      if (paren) os << "(";
      printBExpr(os, *b.a, 0);
      os << " || ";
      printBExpr(os, *b.b, 1);
      if (paren) os << ")";
      break;
    }
    case BExpr::Kind::Not:
      os << "!";
      if (b.a->kind == BExpr::Kind::Cmp) {
        os << "(";
        printBExpr(os, *b.a, 0);
        os << ")";
      } else {
        printBExpr(os, *b.a, 3);
      }
      break;
  }
}

void printBlock(std::ostream& os, const Block& b, int indent);

void printStmt(std::ostream& os, const Stmt& s, int indent) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  os << pad;
  switch (s.kind) {
    case Stmt::Kind::Assign:
      os << s.var << " := ";
      printExpr(os, *s.expr, 0);
      os << ";\n";
      break;
    case Stmt::Kind::If:
      os << "if (";
      printBExpr(os, *s.cond, 0);
      os << ") {\n";
      printBlock(os, s.thenBlock, indent + 1);
      os << pad << "}";
      if (!s.elseBlock.empty()) {
        os << " else {\n";
        printBlock(os, s.elseBlock, indent + 1);
        os << pad << "}";
      }
      os << "\n";
      break;
    case Stmt::Kind::While:
      os << "while (";
      printBExpr(os, *s.cond, 0);
      os << ") {\n";
      printBlock(os, s.body, indent + 1);
      os << pad << "}\n";
      break;
    case Stmt::Kind::Lock:
      os << "lock(" << s.mutexName << ");\n";
      break;
    case Stmt::Kind::Unlock:
      os << "unlock(" << s.mutexName << ");\n";
      break;
    case Stmt::Kind::Output:
      os << "output ";
      printExpr(os, *s.expr, 0);
      os << ";\n";
      break;
    case Stmt::Kind::Skip:
      os << "skip;\n";
      break;
    case Stmt::Kind::Halt:
      os << "halt;\n";
      break;
  }
}

void printBlock(std::ostream& os, const Block& b, int indent) {
  for (const auto& s : b) printStmt(os, *s, indent);
}

}  // namespace

std::string prettyPrint(const Program& p) {
  std::ostringstream os;
  for (const auto& d : p.sharedDecls) os << "shared " << d.name << " = " << d.init << ";\n";
  for (const auto& m : p.mutexes) os << "mutex " << m << ";\n";
  if (!p.sharedDecls.empty() || !p.mutexes.empty()) os << "\n";
  bool first = true;
  for (const auto& pr : p.procs) {
    if (!first) os << "\n";
    first = false;
    os << "proc " << pr.name << "(";
    for (std::size_t i = 0; i < pr.params.size(); ++i) {
      if (i) os << ", ";
      os << pr.params[i];
    }
    os << ") {\n";
    printBlock(os, pr.body, 1);
    os << "}\n";
  }
  return os.str();
}

// ---- halting set ------------------------------------------------------------

HaltingSet haltingSet(const Program& p) {
  HaltingSet h;
  for (std::size_t i = 0; i < p.procs.size(); ++i) {
    std::set<StmtId>& ids = h.perProc[p.procs[i].name];
    forEachStmt(p.procs[i].body, [&](const Stmt& s) {
      if (s.kind == Stmt::Kind::Halt) ids.insert(s.id);
    });
    ids.insert(endOfBodyId(static_cast<int>(i)));
  }
  return h;
}

// ---- CFG --------------------------------------------------------------------

namespace {

class CfgBuilder {
 public:
  CfgBuilder(const Proc& proc, int procIdx) : proc_(proc), procIdx_(procIdx) {}

  ProcCfg build() {
    // Pre-create one node per statement in source order, Exit node last.
    forEachStmt(proc_.body, [&](const Stmt& s) {
      int idx = static_cast<int>(cfg_.nodes.size());
      nodeOf_[s.id] = idx;
      CfgNode n;
      n.kind = (s.kind == Stmt::Kind::If || s.kind == Stmt::Kind::While)
                   ? NodeKind::Branch
                   : NodeKind::Action;
      n.stmt = s.id;
      n.s = &s;
      cfg_.nodes.push_back(n);
      if (s.kind == Stmt::Kind::While) cfg_.loopHeaders.push_back(idx);
    });
    CfgNode exitNode;
    exitNode.kind = NodeKind::Exit;
    exitNode.stmt = endOfBodyId(procIdx_);
    cfg_.exit = static_cast<int>(cfg_.nodes.size());
    cfg_.nodes.push_back(exitNode);
    cfg_.entry = wireBlock(proc_.body, cfg_.exit);
    return std::move(cfg_);
  }

 private:
  // Wires the statements of b so the block falls through to `follow`;
  // returns the block's entry node.
  int wireBlock(const Block& b, int follow) {
    int next = follow;
    for (auto it = b.rbegin(); it != b.rend(); ++it) next = wireStmt(**it, next);
    return next;
  }

  int wireStmt(const Stmt& s, int follow) {
    int idx = nodeOf_.at(s.id);
    CfgNode& n = cfg_.nodes[idx];
    switch (s.kind) {
      case Stmt::Kind::If:
        n.onTrue = wireBlock(s.thenBlock, follow);
        n.onFalse = wireBlock(s.elseBlock, follow);
        break;
      case Stmt::Kind::While:
        n.onTrue = wireBlock(s.body, idx);  // back-edge
        n.onFalse = follow;
        break;
      case Stmt::Kind::Halt:
        n.next = cfg_.exit;
        break;
      default:
        n.next = follow;
        break;
    }
    return idx;
  }

  const Proc& proc_;
  int procIdx_;
  ProcCfg cfg_;
  std::unordered_map<StmtId, int> nodeOf_;
};

}  // namespace

std::size_t ProcCfg::edgeCount() const {
  std::size_t n = 0;
  for (const auto& node : nodes) {
    if (node.kind == NodeKind::Action) n += 1;
    else if (node.kind == NodeKind::Branch) n += 2;
  }
  return n;
}

Cfg buildCfg(const Program& p) {
  Cfg c;
  for (std::size_t i = 0; i < p.procs.size(); ++i)
    c.perProc.push_back(CfgBuilder(p.procs[i], static_cast<int>(i)).build());
  return c;
}

// ---- structural equality ------------------------------------------------------

namespace {

bool exprEqual(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Const: return a.value == b.value;
    case Expr::Kind::Var: return a.name == b.name;
    case Expr::Kind::Neg: return exprEqual(*a.lhs, *b.lhs);
    case Expr::Kind::Binary:
      return a.op == b.op && exprEqual(*a.lhs, *b.lhs) && exprEqual(*a.rhs, *b.rhs);
  }
  return false;
}

bool bexprEqual(const BExpr& a, const BExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case BExpr::Kind::Cmp:
      return a.rel == b.rel && exprEqual(*a.lhs, *b.lhs) && exprEqual(*a.rhs, *b.rhs);
    case BExpr::Kind::And:
    case BExpr::Kind::Or:
      return bexprEqual(*a.a, *b.a) && bexprEqual(*a.b, *b.b);
    case BExpr::Kind::Not:
      return bexprEqual(*a.a, *b.a);
  }
  return false;
}

bool blockEqual(const Block& a, const Block& b);

bool stmtEqual(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Stmt::Kind::Assign:
      return a.var == b.var && exprEqual(*a.expr, *b.expr);
    case Stmt::Kind::If:
      return bexprEqual(*a.cond, *b.cond) && blockEqual(a.thenBlock, b.thenBlock) &&
             blockEqual(a.elseBlock, b.elseBlock);
    case Stmt::Kind::While:
      return bexprEqual(*a.cond, *b.cond) && blockEqual(a.body, b.body);
    case Stmt::Kind::Lock:
    case Stmt::Kind::Unlock:
      return a.mutexName == b.mutexName;
    case Stmt::Kind::Output:
      return exprEqual(*a.expr, *b.expr);
    case Stmt::Kind::Skip:
    case Stmt::Kind::Halt:
      return true;
  }
  return false;
}

bool blockEqual(const Block& a, const Block& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!stmtEqual(*a[i], *b[i])) return false;
  return true;
}

}  // namespace

bool astEqual(const Program& a, const Program& b) {
  if (a.kind != b.kind || a.mutexes != b.mutexes) return false;
  if (a.sharedDecls.size() != b.sharedDecls.size()) return false;
  for (std::size_t i = 0; i < a.sharedDecls.size(); ++i)
    if (a.sharedDecls[i].name != b.sharedDecls[i].name ||
        a.sharedDecls[i].init != b.sharedDecls[i].init)
      return false;
  if (a.procs.size() != b.procs.size()) return false;
  for (std::size_t i = 0; i < a.procs.size(); ++i) {
    if (a.procs[i].name != b.procs[i].name || a.procs[i].params != b.procs[i].params ||
        !blockEqual(a.procs[i].body, b.procs[i].body))
      return false;
  }
  return true;
}

std::vector<std::string> visibleVars(const Program& p, int procIdx) {
  std::vector<std::string> vars = p.sharedSlots;
  for (const auto& name : p.procs[procIdx].localSlots) vars.push_back(name);
  return vars;
}

}  // namespace aprx
