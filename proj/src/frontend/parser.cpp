#include "esst/frontend/parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace esst::frontend {

using logic::Rational;
using logic::Rel;

ParseError::ParseError(SourcePos pos, const std::string& msg)
    : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + msg), pos_(pos) {}

std::string local_symbol(const std::string& thread, const std::string& name) { return thread + "." + name; }

std::vector<VarId> ThreadedProgram::global_vars() const {
  std::vector<VarId> out;
  for (const auto& g : globals) out.push_back(logic::program_var(g));
  return out;
}

bool ThreadedProgram::is_global(VarId v) const {
  const auto& name = logic::symbol_info(v).name;
  return std::find(globals.begin(), globals.end(), name) != globals.end();
}

int ThreadedProgram::owner_of(VarId v) const {
  for (std::size_t i = 0; i < threads.size(); ++i)
    if (std::find(threads[i].locals.begin(), threads[i].locals.end(), v) != threads[i].locals.end())
      return static_cast<int>(i);
  return -1;
}

int ThreadedProgram::thread_index(const std::string& name) const {
  for (std::size_t i = 0; i < threads.size(); ++i)
    if (threads[i].name == name) return static_cast<int>(i);
  return -1;
}

bool ThreadedProgram::has_event(const std::string& name) const {
  return std::find(events.begin(), events.end(), name) != events.end();
}

namespace {

enum class Tok { Ident, Int, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  static const char* two[] = {":=", "<=", ">=", "==", "!=", "&&", "||"};
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (src.substr(i, 2) == "/*") {
      const SourcePos start{line, col};
      advance(2);
      while (i < src.size() && src.substr(i, 2) != "*/") advance(1);
      if (i >= src.size()) throw ParseError(start, "unterminated comment");
      advance(2);
      continue;
    }
    const SourcePos pos{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), pos});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Int, std::string(src.substr(i, j - i)), pos});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const char* t : two) {
      if (src.substr(i, 2) == t) {
        out.push_back({Tok::Punct, t, pos});
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("+-*(){};,<>=!").find(c) != std::string_view::npos) {
      out.push_back({Tok::Punct, std::string(1, c), pos});
      advance(1);
      continue;
    }
    throw ParseError(pos, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

const std::set<std::string> kPrims{"await", "generate", "cooperate", "join"};
const std::set<std::string> kKeywords{"global", "event", "thread", "int", "local", "if", "else",
                                      "while", "assert", "true", "false"};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ThreadedProgram program() {
    std::vector<std::pair<std::string, SourcePos>> joins;
    while (peek().kind != Tok::End) {
      const Token& t = peek();
      if (is("global")) {
        global_decl();
      } else if (is("event")) {
        next();
        const Token name = ident("event name");
        check_fresh_name(name);
        prog_.events.push_back(name.text);
        expect(";");
      } else if (is("thread")) {
        thread_decl();
      } else if (t.kind == Tok::Ident && (t.text == "int" || t.text == "void" || t.text == "function" ||
                                          (peek(1).kind == Tok::Punct && peek(1).text == "("))) {
        throw ParseError(t.pos, "function definitions are not supported");
      } else {
        throw ParseError(t.pos, "expected 'global', 'event' or 'thread', found '" + t.text + "'");
      }
    }
    if (prog_.threads.empty() || prog_.threads.front().name != "main")
      throw ParseError(toks_.front().pos, "the first thread must be named 'main'");
    for (const auto& [name, pos] : pending_joins_)
      if (prog_.thread_index(name) < 0) throw ParseError(pos, "undeclared thread '" + name + "'");
    return std::move(prog_);
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  bool is(const char* text, std::size_t k = 0) const {
    const Token& t = peek(k);
    return t.kind != Tok::End && t.text == text && (t.kind == Tok::Punct || t.kind == Tok::Ident);
  }
  void expect(const char* text) {
    if (!is(text)) throw ParseError(peek().pos, std::string("expected '") + text + "', found '" + peek().text + "'");
    next();
  }
  Token ident(const char* what) {
    const Token& t = peek();
    if (t.kind != Tok::Ident || kKeywords.count(t.text))
      throw ParseError(t.pos, std::string("expected ") + what + ", found '" + t.text + "'");
    return next();
  }

  void check_fresh_name(const Token& t) {
    if (names_.count(t.text)) throw ParseError(t.pos, "duplicate name '" + t.text + "'");
    if (kPrims.count(t.text)) throw ParseError(t.pos, "'" + t.text + "' is reserved");
    names_.insert(t.text);
  }

  long integer(bool allow_sign) {
    bool neg = false;
    if (allow_sign && is("-")) {
      next();
      neg = true;
    }
    const Token& t = peek();
    if (t.kind != Tok::Int) throw ParseError(t.pos, "expected integer constant");
    next();
    const long v = std::stol(t.text);
    return neg ? -v : v;
  }

  void global_decl() {
    next();
    expect("int");
    const Token name = ident("variable name");
    check_fresh_name(name);
    prog_.globals.push_back(name.text);
    if (is("=")) {
      next();
      prog_.global_init[name.text] = integer(true);
    }
    expect(";");
  }

  void thread_decl() {
    next();
    const Token name = ident("thread name");
    if (prog_.thread_index(name.text) >= 0) throw ParseError(name.pos, "duplicate thread name '" + name.text + "'");
    if (std::find(prog_.globals.begin(), prog_.globals.end(), name.text) != prog_.globals.end() ||
        prog_.has_event(name.text))
      throw ParseError(name.pos, "duplicate name '" + name.text + "'");
    thread_names_.insert(name.text);
    Thread th;
    th.name = name.text;
    current_ = &th;
    local_names_.clear();
    expect("{");
    while (!is("}")) {
      if (peek().kind == Tok::End) throw ParseError(peek().pos, "unexpected end of input in thread body");
      th.body.push_back(statement());
    }
    expect("}");
    current_ = nullptr;
    prog_.threads.push_back(std::move(th));
  }

  std::vector<Stmt> block() {
    expect("{");
    std::vector<Stmt> out;
    while (!is("}")) {
      if (peek().kind == Tok::End) throw ParseError(peek().pos, "unexpected end of input in block");
      out.push_back(statement());
    }
    expect("}");
    return out;
  }

  VarId resolve(const Token& t) {
    if (local_names_.count(t.text)) return logic::program_var(local_symbol(current_->name, t.text));
    if (std::find(prog_.globals.begin(), prog_.globals.end(), t.text) != prog_.globals.end())
      return logic::program_var(t.text);
    throw ParseError(t.pos, "undeclared identifier '" + t.text + "'");
  }

  Stmt prim_call(std::optional<VarId> target) {
    const Token name = next();
    Stmt s;
    s.kind = Stmt::Kind::Prim;
    s.pos = name.pos;
    s.target = target;
    s.prim = name.text;
    expect("(");
    if (name.text == "cooperate") {
      if (!is(")")) throw ParseError(peek().pos, "cooperate takes no arguments");
    } else {
      const Token arg = peek();
      const bool single = arg.kind == Tok::Ident && !kKeywords.count(arg.text) && is(")", 1);
      if (!single) throw ParseError(arg.pos, "non-constant primitive argument");
      next();
      if (name.text == "join") {
        if (!thread_names_.count(arg.text)) pending_joins_.emplace_back(arg.text, arg.pos);
      } else if (!prog_.has_event(arg.text)) {
        if (local_names_.count(arg.text) ||
            std::find(prog_.globals.begin(), prog_.globals.end(), arg.text) != prog_.globals.end())
          throw ParseError(arg.pos, "non-constant primitive argument");
        throw ParseError(arg.pos, "undeclared event '" + arg.text + "'");
      }
      s.arg = arg.text;
    }
    expect(")");
    expect(";");
    return s;
  }

  Stmt statement() {
    const Token& t = peek();
    Stmt s;
    s.pos = t.pos;
    if (t.kind == Tok::Ident && kPrims.count(t.text)) return prim_call(std::nullopt);
    if (is("local")) {
      next();
      expect("int");
      const Token name = ident("variable name");
      if (local_names_.count(name.text)) throw ParseError(name.pos, "duplicate local '" + name.text + "'");
      if (names_.count(name.text) || thread_names_.count(name.text))
        throw ParseError(name.pos, "local '" + name.text + "' clashes with a global name");
      local_names_.insert(name.text);
      const VarId v = logic::program_var(local_symbol(current_->name, name.text));
      current_->locals.push_back(v);
      s.kind = Stmt::Kind::Local;
      s.target = v;
      s.value = LinearTerm(Rational(0));
      if (is("=")) {
        next();
        s.value = LinearTerm(Rational(integer(true)));
      }
      expect(";");
      return s;
    }
    if (is("if")) {
      next();
      expect("(");
      s.kind = Stmt::Kind::If;
      s.cond = bexp();
      expect(")");
      s.then_body = block();
      if (is("else")) {
        next();
        if (is("if")) {
          s.else_body.push_back(statement());
        } else {
          s.else_body = block();
        }
      }
      return s;
    }
    if (is("while")) {
      next();
      expect("(");
      s.kind = Stmt::Kind::While;
      s.cond = bexp();
      expect(")");
      s.then_body = block();
      return s;
    }
    if (is("assert")) {
      next();
      expect("(");
      s.kind = Stmt::Kind::Assert;
      s.cond = bexp();
      expect(")");
      expect(";");
      return s;
    }
    if (t.kind == Tok::Ident && is(":=", 1)) {
      const Token name = next();
      next();
      const VarId target = resolve(name);
      s.target = target;
      if (peek().kind == Tok::Ident && kPrims.count(peek().text)) return prim_call(target);
      if (is("*") && is(";", 1)) {
        next();
        next();
        s.kind = Stmt::Kind::Havoc;
        return s;
      }
      if (peek().kind == Tok::Ident && is("(", 1) && !kKeywords.count(peek().text))
        throw ParseError(peek().pos, "call to unknown function '" + peek().text + "'");
      s.kind = Stmt::Kind::Assign;
      s.value = expr();
      expect(";");
      return s;
    }
    if (t.kind == Tok::Ident && is("(", 1)) throw ParseError(t.pos, "call to unknown function '" + t.text + "'");
    throw ParseError(t.pos, "expected statement, found '" + t.text + "'");
  }

  // Linear expressions.
  LinearTerm expr() {
    LinearTerm acc = term();
    while (is("+") || is("-")) {
      const bool minus = next().text == "-";
      LinearTerm rhs = term();
      if (minus) acc -= rhs;
      else acc += rhs;
    }
    return acc;
  }

  LinearTerm term() {
    SourcePos start = peek().pos;
    LinearTerm acc = factor();
    while (is("*")) {
      next();
      LinearTerm rhs = factor();
      if (acc.is_constant()) {
        rhs *= acc.constant();
        acc = std::move(rhs);
      } else if (rhs.is_constant()) {
        acc *= rhs.constant();
      } else {
        throw ParseError(start, "non-linear expression");
      }
    }
    return acc;
  }

  LinearTerm factor() {
    const Token& t = peek();
    if (is("-")) {
      next();
      return -factor();
    }
    if (is("(")) {
      next();
      LinearTerm e = expr();
      expect(")");
      return e;
    }
    if (t.kind == Tok::Int) {
      next();
      return LinearTerm(Rational(std::stol(t.text)));
    }
    if (t.kind == Tok::Ident && !kKeywords.count(t.text)) {
      if (kPrims.count(t.text)) throw ParseError(t.pos, "primitive call must be the whole right-hand side");
      if (is("(", 1)) throw ParseError(t.pos, "call to unknown function '" + t.text + "'");
      return LinearTerm::variable(resolve(next()));
    }
    if (is("*")) throw ParseError(t.pos, "'*' must be the whole right-hand side");
    throw ParseError(t.pos, "expected expression, found '" + t.text + "'");
  }

  // Boolean expressions.
  Formula bexp() {
    std::vector<Formula> parts{bconj()};
    while (is("||")) {
      next();
      parts.push_back(bconj());
    }
    return Formula::disj(std::move(parts));
  }

  Formula bconj() {
    std::vector<Formula> parts{bunary()};
    while (is("&&")) {
      next();
      parts.push_back(bunary());
    }
    return Formula::conj(std::move(parts));
  }

  Formula bunary() {
    if (is("!")) {
      next();
      return bunary().negate();
    }
    if (is("true")) {
      next();
      return Formula::top();
    }
    if (is("false")) {
      next();
      return Formula::bottom();
    }
    if (is("(")) {
      // Either a parenthesized boolean or the left side of a relation.
      const std::size_t save = pos_;
      try {
        return relation();
      } catch (const ParseError&) {
        pos_ = save;
      }
      next();
      Formula f = bexp();
      expect(")");
      return f;
    }
    return relation();
  }

  Formula relation() {
    LinearTerm lhs = expr();
    const Token op = peek();
    if (op.kind != Tok::Punct) throw ParseError(op.pos, "expected comparison operator");
    static const std::set<std::string> ops{"<", "<=", ">", ">=", "=", "==", "!="};
    if (!ops.count(op.text)) throw ParseError(op.pos, "expected comparison operator, found '" + op.text + "'");
    next();
    LinearTerm rhs = expr();
    const LinearTerm d = lhs - rhs;
    if (op.text == "<") return Formula::atom(d, Rel::Lt);
    if (op.text == "<=") return Formula::atom(d, Rel::Le);
    if (op.text == ">") return Formula::atom(-d, Rel::Lt);
    if (op.text == ">=") return Formula::atom(-d, Rel::Le);
    if (op.text == "!=") return Formula::atom(d, Rel::Eq).negate();
    return Formula::atom(d, Rel::Eq);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  ThreadedProgram prog_;
  Thread* current_ = nullptr;
  std::set<std::string> names_;         // globals and events
  std::set<std::string> thread_names_;
  std::set<std::string> local_names_;
  std::vector<std::pair<std::string, SourcePos>> pending_joins_;
};

}  // namespace

ThreadedProgram parse_program(std::string_view text) {
  Parser p(lex(text));
  return p.program();
}

ThreadedProgram parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str());
}

}  // namespace esst::frontend
