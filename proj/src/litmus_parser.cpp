/*
 * Copyright (c) 2026 The ptsokit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Litmus file front end: lexer, recursive-descent parser and printer.

#include "ptsokit/core/litmus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace ptsokit {

ParseError::ParseError(const std::string &msg, std::size_t line, std::size_t col, const std::string &source)
    : std::runtime_error((source.empty() ? "" : source + ":") + std::to_string(line) + ":" + std::to_string(col) +
                         ": " + msg),
      msg_(msg), line_(line), col_(col) {}

namespace {

enum class Tok { Ident, Nat, String, Sym, End };

struct Token {
  Tok type = Tok::End;
  std::string text;
  std::size_t line = 0;
  std::size_t col = 0;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n')
        advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      t.type = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      t.type = Tok::Nat;
      t.text = std::string(src.substr(i, j - i));
      if (t.text.size() > 9)
        throw ParseError("numeric literal too large", line, col);
      advance(j - i);
    } else if (c == '"') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '"' && src[j] != '\n')
        ++j;
      if (j >= src.size() || src[j] != '"')
        throw ParseError("unterminated string", line, col);
      t.type = Tok::String;
      t.text = std::string(src.substr(i + 1, j - i - 1));
      advance(j - i + 1);
    } else {
      static const char *two[] = {":=", "!=", "/\\"};
      t.type = Tok::Sym;
      for (const char *s : two) {
        if (src.substr(i, 2) == s) {
          t.text = s;
          break;
        }
      }
      if (t.text.empty()) {
        if (std::string_view("{}();,:=+").find(c) == std::string_view::npos)
          throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        t.text = std::string(1, c);
      }
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

bool is_register_name(std::string_view s) {
  return s.size() >= 2 && s[0] == 'r' &&
         std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

bool is_keyword(std::string_view s) {
  static const char *kws[] = {"litmus", "init",   "thread", "allowed", "forbidden", "budget",
                              "crashes", "unroll", "mfence", "fl",      "fo",        "sfence",
                              "if",     "goto",   "FADD",   "CAS",     "under"};
  return std::any_of(std::begin(kws), std::end(kws), [&](const char *k) { return s == k; });
}

struct RegUse {
  RegId reg;
  std::size_t line, col;
};

class Parser {
public:
  Parser(std::string_view src, const ParseOverrides &ov) : toks_(lex(src)), ov_(ov) {}

  LitmusTest parse() {
    LitmusTest test;
    expect_word("litmus");
    if (peek().type != Tok::String)
      fail("expected test name string");
    test.name = next().text;
    std::vector<std::pair<LocId, Value>> init;
    if (peek_word("init"))
      init = parse_init();
    if (!peek_word("thread"))
      fail("expected 'thread'");
    while (peek_word("thread"))
      parse_thread();
    while (peek_word("allowed") || peek_word("forbidden"))
      test.checks.push_back(parse_check());
    Budget budget;
    if (peek_word("budget"))
      budget = parse_budget();
    if (peek().type != Tok::End)
      fail("unexpected '" + peek().text + "'");

    if (ov_.crashes)
      budget.max_crashes = *ov_.crashes;
    if (ov_.unroll)
      budget.unroll = *ov_.unroll;

    for (std::size_t t = 0; t < prog_.threads.size(); ++t) {
      auto &sp = prog_.threads[t];
      if (!is_acyclic(sp)) {
        if (budget.unroll == 0)
          throw ParseError("thread '" + sp.name + "' has an unbounded loop; set budget unroll > 0",
                           thread_pos_[t].first, thread_pos_[t].second);
        sp = unroll_loops(sp, budget.unroll);
      }
    }

    test.program = std::move(prog_);
    test.init.assign(test.program.num_locations(), 0);
    for (auto [x, v] : init)
      test.init[x] = v;
    test.budget = budget;
    refresh_universe(test);
    return test;
  }

private:
  const Token &peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token &next() {
    const Token &t = toks_[pos_];
    if (pos_ + 1 < toks_.size())
      ++pos_;
    return t;
  }
  [[noreturn]] void fail(const std::string &msg) const { throw ParseError(msg, peek().line, peek().col); }
  [[noreturn]] void fail_at(const Token &t, const std::string &msg) const {
    throw ParseError(msg, t.line, t.col);
  }

  bool peek_word(std::string_view w, std::size_t k = 0) const {
    return peek(k).type == Tok::Ident && peek(k).text == w;
  }
  bool peek_sym(std::string_view s, std::size_t k = 0) const {
    return peek(k).type == Tok::Sym && peek(k).text == s;
  }
  void expect_word(std::string_view w) {
    if (!peek_word(w))
      fail("expected '" + std::string(w) + "'");
    next();
  }
  void expect_sym(std::string_view s) {
    if (!peek_sym(s))
      fail("expected '" + std::string(s) + "'" +
           (peek().type == Tok::End ? std::string(" at end of input") : ", found '" + peek().text + "'"));
    next();
  }
  Value expect_nat() {
    if (peek().type != Tok::Nat)
      fail("expected a natural number");
    return static_cast<Value>(std::stoul(next().text));
  }

  LocId intern_loc(const std::string &name) {
    auto it = loc_ids_.find(name);
    if (it != loc_ids_.end())
      return it->second;
    LocId id = static_cast<LocId>(prog_.locations.size());
    prog_.locations.push_back(name);
    loc_ids_.emplace(name, id);
    return id;
  }

  LocId expect_loc() {
    const Token &t = peek();
    if (t.type != Tok::Ident || is_keyword(t.text) || is_register_name(t.text))
      fail("expected a location name");
    next();
    return intern_loc(t.text);
  }

  RegId intern_reg(const std::string &name) {
    auto &regs = prog_.threads.back().regs;
    auto it = std::find(regs.begin(), regs.end(), name);
    if (it != regs.end())
      return static_cast<RegId>(it - regs.begin());
    regs.push_back(name);
    return static_cast<RegId>(regs.size() - 1);
  }

  RegId def_reg(const Token &t) {
    RegId r = intern_reg(t.text);
    defined_.resize(std::max<std::size_t>(defined_.size(), r + 1u), false);
    defined_[r] = true;
    return r;
  }

  std::vector<std::pair<LocId, Value>> parse_init() {
    expect_word("init");
    expect_sym("{");
    std::vector<std::pair<LocId, Value>> out;
    while (!peek_sym("}")) {
      LocId x = expect_loc();
      expect_sym("=");
      out.emplace_back(x, expect_nat());
      expect_sym(";");
    }
    expect_sym("}");
    return out;
  }

  // expr := sum (('=' | '!=') sum)?
  Expr parse_expr() {
    Expr lhs = parse_sum();
    if (peek_sym("=") || peek_sym("!=")) {
      auto op = next().text == "=" ? Expr::Op::Eq : Expr::Op::Ne;
      Expr rhs = parse_sum();
      if (peek_sym("=") || peek_sym("!="))
        fail("comparisons do not associate; add parentheses");
      return Expr::binary(op, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr parse_sum() {
    Expr e = parse_atom();
    while (peek_sym("+")) {
      next();
      e = Expr::binary(Expr::Op::Add, std::move(e), parse_atom());
    }
    return e;
  }

  Expr parse_atom() {
    const Token &t = peek();
    if (t.type == Tok::Nat)
      return Expr::constant(expect_nat());
    if (peek_sym("(")) {
      next();
      Expr e = parse_expr();
      expect_sym(")");
      return e;
    }
    if (t.type == Tok::Ident && is_register_name(t.text)) {
      next();
      RegId r = intern_reg(t.text);
      uses_.push_back({r, t.line, t.col});
      return Expr::regref(r);
    }
    if (t.type == Tok::Ident)
      fail("'" + t.text + "' is not a register; locations can only be accessed by load/store statements");
    fail("expected an expression");
  }

  struct Fixup {
    std::size_t at;
    std::string label;
    std::size_t line, col;
  };

  void define_label(const std::string &key, const Token &where) {
    if (labels_.count(key))
      fail_at(where, "duplicate label " + key.substr(1));
    labels_[key] = static_cast<Pc>(code().size());
  }

  std::vector<Instruction> &code() { return prog_.threads.back().code; }

  void parse_thread() {
    const Token &kw = next();
    if (peek().type != Tok::Ident || is_keyword(peek().text))
      fail("expected thread name");
    std::string name = next().text;
    for (const auto &t : prog_.threads)
      if (t.name == name)
        fail_at(kw, "duplicate thread '" + name + "'");
    prog_.threads.push_back(SequentialProgram{name, {}, {}});
    thread_pos_.emplace_back(kw.line, kw.col);
    labels_.clear();
    fixups_.clear();
    uses_.clear();
    defined_.clear();
    internal_ = 0;
    expect_sym("{");
    while (!peek_sym("}")) {
      if (peek().type == Tok::End)
        fail("unterminated thread body");
      parse_stmt();
    }
    next();
    for (const auto &f : fixups_) {
      auto it = labels_.find(f.label);
      if (it == labels_.end())
        throw ParseError("undefined label " + f.label.substr(1), f.line, f.col);
      code()[f.at].target = it->second;
    }
    for (const auto &u : uses_)
      if (u.reg >= defined_.size() || !defined_[u.reg])
        throw ParseError("undeclared register '" + prog_.threads.back().regs[u.reg] + "' in thread '" +
                             name + "'",
                         u.line, u.col);
  }

  void emit_jump(Expr cond, const std::string &label, const Token &where) {
    fixups_.push_back({code().size(), label, where.line, where.col});
    code().push_back(Instruction::if_goto(std::move(cond), 0));
  }

  void parse_stmt() {
    const Token &t = peek();
    if (t.type == Tok::Nat && peek_sym(":", 1)) {
      std::string key = "u" + std::to_string(std::stoul(t.text));
      next();
      next();
      define_label(key, t);
      if (peek_sym("}"))
        return; // label on the terminated pc
      parse_stmt();
      return;
    }
    if (t.type != Tok::Ident)
      fail("expected a statement");
    if (t.text == "goto") {
      next();
      const Token &n = peek();
      Value target = expect_nat();
      expect_sym(";");
      emit_jump(Expr::constant(1), "u" + std::to_string(target), n);
      return;
    }
    if (t.text == "if") {
      next();
      expect_sym("(");
      Expr cond = parse_expr();
      expect_sym(")");
      expect_sym("{");
      // `if (e) { goto n; }` is the primitive conditional jump.
      if (peek_word("goto") && peek(1).type == Tok::Nat && peek_sym(";", 2) && peek_sym("}", 3)) {
        next();
        const Token &n = peek();
        Value target = expect_nat();
        next();
        next();
        emit_jump(std::move(cond), "u" + std::to_string(target), n);
        return;
      }
      std::string end = "i" + std::to_string(internal_++);
      emit_jump(Expr::binary(Expr::Op::Eq, std::move(cond), Expr::constant(0)), end, t);
      while (!peek_sym("}")) {
        if (peek().type == Tok::End)
          fail("unterminated if block");
        parse_stmt();
      }
      next();
      labels_[end] = static_cast<Pc>(code().size());
      return;
    }
    if (t.text == "mfence" || t.text == "sfence") {
      next();
      expect_sym(";");
      code().push_back(t.text == "mfence" ? Instruction::mfence() : Instruction::sfence());
      return;
    }
    if (t.text == "fl" || t.text == "fo") {
      next();
      LocId x = expect_loc();
      expect_sym(";");
      code().push_back(t.text == "fl" ? Instruction::flush(x) : Instruction::flush_opt(x));
      return;
    }
    if (is_keyword(t.text))
      fail("unexpected '" + t.text + "'");
    next();
    expect_sym(":=");
    if (!is_register_name(t.text)) {
      LocId x = intern_loc(t.text);
      Expr e = parse_expr();
      expect_sym(";");
      code().push_back(Instruction::write(x, std::move(e)));
      return;
    }
    if (peek_word("FADD")) {
      next();
      expect_sym("(");
      LocId x = expect_loc();
      expect_sym(",");
      Expr e = parse_expr();
      expect_sym(")");
      expect_sym(";");
      code().push_back(Instruction::fadd(def_reg(t), x, std::move(e)));
      return;
    }
    if (peek_word("CAS")) {
      next();
      expect_sym("(");
      LocId x = expect_loc();
      expect_sym(",");
      Expr er = parse_expr();
      expect_sym(",");
      Expr ew = parse_expr();
      expect_sym(")");
      expect_sym(";");
      code().push_back(Instruction::cas(def_reg(t), x, std::move(er), std::move(ew)));
      return;
    }
    const Token &rhs = peek();
    if (rhs.type == Tok::Ident && !is_keyword(rhs.text) && !is_register_name(rhs.text) && peek_sym(";", 1)) {
      next();
      next();
      LocId x = intern_loc(rhs.text);
      code().push_back(Instruction::read(def_reg(t), x));
      return;
    }
    Expr e = parse_expr();
    expect_sym(";");
    code().push_back(Instruction::assign(def_reg(t), std::move(e)));
  }

  Check parse_check() {
    Check c;
    c.kind = next().text == "allowed" ? CheckKind::Allowed : CheckKind::Forbidden;
    if (peek_word("under")) {
      next();
      do {
        if (peek().type != Tok::Ident)
          fail("expected a model name");
        c.models.push_back(next().text);
      } while (peek_sym(",") && (next(), true));
    }
    expect_sym("{");
    while (true) {
      Term term;
      const Token &t = peek();
      if (peek_word("nv") && peek_sym("(", 1)) {
        next();
        next();
        const Token &lt = peek();
        if (lt.type != Tok::Ident)
          fail("expected a location name");
        next();
        auto it = loc_ids_.find(lt.text);
        if (it == loc_ids_.end())
          throw ParseError("undeclared location '" + lt.text + "'", lt.line, lt.col);
        term.is_nv = true;
        term.loc = it->second;
        expect_sym(")");
      } else if (t.type == Tok::Ident) {
        next();
        auto th = std::find_if(prog_.threads.begin(), prog_.threads.end(),
                               [&](const SequentialProgram &s) { return s.name == t.text; });
        if (th == prog_.threads.end())
          fail_at(t, "undeclared thread '" + t.text + "'");
        expect_sym(":");
        const Token &rt = peek();
        if (rt.type != Tok::Ident || !is_register_name(rt.text))
          fail("expected a register name");
        next();
        auto r = std::find(th->regs.begin(), th->regs.end(), rt.text);
        if (r == th->regs.end())
          fail_at(rt, "undeclared register '" + rt.text + "' in thread '" + th->name + "'");
        term.is_nv = false;
        term.tid = static_cast<ThreadId>(th - prog_.threads.begin());
        term.reg = static_cast<RegId>(r - th->regs.begin());
      } else {
        fail("expected a condition term");
      }
      if (peek_sym("="))
        term.negated = false;
      else if (peek_sym("!="))
        term.negated = true;
      else
        fail("expected '=' or '!='");
      next();
      term.value = expect_nat();
      c.terms.push_back(term);
      if (!peek_sym("/\\"))
        break;
      next();
    }
    expect_sym("}");
    return c;
  }

  Budget parse_budget() {
    Budget b;
    expect_word("budget");
    expect_sym("{");
    if (peek_word("crashes")) {
      next();
      expect_sym("=");
      b.max_crashes = expect_nat();
      expect_sym(";");
    }
    if (peek_word("unroll")) {
      next();
      expect_sym("=");
      b.unroll = expect_nat();
      expect_sym(";");
    }
    expect_sym("}");
    return b;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  ParseOverrides ov_;
  Program prog_;
  std::map<std::string, LocId> loc_ids_;
  std::vector<std::pair<std::size_t, std::size_t>> thread_pos_;
  std::map<std::string, Pc> labels_;
  std::vector<Fixup> fixups_;
  std::vector<RegUse> uses_;
  std::vector<bool> defined_;
  unsigned internal_ = 0;
};

bool is_comparison(const Expr &e) { return e.op == Expr::Op::Eq || e.op == Expr::Op::Ne; }

void print_expr(std::ostream &os, const Expr &e, const SequentialProgram &sp) {
  switch (e.op) {
  case Expr::Op::Const:
    os << e.value;
    return;
  case Expr::Op::Reg:
    os << sp.regs[e.reg];
    return;
  default:
    break;
  }
  auto side = [&](const Expr &a) {
    bool paren = is_comparison(a);
    if (paren)
      os << '(';
    print_expr(os, a, sp);
    if (paren)
      os << ')';
  };
  side(e.args[0]);
  os << (e.op == Expr::Op::Add ? " + " : e.op == Expr::Op::Eq ? " = " : " != ");
  if (e.op == Expr::Op::Add && e.args[1].op == Expr::Op::Add) {
    os << '(';
    print_expr(os, e.args[1], sp);
    os << ')';
  } else {
    side(e.args[1]);
  }
}

} // namespace

LitmusTest parse_litmus(std::string_view text, const ParseOverrides &overrides) {
  return Parser(text, overrides).parse();
}

LitmusTest load_litmus(const std::string &path, const ParseOverrides &overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_litmus(ss.str(), overrides);
  } catch (const ParseError &e) {
    throw ParseError(e.message(), e.line(), e.column(), path);
  }
}

std::string print_litmus(const LitmusTest &test) {
  const Program &prog = test.program;
  std::ostringstream os;
  os << "litmus \"" << test.name << "\"\n";
  if (prog.num_locations() > 0) {
    os << "init {";
    for (std::size_t x = 0; x < prog.num_locations(); ++x)
      os << ' ' << prog.locations[x] << " = " << (x < test.init.size() ? test.init[x] : 0) << ';';
    os << " }\n";
  }
  for (const auto &sp : prog.threads) {
    os << "thread " << sp.name << " {\n";
    std::vector<bool> targeted(sp.code.size() + 1, false);
    for (const auto &ins : sp.code)
      if (ins.op == Op::IfGoto)
        targeted[ins.target] = true;
    for (std::size_t pc = 0; pc <= sp.code.size(); ++pc) {
      if (pc == sp.code.size()) {
        if (targeted[pc])
          os << "  " << pc << ":\n";
        break;
      }
      os << "  ";
      if (targeted[pc])
        os << pc << ": ";
      const Instruction &ins = sp.code[pc];
      const auto &loc = [&](LocId x) -> const std::string & { return prog.locations[x]; };
      switch (ins.op) {
      case Op::Assign:
        os << sp.regs[ins.reg] << " := ";
        print_expr(os, ins.e1, sp);
        os << ';';
        break;
      case Op::IfGoto:
        if (ins.e1.op == Expr::Op::Const && ins.e1.value != 0) {
          os << "goto " << ins.target << ';';
        } else {
          os << "if (";
          print_expr(os, ins.e1, sp);
          os << ") { goto " << ins.target << "; }";
        }
        break;
      case Op::Write:
        os << loc(ins.loc) << " := ";
        print_expr(os, ins.e1, sp);
        os << ';';
        break;
      case Op::Read:
        os << sp.regs[ins.reg] << " := " << loc(ins.loc) << ';';
        break;
      case Op::Fadd:
        os << sp.regs[ins.reg] << " := FADD(" << loc(ins.loc) << ", ";
        print_expr(os, ins.e1, sp);
        os << ");";
        break;
      case Op::Cas:
        os << sp.regs[ins.reg] << " := CAS(" << loc(ins.loc) << ", ";
        print_expr(os, ins.e1, sp);
        os << ", ";
        print_expr(os, ins.e2, sp);
        os << ");";
        break;
      case Op::Mfence: os << "mfence;"; break;
      case Op::Flush: os << "fl " << loc(ins.loc) << ';'; break;
      case Op::FlushOpt: os << "fo " << loc(ins.loc) << ';'; break;
      case Op::Sfence: os << "sfence;"; break;
      }
      os << '\n';
    }
    os << "}\n";
  }
  for (const auto &c : test.checks) {
    os << (c.kind == CheckKind::Allowed ? "allowed" : "forbidden");
    if (!c.models.empty()) {
      os << " under ";
      for (std::size_t i = 0; i < c.models.size(); ++i)
        os << (i ? ", " : "") << c.models[i];
    }
    os << " { " << format_condition(c, prog) << " }\n";
  }
  os << "budget { crashes = " << test.budget.max_crashes << "; unroll = 0; }\n";
  return os.str();
}

} // namespace ptsokit
