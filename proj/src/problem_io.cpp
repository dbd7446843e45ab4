#include "polyopt/problem_io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "polyopt/errors.hpp"

namespace polyopt {

namespace {

struct Token {
  enum Kind { Ident, Number, Punct, End } kind = End;
  std::string text;
  double num = 0.0;
  int line = 0, col = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        continue;
      }
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++col_;
        ++pos_;
        continue;
      }
      break;
    }
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_.kind = Token::End;
      return;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ++pos_;
        ++col_;
      }
      tok_.kind = Token::Ident;
      tok_.text = src_.substr(start, pos_ - start);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
        ++pos_;
        ++col_;
      }
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        size_t save = pos_;
        ++pos_;
        ++col_;
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
          ++pos_;
          ++col_;
        }
        if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            ++pos_;
            ++col_;
          }
        } else {
          pos_ = save;  // bare 'e' belongs to the next token
        }
      }
      tok_.kind = Token::Number;
      tok_.text = src_.substr(start, pos_ - start);
      try {
        tok_.num = std::stod(tok_.text);
      } catch (...) {
        throw ParseError("malformed number '" + tok_.text + "'", tok_.line, tok_.col);
      }
      return;
    }
    // Two-character operator.
    if (c == '>' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
      tok_.kind = Token::Punct;
      tok_.text = ">=";
      pos_ += 2;
      col_ += 2;
      return;
    }
    tok_.kind = Token::Punct;
    tok_.text = std::string(1, c);
    ++pos_;
    ++col_;
  }

 private:
  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

class PolyParser {
 public:
  PolyParser(Lexer& lex, const std::vector<std::string>& vars) : lex_(lex), vars_(vars) {}

  Polynomial parse() { return expression(); }

 private:
  int var_index(const Token& t) const {
    for (size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == t.text) return static_cast<int>(i);
    throw ParseError("unknown variable '" + t.text + "'", t.line, t.col);
  }

  Polynomial expression() {
    bool neg = false;
    while (lex_.peek().kind == Token::Punct &&
           (lex_.peek().text == "+" || lex_.peek().text == "-")) {
      if (lex_.take().text == "-") neg = !neg;
    }
    Polynomial acc = term();
    if (neg) acc = -acc;
    while (lex_.peek().kind == Token::Punct &&
           (lex_.peek().text == "+" || lex_.peek().text == "-")) {
      bool minus = lex_.take().text == "-";
      Polynomial t = term();
      acc = minus ? acc - t : acc + t;
    }
    return acc;
  }

  Polynomial term() {
    Polynomial acc = factor();
    while (lex_.peek().kind == Token::Punct && lex_.peek().text == "*") {
      lex_.take();
      acc = acc * factor();
    }
    return acc;
  }

  Polynomial factor() {
    Polynomial base = atom();
    if (lex_.peek().kind == Token::Punct && lex_.peek().text == "^") {
      Token caret = lex_.take();
      Token e = lex_.take();
      if (e.kind != Token::Number || e.num < 0 || e.num != std::floor(e.num))
        throw ParseError("exponent must be a non-negative integer", caret.line, caret.col);
      int k = static_cast<int>(e.num);
      Polynomial acc = Polynomial::constant(static_cast<int>(vars_.size()), 1.0);
      for (int i = 0; i < k; ++i) acc = acc * base;
      return acc;
    }
    return base;
  }

  Polynomial atom() {
    Token t = lex_.peek();
    if (t.kind == Token::Number) {
      lex_.take();
      return Polynomial::constant(static_cast<int>(vars_.size()), t.num);
    }
    if (t.kind == Token::Ident) {
      lex_.take();
      return Polynomial::variable(static_cast<int>(vars_.size()), var_index(t));
    }
    if (t.kind == Token::Punct && t.text == "(") {
      lex_.take();
      Polynomial inner = expression();
      Token close = lex_.take();
      if (close.kind != Token::Punct || close.text != ")")
        throw ParseError("expected ')'", close.line, close.col);
      return inner;
    }
    if (t.kind == Token::Punct && t.text == "-") {
      lex_.take();
      return -factor();
    }
    throw ParseError("unexpected token '" + (t.kind == Token::End ? "<end>" : t.text) + "'",
                     t.line, t.col);
  }

  Lexer& lex_;
  const std::vector<std::string>& vars_;
};

void expect_punct(Lexer& lex, const std::string& s) {
  Token t = lex.take();
  if (t.kind != Token::Punct || t.text != s)
    throw ParseError("expected '" + s + "'", t.line, t.col);
}

}  // namespace

Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& vars) {
  Lexer lex(text);
  PolyParser pp(lex, vars);
  Polynomial p = pp.parse();
  const Token& t = lex.peek();
  if (t.kind != Token::End)
    throw ParseError("trailing input after polynomial", t.line, t.col);
  return p;
}

ProblemFile parse_problem(const std::string& text) {
  Lexer lex(text);
  ProblemFile pf;

  Token t = lex.take();
  if (t.kind != Token::Ident || t.text != "vars")
    throw ParseError("problem must start with a 'vars' declaration", t.line, t.col);
  while (lex.peek().kind == Token::Ident) pf.vars.push_back(lex.take().text);
  if (pf.vars.empty()) throw ParseError("empty variable list", t.line, t.col);
  expect_punct(lex, ";");
  pf.nvars = static_cast<int>(pf.vars.size());

  t = lex.take();
  if (t.kind != Token::Ident || t.text != "minimize")
    throw ParseError("expected 'minimize'", t.line, t.col);
  {
    PolyParser pp(lex, pf.vars);
    pf.objective = pp.parse();
  }
  expect_punct(lex, ";");

  bool in_st = false;
  while (lex.peek().kind != Token::End) {
    Token head = lex.peek();
    if (head.kind == Token::Ident && head.text == "s") {
      // 's.t.' arrives as tokens: s . t .
      lex.take();
      expect_punct(lex, ".");
      Token tt = lex.take();
      if (tt.kind != Token::Ident || tt.text != "t")
        throw ParseError("expected 's.t.'", tt.line, tt.col);
      expect_punct(lex, ".");
      in_st = true;
      continue;
    }
    if (head.kind == Token::Ident && head.text == "option") {
      lex.take();
      Token key = lex.take();
      if (key.kind != Token::Ident) throw ParseError("expected option name", key.line, key.col);
      std::string keyname = key.text;
      // Hyphenated keys such as gradient-ideal.
      while (lex.peek().kind == Token::Punct && lex.peek().text == "-") {
        lex.take();
        Token more = lex.take();
        if (more.kind != Token::Ident)
          throw ParseError("malformed option name", more.line, more.col);
        keyname += "-" + more.text;
      }
      std::string value;
      if (lex.peek().kind == Token::Ident || lex.peek().kind == Token::Number)
        value = lex.take().text;
      expect_punct(lex, ";");
      pf.options[keyname] = value;
      continue;
    }
    if (!in_st)
      throw ParseError("unexpected token '" + head.text + "' (constraints need an 's.t.' header)",
                       head.line, head.col);
    PolyParser pp(lex, pf.vars);
    Polynomial g = pp.parse();
    Token op = lex.take();
    bool is_eq;
    if (op.kind == Token::Punct && op.text == "=")
      is_eq = true;
    else if (op.kind == Token::Punct && op.text == ">=")
      is_eq = false;
    else
      throw ParseError("expected '=' or '>=' after constraint polynomial", op.line, op.col);
    Token zero = lex.take();
    if (zero.kind != Token::Number || zero.num != 0.0)
      throw ParseError("constraint right-hand side must be 0", zero.line, zero.col);
    expect_punct(lex, ";");
    if (is_eq)
      pf.constraints.equalities.push_back(g);
    else
      pf.constraints.inequalities.push_back(g);
  }
  return pf;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open problem file " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_problem(buf.str());
}

std::string print_problem(const ProblemFile& p) {
  std::ostringstream os;
  os << "vars";
  for (const auto& v : p.vars) os << " " << v;
  os << ";\n";
  os << "minimize " << p.objective.to_string(p.vars) << ";\n";
  if (!p.constraints.empty()) {
    os << "s.t.\n";
    for (const auto& g : p.constraints.equalities)
      os << "  " << g.to_string(p.vars) << " = 0;\n";
    for (const auto& g : p.constraints.inequalities)
      os << "  " << g.to_string(p.vars) << " >= 0;\n";
  }
  for (const auto& [k, v] : p.options) {
    os << "option " << k;
    if (!v.empty()) os << " " << v;
    os << ";\n";
  }
  return os.str();
}

}  // namespace polyopt
