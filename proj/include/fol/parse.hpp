#ifndef FOL_PARSE_HPP
#define FOL_PARSE_HPP

// Text surface for 1-forms: a small document grammar
//
//   vars: z0 z1 z2
//   form: z1 dz0 - z0 dz1
//
// with optional metadata lines (degree:, chart:, point:). Coefficients are
// rational expressions in the declared variables using integer literals,
// + - * / ^ and parentheses; each summand of the form carries one
// differential token d<var>. The canonical renderer emits exactly the
// coefficient syntax produced by DForm::str, so parse(render(w)) == w.

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fol/dform.hpp"

namespace fol {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& msg, int line, int col)
      : std::runtime_error(msg + " (line " + std::to_string(line) +
                           ", column " + std::to_string(col) + ")"),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_, col_;
};

class UnknownVariable : public std::runtime_error {
 public:
  UnknownVariable(const std::string& name, int line, int col)
      : std::runtime_error("unknown variable '" + name + "' (line " +
                           std::to_string(line) + ", column " +
                           std::to_string(col) + ")"),
        name_(name),
        line_(line),
        col_(col) {}
  const std::string& name() const { return name_; }
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  std::string name_;
  int line_, col_;
};

struct FormDocument {
  std::vector<std::string> vars;
  DForm<RatFun> form;
  std::optional<int> degree_hint;
  std::optional<int> chart_hint;
  std::optional<std::vector<Rat>> point_hint;
};

namespace detail_parse {

struct Token {
  enum Kind { Int, Ident, Op, End } kind = End;
  std::string text;
  int line = 1, col = 1;
};

class Lexer {
 public:
  Lexer(const std::string& s, int line, int col_offset = 0)
      : s_(s), line_(line), off_(col_offset) {
    advance();
  }

  const Token& peek() const { return tok_; }
  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    tok_ = Token{Token::End, "", line_, off_ + (int)pos_ + 1};
    if (pos_ >= s_.size()) return;
    char c = s_[pos_];
    size_t start = pos_;
    if (std::isdigit((unsigned char)c)) {
      while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
      tok_.kind = Token::Int;
    } else if (std::isalpha((unsigned char)c) || c == '_') {
      while (pos_ < s_.size() &&
             (std::isalnum((unsigned char)s_[pos_]) || s_[pos_] == '_'))
        ++pos_;
      tok_.kind = Token::Ident;
    } else if (std::string("+-*/^(),").find(c) != std::string::npos) {
      ++pos_;
      tok_.kind = Token::Op;
    } else {
      throw SyntaxError(std::string("unexpected character '") + c + "'", line_,
                        off_ + (int)pos_ + 1);
    }
    tok_.text = s_.substr(start, pos_ - start);
  }

  std::string s_;
  int line_;
  int off_;
  size_t pos_ = 0;
  Token tok_;
};

// Recursive-descent parser over one expression line.
class ExprParser {
 public:
  ExprParser(const std::vector<std::string>& names, const std::string& text,
             int line, int col_offset = 0)
      : names_(names), lex_(text, line, col_offset) {}

  // sum of <coeff> d<var> terms (a bare "0" denotes the zero form)
  DForm<RatFun> parse_form() {
    int n = (int)names_.size();
    DForm<RatFun> w(1, n, RatFun(n));
    bool neg = eat_sign();
    for (;;) {
      Term t = parse_product(true);
      RatFun c = neg ? RatFun::constant(n, Rat(-1)) * t.coeff : t.coeff;
      if (t.dvar)
        w.add_term({*t.dvar}, c);
      else if (!c.is_zero())
        throw SyntaxError("summand has no differential", lex_.peek().line,
                          lex_.peek().col);
      const Token& nx = lex_.peek();
      if (nx.kind == Token::End) break;
      if (nx.kind == Token::Op && (nx.text == "+" || nx.text == "-")) {
        neg = nx.text == "-";
        lex_.next();
        continue;
      }
      throw SyntaxError("expected '+', '-' or end of form after summand",
                        nx.line, nx.col);
    }
    return w;
  }

  // a pure coefficient expression occupying the whole line
  RatFun parse_ratfun() {
    RatFun r = parse_sum();
    const Token& nx = lex_.peek();
    if (nx.kind != Token::End)
      throw SyntaxError("unexpected trailing input '" + nx.text + "'", nx.line,
                        nx.col);
    return r;
  }

 private:
  struct Term {
    RatFun coeff;
    std::optional<int> dvar;
  };

  bool eat_sign() {
    bool neg = false;
    while (lex_.peek().kind == Token::Op &&
           (lex_.peek().text == "+" || lex_.peek().text == "-")) {
      if (lex_.next().text == "-") neg = !neg;
    }
    return neg;
  }

  RatFun parse_sum() {
    int n = (int)names_.size();
    bool neg = eat_sign();
    RatFun acc = parse_product(false).coeff;
    if (neg) acc = RatFun::constant(n, Rat(-1)) * acc;
    while (lex_.peek().kind == Token::Op &&
           (lex_.peek().text == "+" || lex_.peek().text == "-")) {
      bool minus = lex_.next().text == "-";
      RatFun rhs = parse_product(false).coeff;
      acc = minus ? acc - rhs : acc + rhs;
    }
    return acc;
  }

  bool starts_factor(const Token& t) const {
    if (t.kind == Token::Int || t.kind == Token::Ident) return true;
    return t.kind == Token::Op && t.text == "(";
  }

  Term parse_product(bool allow_diff) {
    int n = (int)names_.size();
    Term acc{RatFun::constant(n, Rat(1)), std::nullopt};
    bool first = true;
    for (;;) {
      const Token& t = lex_.peek();
      bool divide = false;
      if (!first) {
        if (t.kind == Token::Op && (t.text == "*" || t.text == "/")) {
          divide = t.text == "/";
          lex_.next();
        } else if (!starts_factor(t)) {
          break;  // end of product (juxtaposition otherwise)
        }
      }
      Term f = parse_factor(allow_diff);
      if (f.dvar) {
        if (divide)
          throw SyntaxError("cannot divide by a differential", t.line, t.col);
        if (acc.dvar)
          throw SyntaxError("summand has more than one differential", t.line,
                            t.col);
        acc.dvar = f.dvar;
      } else {
        acc.coeff = divide ? acc.coeff * f.coeff.inverse() : acc.coeff * f.coeff;
      }
      first = false;
    }
    if (first)
      throw SyntaxError("expected an expression", lex_.peek().line,
                        lex_.peek().col);
    return acc;
  }

  Term parse_factor(bool allow_diff) {
    int n = (int)names_.size();
    Token t = lex_.next();
    Term out{RatFun::constant(n, Rat(1)), std::nullopt};
    if (t.kind == Token::Int) {
      out.coeff = RatFun::constant(n, Rat::from_string(t.text));
    } else if (t.kind == Token::Ident) {
      int idx = var_index(t.text);
      if (idx >= 0) {
        out.coeff = RatFun::variable(n, idx);
      } else if (allow_diff && t.text.size() > 1 && t.text[0] == 'd' &&
                 var_index(t.text.substr(1)) >= 0) {
        out.dvar = var_index(t.text.substr(1));
        return out;  // differentials take no exponent
      } else {
        throw UnknownVariable(t.text, t.line, t.col);
      }
    } else if (t.kind == Token::Op && t.text == "(") {
      out.coeff = parse_sum();
      Token close = lex_.next();
      if (close.kind != Token::Op || close.text != ")")
        throw SyntaxError("expected ')'", close.line, close.col);
    } else {
      throw SyntaxError("expected a number, variable or '('", t.line, t.col);
    }
    if (lex_.peek().kind == Token::Op && lex_.peek().text == "^") {
      lex_.next();
      bool neg = false;
      if (lex_.peek().kind == Token::Op && lex_.peek().text == "-") {
        neg = true;
        lex_.next();
      }
      Token e = lex_.next();
      if (e.kind != Token::Int)
        throw SyntaxError("expected an integer exponent", e.line, e.col);
      int k = std::stoi(e.text);
      out.coeff = out.coeff.pow(neg ? -k : k);
    }
    return out;
  }

  int var_index(const std::string& name) const {
    for (size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return (int)i;
    return -1;
  }

  const std::vector<std::string>& names_;
  Lexer lex_;
};

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

inline Rat parse_rat_entry(const std::string& s, int line) {
  ExprParser p({}, s, line);
  RatFun v = p.parse_ratfun();
  return v.constant_value();
}

inline std::vector<Rat> parse_point(const std::string& s, int line) {
  std::vector<Rat> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ','))
    out.push_back(parse_rat_entry(cur, line));
  return out;
}

}  // namespace detail_parse

// ---------------------------------------------------------------------------

inline RatFun parse_coeff(const std::string& text,
                          const std::vector<std::string>& vars, int line = 1) {
  return detail_parse::ExprParser(vars, text, line).parse_ratfun();
}

inline DForm<RatFun> parse_form_expr(const std::string& text,
                                     const std::vector<std::string>& vars,
                                     int line = 1) {
  return detail_parse::ExprParser(vars, text, line).parse_form();
}

inline FormDocument parse_form_document(const std::string& text) {
  using namespace detail_parse;
  FormDocument doc;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool have_vars = false, have_form = false;
  std::string form_text;
  int form_line = 0, form_col = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    size_t hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    std::string line = trim(raw);
    if (line.empty()) continue;
    size_t colon = line.find(':');
    if (colon == std::string::npos)
      throw SyntaxError("expected 'key: value'", lineno, 1);
    std::string key = trim(line.substr(0, colon));
    std::string rest = trim(line.substr(colon + 1));
    size_t lead = raw.find_first_not_of(" \t\r");
    size_t vstart = rest.empty()
                        ? raw.size()
                        : raw.find(rest, lead + colon + 1);
    if (key == "vars") {
      doc.vars = split_ws(rest);
      if (doc.vars.empty())
        throw SyntaxError("empty variable list", lineno, (int)colon + 2);
      have_vars = true;
    } else if (key == "form") {
      if (!have_vars)
        throw SyntaxError("'form:' before 'vars:'", lineno, 1);
      form_text = rest;
      form_line = lineno;
      form_col = (int)vstart;
      have_form = true;
    } else if (key == "degree") {
      doc.degree_hint = (int)parse_rat_entry(rest, lineno).num();
    } else if (key == "chart") {
      doc.chart_hint = (int)parse_rat_entry(rest, lineno).num();
    } else if (key == "point") {
      doc.point_hint = parse_point(rest, lineno);
    } else {
      throw SyntaxError("unknown key '" + key + "'", lineno, 1);
    }
  }
  if (!have_form) throw SyntaxError("missing 'form:' line", lineno + 1, 1);
  doc.form = detail_parse::ExprParser(doc.vars, form_text, form_line, form_col)
                 .parse_form();
  return doc;
}

inline std::string render_form_document(const FormDocument& doc) {
  std::string out = "vars:";
  for (const auto& v : doc.vars) out += " " + v;
  out += "\n";
  if (doc.degree_hint) out += "degree: " + std::to_string(*doc.degree_hint) + "\n";
  if (doc.chart_hint) out += "chart: " + std::to_string(*doc.chart_hint) + "\n";
  if (doc.point_hint) {
    out += "point:";
    bool first = true;
    for (const auto& r : *doc.point_hint) {
      out += (first ? " " : ", ") + r.str();
      first = false;
    }
    out += "\n";
  }
  out += "form: " + doc.form.str(doc.vars) + "\n";
  return out;
}

}  // namespace fol

#endif
