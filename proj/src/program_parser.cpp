#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "panda/errors.hpp"
#include "panda/io.hpp"

namespace panda {

namespace {

enum class Tok { kIdent, kNumber, kLParen, kRParen, kComma, kBar, kImplies,
                 kDot, kLeq, kNewline, kEnd };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::kIdent: return "identifier";
    case Tok::kNumber: return "number";
    case Tok::kLParen: return "'('";
    case Tok::kRParen: return "')'";
    case Tok::kComma: return "','";
    case Tok::kBar: return "'|'";
    case Tok::kImplies: return "':-'";
    case Tok::kDot: return "'.'";
    case Tok::kLeq: return "'<='";
    case Tok::kNewline: return "end of line";
    case Tok::kEnd: return "end of input";
  }
  return "?";
}

class Lexer {
 public:
  Lexer(std::string_view text, bool keep_newlines)
      : text_(text), keep_newlines_(keep_newlines) {}

  Token next() {
    for (;;) {
      if (pos_ >= text_.size()) return {Tok::kEnd, "", line_, col_};
      char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        continue;
      }
      if (c == '\n') {
        Token t{Tok::kNewline, "", line_, col_};
        advance();
        if (keep_newlines_) return t;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      break;
    }
    int line = line_, col = col_;
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        s += text_[pos_];
        advance();
      }
      return {Tok::kIdent, s, line, col};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string s;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        s += text_[pos_];
        advance();
      }
      return {Tok::kNumber, s, line, col};
    }
    auto two = text_.substr(pos_, 2);
    if (two == ":-") {
      advance();
      advance();
      return {Tok::kImplies, ":-", line, col};
    }
    if (two == "<=") {
      advance();
      advance();
      return {Tok::kLeq, "<=", line, col};
    }
    advance();
    switch (c) {
      case '(': return {Tok::kLParen, "(", line, col};
      case ')': return {Tok::kRParen, ")", line, col};
      case ',': return {Tok::kComma, ",", line, col};
      case '|': return {Tok::kBar, "|", line, col};
      case '.': return {Tok::kDot, ".", line, col};
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  bool keep_newlines_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::string_view text, bool keep_newlines)
      : lex_(text, keep_newlines), cur_(lex_.next()) {}

  const Token& peek() const { return cur_; }
  Token take() {
    Token t = cur_;
    cur_ = lex_.next();
    return t;
  }
  Token expect(Tok kind) {
    if (cur_.kind != kind) {
      throw ParseError(std::string("expected ") + tok_name(kind) + ", found " +
                           (cur_.text.empty() ? tok_name(cur_.kind)
                                              : "'" + cur_.text + "'"),
                       cur_.line, cur_.col);
    }
    return take();
  }
  bool accept(Tok kind) {
    if (cur_.kind != kind) return false;
    take();
    return true;
  }

 private:
  Lexer lex_;
  Token cur_;
};

struct RawAtom {
  Token name;
  std::vector<Token> vars;
};

RawAtom parse_atom(Parser& p) {
  RawAtom a{p.expect(Tok::kIdent), {}};
  p.expect(Tok::kLParen);
  if (p.peek().kind != Tok::kRParen) {
    a.vars.push_back(p.expect(Tok::kIdent));
    while (p.accept(Tok::kComma)) a.vars.push_back(p.expect(Tok::kIdent));
  }
  p.expect(Tok::kRParen);
  return a;
}

Atom resolve(const RawAtom& raw, Universe& u) {
  std::vector<int> order;
  VarSet seen;
  for (const auto& v : raw.vars) {
    int idx = u.intern(v.text);
    if (seen.contains(idx)) {
      throw ParseError("variable " + v.text + " repeated in atom " +
                           raw.name.text,
                       v.line, v.col);
    }
    seen |= VarSet::singleton(idx);
    order.push_back(idx);
  }
  return make_atom(raw.name.text, order);
}

void check_names(const std::vector<RawAtom>& atoms, std::set<std::string>& names) {
  for (const auto& a : atoms) {
    if (!names.insert(a.name.text).second) {
      throw ParseError("relation " + a.name.text + " used twice", a.name.line,
                       a.name.col);
    }
  }
}

std::string format_atom(const Atom& a, const Universe& u) {
  std::string s = a.name + "(";
  for (std::size_t i = 0; i < a.order.size(); ++i) {
    if (i) s += ",";
    s += u.name(a.order[i]);
  }
  return s + ")";
}

}  // namespace

Program parse_program(std::string_view text) {
  Parser p(text, false);
  std::vector<RawAtom> heads{parse_atom(p)};
  while (p.accept(Tok::kBar)) heads.push_back(parse_atom(p));
  p.expect(Tok::kImplies);
  std::vector<RawAtom> body{parse_atom(p)};
  while (p.accept(Tok::kComma)) body.push_back(parse_atom(p));
  p.expect(Tok::kDot);
  p.expect(Tok::kEnd);

  std::set<std::string> names;
  check_names(body, names);
  for (const auto& b : body) {
    if (b.vars.empty()) {
      throw ParseError("body atom " + b.name.text + " has no variables",
                       b.name.line, b.name.col);
    }
  }
  Universe u;
  Program prog;
  prog.is_query = heads.size() == 1;
  if (!prog.is_query) check_names(heads, names);
  std::vector<Atom> head_atoms;
  for (const auto& h : heads) head_atoms.push_back(resolve(h, u));
  Schema schema;
  for (const auto& b : body) schema.atoms.push_back(resolve(b, u));
  schema.validate();
  VarSet body_vars = schema.vars();
  for (std::size_t i = 0; i < heads.size(); ++i) {
    for (const auto& v : heads[i].vars) {
      if (!body_vars.contains(u.index_of(v.text))) {
        fail(ErrorCode::kHeadVarNotInBody,
             std::to_string(v.line) + ":" + std::to_string(v.col) +
                 ": head variable " + v.text + " does not occur in the body");
      }
    }
  }
  if (prog.is_query) {
    prog.query.universe = u;
    prog.query.head_name = head_atoms[0].name;
    prog.query.head_order = head_atoms[0].order;
    prog.query.free = head_atoms[0].vars;
    prog.query.body = std::move(schema);
    prog.query.validate();
  } else {
    prog.rule.universe = u;
    prog.rule.input = std::move(schema);
    prog.rule.output.atoms = std::move(head_atoms);
    prog.rule.output.validate();
    prog.rule.validate();
  }
  return prog;
}

std::string print_program(const Program& prog) {
  const Universe& u = prog.universe();
  std::string s;
  if (prog.is_query) {
    s = format_atom(make_atom(prog.query.head_name, prog.query.head_order), u);
  } else {
    for (std::size_t i = 0; i < prog.rule.output.atoms.size(); ++i) {
      if (i) s += " | ";
      s += format_atom(prog.rule.output.atoms[i], u);
    }
  }
  s += " :- ";
  const Schema& body = prog.body();
  for (std::size_t i = 0; i < body.atoms.size(); ++i) {
    if (i) s += ", ";
    s += format_atom(body.atoms[i], u);
  }
  return s + ".\n";
}

StatisticsProfile parse_stats(std::string_view text, const Universe& universe,
                              const Schema& schema) {
  Parser p(text, true);
  StatisticsProfile profile;
  for (;;) {
    while (p.accept(Tok::kNewline)) {
    }
    if (p.peek().kind == Tok::kEnd) break;
    Token kw = p.expect(Tok::kIdent);
    if (kw.text != "card" && kw.text != "deg") {
      throw ParseError("expected 'card' or 'deg', found '" + kw.text + "'",
                       kw.line, kw.col);
    }
    Token rel = p.expect(Tok::kIdent);
    const Atom* atom = schema.find(rel.text);
    if (!atom) {
      fail(ErrorCode::kUnknownRelation,
           std::to_string(rel.line) + ":" + std::to_string(rel.col) +
               ": unknown relation " + rel.text);
    }
    DegreeConstraint c;
    c.guard = rel.text;
    if (kw.text == "card") {
      c.y = atom->vars;
    } else {
      p.expect(Tok::kLParen);
      auto read_vars = [&](bool target) {
        VarSet out;
        if (p.peek().kind != Tok::kIdent) return out;
        do {
          Token v = p.expect(Tok::kIdent);
          int idx = universe.index_of(v.text);
          if (idx < 0 && target) {
            fail(ErrorCode::kNonGuardedConstraint,
                 std::to_string(v.line) + ":" + std::to_string(v.col) +
                     ": variable " + v.text + " is not in relation " + rel.text);
          }
          if (idx < 0) throw ParseError("unknown variable " + v.text, v.line, v.col);
          out |= VarSet::singleton(idx);
        } while (p.accept(Tok::kComma));
        return out;
      };
      c.y = read_vars(true);
      if (p.accept(Tok::kBar)) c.x = read_vars(false);
      p.expect(Tok::kRParen);
      if (!c.y.subset_of(atom->vars)) {
        fail(ErrorCode::kNonGuardedConstraint,
             std::to_string(rel.line) + ":" + std::to_string(rel.col) +
                 ": constrained variables " + universe.format(c.y - atom->vars) +
                 " are not in relation " + rel.text);
      }
      if (c.y.empty() || !c.x.disjoint(c.y)) {
        throw ParseError("degree constraint needs disjoint, nonempty targets",
                         rel.line, rel.col);
      }
    }
    p.expect(Tok::kLeq);
    c.bound = BigInt(p.expect(Tok::kNumber).text);
    Token end = p.peek();
    if (end.kind != Tok::kNewline && end.kind != Tok::kEnd) {
      p.expect(Tok::kNewline);
    }
    profile.constraints.push_back(std::move(c));
  }
  profile.validate(schema);
  return profile;
}

std::string constraint_label(const DegreeConstraint& c, const Universe& u,
                             const Schema& schema) {
  const Atom* a = schema.find(c.guard);
  if (a && c.x.empty() && c.y == a->vars) return c.guard;
  std::string s = c.guard + "(";
  bool first = true;
  for (int v : c.y.members()) {
    if (!first) s += ",";
    s += u.name(v);
    first = false;
  }
  s += "|";
  first = true;
  for (int v : c.x.members()) {
    if (!first) s += ",";
    s += u.name(v);
    first = false;
  }
  return s + ")";
}

std::string print_stats(const StatisticsProfile& profile,
                        const Universe& universe, const Schema& schema) {
  std::ostringstream out;
  for (const auto& c : profile.constraints) {
    const Atom* a = schema.find(c.guard);
    if (a && c.x.empty() && c.y == a->vars) {
      out << "card " << c.guard << " <= " << to_string(c.bound) << "\n";
      continue;
    }
    std::string label = constraint_label(c, universe, schema);
    out << "deg " << c.guard << " " << label.substr(c.guard.size()) << " <= "
        << to_string(c.bound) << "\n";
  }
  return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kMissingFile, "cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace panda
