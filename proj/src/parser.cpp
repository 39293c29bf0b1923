// Recursive-descent parser for the query grammar.
//
//   formula     := disjunction [ '->' formula ]
//   disjunction := conjunction { '|' conjunction }
//   conjunction := unary { '&' unary }
//   unary       := '!' unary
//                | '<' REL '>' unary | '[' REL ']' unary
//                | ('exists' | 'forall') VAR '.' formula
//                | '<' 'lam' VAR '.' formula '>' '(' term ')'
//                | '(' formula ')'
//                | term ('=' | '!=') term
//   term        := 'quoted' | ?x | %a | NAME | '@' NAME | '@' %a

#include <cctype>
#include <optional>

#include "modalq/errors.hpp"
#include "modalq/syntax.hpp"

namespace modalq::syntax {

namespace {

enum class Tok {
  Name,
  Quoted,
  ObjVar,
  ConVar,
  At,
  Lt,
  Gt,
  LBracket,
  RBracket,
  LParen,
  RParen,
  Bang,
  NotEqual,
  Equal,
  Amp,
  Pipe,
  Arrow,
  Dot,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End:
      return "end of input";
    case Tok::Quoted:
      return "'" + t.text + "'";
    case Tok::ObjVar:
      return "?" + t.text;
    case Tok::ConVar:
      return "%" + t.text;
    default:
      return "'" + t.text + "'";
  }
}

bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      SourcePos pos = here();
      if (at_ >= src_.size()) {
        out.push_back({Tok::End, "", pos});
        return out;
      }
      char c = src_[at_];
      auto single = [&](Tok k) {
        advance();
        out.push_back({k, std::string(1, c), pos});
      };
      switch (c) {
        case '@': single(Tok::At); continue;
        case '<': single(Tok::Lt); continue;
        case '>': single(Tok::Gt); continue;
        case '[': single(Tok::LBracket); continue;
        case ']': single(Tok::RBracket); continue;
        case '(': single(Tok::LParen); continue;
        case ')': single(Tok::RParen); continue;
        case '=': single(Tok::Equal); continue;
        case '&': single(Tok::Amp); continue;
        case '|': single(Tok::Pipe); continue;
        case '.': single(Tok::Dot); continue;
        default: break;
      }
      if (c == '!') {
        advance();
        if (peek() == '=') {
          advance();
          out.push_back({Tok::NotEqual, "!=", pos});
        } else {
          out.push_back({Tok::Bang, "!", pos});
        }
      } else if (c == '-') {
        advance();
        if (peek() != '>') throw SyntaxError(pos, "'-'", {"'->'"});
        advance();
        out.push_back({Tok::Arrow, "->", pos});
      } else if (c == '?' || c == '%') {
        advance();
        std::string name = take_name();
        if (name.empty()) throw SyntaxError(here(), describe_char(), {"variable name"});
        out.push_back({c == '?' ? Tok::ObjVar : Tok::ConVar, std::move(name), pos});
      } else if (c == '\'') {
        advance();
        out.push_back({Tok::Quoted, take_quoted(pos), pos});
      } else if (is_name_char(c)) {
        out.push_back({Tok::Name, take_name(), pos});
      } else {
        throw SyntaxError(pos, describe_char(), {});
      }
    }
  }

 private:
  char peek() const { return at_ < src_.size() ? src_[at_] : '\0'; }

  void advance() {
    if (src_[at_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++at_;
  }

  SourcePos here() const { return {line_, col_}; }

  std::string describe_char() const {
    if (at_ >= src_.size()) return "end of input";
    return "'" + std::string(1, src_[at_]) + "'";
  }

  void skip_space() {
    while (at_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[at_]))) advance();
  }

  std::string take_name() {
    std::string s;
    while (at_ < src_.size() && is_name_char(src_[at_])) {
      s += src_[at_];
      advance();
    }
    return s;
  }

  std::string take_quoted(SourcePos start) {
    std::string s;
    for (;;) {
      if (at_ >= src_.size()) throw SyntaxError(start, "unterminated quoted constant", {"closing quote"});
      char c = src_[at_];
      advance();
      if (c == '\'') return s;
      if (c == '\\') {
        if (at_ >= src_.size()) throw SyntaxError(start, "unterminated quoted constant", {"closing quote"});
        c = src_[at_];
        advance();
      }
      s += c;
    }
  }

  std::string_view src_;
  std::size_t at_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula parse_all() {
    Formula f = formula();
    expect(Tok::End, "end of input");
    return f;
  }

 private:
  const Token& cur() const { return toks_[at_]; }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_keyword(std::string_view kw) const { return at(Tok::Name) && cur().text == kw; }

  Token take() { return toks_[at_++]; }

  Token expect(Tok k, const std::string& what) {
    if (!at(k)) fail({what});
    return take();
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw SyntaxError(cur().pos, describe(cur()), std::move(expected));
  }

  Formula formula() {
    Formula lhs = disjunction();
    if (at(Tok::Arrow)) {
      take();
      return make_implies(std::move(lhs), formula());
    }
    return lhs;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (at(Tok::Pipe)) {
      take();
      f = make_or(std::move(f), conjunction());
    }
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    while (at(Tok::Amp)) {
      take();
      f = make_and(std::move(f), unary());
    }
    return f;
  }

  Variable variable() {
    if (at(Tok::ObjVar)) return object_var(take().text);
    if (at(Tok::ConVar)) return concept_var(take().text);
    fail({"variable (?x or %a)"});
  }

  std::string relation_name() {
    if (!at(Tok::Name) || is_keyword(cur().text)) fail({"relation name"});
    return take().text;
  }

  static bool is_keyword(std::string_view s) { return s == "exists" || s == "forall" || s == "lam"; }

  Formula unary() {
    if (at(Tok::Bang)) {
      take();
      return make_not(unary());
    }
    if (at(Tok::Lt)) {
      take();
      if (at_keyword("lam")) {
        take();
        return abstraction();
      }
      std::string rel = relation_name();
      expect(Tok::Gt, "'>'");
      return make_diamond(std::move(rel), unary());
    }
    if (at(Tok::LBracket)) {
      take();
      std::string rel = relation_name();
      expect(Tok::RBracket, "']'");
      return make_box(std::move(rel), unary());
    }
    if (at_keyword("exists") || at_keyword("forall")) {
      bool exists = take().text == "exists";
      Variable v = variable();
      expect(Tok::Dot, "'.'");
      Formula body = formula();
      return exists ? make_exists(std::move(v), std::move(body)) : make_forall(std::move(v), std::move(body));
    }
    if (at(Tok::LParen)) {
      take();
      Formula f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    return atom();
  }

  Formula abstraction() {
    Variable v = variable();
    expect(Tok::Dot, "'.'");
    Formula body = formula();
    expect(Tok::Gt, "'>'");
    expect(Tok::LParen, "'('");
    auto [arg, pos] = term();
    expect(Tok::RParen, "')'");
    if (kind_of(arg) != v.kind) {
      throw KindError(pos, "abstraction binder " + to_string(v) + " is " +
                               (v.kind == VarKind::Object ? "an object" : "a concept") + " variable but argument " +
                               render_term(arg) + " is " +
                               (kind_of(arg) == VarKind::Object ? "an object" : "a concept") + " term");
    }
    return make_abstraction(std::move(v), std::move(body), std::move(arg));
  }

  Formula atom() {
    auto [lhs, lpos] = term();
    bool equal;
    if (at(Tok::Equal)) {
      equal = true;
    } else if (at(Tok::NotEqual)) {
      equal = false;
    } else {
      fail({"'='", "'!='"});
    }
    take();
    auto [rhs, rpos] = term();
    require_object(lhs, lpos);
    require_object(rhs, rpos);
    return equal ? make_eq(std::move(lhs), std::move(rhs)) : make_neq(std::move(lhs), std::move(rhs));
  }

  static void require_object(const Term& t, SourcePos pos) {
    if (!is_object_term(t)) {
      throw KindError(pos, "concept term " + render_term(t) +
                               " cannot appear in an equality; relativize it with @ to compare its value");
    }
  }

  std::pair<Term, SourcePos> term() {
    SourcePos pos = cur().pos;
    switch (cur().kind) {
      case Tok::Quoted:
        return {ObjectConstant{take().text}, pos};
      case Tok::ObjVar:
        return {ObjectVariable{take().text}, pos};
      case Tok::ConVar:
        return {ConceptVariable{take().text}, pos};
      case Tok::Name:
        if (is_keyword(cur().text)) break;
        return {ConceptConstant{take().text}, pos};
      case Tok::At: {
        take();
        if (at(Tok::Name) && !is_keyword(cur().text)) return {Relativized{ConceptConstant{take().text}}, pos};
        if (at(Tok::ConVar)) return {Relativized{ConceptVariable{take().text}}, pos};
        if (at(Tok::ObjVar) || at(Tok::Quoted)) {
          throw KindError(cur().pos, "only concept terms can be relativized, not " + describe(cur()));
        }
        fail({"concept name", "concept variable"});
      }
      default:
        break;
    }
    fail({"term"});
  }

  std::vector<Token> toks_;
  std::size_t at_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(Lexer(text).run()).parse_all(); }

Variable parse_variable(std::string_view text) {
  auto toks = Lexer(text).run();
  if (toks.size() == 2 && (toks[0].kind == Tok::ObjVar || toks[0].kind == Tok::ConVar)) {
    return {toks[0].text, toks[0].kind == Tok::ObjVar ? VarKind::Object : VarKind::Concept};
  }
  throw SyntaxError(toks[0].pos, describe(toks[0]), {"variable (?x or %a)"});
}

ModalQuery parse_query(std::string_view text, const std::vector<std::string>& targets) {
  Formula f = parse_formula(text);
  std::vector<Variable> vars;
  vars.reserve(targets.size());
  for (const auto& t : targets) vars.push_back(parse_variable(t));
  return make_query(std::move(f), std::move(vars));
}

}  // namespace modalq::syntax
