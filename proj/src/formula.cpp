#include "okra/formula.hpp"

#include <atomic>
#include <cassert>
#include <cctype>
#include <set>
#include <utility>

#include "okra/errors.hpp"

namespace okra {

namespace {

std::atomic<std::uint64_t> next_id{1};

Formula make(Kind k, std::string name, std::shared_ptr<const Node> l,
             std::shared_ptr<const Node> r) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->id = next_id.fetch_add(1, std::memory_order_relaxed);
  n->name = std::move(name);
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return Formula(std::move(n));
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_reserved(std::string_view s) {
  return s == "K" || s == "O" || s == "A" || s == "true" || s == "false";
}

}  // namespace

bool valid_atom_name(std::string_view s) {
  if (s.empty() || !is_ident_start(s[0])) return false;
  for (char c : s)
    if (!is_ident_char(c)) return false;
  return !is_reserved(s);
}

Formula::Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {
  assert(node_ != nullptr);
}

bool Formula::operator==(const Formula& other) const {
  const Node* a = node_.get();
  const Node* b = other.node_.get();
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Kind::Atom:
      return a->name == b->name;
    case Kind::True:
    case Kind::False:
      return true;
    case Kind::Not:
    case Kind::Knows:
    case Kind::Only:
    case Kind::Abd:
      return left() == other.left();
    default:
      return left() == other.left() && right() == other.right();
  }
}

std::string Formula::str() const { return to_string(*this); }

Formula atom(std::string name) {
  if (!valid_atom_name(name))
    throw std::invalid_argument("invalid atom name: '" + name + "'");
  return make(Kind::Atom, std::move(name), nullptr, nullptr);
}

Formula truth() { return make(Kind::True, {}, nullptr, nullptr); }
Formula falsity() { return make(Kind::False, {}, nullptr, nullptr); }

Formula negate(Formula f) { return make(Kind::Not, {}, f.ptr(), nullptr); }
Formula knows(Formula f) { return make(Kind::Knows, {}, f.ptr(), nullptr); }
Formula only(Formula f) { return make(Kind::Only, {}, f.ptr(), nullptr); }
Formula abd(Formula f) { return make(Kind::Abd, {}, f.ptr(), nullptr); }

Formula conj(Formula a, Formula b) {
  return make(Kind::And, {}, a.ptr(), b.ptr());
}
Formula disj(Formula a, Formula b) {
  return make(Kind::Or, {}, a.ptr(), b.ptr());
}
Formula implies(Formula a, Formula b) {
  return make(Kind::Implies, {}, a.ptr(), b.ptr());
}
Formula pref(Formula antecedent, Formula consequent) {
  return make(Kind::Pref, {}, antecedent.ptr(), consequent.ptr());
}

Formula conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return truth();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
  return acc;
}

Formula disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return falsity();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
  return acc;
}

bool contains_kind(const Formula& f, Kind k) {
  if (f.kind() == k) return true;
  switch (f.kind()) {
    case Kind::Atom:
    case Kind::True:
    case Kind::False:
      return false;
    case Kind::Not:
    case Kind::Knows:
    case Kind::Only:
    case Kind::Abd:
      return contains_kind(f.left(), k);
    default:
      return contains_kind(f.left(), k) || contains_kind(f.right(), k);
  }
}

bool contains_abd(const Formula& f) { return contains_kind(f, Kind::Abd); }

bool is_objective(const Formula& f) {
  return !contains_kind(f, Kind::Knows) && !contains_kind(f, Kind::Only) &&
         !contains_kind(f, Kind::Abd) && !contains_kind(f, Kind::Pref);
}

bool is_abductive(const Formula& f) {
  return f.kind() == Kind::Abd && is_objective(f.left());
}

int depth(const Formula& f) {
  switch (f.kind()) {
    case Kind::Atom:
    case Kind::True:
    case Kind::False:
      return 0;
    case Kind::Not:
    case Kind::Knows:
    case Kind::Only:
    case Kind::Abd:
      return 1 + depth(f.left());
    default:
      return 1 + std::max(depth(f.left()), depth(f.right()));
  }
}

std::size_t node_count(const Formula& f) {
  switch (f.kind()) {
    case Kind::Atom:
    case Kind::True:
    case Kind::False:
      return 1;
    case Kind::Not:
    case Kind::Knows:
    case Kind::Only:
    case Kind::Abd:
      return 1 + node_count(f.left());
    default:
      return 1 + node_count(f.left()) + node_count(f.right());
  }
}

namespace {
void collect_atoms(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Kind::Atom:
      out.insert(f.atom_name());
      return;
    case Kind::True:
    case Kind::False:
      return;
    case Kind::Not:
    case Kind::Knows:
    case Kind::Only:
    case Kind::Abd:
      collect_atoms(f.left(), out);
      return;
    default:
      collect_atoms(f.left(), out);
      collect_atoms(f.right(), out);
  }
}
}  // namespace

std::vector<std::string> atoms_of(const Formula& f) {
  std::set<std::string> s;
  collect_atoms(f, s);
  return {s.begin(), s.end()};
}

namespace {

bool eval_assignment(const Formula& f, const std::set<std::string>& true_atoms) {
  switch (f.kind()) {
    case Kind::Atom:
      return true_atoms.count(f.atom_name()) != 0;
    case Kind::True:
      return true;
    case Kind::False:
      return false;
    case Kind::Not:
      return !eval_assignment(f.left(), true_atoms);
    case Kind::And:
      return eval_assignment(f.left(), true_atoms) &&
             eval_assignment(f.right(), true_atoms);
    case Kind::Or:
      return eval_assignment(f.left(), true_atoms) ||
             eval_assignment(f.right(), true_atoms);
    case Kind::Implies:
      return !eval_assignment(f.left(), true_atoms) ||
             eval_assignment(f.right(), true_atoms);
    default:
      throw eval_error("truth-table check on a non-objective formula");
  }
}

// Runs body over every assignment to the atoms of the given formulas.
template <typename Body>
void each_assignment(std::span<const Formula> fs, Body body) {
  std::set<std::string> names;
  for (const Formula& f : fs) collect_atoms(f, names);
  const std::vector<std::string> atoms(names.begin(), names.end());
  if (atoms.size() > 20)
    throw eval_error("truth-table check over more than 20 atoms");
  for (std::uint32_t bits = 0; bits < (1u << atoms.size()); ++bits) {
    std::set<std::string> on;
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if ((bits >> i) & 1) on.insert(atoms[i]);
    if (!body(on)) return;
  }
}

}  // namespace

bool taut_entails(std::span<const Formula> premises, const Formula& conclusion) {
  std::vector<Formula> all(premises.begin(), premises.end());
  all.push_back(conclusion);
  bool ok = true;
  each_assignment(all, [&](const std::set<std::string>& on) {
    for (const Formula& p : premises)
      if (!eval_assignment(p, on)) return true;
    if (!eval_assignment(conclusion, on)) {
      ok = false;
      return false;
    }
    return true;
  });
  return ok;
}

bool satisfiable(std::span<const Formula> formulas) {
  bool found = false;
  each_assignment(formulas, [&](const std::set<std::string>& on) {
    for (const Formula& f : formulas)
      if (!eval_assignment(f, on)) return true;
    found = true;
    return false;
  });
  return found;
}

// Printing. Binders from loosest to tightest get levels 0..5; a child is
// parenthesised exactly when its level is below what its position requires.
// -> and > are printed right-associatively, | and & left-associatively,
// matching the parser, so parse(to_string(f)) == f structurally.
namespace {

int print_level(Kind k) {
  switch (k) {
    case Kind::Implies: return 0;
    case Kind::Pref: return 1;
    case Kind::Or: return 2;
    case Kind::And: return 3;
    case Kind::Not:
    case Kind::Knows:
    case Kind::Only:
    case Kind::Abd: return 4;
    default: return 5;
  }
}

void print(const Formula& f, int required, std::string& out) {
  const bool parens = print_level(f.kind()) < required;
  if (parens) out += '(';
  switch (f.kind()) {
    case Kind::Atom:
      out += f.atom_name();
      break;
    case Kind::True:
      out += "true";
      break;
    case Kind::False:
      out += "false";
      break;
    case Kind::Not:
      out += '~';
      print(f.left(), 4, out);
      break;
    case Kind::Knows:
      out += "K ";
      print(f.left(), 4, out);
      break;
    case Kind::Only:
      out += "O ";
      print(f.left(), 4, out);
      break;
    case Kind::Abd:
      out += "A ";
      print(f.left(), 4, out);
      break;
    case Kind::And:
      print(f.left(), 3, out);
      out += " & ";
      print(f.right(), 4, out);
      break;
    case Kind::Or:
      print(f.left(), 2, out);
      out += " | ";
      print(f.right(), 3, out);
      break;
    case Kind::Pref:
      print(f.left(), 2, out);
      out += " > ";
      print(f.right(), 1, out);
      break;
    case Kind::Implies:
      print(f.left(), 1, out);
      out += " -> ";
      print(f.right(), 0, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  print(f, 0, out);
  return out;
}

// Parsing: hand-rolled lexer plus recursive descent.
namespace {

enum class Tok {
  LParen, RParen, Tilde, AndOp, OrOp, Arrow, Greater,
  KwK, KwO, KwA, KwTrue, KwFalse, Ident, End,
};

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;  // Ident only
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

private:
  void advance() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    tok_.pos = pos_;
    tok_.text.clear();
    if (pos_ >= src_.size()) {
      tok_.kind = Tok::End;
      return;
    }
    char c = src_[pos_];
    switch (c) {
      case '(': tok_.kind = Tok::LParen; ++pos_; return;
      case ')': tok_.kind = Tok::RParen; ++pos_; return;
      case '~': tok_.kind = Tok::Tilde; ++pos_; return;
      case '&': tok_.kind = Tok::AndOp; ++pos_; return;
      case '|': tok_.kind = Tok::OrOp; ++pos_; return;
      case '>': tok_.kind = Tok::Greater; ++pos_; return;
      case '-':
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
          tok_.kind = Tok::Arrow;
          pos_ += 2;
          return;
        }
        throw parse_error(pos_, "expected '->'");
      default:
        break;
    }
    if (!is_ident_start(c))
      throw parse_error(pos_, std::string("unexpected character '") + c + "'");
    std::size_t start = pos_;
    while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
    std::string_view word = src_.substr(start, pos_ - start);
    if (word == "K") tok_.kind = Tok::KwK;
    else if (word == "O") tok_.kind = Tok::KwO;
    else if (word == "A") tok_.kind = Tok::KwA;
    else if (word == "true") tok_.kind = Tok::KwTrue;
    else if (word == "false") tok_.kind = Tok::KwFalse;
    else {
      tok_.kind = Tok::Ident;
      tok_.text = std::string(word);
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token tok_;
};

class Parser {
public:
  explicit Parser(std::string_view src) : lex_(src) {}

  Formula run() {
    Formula f = parse_implication();
    if (lex_.peek().kind != Tok::End)
      throw parse_error(lex_.peek().pos, "unexpected trailing input");
    return f;
  }

private:
  Formula parse_implication() {
    Formula a = parse_conditional();
    if (lex_.peek().kind == Tok::Arrow) {
      lex_.take();
      return implies(a, parse_implication());
    }
    return a;
  }

  Formula parse_conditional() {
    Formula a = parse_or();
    if (lex_.peek().kind == Tok::Greater) {
      lex_.take();
      return pref(a, parse_conditional());
    }
    return a;
  }

  Formula parse_or() {
    Formula a = parse_and();
    while (lex_.peek().kind == Tok::OrOp) {
      lex_.take();
      a = disj(a, parse_and());
    }
    return a;
  }

  Formula parse_and() {
    Formula a = parse_unary();
    while (lex_.peek().kind == Tok::AndOp) {
      lex_.take();
      a = conj(a, parse_unary());
    }
    return a;
  }

  Formula parse_unary() {
    switch (lex_.peek().kind) {
      case Tok::Tilde: lex_.take(); return negate(parse_unary());
      case Tok::KwK: lex_.take(); return knows(parse_unary());
      case Tok::KwO: lex_.take(); return only(parse_unary());
      case Tok::KwA: lex_.take(); return abd(parse_unary());
      default: return parse_primary();
    }
  }

  Formula parse_primary() {
    Token t = lex_.peek();
    switch (t.kind) {
      case Tok::LParen: {
        lex_.take();
        Formula f = parse_implication();
        if (lex_.peek().kind != Tok::RParen)
          throw parse_error(lex_.peek().pos, "expected ')'");
        lex_.take();
        return f;
      }
      case Tok::KwTrue: lex_.take(); return truth();
      case Tok::KwFalse: lex_.take(); return falsity();
      case Tok::Ident: lex_.take(); return atom(t.text);
      default:
        throw parse_error(t.pos, "expected a formula");
    }
  }

  Lexer lex_;
};

}  // namespace

Formula parse(std::string_view text) { return Parser(text).run(); }

}  // namespace okra
