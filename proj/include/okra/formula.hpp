#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace okra {

enum class Kind : std::uint8_t {
  Atom,
  True,
  False,
  Not,
  And,
  Or,
  Implies,
  Knows,    // K f: f holds at every accessible world
  Only,     // O f: the accessible worlds are exactly the worlds satisfying f
  Abd,      // A f: some admissible witness a has O a and K (f -> a)
  Pref,     // g > h: h holds at the most plausible accessible g-worlds
};

// Immutable AST node. ids are process-unique and strictly increasing, so
// evaluators can use them as indices into flat memo tables.
struct Node {
  Kind kind;
  std::uint64_t id;
  std::string name;  // Atom only
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;  // binary kinds only
};

// Value-semantic handle to a Node. Never null.
class Formula {
public:
  explicit Formula(std::shared_ptr<const Node> n);

  Kind kind() const { return node_->kind; }
  std::uint64_t id() const { return node_->id; }
  const std::string& atom_name() const { return node_->name; }

  Formula left() const { return Formula(node_->lhs); }
  Formula right() const { return Formula(node_->rhs); }

  const Node* raw() const { return node_.get(); }
  const std::shared_ptr<const Node>& ptr() const { return node_; }

  // Structural equality; node identity is only a fast path.
  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }

  std::string str() const;

private:
  std::shared_ptr<const Node> node_;
};

// [A-Za-z][A-Za-z0-9_]* and not one of the reserved words.
bool valid_atom_name(std::string_view s);

Formula atom(std::string name);  // rejects invalid and reserved names
Formula truth();
Formula falsity();
Formula negate(Formula f);
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula implies(Formula a, Formula b);
Formula knows(Formula f);
Formula only(Formula f);
Formula abd(Formula f);
Formula pref(Formula antecedent, Formula consequent);

// Left folds. Empty input collapses to the neutral element.
Formula conj_all(const std::vector<Formula>& fs);
Formula disj_all(const std::vector<Formula>& fs);

bool contains_kind(const Formula& f, Kind k);
bool contains_abd(const Formula& f);
bool is_objective(const Formula& f);   // no Knows/Only/Abd/Pref anywhere
bool is_abductive(const Formula& f);   // A g with g objective

int depth(const Formula& f);  // atoms and constants have depth 0
std::size_t node_count(const Formula& f);
std::vector<std::string> atoms_of(const Formula& f);  // sorted, unique

// Truth-table checks, independent of any model. Only objective formulas
// qualify; modal subformulas or more than 20 distinct atoms raise eval_error.
bool taut_entails(std::span<const Formula> premises, const Formula& conclusion);
bool satisfiable(std::span<const Formula> formulas);

std::string to_string(const Formula& f);

// Grammar, loosest to tightest: -> (right assoc), > (right assoc), |, &,
// then prefix ~ K O A. Atom names are [A-Za-z][A-Za-z0-9_]* minus the
// reserved words K, O, A, true, false. Throws parse_error.
Formula parse(std::string_view text);

}  // namespace okra
