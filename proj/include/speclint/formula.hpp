#pragma once

#include <memory>
#include <string>
#include <vector>

#include "speclint/rational.hpp"

namespace speclint {

enum class Comparator { Lt, Le, Gt, Ge };

std::string comparator_symbol(Comparator c);

/* Either a numeric threshold over a signal channel ("v > 100") or a bare
 * 0/1-valued proposition ("req"). Equality comparators are not allowed:
 * their robustness degenerates (never positive). */
struct Atom {
  bool is_proposition = false;
  std::string channel;
  Comparator cmp = Comparator::Gt; // threshold only
  Rational bound;                  // threshold only

  static Atom proposition(std::string channel);
  static Atom threshold(std::string channel, Comparator cmp, Rational bound);

  bool operator==(const Atom &other) const;
};

/* Closed time window [lower, upper] with 0 <= lower <= upper, both finite.
 * Unbounded temporal operators are intentionally not representable. */
struct TimeInterval {
  Rational lower;
  Rational upper;

  TimeInterval() = default;
  TimeInterval(Rational lo, Rational hi);

  std::string str() const;
  bool operator==(const TimeInterval &other) const {
    return lower == other.lower && upper == other.upper;
  }
};

enum class NodeKind {
  True,
  False,
  Atom,
  Not,
  And,
  Or,
  Implies,
  Always,
  Eventually,
  Until,
};

/* Sequence of child indices from the root; addresses one subformula
 * occurrence. */
using Path = std::vector<std::size_t>;

std::string path_str(const Path &p);

/* Immutable MITL syntax tree. Copies share structure; nothing mutates a
 * node after construction, so formulas are safe to share across threads. */
class Formula {
public:
  Formula() : Formula(boolean(true)) {}

  static Formula boolean(bool value);
  static Formula atom(Atom a);
  static Formula proposition(const std::string &channel);
  static Formula threshold(const std::string &channel, Comparator cmp,
                           Rational bound);
  static Formula negation(Formula f);
  static Formula conjunction(std::vector<Formula> children); // size >= 2
  static Formula disjunction(std::vector<Formula> children); // size >= 2
  static Formula implication(Formula antecedent, Formula consequent);
  static Formula always(TimeInterval window, Formula f);
  static Formula eventually(TimeInterval window, Formula f);
  static Formula until(TimeInterval window, Formula left, Formula right);

  NodeKind kind() const;
  const Atom &atom_data() const;          // kind() == Atom
  const TimeInterval &window() const;     // temporal kinds
  const std::vector<Formula> &children() const;
  const Formula &child(std::size_t i) const;
  std::size_t arity() const;

  /* Stable identity of the underlying node, usable as a memoization key
   * within one evaluation. */
  const void *id() const { return node_.get(); }

  bool operator==(const Formula &other) const; // structural equality

  const Formula &subformula(const Path &p) const;
  Formula replaced(const Path &p, const Formula &replacement) const;

private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/* Fully parenthesized canonical text; parse(to_text(f)) == f. */
std::string to_text(const Formula &f);

/* Total look-ahead duration: atoms need 0, temporal operators add their
 * upper bound. Traces shorter than the horizon cannot give a verdict. */
Rational horizon(const Formula &f);

enum class FragmentClass { BoxDiamond, Full };

/* BoxDiamond iff no Until node occurs anywhere in the tree. */
FragmentClass fragment_class(const Formula &f);

/* All Implies nodes in depth-first pre-order, with their antecedents. */
struct ImplicationOccurrence {
  Path path;
  Formula antecedent;
};
std::vector<ImplicationOccurrence> implication_occurrences(const Formula &f);

/* Builds the antecedent-failure mutation for the Implies node at `occ`:
 * always([0, horizon(f)], not(antecedent)), the assertion that the
 * antecedent never happens over the formula's own horizon. Throws Error
 * if the path does not address an Implies node. */
Formula antecedent_failure_mutation(const Formula &f, const Path &occ);

} // namespace speclint
