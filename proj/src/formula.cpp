#include "speclint/formula.hpp"

#include <algorithm>

#include "speclint/errors.hpp"

namespace speclint {

std::string comparator_symbol(Comparator c) {
  switch (c) {
  case Comparator::Lt:
    return "<";
  case Comparator::Le:
    return "<=";
  case Comparator::Gt:
    return ">";
  case Comparator::Ge:
    return ">=";
  }
  return "?";
}

Atom Atom::proposition(std::string channel) {
  if (channel.empty()) {
    throw Error("proposition atom needs a channel name");
  }
  Atom a;
  a.is_proposition = true;
  a.channel = std::move(channel);
  return a;
}

Atom Atom::threshold(std::string channel, Comparator cmp, Rational bound) {
  if (channel.empty()) {
    throw Error("threshold atom needs a channel name");
  }
  Atom a;
  a.is_proposition = false;
  a.channel = std::move(channel);
  a.cmp = cmp;
  a.bound = bound;
  return a;
}

bool Atom::operator==(const Atom &other) const {
  if (is_proposition != other.is_proposition || channel != other.channel) {
    return false;
  }
  return is_proposition || (cmp == other.cmp && bound == other.bound);
}

TimeInterval::TimeInterval(Rational lo, Rational hi)
    : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.is_negative()) {
    throw Error("negative interval bound [" + lower.str() + "," + upper.str() +
                "]");
  }
  if (upper < lower) {
    throw Error("reversed interval bounds [" + lower.str() + "," +
                upper.str() + "]");
  }
}

std::string TimeInterval::str() const {
  return "[" + lower.str() + "," + upper.str() + "]";
}

std::string path_str(const Path &p) {
  std::string out = "/";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) {
      out += "/";
    }
    out += std::to_string(p[i]);
  }
  return out;
}

struct Formula::Node {
  NodeKind kind;
  Atom atom;            // kind == Atom
  TimeInterval window;  // temporal kinds
  std::vector<Formula> children;
};

namespace {

Formula::Node make_node(NodeKind kind) {
  Formula::Node n;
  n.kind = kind;
  return n;
}

} // namespace

Formula Formula::boolean(bool value) {
  static const auto true_node = std::make_shared<const Node>(
      make_node(NodeKind::True));
  static const auto false_node = std::make_shared<const Node>(
      make_node(NodeKind::False));
  return Formula(value ? true_node : false_node);
}

Formula Formula::atom(Atom a) {
  Node n = make_node(NodeKind::Atom);
  n.atom = std::move(a);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::proposition(const std::string &channel) {
  return atom(Atom::proposition(channel));
}

Formula Formula::threshold(const std::string &channel, Comparator cmp,
                           Rational bound) {
  return atom(Atom::threshold(channel, cmp, std::move(bound)));
}

Formula Formula::negation(Formula f) {
  Node n = make_node(NodeKind::Not);
  n.children.push_back(std::move(f));
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::conjunction(std::vector<Formula> children) {
  if (children.size() < 2) {
    throw Error("conjunction needs at least two children");
  }
  Node n = make_node(NodeKind::And);
  n.children = std::move(children);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::disjunction(std::vector<Formula> children) {
  if (children.size() < 2) {
    throw Error("disjunction needs at least two children");
  }
  Node n = make_node(NodeKind::Or);
  n.children = std::move(children);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::implication(Formula antecedent, Formula consequent) {
  Node n = make_node(NodeKind::Implies);
  n.children.push_back(std::move(antecedent));
  n.children.push_back(std::move(consequent));
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::always(TimeInterval window, Formula f) {
  Node n = make_node(NodeKind::Always);
  n.window = std::move(window);
  n.children.push_back(std::move(f));
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::eventually(TimeInterval window, Formula f) {
  Node n = make_node(NodeKind::Eventually);
  n.window = std::move(window);
  n.children.push_back(std::move(f));
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::until(TimeInterval window, Formula left, Formula right) {
  Node n = make_node(NodeKind::Until);
  n.window = std::move(window);
  n.children.push_back(std::move(left));
  n.children.push_back(std::move(right));
  return Formula(std::make_shared<const Node>(std::move(n)));
}

NodeKind Formula::kind() const { return node_->kind; }

const Atom &Formula::atom_data() const {
  if (node_->kind != NodeKind::Atom) {
    throw Error("atom_data() on a non-atom node");
  }
  return node_->atom;
}

const TimeInterval &Formula::window() const {
  switch (node_->kind) {
  case NodeKind::Always:
  case NodeKind::Eventually:
  case NodeKind::Until:
    return node_->window;
  default:
    throw Error("window() on a non-temporal node");
  }
}

const std::vector<Formula> &Formula::children() const {
  return node_->children;
}

const Formula &Formula::child(std::size_t i) const {
  return node_->children.at(i);
}

std::size_t Formula::arity() const { return node_->children.size(); }

bool Formula::operator==(const Formula &other) const {
  if (node_ == other.node_) {
    return true;
  }
  if (node_->kind != other.node_->kind) {
    return false;
  }
  switch (node_->kind) {
  case NodeKind::True:
  case NodeKind::False:
    return true;
  case NodeKind::Atom:
    return node_->atom == other.node_->atom;
  case NodeKind::Always:
  case NodeKind::Eventually:
  case NodeKind::Until:
    if (!(node_->window == other.node_->window)) {
      return false;
    }
    break;
  default:
    break;
  }
  if (node_->children.size() != other.node_->children.size()) {
    return false;
  }
  for (std::size_t i = 0; i < node_->children.size(); ++i) {
    if (!(node_->children[i] == other.node_->children[i])) {
      return false;
    }
  }
  return true;
}

const Formula &Formula::subformula(const Path &p) const {
  const Formula *cur = this;
  for (std::size_t idx : p) {
    if (idx >= cur->arity()) {
      throw Error("path " + path_str(p) + " does not resolve in the formula");
    }
    cur = &cur->child(idx);
  }
  return *cur;
}

Formula Formula::replaced(const Path &p, const Formula &replacement) const {
  if (p.empty()) {
    return replacement;
  }
  std::size_t idx = p.front();
  if (idx >= arity()) {
    throw Error("path " + path_str(p) + " does not resolve in the formula");
  }
  std::vector<Formula> kids = node_->children;
  kids[idx] = kids[idx].replaced(Path(p.begin() + 1, p.end()), replacement);
  Node n = *node_;
  n.children = std::move(kids);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

namespace {

std::string atom_text(const Atom &a) {
  if (a.is_proposition) {
    return a.channel;
  }
  return "(" + a.channel + " " + comparator_symbol(a.cmp) + " " +
         a.bound.str() + ")";
}

void print_rec(const Formula &f, std::string &out) {
  switch (f.kind()) {
  case NodeKind::True:
    out += "true";
    return;
  case NodeKind::False:
    out += "false";
    return;
  case NodeKind::Atom:
    out += atom_text(f.atom_data());
    return;
  case NodeKind::Not:
    out += "(!";
    print_rec(f.child(0), out);
    out += ")";
    return;
  case NodeKind::And:
  case NodeKind::Or: {
    const char *sep = f.kind() == NodeKind::And ? " /\\ " : " \\/ ";
    out += "(";
    for (std::size_t i = 0; i < f.arity(); ++i) {
      if (i > 0) {
        out += sep;
      }
      print_rec(f.child(i), out);
    }
    out += ")";
    return;
  }
  case NodeKind::Implies:
    out += "(";
    print_rec(f.child(0), out);
    out += " -> ";
    print_rec(f.child(1), out);
    out += ")";
    return;
  case NodeKind::Always:
  case NodeKind::Eventually:
    out += "(";
    out += f.kind() == NodeKind::Always ? "G" : "F";
    out += f.window().str();
    print_rec(f.child(0), out);
    out += ")";
    return;
  case NodeKind::Until:
    out += "(";
    print_rec(f.child(0), out);
    out += " U";
    out += f.window().str();
    out += " ";
    print_rec(f.child(1), out);
    out += ")";
    return;
  }
}

} // namespace

std::string to_text(const Formula &f) {
  std::string out;
  print_rec(f, out);
  return out;
}

Rational horizon(const Formula &f) {
  switch (f.kind()) {
  case NodeKind::True:
  case NodeKind::False:
  case NodeKind::Atom:
    return Rational(0);
  case NodeKind::Not:
    return horizon(f.child(0));
  case NodeKind::And:
  case NodeKind::Or:
  case NodeKind::Implies: {
    Rational h(0);
    for (const Formula &c : f.children()) {
      h = std::max(h, horizon(c));
    }
    return h;
  }
  case NodeKind::Always:
  case NodeKind::Eventually:
    return f.window().upper + horizon(f.child(0));
  case NodeKind::Until:
    return f.window().upper + std::max(horizon(f.child(0)),
                                       horizon(f.child(1)));
  }
  return Rational(0);
}

FragmentClass fragment_class(const Formula &f) {
  if (f.kind() == NodeKind::Until) {
    return FragmentClass::Full;
  }
  for (const Formula &c : f.children()) {
    if (fragment_class(c) == FragmentClass::Full) {
      return FragmentClass::Full;
    }
  }
  return FragmentClass::BoxDiamond;
}

namespace {

void collect_implications(const Formula &f, Path &path,
                          std::vector<ImplicationOccurrence> &out) {
  if (f.kind() == NodeKind::Implies) {
    out.push_back({path, f.child(0)});
  }
  for (std::size_t i = 0; i < f.arity(); ++i) {
    path.push_back(i);
    collect_implications(f.child(i), path, out);
    path.pop_back();
  }
}

} // namespace

std::vector<ImplicationOccurrence> implication_occurrences(const Formula &f) {
  std::vector<ImplicationOccurrence> out;
  Path path;
  collect_implications(f, path, out);
  return out;
}

Formula antecedent_failure_mutation(const Formula &f, const Path &occ) {
  const Formula &node = f.subformula(occ);
  if (node.kind() != NodeKind::Implies) {
    throw Error("path " + path_str(occ) +
                " does not address an implication node");
  }
  TimeInterval window(Rational(0), horizon(f));
  return Formula::always(window, Formula::negation(node.child(0)));
}

} // namespace speclint
