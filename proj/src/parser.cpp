#include "speclint/parser.hpp"

#include <cctype>
#include <optional>
#include <vector>

#include "speclint/errors.hpp"

namespace speclint {

namespace {

enum class Tok {
  Ident,
  Number,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Not,     // "not" or "!"
  AndOp,   // "and" or "/\"
  OrOp,    // "or" or "\/"
  Arrow,   // ->
  Iff,     // <->
  Lt,
  Le,
  Gt,
  Ge,
  EqEq,    // rejected with a dedicated diagnostic
  Minus,
  Slash,
  Always,     // G, always
  Eventually, // F, eventually
  Until,      // U
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
public:
  explicit Lexer(const std::string &src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_ws();
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", line_, col_});
        return out;
      }
      out.push_back(next());
    }
  }

private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      advance();
    }
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  [[noreturn]] void fail(const std::string &msg) {
    throw ParseError(msg, line_, col_);
  }

  Token make(Tok kind, std::string text, int line, int col) {
    return {kind, std::move(text), line, col};
  }

  Token next() {
    int line = line_;
    int col = col_;
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_')) {
        word += src_[pos_];
        advance();
      }
      if (word == "true" || word == "false") {
        return make(Tok::Ident, word, line, col); // resolved by the parser
      }
      if (word == "not") {
        return make(Tok::Not, word, line, col);
      }
      if (word == "and") {
        return make(Tok::AndOp, word, line, col);
      }
      if (word == "or") {
        return make(Tok::OrOp, word, line, col);
      }
      if (word == "G" || word == "always") {
        return make(Tok::Always, word, line, col);
      }
      if (word == "F" || word == "eventually") {
        return make(Tok::Eventually, word, line, col);
      }
      if (word == "U") {
        return make(Tok::Until, word, line, col);
      }
      return make(Tok::Ident, word, line, col);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      bool seen_dot = false;
      while (pos_ < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
              (src_[pos_] == '.' && !seen_dot))) {
        seen_dot = seen_dot || src_[pos_] == '.';
        num += src_[pos_];
        advance();
      }
      return make(Tok::Number, num, line, col);
    }
    switch (c) {
    case '(':
      advance();
      return make(Tok::LParen, "(", line, col);
    case ')':
      advance();
      return make(Tok::RParen, ")", line, col);
    case '[':
      advance();
      return make(Tok::LBracket, "[", line, col);
    case ']':
      advance();
      return make(Tok::RBracket, "]", line, col);
    case ',':
      advance();
      return make(Tok::Comma, ",", line, col);
    case '!':
      advance();
      return make(Tok::Not, "!", line, col);
    case '-':
      advance();
      if (pos_ < src_.size() && src_[pos_] == '>') {
        advance();
        return make(Tok::Arrow, "->", line, col);
      }
      return make(Tok::Minus, "-", line, col);
    case '<':
      advance();
      if (pos_ < src_.size() && src_[pos_] == '=') {
        advance();
        return make(Tok::Le, "<=", line, col);
      }
      if (pos_ + 1 < src_.size() && src_[pos_] == '-' && src_[pos_ + 1] == '>') {
        advance();
        advance();
        return make(Tok::Iff, "<->", line, col);
      }
      return make(Tok::Lt, "<", line, col);
    case '>':
      advance();
      if (pos_ < src_.size() && src_[pos_] == '=') {
        advance();
        return make(Tok::Ge, ">=", line, col);
      }
      return make(Tok::Gt, ">", line, col);
    case '=':
      advance();
      if (pos_ < src_.size() && src_[pos_] == '=') {
        advance();
        return make(Tok::EqEq, "==", line, col);
      }
      fail("unexpected '='");
    case '/':
      advance();
      if (pos_ < src_.size() && src_[pos_] == '\\') {
        advance();
        return make(Tok::AndOp, "/\\", line, col);
      }
      return make(Tok::Slash, "/", line, col);
    case '\\':
      advance();
      if (pos_ < src_.size() && src_[pos_] == '/') {
        advance();
        return make(Tok::OrOp, "\\/", line, col);
      }
      fail("unexpected '\\'");
    default:
      fail(std::string("unexpected character '") + c + "'");
    }
  }

  const std::string &src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Formula run() {
    Formula f = parse_iff();
    expect(Tok::End, "end of input");
    return f;
  }

private:
  const Token &peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }

  const Token &take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  bool accept(Tok kind) {
    if (peek().kind == kind) {
      ++pos_;
      return true;
    }
    return false;
  }

  const Token &expect(Tok kind, const std::string &what) {
    if (peek().kind != kind) {
      fail("expected " + what + ", found '" + describe(peek()) + "'");
    }
    return toks_[pos_++];
  }

  [[noreturn]] void fail(const std::string &msg) const {
    const Token &t = peek();
    throw ParseError(msg, t.line, t.column);
  }

  static std::string describe(const Token &t) {
    return t.kind == Tok::End ? "end of input" : t.text;
  }

  Formula parse_iff() {
    Formula left = parse_imp();
    while (accept(Tok::Iff)) {
      Formula right = parse_imp();
      // a <-> b desugars to (a -> b) /\ (b -> a); the syntax tree has no
      // biconditional node.
      left = Formula::conjunction({Formula::implication(left, right),
                                   Formula::implication(right, left)});
    }
    return left;
  }

  Formula parse_imp() {
    std::vector<Formula> parts;
    parts.push_back(parse_or());
    while (accept(Tok::Arrow)) {
      parts.push_back(parse_or());
    }
    Formula f = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;) {
      f = Formula::implication(parts[i], f);
    }
    return f;
  }

  Formula parse_or() {
    std::vector<Formula> parts;
    parts.push_back(parse_and());
    while (accept(Tok::OrOp)) {
      parts.push_back(parse_and());
    }
    if (parts.size() == 1) {
      return parts.front();
    }
    return Formula::disjunction(std::move(parts));
  }

  Formula parse_and() {
    std::vector<Formula> parts;
    parts.push_back(parse_unary());
    while (accept(Tok::AndOp)) {
      parts.push_back(parse_unary());
    }
    if (parts.size() == 1) {
      return parts.front();
    }
    return Formula::conjunction(std::move(parts));
  }

  Formula parse_unary() {
    if (accept(Tok::Not)) {
      return Formula::negation(parse_unary());
    }
    if (peek().kind == Tok::Always || peek().kind == Tok::Eventually) {
      Tok op = take().kind;
      TimeInterval window = parse_interval();
      Formula body = parse_unary();
      return op == Tok::Always ? Formula::always(window, std::move(body))
                               : Formula::eventually(window, std::move(body));
    }
    return parse_primary();
  }

  Formula parse_primary() {
    Formula left = parse_primary_unit();
    while (peek().kind == Tok::Until) {
      take();
      TimeInterval window = parse_interval();
      Formula right = parse_primary_unit();
      left = Formula::until(window, std::move(left), std::move(right));
    }
    return left;
  }

  Formula parse_primary_unit() {
    if (accept(Tok::LParen)) {
      Formula f = parse_iff();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (peek().kind == Tok::Ident) {
      const Token &id = take();
      if (id.text == "true") {
        return Formula::boolean(true);
      }
      if (id.text == "false") {
        return Formula::boolean(false);
      }
      return parse_atom_tail(id);
    }
    fail("expected a formula");
  }

  Formula parse_atom_tail(const Token &ident) {
    std::optional<Comparator> cmp;
    switch (peek().kind) {
    case Tok::Lt:
      cmp = Comparator::Lt;
      break;
    case Tok::Le:
      cmp = Comparator::Le;
      break;
    case Tok::Gt:
      cmp = Comparator::Gt;
      break;
    case Tok::Ge:
      cmp = Comparator::Ge;
      break;
    case Tok::EqEq:
      throw ParseError("equality comparator is not supported (its robustness "
                       "is never positive); use >= and <= bounds",
                       peek().line, peek().column);
    default:
      return Formula::proposition(ident.text);
    }
    take();
    Rational bound = parse_rational();
    return Formula::threshold(ident.text, *cmp, bound);
  }

  TimeInterval parse_interval() {
    const Token &open = expect(Tok::LBracket, "'['");
    Rational lo = parse_rational();
    expect(Tok::Comma, "','");
    Rational hi = parse_rational();
    expect(Tok::RBracket, "']'");
    try {
      return TimeInterval(lo, hi);
    } catch (const Error &e) {
      throw ParseError(e.what(), open.line, open.column);
    }
  }

  Rational parse_rational() {
    bool neg = accept(Tok::Minus);
    const Token &n = expect(Tok::Number, "a number");
    Rational value = [&] {
      try {
        return Rational::parse(n.text);
      } catch (const Error &e) {
        throw ParseError(e.what(), n.line, n.column);
      }
    }();
    // int "/" int form; a decimal numerator like "0.5/2" is rejected.
    if (peek().kind == Tok::Slash && peek(1).kind == Tok::Number) {
      if (!value.is_integer()) {
        fail("fraction numerator must be an integer");
      }
      take();
      const Token &d = expect(Tok::Number, "a number");
      Rational den = [&] {
        try {
          return Rational::parse(d.text);
        } catch (const Error &e) {
          throw ParseError(e.what(), d.line, d.column);
        }
      }();
      if (!den.is_integer() || den.is_zero()) {
        throw ParseError("fraction denominator must be a nonzero integer",
                         d.line, d.column);
      }
      value = value / den;
    }
    return neg ? -value : value;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

} // namespace

Formula parse_formula(const std::string &text) {
  Lexer lexer(text);
  Parser parser(lexer.run());
  return parser.run();
}

} // namespace speclint
