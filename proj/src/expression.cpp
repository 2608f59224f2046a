#include <cctype>
#include <string>

#include "dsmt/lattice.hpp"

namespace dsmt {

struct Expression::Node {
  Op op;
  int atom = -1;
  std::shared_ptr<const Node> left;
  std::shared_ptr<const Node> right;
};

Expression Expression::none() {
  return Expression(std::make_shared<const Node>(Node{Op::empty, -1, nullptr, nullptr}));
}

Expression Expression::atom(int index) {
  return Expression(std::make_shared<const Node>(Node{Op::atom, index, nullptr, nullptr}));
}

Expression Expression::unite(Expression a, Expression b) {
  return Expression(std::make_shared<const Node>(
      Node{Op::union_of, -1, std::move(a.node_), std::move(b.node_)}));
}

Expression Expression::intersect(Expression a, Expression b) {
  return Expression(std::make_shared<const Node>(
      Node{Op::intersection_of, -1, std::move(a.node_), std::move(b.node_)}));
}

Expression Expression::complement(Expression a) {
  return Expression(
      std::make_shared<const Node>(Node{Op::complement_of, -1, std::move(a.node_), nullptr}));
}

Expression::Op Expression::op() const { return node_->op; }
int Expression::atom_index() const { return node_->atom; }
Expression Expression::left() const { return Expression(node_->left); }
Expression Expression::right() const { return Expression(node_->right); }

bool Expression::uses_complement() const {
  switch (op()) {
    case Op::empty:
    case Op::atom:
      return false;
    case Op::complement_of:
      return true;
    default:
      return left().uses_complement() || right().uses_complement();
  }
}

std::string Expression::to_string(const Frame& frame) const {
  switch (op()) {
    case Op::empty:
      return "∅";
    case Op::atom:
      return frame.atom(atom_index());
    case Op::complement_of: {
      const Expression inner = left();
      const bool bare = inner.op() == Op::atom || inner.op() == Op::empty;
      return bare ? "!" + inner.to_string(frame) : "!(" + inner.to_string(frame) + ")";
    }
    case Op::union_of:
      return "(" + left().to_string(frame) + "|" + right().to_string(frame) + ")";
    case Op::intersection_of:
      return "(" + left().to_string(frame) + "&" + right().to_string(frame) + ")";
  }
  return {};
}

namespace {

enum class Tok { atom, empty, amp, bar, bang, lparen, rparen, end };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Token next() {
    skip_space();
    const int line = line_;
    const int col = col_;
    if (pos_ >= s_.size()) return {Tok::end, "", line, col};
    for (const auto& [spelling, kind] : kSymbols) {
      if (s_.substr(pos_, spelling.size()) == spelling) {
        advance(spelling.size());
        return {kind, std::string(spelling), line, col};
      }
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && !at_symbol() && !std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      advance(1);
    }
    std::string word(s_.substr(start, pos_ - start));
    if (word == "0") return {Tok::empty, word, line, col};
    return {Tok::atom, word, line, col};
  }

 private:
  static constexpr std::pair<std::string_view, Tok> kSymbols[] = {
      {"&", Tok::amp},  {"∩", Tok::amp},  {"|", Tok::bar},    {"∪", Tok::bar},
      {"!", Tok::bang}, {"~", Tok::bang}, {"¬", Tok::bang},   {"(", Tok::lparen},
      {")", Tok::rparen}, {"∅", Tok::empty},
  };

  bool at_symbol() const {
    for (const auto& [spelling, kind] : kSymbols) {
      if (s_.substr(pos_, spelling.size()) == spelling) return true;
    }
    return false;
  }

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance(1);
  }

  void advance(std::size_t bytes) {
    for (std::size_t i = 0; i < bytes && pos_ < s_.size(); ++i, ++pos_) {
      const auto c = static_cast<unsigned char>(s_[pos_]);
      if (c == '\n') {
        ++line_;
        col_ = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++col_;
      }
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::string_view text, const Frame& frame) : lex_(text), frame_(frame) {
    tok_ = lex_.next();
  }

  Expression parse() {
    Expression e = parse_union();
    if (tok_.kind != Tok::end) error("unexpected '" + tok_.text + "'");
    return e;
  }

 private:
  Expression parse_union() {
    Expression e = parse_intersection();
    while (tok_.kind == Tok::bar) {
      tok_ = lex_.next();
      e = Expression::unite(std::move(e), parse_intersection());
    }
    return e;
  }

  Expression parse_intersection() {
    Expression e = parse_unary();
    while (tok_.kind == Tok::amp) {
      tok_ = lex_.next();
      e = Expression::intersect(std::move(e), parse_unary());
    }
    return e;
  }

  Expression parse_unary() {
    if (tok_.kind == Tok::bang) {
      tok_ = lex_.next();
      return Expression::complement(parse_unary());
    }
    return parse_primary();
  }

  Expression parse_primary() {
    switch (tok_.kind) {
      case Tok::lparen: {
        tok_ = lex_.next();
        Expression e = parse_union();
        if (tok_.kind != Tok::rparen) error("expected ')'");
        tok_ = lex_.next();
        return e;
      }
      case Tok::empty:
        tok_ = lex_.next();
        return Expression::none();
      case Tok::atom: {
        auto idx = frame_.index_of(tok_.text);
        if (!idx) {
          throw Error(ErrorCode::unknown_atom,
                      "UnknownAtom: '" + tok_.text + "' at line " + std::to_string(tok_.line) +
                          ", column " + std::to_string(tok_.column));
        }
        tok_ = lex_.next();
        return Expression::atom(*idx);
      }
      case Tok::end:
        error("unexpected end of expression");
      default:
        error("unexpected '" + tok_.text + "'");
    }
  }

  [[noreturn]] void error(const std::string& msg) const {
    throw ParseError("ParseError: " + msg + " at line " + std::to_string(tok_.line) +
                         ", column " + std::to_string(tok_.column),
                     tok_.line, tok_.column);
  }

  Lexer lex_;
  const Frame& frame_;
  Token tok_;
};

std::uint64_t evaluate(const Expression& e, int n) {
  switch (e.op()) {
    case Expression::Op::empty:
      return 0;
    case Expression::Op::atom:
      return VennMask::atom(n, e.atom_index()).bits();
    case Expression::Op::union_of:
      return evaluate(e.left(), n) | evaluate(e.right(), n);
    case Expression::Op::intersection_of:
      return evaluate(e.left(), n) & evaluate(e.right(), n);
    case Expression::Op::complement_of:
      return venn_full_bits(n) & ~evaluate(e.left(), n);
  }
  return 0;
}

}  // namespace

Expression parse_expression(std::string_view text, const Frame& frame) {
  return Parser(text, frame).parse();
}

VennMask to_mask(const Expression& e, const Frame& frame, const Model& model,
                 Semantics semantics) {
  if (frame.size() != model.atoms()) {
    fail(ErrorCode::frame_mismatch, "expression frame has " + std::to_string(frame.size()) +
                                        " atoms, model has " + std::to_string(model.atoms()));
  }
  if (semantics != Semantics::super && e.uses_complement()) {
    fail(ErrorCode::complement_outside_super_power_set,
         "'" + e.to_string(frame) + "' uses complement under " +
             std::string(to_string(semantics)) + " semantics");
  }
  // Complement is taken against the whole diagram; reducing at the end gives
  // the same result as reducing after every step.
  return model.reduce(VennMask(frame.size(), evaluate(e, frame.size())));
}

VennMask to_mask(std::string_view text, const Frame& frame, const Model& model,
                 Semantics semantics) {
  return to_mask(parse_expression(text, frame), frame, model, semantics);
}

}  // namespace dsmt
