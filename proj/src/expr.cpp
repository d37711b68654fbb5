#include "expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "common.hpp"

namespace anisym {

namespace {

enum class Func {
  kAbs,
  kMin,
  kMax,
  kSin,
  kCos,
  kTan,
  kExp,
  kLog,
  kSqrt,
  kPow,
  kFloor,
};

struct FuncInfo {
  const char* name;
  Func id;
  int arity;
};

constexpr FuncInfo kFuncs[] = {
    {"abs", Func::kAbs, 1},   {"min", Func::kMin, 2},
    {"max", Func::kMax, 2},   {"sin", Func::kSin, 1},
    {"cos", Func::kCos, 1},   {"tan", Func::kTan, 1},
    {"exp", Func::kExp, 1},   {"log", Func::kLog, 1},
    {"sqrt", Func::kSqrt, 1}, {"pow", Func::kPow, 2},
    {"floor", Func::kFloor, 1},
};

}  // namespace

struct Expression::Node {
  enum class Kind { kNumber, kCoord, kRadius, kNegate, kBinary, kCall };

  Kind kind = Kind::kNumber;
  double number = 0.0;
  int coord = 0;    // 0-based axis for kCoord
  char op = '+';    // kBinary
  Func func = Func::kAbs;
  std::vector<std::shared_ptr<const Node>> args;

  double eval(const std::vector<double>& x) const {
    switch (kind) {
      case Kind::kNumber:
        return number;
      case Kind::kCoord:
        if (coord >= static_cast<int>(x.size())) {
          std::ostringstream msg;
          msg << "expression uses x" << (coord + 1) << " but the point has "
              << x.size() << " coordinate(s)";
          throw ValidationError(msg.str());
        }
        return x[static_cast<std::size_t>(coord)];
      case Kind::kRadius: {
        double acc = 0.0;
        for (double xi : x) acc += xi * xi;
        return std::sqrt(acc);
      }
      case Kind::kNegate:
        return -args[0]->eval(x);
      case Kind::kBinary: {
        const double a = args[0]->eval(x);
        const double b = args[1]->eval(x);
        switch (op) {
          case '+': return a + b;
          case '-': return a - b;
          case '*': return a * b;
          case '/': return a / b;
          case '^': return std::pow(a, b);
        }
        return 0.0;
      }
      case Kind::kCall: {
        const double a = args[0]->eval(x);
        const double b = args.size() > 1 ? args[1]->eval(x) : 0.0;
        switch (func) {
          case Func::kAbs: return std::fabs(a);
          case Func::kMin: return std::fmin(a, b);
          case Func::kMax: return std::fmax(a, b);
          case Func::kSin: return std::sin(a);
          case Func::kCos: return std::cos(a);
          case Func::kTan: return std::tan(a);
          case Func::kExp: return std::exp(a);
          case Func::kLog: return std::log(a);
          case Func::kSqrt: return std::sqrt(a);
          case Func::kPow: return std::pow(a, b);
          case Func::kFloor: return std::floor(a);
        }
        return 0.0;
      }
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

NodePtr make_number(double v) {
  auto node = std::make_shared<Node>();
  node->kind = Node::Kind::kNumber;
  node->number = v;
  return node;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr parse() {
    NodePtr root = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) {
      fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    }
    return root;
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream msg;
    msg << "expression error at position " << pos_ << ": " << what
        << " in \"" << text_ << "\"";
    throw ValidationError(msg.str());
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      char c = peek();
      if (c != '+' && c != '-') return lhs;
      ++pos_;
      auto node = std::make_shared<Node>();
      node->kind = Node::Kind::kBinary;
      node->op = c;
      node->args = {lhs, parse_term()};
      lhs = node;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    for (;;) {
      char c = peek();
      if (c != '*' && c != '/') return lhs;
      ++pos_;
      auto node = std::make_shared<Node>();
      node->kind = Node::Kind::kBinary;
      node->op = c;
      node->args = {lhs, parse_factor()};
      lhs = node;
    }
  }

  NodePtr parse_factor() {
    NodePtr base = parse_unary();
    if (consume('^')) {
      auto node = std::make_shared<Node>();
      node->kind = Node::Kind::kBinary;
      node->op = '^';
      node->args = {base, parse_factor()};  // right associative
      return node;
    }
    return base;
  }

  NodePtr parse_unary() {
    if (consume('-')) {
      auto node = std::make_shared<Node>();
      node->kind = Node::Kind::kNegate;
      node->args = {parse_unary()};
      return node;
    }
    if (consume('+')) return parse_unary();
    return parse_primary();
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected a value");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return parse_number();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      return parse_ident();
    }
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      if (!consume(')')) fail("expected ')'");
      return inner;
    }
    fail("expected a number, name or '('");
  }

  NodePtr parse_number() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("invalid number");
    pos_ += static_cast<std::size_t>(end - begin);
    return make_number(v);
  }

  NodePtr parse_ident() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name = text_.substr(start, pos_ - start);

    if (peek() == '(') {
      for (const auto& info : kFuncs) {
        if (name != info.name) continue;
        ++pos_;  // '('
        auto node = std::make_shared<Node>();
        node->kind = Node::Kind::kCall;
        node->func = info.id;
        node->args.push_back(parse_expr());
        while (consume(',')) node->args.push_back(parse_expr());
        if (!consume(')')) fail("expected ')'");
        if (static_cast<int>(node->args.size()) != info.arity) {
          fail(name + " expects " + std::to_string(info.arity) +
               " argument(s)");
        }
        return node;
      }
      fail("unknown function '" + name + "'");
    }

    if (name == "pi") return make_number(kPi);
    if (name == "e") return make_number(2.718281828459045235360287);
    if (name == "inf") {
      return make_number(std::numeric_limits<double>::infinity());
    }
    if (name == "r") {
      auto node = std::make_shared<Node>();
      node->kind = Node::Kind::kRadius;
      return node;
    }
    if (name.size() == 2 && name[0] == 'x' && name[1] >= '1' &&
        name[1] <= '9') {
      auto node = std::make_shared<Node>();
      node->kind = Node::Kind::kCoord;
      node->coord = name[1] - '1';
      return node;
    }
    fail("unknown name '" + name + "'");
  }
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression expr;
  expr.text_ = text;
  expr.root_ = Parser(text).parse();
  return expr;
}

double Expression::eval(const std::vector<double>& x) const {
  if (!root_) throw ValidationError("expression was not parsed");
  return root_->eval(x);
}

}  // namespace anisym
