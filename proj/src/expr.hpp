#ifndef ANISYM_EXPR_HPP
#define ANISYM_EXPR_HPP

// Tiny arithmetic expression evaluator for data fields in config files.
//
// Grammar (recursive descent):
//   expr    := term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := unary ('^' factor)?              (right associative)
//   unary   := ('-'|'+') unary | primary
//   primary := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//
// Identifiers: x1..x9 (coordinates), r (Euclidean norm of x), pi, e, inf.
// Functions: abs, min, max, sin, cos, tan, exp, log, sqrt, pow, floor.

#include <memory>
#include <string>
#include <vector>

namespace anisym {

class Expression {
public:
  struct Node;  // opaque parse-tree node

  // Parses; throws ValidationError on syntax errors or unknown names.
  static Expression parse(const std::string& text);

  // Evaluate at the point x (coordinates beyond x.size() are errors).
  double eval(const std::vector<double>& x) const;

  const std::string& text() const { return text_; }

private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace anisym

#endif  // ANISYM_EXPR_HPP
