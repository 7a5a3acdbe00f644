#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace catlab::spaces {

/// Scalar expression in the planar coordinates, used for conformal factors in
/// grid descriptors: `2/(1-r2)`, `exp(0.25*(x^2+y^2))`, ...
///
/// Variables: x, y, r (= |z|), r2 (= |z|^2). Constants: pi, e.
/// Functions: exp log sqrt sin cos tan sinh cosh tanh atanh abs.
/// Operators: + - * / ^ (right associative), unary minus, parentheses.
class Expression {
 public:
  /// Throws ParseError with the offending column.
  static Expression parse(std::string_view text);

  double operator()(double x, double y) const;
  const std::string& text() const noexcept { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace catlab::spaces
