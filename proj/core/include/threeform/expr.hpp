#pragma once

#include "threeform/polynomial.hpp"

#include <array>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

namespace threeform {

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Closed-form scalar expression over the six coordinates: numbers,
/// + − * / ^, parentheses, sqrt, cbrt and pow.
class Expression {
 public:
  struct Node;

  static Expression parse(const std::string& text, const std::array<std::string, kDim>& names);

  double evaluate(const std::array<double, kDim>& p) const;
  /// The polynomial this expression denotes, when it is one syntactically.
  std::optional<Polynomial> as_polynomial() const;
  const std::string& text() const { return text_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace threeform
