#pragma once

// Arithmetic grammar for coefficient and initial-condition expressions:
// numbers, x, pi, + - * /, ^ (right associative), unary minus, parentheses,
// and the functions sin, cos, exp. Anything richer must come in tabulated.

#include <functional>
#include <string>

namespace bilat {

/// Parses the expression and returns its evaluator. Throws ConfigError on
/// syntax errors.
std::function<double(double)> parse_expression(const std::string& text);

/// Parse-and-evaluate convenience for constant expressions (no x).
double evaluate_constant_expression(const std::string& text);

}  // namespace bilat
