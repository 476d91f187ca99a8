#pragma once

#include <functional>
#include <string>

namespace covfield {

/// Compiles a scalar expression in the variable `t`.
///
/// Grammar: numbers, `t`, `+ - * / ^`, parentheses, unary minus and the
/// functions sqrt, log, exp, abs. `^` is right associative.
std::function<double(double)> compile_expression(const std::string& text);

}  // namespace covfield
