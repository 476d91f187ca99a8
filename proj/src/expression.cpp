#include "covfield/expression.hpp"

#include <cctype>
#include <cmath>

#include "covfield/errors.hpp"

namespace covfield {

namespace {

using Fn = std::function<double(double)>;

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Fn parse() {
    Fn f = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return f;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) {
    throw InvalidInput("expression error at offset " + std::to_string(pos_) + ": " + msg);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Fn expr() {
    Fn lhs = term();
    for (;;) {
      if (eat('+')) {
        Fn rhs = term();
        lhs = [lhs, rhs](double t) { return lhs(t) + rhs(t); };
      } else if (eat('-')) {
        Fn rhs = term();
        lhs = [lhs, rhs](double t) { return lhs(t) - rhs(t); };
      } else {
        return lhs;
      }
    }
  }

  Fn term() {
    Fn lhs = unary();
    for (;;) {
      if (eat('*')) {
        Fn rhs = unary();
        lhs = [lhs, rhs](double t) { return lhs(t) * rhs(t); };
      } else if (eat('/')) {
        Fn rhs = unary();
        lhs = [lhs, rhs](double t) { return lhs(t) / rhs(t); };
      } else {
        return lhs;
      }
    }
  }

  Fn unary() {
    if (eat('-')) {
      Fn x = unary();
      return [x](double t) { return -x(t); };
    }
    if (eat('+')) return unary();
    return power();
  }

  Fn power() {
    Fn base = primary();
    if (eat('^')) {
      Fn ex = unary();
      return [base, ex](double t) { return std::pow(base(t), ex(t)); };
    }
    return base;
  }

  Fn primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (eat('(')) {
      Fn e = expr();
      if (!eat(')')) fail("missing ')'");
      return e;
    }
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = std::stod(s_.substr(pos_), &used);
      pos_ += used;
      return [v](double) { return v; };
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string id = s_.substr(start, pos_ - start);
      if (id == "t") return [](double t) { return t; };
      double (*fn)(double) = nullptr;
      if (id == "sqrt") fn = [](double x) { return std::sqrt(x); };
      else if (id == "log") fn = [](double x) { return std::log(x); };
      else if (id == "exp") fn = [](double x) { return std::exp(x); };
      else if (id == "abs") fn = [](double x) { return std::fabs(x); };
      else fail("unknown identifier '" + id + "'");
      if (!eat('(')) fail("expected '(' after " + id);
      Fn arg = expr();
      if (!eat(')')) fail("missing ')'");
      return [fn, arg](double t) { return fn(arg(t)); };
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

}  // namespace

std::function<double(double)> compile_expression(const std::string& text) {
  return Parser(text).parse();
}

}  // namespace covfield
