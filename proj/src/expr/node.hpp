#pragma once

#include <vector>

#include "dgeo/expr.hpp"

namespace dgeo {

struct Node {
  Op op;
  double value;  // constant, or exponent for Pow
  Symbol sym;    // Var only
  std::vector<Expr> args;
};

}  // namespace dgeo
