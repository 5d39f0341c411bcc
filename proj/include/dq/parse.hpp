#pragma once
#include <map>
#include <string>
#include <vector>

#include "dq/poly.hpp"

namespace dq {

// Names used for both parsing and printing, plus silent aliases (q == q1 on
// one degree of freedom) accepted on input only.
struct VarTable {
  std::vector<std::string> names;
  std::map<std::string, int> aliases;

  int index(const std::string& s) const;  // -1 if unknown
};

// x1..xd
VarTable xvars(int dim);
// q1..ql, p1..pl in that storage order; prints q,p when l == 1
VarTable pq_vars(int dof);

/**
 * Parse "3/2*q^2*p - i*q + 1" style input.
 *
 * Grammar: sums of '*'-joined factors; factors are integers, rationals a/b,
 * the imaginary unit i, named variables, or parenthesised subexpressions,
 * optionally raised to a nonnegative integer power.
 */
Poly parse_poly(const std::string& text, const VarTable& vars);

}  // namespace dq
