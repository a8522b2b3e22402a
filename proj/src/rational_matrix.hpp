#pragma once

#include <optional>
#include <vector>

#include "rholattice/numeric.hpp"

namespace rholattice::detail {

using RationalMatrix = std::vector<std::vector<Rational>>;

struct RowEchelon {
    RationalMatrix rows;          // reduced row echelon form
    std::vector<int> pivot_cols;  // one per nonzero row
};

RowEchelon row_reduce(RationalMatrix a);

int rank(const RationalMatrix& a);

// Solution of a*x = b, or nullopt when the system is inconsistent.
std::optional<std::vector<Rational>> solve(const RationalMatrix& a, const std::vector<Rational>& b);

// A basis of {x : a*x = 0}.
std::vector<std::vector<Rational>> null_space(const RationalMatrix& a);

}  // namespace rholattice::detail
