#pragma once

#include <string>
#include <vector>

#include "rholattice/numeric.hpp"

namespace rholattice {

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Integer(0)) {}
    IntMatrix(std::initializer_list<std::initializer_list<long>> rows);
    static IntMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Integer& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Integer& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool is_zero() const;
    Integer determinant() const;  // square matrices only

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
    bool operator==(const IntMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }

    void swap_rows(std::size_t a, std::size_t b);
    void swap_cols(std::size_t a, std::size_t b);
    // row[target] += factor * row[source]
    void add_row(std::size_t target, std::size_t source, const Integer& factor);
    void add_col(std::size_t target, std::size_t source, const Integer& factor);
    void negate_row(std::size_t r);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> data_;
};

struct SmithForm {
    IntMatrix d;
    IntMatrix u;
    IntMatrix v;
    std::vector<Integer> diagonal() const;
};

// U*A*V = D with D diagonal, d_1 | d_2 | ..., and U, V unimodular.
SmithForm smith_normal_form(const IntMatrix& a);

// Invariant-factor list d_1 | d_2 | ... with every entry > 1 or 0 (infinite cyclic).
class FinAbPresentation {
public:
    FinAbPresentation() = default;
    // Any list of cyclic orders; 1s vanish, 0 stands for Z.
    static FinAbPresentation from_cyclic_orders(const std::vector<long long>& orders);

    const std::vector<long long>& factors() const { return factors_; }
    int free_rank() const;
    bool is_finite() const { return free_rank() == 0; }
    bool is_trivial() const { return factors_.empty(); }
    long long order() const;  // finite groups only

    bool operator==(const FinAbPresentation& other) const { return factors_ == other.factors_; }
    std::string to_string() const;

private:
    std::vector<long long> factors_;
};

bool iso_eq(const FinAbPresentation& a, const FinAbPresentation& b);

struct PrimaryDecomposition {
    std::vector<long long> prime_powers;  // ascending
    int free_rank = 0;
    bool operator==(const PrimaryDecomposition&) const = default;
};

PrimaryDecomposition primary_decomposition(const FinAbPresentation& a);

// Coordinates live in Z_{n_1} + ... + Z_{n_r}, each n_i >= 1.
using CyclicOrders = std::vector<long long>;

FinAbPresentation subgroup_from_elements(const CyclicOrders& ambient,
                                         const std::vector<std::vector<long long>>& elements);
FinAbPresentation subgroup_from_elements(const FinAbPresentation& ambient,
                                         const std::vector<std::vector<long long>>& elements);

// Order of one element of a finite cyclic product.
long long element_order(const CyclicOrders& ambient, const std::vector<long long>& element);

class IntMatrixHom {
public:
    // matrix: target.size() rows, source.size() columns.
    IntMatrixHom(CyclicOrders source, CyclicOrders target, IntMatrix matrix);

    const CyclicOrders& source() const { return source_; }
    const CyclicOrders& target() const { return target_; }
    const IntMatrix& matrix() const { return matrix_; }

    std::vector<long long> apply(const std::vector<long long>& x) const;
    FinAbPresentation image() const;
    FinAbPresentation kernel() const;

private:
    CyclicOrders source_;
    CyclicOrders target_;
    IntMatrix matrix_;
};

}  // namespace rholattice
