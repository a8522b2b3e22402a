#include "rholattice/abelian.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "rholattice/errors.hpp"

namespace rholattice {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
    for (const auto& row : rows) {
        if (row.size() != cols_) throw InvalidArgument("ragged matrix literal");
        for (long v : row) data_.emplace_back(v);
    }
}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

bool IntMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Integer& z) { return z == 0; });
}

// Bareiss fraction-free elimination.
Integer IntMatrix::determinant() const {
    if (rows_ != cols_) throw InvalidArgument("determinant of a non-square matrix");
    const std::size_t n = rows_;
    if (n == 0) return 1;
    IntMatrix m = *this;
    Integer sign = 1;
    Integer prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m.at(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && m.at(p, k) == 0) ++p;
            if (p == n) return 0;
            m.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Integer num = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                mpz_divexact(m.at(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = m.at(k, k);
    }
    return sign * m.at(n - 1, n - 1);
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw InvalidArgument("matrix dimension mismatch");
    IntMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            if (a.at(i, k) == 0) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) out.at(i, j) += a.at(i, k) * b.at(k, j);
        }
    return out;
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap(at(a, j), at(b, j));
}

void IntMatrix::swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap(at(i, a), at(i, b));
}

void IntMatrix::add_row(std::size_t target, std::size_t source, const Integer& factor) {
    for (std::size_t j = 0; j < cols_; ++j) at(target, j) += factor * at(source, j);
}

void IntMatrix::add_col(std::size_t target, std::size_t source, const Integer& factor) {
    for (std::size_t i = 0; i < rows_; ++i) at(i, target) += factor * at(i, source);
}

void IntMatrix::negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols_; ++j) at(r, j) = -at(r, j);
}

std::vector<Integer> SmithForm::diagonal() const {
    std::vector<Integer> out;
    for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i) out.push_back(d.at(i, i));
    return out;
}

SmithForm smith_normal_form(const IntMatrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    SmithForm s{a, IntMatrix::identity(m), IntMatrix::identity(n)};
    IntMatrix& d = s.d;
    for (std::size_t t = 0; t < std::min(m, n); ++t) {
        for (;;) {
            // Smallest-magnitude pivot in the trailing block.
            std::size_t pi = m, pj = n;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j) {
                    if (d.at(i, j) == 0) continue;
                    if (pi == m || abs(d.at(i, j)) < abs(d.at(pi, pj))) {
                        pi = i;
                        pj = j;
                    }
                }
            if (pi == m) return s;
            d.swap_rows(t, pi);
            s.u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            s.v.swap_cols(t, pj);

            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (d.at(i, t) == 0) continue;
                const Integer q = d.at(i, t) / d.at(t, t);
                d.add_row(i, t, -q);
                s.u.add_row(i, t, -q);
                if (d.at(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (d.at(t, j) == 0) continue;
                const Integer q = d.at(t, j) / d.at(t, t);
                d.add_col(j, t, -q);
                s.v.add_col(j, t, -q);
                if (d.at(t, j) != 0) clean = false;
            }
            if (!clean) continue;

            std::size_t bad = m;
            for (std::size_t i = t + 1; i < m && bad == m; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (d.at(i, j) % d.at(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (bad == m) break;
            d.add_row(t, bad, 1);
            s.u.add_row(t, bad, 1);
        }
        if (d.at(t, t) < 0) {
            d.negate_row(t);
            s.u.negate_row(t);
        }
    }
    return s;
}

namespace {

std::vector<std::pair<long long, int>> factorize(long long n) {
    std::vector<std::pair<long long, int>> out;
    for (long long p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e > 0) out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

}  // namespace

FinAbPresentation FinAbPresentation::from_cyclic_orders(const std::vector<long long>& orders) {
    std::map<long long, std::vector<long long>> by_prime;
    int zeros = 0;
    for (long long o : orders) {
        if (o < 0) throw InvalidArgument("negative cyclic order");
        if (o == 0) {
            ++zeros;
            continue;
        }
        for (auto [p, e] : factorize(o)) by_prime[p].push_back(pow_ll(p, e));
    }
    std::size_t count = 0;
    for (auto& [p, powers] : by_prime) {
        std::sort(powers.begin(), powers.end(), std::greater<>());
        count = std::max(count, powers.size());
    }
    std::vector<long long> factors(count, 1);
    for (const auto& [p, powers] : by_prime)
        for (std::size_t i = 0; i < powers.size(); ++i) factors[i] *= powers[i];
    std::reverse(factors.begin(), factors.end());
    factors.insert(factors.end(), zeros, 0);
    FinAbPresentation out;
    out.factors_ = std::move(factors);
    return out;
}

int FinAbPresentation::free_rank() const {
    return static_cast<int>(std::count(factors_.begin(), factors_.end(), 0LL));
}

long long FinAbPresentation::order() const {
    if (!is_finite()) throw InvalidArgument("order of an infinite group");
    long long o = 1;
    for (long long f : factors_) o *= f;
    return o;
}

std::string FinAbPresentation::to_string() const {
    if (factors_.empty()) return "0";
    std::ostringstream os;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i > 0) os << " + ";
        if (factors_[i] == 0)
            os << "Z";
        else
            os << "Z_" << factors_[i];
    }
    return os.str();
}

bool iso_eq(const FinAbPresentation& a, const FinAbPresentation& b) { return a.factors() == b.factors(); }

PrimaryDecomposition primary_decomposition(const FinAbPresentation& a) {
    PrimaryDecomposition out;
    for (long long f : a.factors()) {
        if (f == 0) {
            ++out.free_rank;
            continue;
        }
        for (auto [p, e] : factorize(f)) out.prime_powers.push_back(pow_ll(p, e));
    }
    std::sort(out.prime_powers.begin(), out.prime_powers.end());
    return out;
}

namespace {

void check_ambient(const CyclicOrders& ambient) {
    for (long long n : ambient)
        if (n < 1) throw InvalidArgument("ambient group must be finite with positive cyclic orders");
}

void check_element(const CyclicOrders& ambient, const std::vector<long long>& x) {
    if (x.size() != ambient.size()) throw InvalidArgument("coordinate vector has the wrong length");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] < 0 || x[i] >= ambient[i]) throw InvalidArgument("coordinate out of range");
}

// Z-basis of {x in Z^s : A x = 0 mod target}, projected from the kernel of [A | diag(target)].
std::vector<std::vector<Integer>> relation_lattice(const IntMatrix& a, const CyclicOrders& target) {
    const std::size_t r = a.rows();
    const std::size_t s = a.cols();
    IntMatrix b(r, s + r);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < s; ++j) b.at(i, j) = a.at(i, j);
        b.at(i, s + i) = static_cast<long>(target[i]);
    }
    const SmithForm snf = smith_normal_form(b);
    std::size_t rank = 0;
    for (const Integer& z : snf.diagonal())
        if (z != 0) ++rank;
    std::vector<std::vector<Integer>> out;
    for (std::size_t j = rank; j < s + r; ++j) {
        std::vector<Integer> v(s);
        for (std::size_t i = 0; i < s; ++i) v[i] = snf.v.at(i, j);
        out.push_back(std::move(v));
    }
    return out;
}

FinAbPresentation quotient_presentation(std::size_t s, const std::vector<std::vector<Integer>>& relations) {
    if (s == 0) return {};
    IntMatrix rel(s, relations.size());
    for (std::size_t j = 0; j < relations.size(); ++j)
        for (std::size_t i = 0; i < s; ++i) rel.at(i, j) = relations[j][i];
    std::vector<long long> orders(s, 0);
    if (!relations.empty()) {
        const auto diag = smith_normal_form(rel).diagonal();
        for (std::size_t i = 0; i < diag.size(); ++i) orders[i] = diag[i].get_si();
    }
    return FinAbPresentation::from_cyclic_orders(orders);
}

}  // namespace

FinAbPresentation subgroup_from_elements(const CyclicOrders& ambient,
                                         const std::vector<std::vector<long long>>& elements) {
    check_ambient(ambient);
    for (const auto& x : elements) check_element(ambient, x);
    if (elements.empty()) return {};
    IntMatrix g(ambient.size(), elements.size());
    for (std::size_t j = 0; j < elements.size(); ++j)
        for (std::size_t i = 0; i < ambient.size(); ++i) g.at(i, j) = static_cast<long>(elements[j][i]);
    return quotient_presentation(elements.size(), relation_lattice(g, ambient));
}

FinAbPresentation subgroup_from_elements(const FinAbPresentation& ambient,
                                         const std::vector<std::vector<long long>>& elements) {
    if (!ambient.is_finite()) throw InvalidArgument("subgroup_from_elements needs a finite ambient group");
    return subgroup_from_elements(CyclicOrders(ambient.factors()), elements);
}

long long element_order(const CyclicOrders& ambient, const std::vector<long long>& element) {
    check_ambient(ambient);
    if (element.size() != ambient.size()) throw InvalidArgument("coordinate vector has the wrong length");
    long long order = 1;
    for (std::size_t i = 0; i < ambient.size(); ++i) {
        const long long n = ambient[i];
        const long long o = n / gcd_ll(n, mod_floor(element[i], n));
        order = std::lcm(order, o);
    }
    return order;
}

IntMatrixHom::IntMatrixHom(CyclicOrders source, CyclicOrders target, IntMatrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
    check_ambient(source_);
    check_ambient(target_);
    if (matrix_.rows() != target_.size() || matrix_.cols() != source_.size())
        throw InvalidArgument("homomorphism matrix has the wrong shape");
    for (std::size_t j = 0; j < source_.size(); ++j)
        for (std::size_t i = 0; i < target_.size(); ++i) {
            const Integer image = matrix_.at(i, j) * static_cast<long>(source_[j]);
            if (image % static_cast<long>(target_[i]) != 0)
                throw InvalidArgument("matrix does not respect the order of source generator " + std::to_string(j));
        }
}

std::vector<long long> IntMatrixHom::apply(const std::vector<long long>& x) const {
    if (x.size() != source_.size()) throw InvalidArgument("coordinate vector has the wrong length");
    std::vector<long long> out(target_.size());
    for (std::size_t i = 0; i < target_.size(); ++i) {
        Integer acc = 0;
        for (std::size_t j = 0; j < source_.size(); ++j) acc += matrix_.at(i, j) * static_cast<long>(x[j]);
        Integer r;
        mpz_fdiv_r_ui(r.get_mpz_t(), acc.get_mpz_t(), static_cast<unsigned long>(target_[i]));
        out[i] = r.get_si();
    }
    return out;
}

FinAbPresentation IntMatrixHom::image() const {
    std::vector<std::vector<long long>> cols;
    for (std::size_t j = 0; j < source_.size(); ++j) {
        std::vector<long long> e(source_.size(), 0);
        e[j] = 1 % source_[j];
        cols.push_back(apply(e));
    }
    return subgroup_from_elements(target_, cols);
}

FinAbPresentation IntMatrixHom::kernel() const {
    std::vector<std::vector<long long>> gens;
    for (const auto& v : relation_lattice(matrix_, target_)) {
        std::vector<long long> x(source_.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            Integer r;
            mpz_fdiv_r_ui(r.get_mpz_t(), v[i].get_mpz_t(), static_cast<unsigned long>(source_[i]));
            x[i] = r.get_si();
        }
        gens.push_back(std::move(x));
    }
    return subgroup_from_elements(source_, gens);
}

}  // namespace rholattice
