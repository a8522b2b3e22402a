#include <doctest.h>

#include <random>
#include <set>

#include "rholattice/abelian.hpp"

using namespace rholattice;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> dim(1, 6), val(-20, 20);
    IntMatrix a(dim(rng), dim(rng));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) a.at(i, j) = val(rng);
    return a;
}

// Closure of the generated subgroup by breadth-first addition.
std::size_t closure_size(const CyclicOrders& ambient, const std::vector<std::vector<long long>>& gens) {
    std::set<std::vector<long long>> seen{std::vector<long long>(ambient.size(), 0)};
    std::vector<std::vector<long long>> frontier(seen.begin(), seen.end());
    while (!frontier.empty()) {
        std::vector<std::vector<long long>> next;
        for (const auto& x : frontier)
            for (const auto& g : gens) {
                auto y = x;
                for (std::size_t i = 0; i < y.size(); ++i) y[i] = mod_floor(y[i] + g[i], ambient[i]);
                if (seen.insert(y).second) next.push_back(y);
            }
        frontier = std::move(next);
    }
    return seen.size();
}

}  // namespace

TEST_SUITE("abelian") {

TEST_CASE("smith normal form examples") {
    CHECK(smith_normal_form(IntMatrix{{2, 0}, {0, 3}}).diagonal() == std::vector<Integer>{1, 6});
    CHECK(smith_normal_form(IntMatrix{{4, 0}, {0, 2}}).diagonal() == std::vector<Integer>{2, 4});
    const auto z = smith_normal_form(IntMatrix(2, 3));
    CHECK(z.d.is_zero());
    CHECK(z.u == IntMatrix::identity(2));
    CHECK(z.v == IntMatrix::identity(3));
}

TEST_CASE("smith normal form is exact on random matrices") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = random_matrix(rng);
        const auto s = smith_normal_form(a);
        CHECK(s.u * a * s.v == s.d);
        CHECK(abs(s.u.determinant()) == 1);
        CHECK(abs(s.v.determinant()) == 1);
        const auto diag = s.diagonal();
        for (std::size_t i = 0; i < s.d.rows(); ++i)
            for (std::size_t j = 0; j < s.d.cols(); ++j)
                if (i != j) CHECK(s.d.at(i, j) == 0);
        for (std::size_t i = 0; i + 1 < diag.size(); ++i) {
            CHECK(diag[i] >= 0);
            if (diag[i] != 0) CHECK(diag[i + 1] % diag[i] == 0);
            else CHECK(diag[i + 1] == 0);
        }
        // First determinantal divisor equals the gcd of the entries.
        Integer g = 0;
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) g = gcd(g, a.at(i, j));
        if (!diag.empty()) CHECK(diag[0] == g);
    }
}

TEST_CASE("presentation canonical form") {
    CHECK(FinAbPresentation::from_cyclic_orders({2, 4}) == FinAbPresentation::from_cyclic_orders({4, 2}));
    CHECK_FALSE(iso_eq(FinAbPresentation::from_cyclic_orders({8}), FinAbPresentation::from_cyclic_orders({2, 4})));
    CHECK(iso_eq(FinAbPresentation::from_cyclic_orders({0, 2}), FinAbPresentation::from_cyclic_orders({2, 0})));
    CHECK(FinAbPresentation::from_cyclic_orders({2, 3}).factors() == std::vector<long long>{6});
    CHECK(FinAbPresentation::from_cyclic_orders({1, 1}).is_trivial());
    CHECK(FinAbPresentation::from_cyclic_orders({0, 4}).free_rank() == 1);
}

TEST_CASE("primary decomposition") {
    const auto p = primary_decomposition(FinAbPresentation::from_cyclic_orders({12, 2, 0}));
    CHECK(p.prime_powers == std::vector<long long>{2, 3, 4});
    CHECK(p.free_rank == 1);
}

TEST_CASE("subgroup examples") {
    CHECK(subgroup_from_elements(CyclicOrders{8}, {{2}}).factors() == std::vector<long long>{4});
    CHECK(subgroup_from_elements(CyclicOrders{4, 2}, {{2, 0}, {0, 1}}).factors() == std::vector<long long>{2, 2});
    CHECK(subgroup_from_elements(CyclicOrders{4, 2}, {}).is_trivial());
    CHECK_THROWS((void)subgroup_from_elements(CyclicOrders{4}, {{5}}));
}

TEST_CASE("subgroup order matches brute-force closure") {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> nfac(1, 4), ngen(0, 3);
    const std::vector<long long> choices{2, 3, 4, 6, 8};
    for (int trial = 0; trial < 150; ++trial) {
        CyclicOrders amb;
        long long total = 1;
        for (int i = 0, r = nfac(rng); i < r; ++i) {
            amb.push_back(choices[rng() % choices.size()]);
            total *= amb.back();
        }
        if (total > 4096) continue;
        std::vector<std::vector<long long>> gens;
        for (int g = 0, r = ngen(rng); g < r; ++g) {
            std::vector<long long> v;
            for (long long o : amb) v.push_back(static_cast<long long>(rng() % o));
            gens.push_back(v);
        }
        const auto sub = subgroup_from_elements(amb, gens);
        const auto size = static_cast<long long>(closure_size(amb, gens));
        CHECK(sub.order() == size);
        CHECK(total % sub.order() == 0);
    }
}

TEST_CASE("element order") {
    CHECK(element_order({8, 2}, {2, 1}) == 4);
    CHECK(element_order({8, 2}, {0, 0}) == 1);
}

TEST_CASE("homomorphism kernel and image") {
    // Z_4 -> Z_2 reduction mod 2
    IntMatrixHom h({4}, {2}, IntMatrix{{1}});
    CHECK(h.kernel().factors() == std::vector<long long>{2});
    CHECK(h.image().factors() == std::vector<long long>{2});
    CHECK(h.apply({3}) == std::vector<long long>{1});
}

}
