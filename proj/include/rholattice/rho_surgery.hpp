#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rholattice/abelian.hpp"
#include "rholattice/cyclic_ring.hpp"

namespace rholattice {

inline constexpr unsigned long long default_candidate_cap = 1ULL << 22;

// Lens space L^{2d-1}_N(alpha_k) with N = 2^K M, e = floor(d/2), c = floor((d-1)/2).
struct LensParams {
    int N = 2;
    int K = 1;
    int M = 1;
    int d = 3;
    int e = 1;
    int c = 1;
    int k = 1;

    static LensParams make(int n, int d, int k = 1);

    Sign sign() const { return parity_sign(d); }
    long long t4_modulus() const { return 1LL << K; }
    long long t4m2_modulus() const { return K >= 1 ? 2 : 1; }
    long long odd_order() const { return pow_ll(M, c); }
    RingModulus ring() const { return RingModulus::truncated(N); }
    LensParams with_d(int new_d) const { return make(N, new_d, k); }

    bool operator==(const LensParams&) const = default;
    std::string to_string() const;
};

// 2-local reduced normal invariants: t4[i-1] = t_{4i} mod 2^K, t4m2[i-1] = t_{4i-2}.
struct NormalCoords {
    std::vector<long long> t4;
    std::vector<long long> t4m2;

    static NormalCoords zero(const LensParams& p);
    // Flat layout: t4 block first, then t4m2.
    std::vector<long long> flatten() const;
    static NormalCoords unflatten(const LensParams& p, const std::vector<long long>& flat);
    bool is_zero() const;

    auto operator<=>(const NormalCoords&) const = default;
};

void validate_coords(const LensParams& p, const NormalCoords& t);
CyclicOrders coordinate_orders(const LensParams& p);
NormalCoords coords_add(const LensParams& p, const NormalCoords& a, const NormalCoords& b);
NormalCoords coords_scale(const LensParams& p, const NormalCoords& a, long long m);

struct StructureElement {
    LensParams params;
    RingElement rho;
    NormalCoords coords;

    static StructureElement zero(const LensParams& p);
    bool is_torsion() const { return rho.is_zero(); }
    bool operator==(const StructureElement&) const = default;
};

enum class KernelMethod { Brute, Closed, Auto };

std::string method_name(KernelMethod m);
KernelMethod method_from_name(const std::string& name);

struct KernelOptions {
    unsigned long long cap = default_candidate_cap;
    unsigned workers = 1;
};

struct StructureSetDescriptor {
    LensParams params;
    int free_rank = 0;
    FinAbPresentation torsion;
    KernelMethod method = KernelMethod::Brute;
    bool fallback = false;  // brute force hit the cap and the closed form was used
    // Kernel members in the t4 block, lexicographic; the t4m2 block is free.
    std::optional<std::vector<std::vector<long long>>> t4_members;
};

int l_group_reduced_rank(int n, Sign parity);
int rank_clause(int n, int d);

struct ReducedNormalGroup {
    FinAbPresentation two_local;
    long long odd_order = 1;
};

ReducedNormalGroup reduced_normal_group(const LensParams& p);

std::vector<Integer> lift_tbar(const std::vector<long long>& t4, const LensParams& p);

// Summands B_i with [rho](t) = sum_i tbar_i B_i.
std::vector<RingElement> rho_bar_basis(const LensParams& p);
RingElement rho_bar_formula(const LensParams& p, const NormalCoords& t);
RingElement rho_bar_formula_lifted(const LensParams& p, const std::vector<Integer>& tbar);

bool rho_class_is_zero(const LensParams& p, const RingElement& x);
// The realizable image of the L-group: 4R^{(-1)^d}, with values at chi = -1 in 8Z when d and N are even.
bool in_boundary_lattice(const LensParams& p, const RingElement& x);

StructureSetDescriptor kernel_rho_bar(const LensParams& p, const KernelOptions& options = {});
FinAbPresentation kernel_closed_form(const LensParams& p);
StructureSetDescriptor structure_set(const LensParams& p, KernelMethod method = KernelMethod::Brute,
                                     const KernelOptions& options = {});

RingElement rho_cp_formula(const std::vector<Integer>& s4, int d, int n);

bool element_validate(const StructureElement& x);
// Reason for rejection, empty when valid.
std::string element_check(const StructureElement& x);
StructureElement element_add(const StructureElement& x, const StructureElement& y);
StructureElement element_scale(const StructureElement& x, long long m);

NormalCoords transfer(const NormalCoords& t, const LensParams& from, int n_prime);
StructureElement transfer(const StructureElement& x, int n_prime);

}  // namespace rholattice
