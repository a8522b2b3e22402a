#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rholattice/rho_surgery.hpp"

namespace rholattice {

struct SuspensionResult {
    std::optional<StructureElement> determined;
    // Every completion passing element_validate; all share rho and every
    // coordinate except the new t_{4e}.
    std::vector<StructureElement> candidates;
};

SuspensionResult suspend(const StructureElement& x);

// Record of one under-determined t_{4e} and the value picked for it.
struct ChoiceRecord {
    std::string context;
    int from_d = 0;
    std::vector<long long> candidates;
    long long chosen = 0;
};

// Suspension with the smallest candidate; appends to `log` when there was a choice.
StructureElement suspend_canonical(const StructureElement& x, std::vector<ChoiceRecord>* log = nullptr,
                                   const std::string& context = {});

// 1 + chi^2 + ... + chi^{N-2}
RingElement even_sum_rho(const LensParams& p);

StructureElement elem_sigma(const LensParams& p);
StructureElement elem_omega(const LensParams& p);
StructureElement elem_tau(const LensParams& p);
StructureElement elem_mu4m2(const LensParams& p);
// mu_{4i-2} for block i in 1..c.
StructureElement elem_mu4m2_block(const LensParams& p, int i);
StructureElement elem_nu(const LensParams& p);

// Expected tau multiplier set for the new coordinate of Sigma(tau_N).
std::vector<long long> tau_candidate_set(const LensParams& p);

bool image_test_odd_target(const StructureElement& y);
bool image_test_even_target(const StructureElement& y);

struct MinimalExponent {
    int l = 0;
    NormalCoords coords;
};

MinimalExponent minimal_exponent_search(const LensParams& p);
int minimal_exponent(const LensParams& p);

struct TorsionBasis {
    LensParams params;
    std::vector<StructureElement> mu4;
    std::vector<StructureElement> mu4m2;
    std::vector<ChoiceRecord> choice_log;

    // Expected cyclic orders: 2^{min(K,2i)} for mu4, then 2 for mu4m2.
    std::vector<long long> expected_orders() const;
    std::vector<StructureElement> elements() const;
};

TorsionBasis torsion_basis(const LensParams& p);

// Order of a torsion element in the coordinate group.
long long torsion_order(const StructureElement& x);

// Lookup table from torsion coordinates to basis coefficients.
class TorsionExpander {
public:
    explicit TorsionExpander(const TorsionBasis& basis);
    std::vector<long long> coordinates(const StructureElement& x) const;
    StructureElement combine(const std::vector<long long>& coeffs) const;
    std::size_t group_order() const { return table_.size(); }
    // All torsion elements in enumeration order of their coefficients.
    std::vector<StructureElement> all_elements() const;

private:
    TorsionBasis basis_;
    std::vector<long long> orders_;
    std::unordered_map<std::string, std::vector<long long>> table_;
};

std::vector<long long> torsion_coordinates(const StructureElement& x, const TorsionBasis& basis);

Rational browder_livesay_composite(const StructureElement& y, int i);

// rbar_{4i}(x) read off a desuspension of x to L^{4i-1}; needs every block above i to vanish.
Rational browder_livesay_cascade(const StructureElement& x, const TorsionBasis& basis, int i);

}  // namespace rholattice
