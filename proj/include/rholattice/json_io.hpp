#pragma once

#include <json.hpp>

#include "rholattice/abelian.hpp"
#include "rholattice/cyclic_ring.hpp"
#include "rholattice/rho_surgery.hpp"
#include "rholattice/suspension_torsion.hpp"

namespace rholattice {

using Json = nlohmann::json;

inline constexpr const char* schema_version = "rho-lattice/1";

// Adds the top-level schema tag.
Json with_schema(Json body);

// ["num", "den"] with decimal strings.
Json rational_to_json(const Rational& q);
Rational rational_from_json(const Json& j);

Json modulus_to_json(const RingModulus& m);
RingModulus modulus_from_json(const Json& j);

// {"N", "kind", ["level"], "coeffs"}
Json ring_element_to_json(const RingElement& a);
RingElement ring_element_from_json(const Json& j);

Json presentation_to_json(const FinAbPresentation& a);
FinAbPresentation presentation_from_json(const Json& j);

Json matrix_to_json(const IntMatrix& a);

Json params_to_json(const LensParams& p);
LensParams params_from_json(const Json& j);

Json coords_to_json(const NormalCoords& t);
NormalCoords coords_from_json(const LensParams& p, const Json& j);

Json element_to_json(const StructureElement& x);
// Parses and validates; invalid tuples raise InvalidArgument.
StructureElement element_from_json(const Json& j);

Json descriptor_to_json(const StructureSetDescriptor& s);
Json suspension_to_json(const SuspensionResult& r);
Json choice_to_json(const ChoiceRecord& c);
Json torsion_basis_to_json(const TorsionBasis& b);

}  // namespace rholattice
