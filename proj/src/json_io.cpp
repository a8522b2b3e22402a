#include "rholattice/json_io.hpp"

#include "rholattice/errors.hpp"

namespace rholattice {

namespace {

template <class F>
auto guarded(const char* what, F&& body) {
    try {
        return body();
    } catch (const Json::exception& e) {
        throw InvalidArgument(std::string("malformed ") + what + " JSON: " + e.what());
    }
}

Json int_vector(const std::vector<long long>& v) { return Json(v); }

std::vector<long long> read_int_vector(const Json& j) { return j.get<std::vector<long long>>(); }

}  // namespace

Json with_schema(Json body) {
    Json out = {{"schema", schema_version}};
    for (auto& [key, value] : body.items()) out[key] = value;
    return out;
}

Json rational_to_json(const Rational& q) { return Json::array({q.get_num().get_str(), q.get_den().get_str()}); }

Rational rational_from_json(const Json& j) {
    return guarded("rational", [&] {
        if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
        if (j.is_string()) return make_rational(Integer(j.get<std::string>()), Integer(1));
        if (!j.is_array() || j.size() != 2) throw InvalidArgument("rational must be [\"num\", \"den\"]");
        auto part = [](const Json& x) {
            return x.is_string() ? Integer(x.get<std::string>()) : Integer(static_cast<long>(x.get<long long>()));
        };
        const Integer den = part(j[1]);
        if (den == 0) throw InvalidArgument("rational with zero denominator");
        return make_rational(part(j[0]), den);
    });
}

Json modulus_to_json(const RingModulus& m) {
    Json out = {{"N", m.n()}, {"kind", kind_name(m.kind())}};
    if (m.kind() == RingKind::BinomialPlus) out["level"] = m.level();
    return out;
}

RingModulus modulus_from_json(const Json& j) {
    return guarded("modulus", [&] {
        const int n = j.at("N").get<int>();
        switch (kind_from_name(j.value("kind", std::string("truncated")))) {
            case RingKind::GroupRing: return RingModulus::group_ring(n);
            case RingKind::Truncated: return RingModulus::truncated(n);
            case RingKind::BinomialPlus: return RingModulus::binomial_plus(n, j.at("level").get<int>());
            case RingKind::OddTruncated: return RingModulus::odd_truncated(n);
        }
        throw InvalidArgument("unknown ring kind");
    });
}

Json ring_element_to_json(const RingElement& a) {
    Json out = modulus_to_json(a.modulus());
    Json coeffs = Json::array();
    for (const auto& q : a.coeffs()) coeffs.push_back(rational_to_json(q));
    out["coeffs"] = std::move(coeffs);
    return out;
}

RingElement ring_element_from_json(const Json& j) {
    return guarded("ring element", [&] {
        const RingModulus m = modulus_from_json(j);
        std::vector<Rational> coeffs;
        for (const auto& c : j.at("coeffs")) coeffs.push_back(rational_from_json(c));
        if (static_cast<int>(coeffs.size()) != m.length())
            throw InvalidArgument("expected " + std::to_string(m.length()) + " coefficients for " + m.describe());
        return RingElement(m, std::move(coeffs));
    });
}

Json presentation_to_json(const FinAbPresentation& a) {
    return {{"factors", a.factors()}, {"order", a.is_finite() ? Json(a.order()) : Json(nullptr)},
            {"text", a.to_string()}};
}

FinAbPresentation presentation_from_json(const Json& j) {
    return guarded("presentation", [&] { return FinAbPresentation::from_cyclic_orders(read_int_vector(j.at("factors"))); });
}

Json matrix_to_json(const IntMatrix& a) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Integer& v = a.at(i, j);
            if (v.fits_slong_p())
                row.push_back(v.get_si());
            else
                row.push_back(v.get_str());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Json params_to_json(const LensParams& p) {
    return {{"N", p.N}, {"K", p.K}, {"M", p.M}, {"d", p.d}, {"e", p.e}, {"c", p.c}, {"k", p.k}};
}

LensParams params_from_json(const Json& j) {
    return guarded("params", [&] { return LensParams::make(j.at("N").get<int>(), j.at("d").get<int>(), j.value("k", 1)); });
}

Json coords_to_json(const NormalCoords& t) { return {{"t4", int_vector(t.t4)}, {"t4m2", int_vector(t.t4m2)}}; }

NormalCoords coords_from_json(const LensParams& p, const Json& j) {
    return guarded("coords", [&] {
        NormalCoords t{read_int_vector(j.at("t4")), read_int_vector(j.at("t4m2"))};
        validate_coords(p, t);
        return t;
    });
}

Json element_to_json(const StructureElement& x) {
    return {{"params", params_to_json(x.params)}, {"rho", ring_element_to_json(x.rho)}, {"coords", coords_to_json(x.coords)}};
}

StructureElement element_from_json(const Json& j) {
    return guarded("structure element", [&] {
        const Json& body = j.contains("element") ? j.at("element") : j;
        const LensParams p = params_from_json(body.at("params"));
        StructureElement x{p, body.contains("rho") ? ring_element_from_json(body.at("rho")) : RingElement::zero(p.ring()),
                           body.contains("coords") ? coords_from_json(p, body.at("coords")) : NormalCoords::zero(p)};
        if (!(x.rho.modulus() == p.ring())) throw InvalidArgument("rho must live in the truncated ring for N");
        const std::string reason = element_check(x);
        if (!reason.empty()) throw InvalidArgument("invalid structure element: " + reason);
        return x;
    });
}

Json descriptor_to_json(const StructureSetDescriptor& s) {
    Json out = {{"params", params_to_json(s.params)},
                {"free_rank", s.free_rank},
                {"torsion", presentation_to_json(s.torsion)},
                {"method", method_name(s.method)},
                {"fallback", s.fallback}};
    if (s.t4_members) {
        out["members"] = *s.t4_members;
        out["t4m2_orders"] = std::vector<long long>(s.params.c, s.params.t4m2_modulus());
    }
    return out;
}

Json suspension_to_json(const SuspensionResult& r) {
    Json out = {{"determined", r.determined ? element_to_json(*r.determined) : Json(nullptr)}};
    Json cands = Json::array();
    std::vector<long long> values;
    for (const auto& c : r.candidates) {
        cands.push_back(element_to_json(c));
        values.push_back(c.coords.t4.empty() ? 0 : c.coords.t4.back());
    }
    out["candidates"] = std::move(cands);
    out["t4e_candidates"] = values;
    return out;
}

Json choice_to_json(const ChoiceRecord& c) {
    return {{"context", c.context}, {"from_d", c.from_d}, {"candidates", c.candidates}, {"chosen", c.chosen}};
}

Json torsion_basis_to_json(const TorsionBasis& b) {
    Json mu4 = Json::array(), mu4m2 = Json::array(), log = Json::array();
    for (const auto& x : b.mu4) mu4.push_back(element_to_json(x));
    for (const auto& x : b.mu4m2) mu4m2.push_back(element_to_json(x));
    for (const auto& c : b.choice_log) log.push_back(choice_to_json(c));
    return {{"params", params_to_json(b.params)}, {"mu4", mu4},           {"mu4m2", mu4m2},
            {"orders", b.expected_orders()},      {"choice_log", log}};
}

}  // namespace rholattice
