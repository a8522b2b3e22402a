#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "rholattice/errors.hpp"
#include "rholattice/expression.hpp"
#include "rholattice/json_io.hpp"
#include "rholattice/special_elements.hpp"
#include "rholattice/verify.hpp"

namespace py = pybind11;
using namespace rholattice;

// Everything crosses the boundary as JSON text; the Python package decodes it.
namespace {

RingModulus modulus_for(int n, const std::string& ideal, int level) {
    return modulus_from_json(Json{{"N", n}, {"kind", ideal}, {"level", level}});
}

StructureElement element_arg(const std::string& text) { return element_from_json(Json::parse(text)); }

}  // namespace

PYBIND11_MODULE(_rholattice, m) {
    m.doc() = "Exact rho-invariant and structure-set computations for lens spaces";

    static py::exception<Error> base(m, "RhoLatticeError");
    static py::exception<InvalidArgument> invalid(m, "InvalidArgument", base.ptr());
    static py::exception<ParseError> parse(m, "ParseError", invalid.ptr());
    static py::exception<NotInvertible> not_invertible(m, "NotInvertible", base.ptr());
    static py::exception<PreconditionFailed> precondition(m, "PreconditionFailed", base.ptr());
    static py::exception<VerificationFailure> verification(m, "VerificationFailure", base.ptr());
    static py::exception<WorkCapExceeded> cap(m, "WorkCapExceeded", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ParseError& e) {
            py::set_error(parse, e.what());
        } catch (const InvalidArgument& e) {
            py::set_error(invalid, e.what());
        } catch (const NotInvertible& e) {
            py::set_error(not_invertible, e.what());
        } catch (const PreconditionFailed& e) {
            py::set_error(precondition, e.what());
        } catch (const VerificationFailure& e) {
            py::set_error(verification, e.what());
        } catch (const WorkCapExceeded& e) {
            py::set_error(cap, e.what());
        } catch (const Error& e) {
            py::set_error(base, e.what());
        } catch (const Json::exception& e) {
            py::set_error(invalid, e.what());
        }
    });

    m.def("ring", [](const std::string& expr, int n, const std::string& ideal, int level) {
        return ring_element_to_json(parse_expression(expr, modulus_for(n, ideal, level))).dump();
    }, py::arg("expr"), py::arg("N"), py::arg("ideal") = "truncated", py::arg("level") = 0);

    m.def("special", [](int n, int k) {
        return Json{{"f", ring_element_to_json(elem_f(n))},
                    {"f_k", ring_element_to_json(elem_f_k(n, k))},
                    {"f_prime_k", ring_element_to_json(elem_f_prime_k(n, k))},
                    {"g", ring_element_to_json(elem_g(n))}}.dump();
    }, py::arg("N"), py::arg("k") = 1);

    m.def("structure_set", [](int n, int d, int k, const std::string& method) {
        py::gil_scoped_release release;
        return descriptor_to_json(structure_set(LensParams::make(n, d, k), method_from_name(method))).dump();
    }, py::arg("N"), py::arg("d"), py::arg("k") = 1, py::arg("method") = "brute");

    m.def("generator", [](const std::string& name, int n, int d, int k) {
        const LensParams p = LensParams::make(n, d, k);
        if (name == "zero") return element_to_json(StructureElement::zero(p)).dump();
        if (name == "sigma") return element_to_json(elem_sigma(p)).dump();
        if (name == "omega") return element_to_json(elem_omega(p)).dump();
        if (name == "tau") return element_to_json(elem_tau(p)).dump();
        if (name == "nu") return element_to_json(elem_nu(p)).dump();
        if (name == "mu4m2") return element_to_json(elem_mu4m2(p)).dump();
        if (name.rfind("basis:", 0) == 0) {
            const auto elems = torsion_basis(p).elements();
            const std::string index = name.substr(6);
            if (index.empty() || index.find_first_not_of("0123456789") != std::string::npos ||
                std::stoul(index) >= elems.size())
                throw InvalidArgument("basis index out of range: " + name);
            return element_to_json(elems[std::stoul(index)]).dump();
        }
        throw InvalidArgument("unknown generator " + name);
    }, py::arg("name"), py::arg("N"), py::arg("d"), py::arg("k") = 1);

    m.def("validate", [](const std::string& element) {
        const Json j = Json::parse(element);
        const LensParams p = params_from_json(j.at("params"));
        const StructureElement x{p, ring_element_from_json(j.at("rho")), coords_from_json(p, j.at("coords"))};
        return element_check(x);
    }, py::arg("element"), "empty string when valid, otherwise the reason");

    m.def("suspend", [](const std::string& element) { return suspension_to_json(suspend(element_arg(element))).dump(); },
          py::arg("element"));

    m.def("torsion_basis", [](int n, int d, int k) {
        return torsion_basis_to_json(torsion_basis(LensParams::make(n, d, k))).dump();
    }, py::arg("N"), py::arg("d"), py::arg("k") = 1);

    m.def("torsion_coordinates", [](const std::string& element) {
        const StructureElement x = element_arg(element);
        return torsion_coordinates(x, torsion_basis(x.params));
    }, py::arg("element"));

    m.def("transfer", [](const std::string& element, int n_prime) {
        return element_to_json(transfer(element_arg(element), n_prime)).dump();
    }, py::arg("element"), py::arg("N_prime"));

    m.def("minimal_exponent", [](int n, int d) { return minimal_exponent(LensParams::make(n, d)); },
          py::arg("N"), py::arg("d"));

    m.def("verify", [](const std::string& suite, int max_n, int max_d, std::uint64_t seed, unsigned workers) {
        VerifyOptions o;
        o.suite = suite;
        o.max_n = max_n;
        o.max_d = max_d;
        o.seed = seed;
        o.workers = workers;
        std::ostringstream out;
        {
            py::gil_scoped_release release;
            write_report(out, run_verify(o));
        }
        return out.str();
    }, py::arg("suite") = "all", py::arg("max_N") = 0, py::arg("max_d") = 0, py::arg("seed") = 1, py::arg("workers") = 0);
}
