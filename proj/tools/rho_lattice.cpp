// rho-lattice: command-line front end for the rholattice library.
#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rholattice/errors.hpp"
#include "rholattice/expression.hpp"
#include "rholattice/json_io.hpp"
#include "rholattice/special_elements.hpp"
#include "rholattice/verify.hpp"

using namespace rholattice;

namespace {

struct Common {
    std::string format = "json";
};

std::string tsv_value(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void emit(const Common& c, const Json& body) {
    if (c.format == "tsv") {
        for (auto& [key, value] : body.items()) std::cout << key << '\t' << tsv_value(value) << '\n';
        return;
    }
    std::cout << with_schema(body).dump(2) << '\n';
}

unsigned long long candidate_cap() {
    if (const char* env = std::getenv("RHO_LATTICE_CAP")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw InvalidArgument(std::string("RHO_LATTICE_CAP is not a number: ") + env);
        }
    }
    return default_candidate_cap;
}

RingModulus modulus_for(int n, const std::string& ideal, int level) {
    switch (kind_from_name(ideal)) {
        case RingKind::GroupRing: return RingModulus::group_ring(n);
        case RingKind::Truncated: return RingModulus::truncated(n);
        case RingKind::BinomialPlus: return RingModulus::binomial_plus(n, level);
        case RingKind::OddTruncated: return RingModulus::odd_truncated(n);
    }
    throw InvalidArgument("unknown ideal " + ideal);
}

struct ElementSource {
    std::string input;
    std::string generator;
    int n = 0;
    int d = 0;
    int k = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--input", input, "element JSON file, or - for stdin");
        cmd->add_option("--generator", generator,
                        "named element: zero, sigma, omega, tau, nu, mu4m2, basis:J (J-th torsion basis element)");
        cmd->add_option("--N", n, "order of the group (with --generator)");
        cmd->add_option("--d", d, "dimension parameter (with --generator)");
        cmd->add_option("--k", k, "rotation parameter (with --generator)");
    }

    StructureElement load() const {
        if (!input.empty() && !generator.empty()) throw InvalidArgument("give either --input or --generator");
        if (!input.empty()) {
            std::stringstream buf;
            if (input == "-") {
                buf << std::cin.rdbuf();
            } else {
                std::ifstream f(input);
                if (!f) throw InvalidArgument("cannot open " + input);
                buf << f.rdbuf();
            }
            Json j;
            try {
                j = Json::parse(buf.str());
            } catch (const Json::parse_error& e) {
                throw InvalidArgument(std::string("input is not JSON: ") + e.what());
            }
            return element_from_json(j);
        }
        if (generator.empty()) throw InvalidArgument("one of --input or --generator is required");
        if (n == 0 || d == 0) throw InvalidArgument("--generator needs --N and --d");
        const LensParams p = LensParams::make(n, d, k);
        if (generator == "zero") return StructureElement::zero(p);
        if (generator == "sigma") return elem_sigma(p);
        if (generator == "omega") return elem_omega(p);
        if (generator == "tau") return elem_tau(p);
        if (generator == "nu") return elem_nu(p);
        if (generator == "mu4m2") return elem_mu4m2(p);
        if (generator.rfind("basis:", 0) == 0) {
            const auto elems = torsion_basis(p).elements();
            const std::size_t j = std::stoul(generator.substr(6));
            if (j >= elems.size()) throw InvalidArgument("basis index out of range");
            return elems[j];
        }
        throw InvalidArgument("unknown generator " + generator);
    }
};

Json special_json(int n, int k, const std::string& name, int level) {
    auto one = [&](const std::string& which) -> Json {
        if (which == "f") return ring_element_to_json(elem_f(n));
        if (which == "f_k") return ring_element_to_json(elem_f_k(n, k));
        if (which == "f_prime_k") return ring_element_to_json(elem_f_prime_k(n, k));
        if (which == "g") return ring_element_to_json(elem_g(n));
        if (which == "h_l") return ring_element_to_json(elem_h_l(n, level));
        if (which == "h") return ring_element_to_json(elem_h(n));
        if (which == "even_sum") return ring_element_to_json(elem_even_sum(n));
        throw InvalidArgument("unknown special element " + which);
    };
    if (name != "all") return {{"N", n}, {"k", normalize_k(n, k)}, {name, one(name)}};
    Json out = {{"N", n}, {"k", normalize_k(n, k)}};
    for (const char* which : {"f", "f_k", "f_prime_k", "g"}) out[which] = one(which);
    if (n % 2 == 0) out["even_sum"] = one("even_sum");
    return out;
}

Json error_json(const std::exception& e) {
    Json err = {{"message", e.what()}};
    if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
        err["type"] = "ParseError";
        err["position"] = pe->position();
    } else if (const auto* ni = dynamic_cast<const NotInvertible*>(&e)) {
        err["type"] = "NotInvertible";
        if (ni->witness()) err["witness"] = ring_element_to_json(*ni->witness());
    } else if (const auto* cap = dynamic_cast<const WorkCapExceeded*>(&e)) {
        err["type"] = "WorkCapExceeded";
        err["needed"] = cap->needed();
        err["cap"] = cap->cap();
    } else if (dynamic_cast<const VerificationFailure*>(&e)) {
        err["type"] = "VerificationFailure";
    } else if (dynamic_cast<const PreconditionFailed*>(&e)) {
        err["type"] = "PreconditionFailed";
    } else {
        err["type"] = "Error";
    }
    return with_schema({{"error", err}});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact computations with rho-invariants of fake lens spaces"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--format", common.format, "output format")->check(CLI::IsMember({"json", "tsv"}));

    // ring
    std::string expr, ideal = "truncated";
    int ring_n = 0, ring_level = 0;
    auto* ring = app.add_subcommand("ring", "evaluate an expression in chi");
    ring->add_option("expr", expr, "expression, e.g. \"(1-x)^-1\"")->required();
    ring->add_option("--N", ring_n, "group order")->required()->check(CLI::PositiveNumber);
    ring->add_option("--ideal", ideal, "group_ring, truncated, binomial_plus or odd_truncated");
    ring->add_option("--level", ring_level, "l for binomial_plus");

    // special
    int sp_n = 0, sp_k = 1, sp_level = 1;
    std::string sp_name = "all";
    auto* special = app.add_subcommand("special", "print the named special elements");
    special->add_option("--N", sp_n)->required()->check(CLI::PositiveNumber);
    special->add_option("--k", sp_k);
    special->add_option("--name", sp_name, "f, f_k, f_prime_k, g, h_l, h, even_sum or all");
    special->add_option("--level", sp_level, "l for h_l");

    // structure-set / kernel
    int ss_n = 0, ss_d = 0, ss_k = 1;
    std::string method = "brute";
    auto add_params = [&](CLI::App* cmd) {
        cmd->add_option("--N", ss_n)->required();
        cmd->add_option("--d", ss_d)->required();
        cmd->add_option("--k", ss_k);
    };
    auto* sset = app.add_subcommand("structure-set", "free rank and torsion of the structure set");
    add_params(sset);
    sset->add_option("--method", method)->check(CLI::IsMember({"brute", "closed", "auto"}));
    auto* kernel = app.add_subcommand("kernel", "brute-force kernel of the reduced rho map, with members");
    add_params(kernel);
    auto* tbasis = app.add_subcommand("torsion-basis", "inductive torsion basis with its choice log");
    add_params(tbasis);

    // element commands
    ElementSource susp_src, inv_src, tr_src;
    auto* susp = app.add_subcommand("suspend", "suspend an element one dimension up");
    susp_src.attach(susp);
    auto* inv = app.add_subcommand("invariants", "expand a torsion element over the torsion basis");
    inv_src.attach(inv);
    int to_n = 0;
    auto* tr = app.add_subcommand("transfer", "transfer an element to a divisor N'");
    tr_src.attach(tr);
    tr->add_option("--to", to_n, "target order N'")->required();

    // verify
    VerifyOptions vo;
    auto* verify = app.add_subcommand("verify", "re-check the library's statements over a parameter sweep");
    verify->add_option("--suite", vo.suite)->check(CLI::IsMember(verify_suites()));
    verify->add_option("--max-N", vo.max_n, "only N up to this bound");
    verify->add_option("--max-d", vo.max_d, "only d up to this bound");
    verify->add_option("--seed", vo.seed);
    verify->add_option("--workers", vo.workers, "worker threads (default: all cores)");
    verify->add_option("--only", vo.only, "run a single statement id");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ring) {
            const RingElement a = parse_expression(expr, modulus_for(ring_n, ideal, ring_level));
            Json body = ring_element_to_json(a);
            body["text"] = a.to_string();
            emit(common, body);
        } else if (*special) {
            emit(common, special_json(sp_n, sp_k, sp_name, sp_level));
        } else if (*sset) {
            KernelOptions opts;
            opts.cap = candidate_cap();
            const auto s = structure_set(LensParams::make(ss_n, ss_d, ss_k), method_from_name(method), opts);
            Json body = descriptor_to_json(s);
            body.erase("members");
            body.erase("t4m2_orders");
            emit(common, body);
        } else if (*kernel) {
            KernelOptions opts;
            opts.cap = candidate_cap();
            emit(common, descriptor_to_json(kernel_rho_bar(LensParams::make(ss_n, ss_d, ss_k), opts)));
        } else if (*tbasis) {
            emit(common, torsion_basis_to_json(torsion_basis(LensParams::make(ss_n, ss_d, ss_k))));
        } else if (*susp) {
            emit(common, suspension_to_json(suspend(susp_src.load())));
        } else if (*inv) {
            const StructureElement x = inv_src.load();
            const TorsionBasis b = torsion_basis(x.params);
            emit(common, {{"params", params_to_json(x.params)},
                          {"coordinates", torsion_coordinates(x, b)},
                          {"orders", b.expected_orders()}});
        } else if (*tr) {
            emit(common, element_to_json(transfer(tr_src.load(), to_n)));
        } else if (*verify) {
            const auto start = std::chrono::steady_clock::now();
            const VerifyReport r = run_verify(vo);
            if (common.format == "tsv") {
                for (const auto& c : r.checks)
                    std::cout << c.id << '\t' << c.params.dump() << '\t' << (c.pass ? "pass" : "fail") << '\t'
                              << c.witness << '\n';
                std::cout << "summary\t" << r.passed() << '\t' << r.failed() << '\n';
            } else {
                write_report(std::cout, r);
            }
            const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            std::cerr << "verify: " << r.checks.size() << " checks, " << r.failed() << " failed, " << seconds << " s\n";
            return r.failed() == 0 ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << error_json(e).dump() << '\n';
        return dynamic_cast<const InvalidArgument*>(&e) || dynamic_cast<const ParseError*>(&e) ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << error_json(e).dump() << '\n';
        return 1;
    }
    return 0;
}
