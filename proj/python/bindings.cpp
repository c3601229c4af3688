#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "orbcount/io.hpp"

namespace py = pybind11;
using namespace orbcount;

namespace {

std::string dump(const json& j) { return j.dump(); }

OrderData order_from(const std::string& poly) { return build_order(parse_poly(poly)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Integral matrices with a given characteristic polynomial";

    m.def("order", [](const std::string& poly, const std::vector<long>& primes) {
        std::vector<Int> ps(primes.begin(), primes.end());
        return dump(order_report(order_from(poly), ps));
    }, py::arg("poly"), py::arg("primes") = std::vector<long>{});

    m.def("orbital", [](const std::string& poly, long p, int twist_order, bool ramified) {
        const OrderData o = order_from(poly);
        json out = to_json(local_zeta(o, p));
        out["coset"] = to_json(orbital_integral_coset(o, p));
        if (twist_order > 1 || ramified) out["twisted"] = to_json(twisted_orbital_integral(o, p, {twist_order, ramified}));
        return dump(out);
    }, py::arg("poly"), py::arg("p"), py::arg("twist_order") = 1, py::arg("ramified") = false);

    m.def("fl_check", [](const std::string& poly, long p, int d) {
        return dump(to_json(fundamental_lemma_check(order_from(poly), p, d)));
    }, py::arg("poly"), py::arg("p"), py::arg("d"));

    m.def("zeta_order", [](const std::string& poly) {
        const OrderData o = order_from(poly);
        json out = to_json(residue_zeta_order(o));
        if (o.n == 2) out["yun_check"] = to_json(yun_global_residue_check(o));
        return dump(out);
    }, py::arg("poly"));

    m.def("satake", [](int n, int d, int jmax) {
        json rows = json::array();
        for (const auto& r : satake_transfer_check(n, d, jmax)) rows.push_back(to_json(r));
        return dump(rows);
    }, py::arg("n"), py::arg("d"), py::arg("jmax") = 12);

    m.def("delta", [](long p, int e_degree, const std::string& kind, long arg, int precision) {
        LocalExtensionSpec s;
        if (kind == "unramified") {
            s.kind = LocalExtensionSpec::Kind::unramified;
            s.degree = static_cast<int>(arg);
        } else if (kind == "sqrt") {
            s.kind = LocalExtensionSpec::Kind::sqrt;
            s.degree = 2;
            s.radicand = arg;
        } else {
            throw py::value_error("kind must be 'unramified' or 'sqrt'");
        }
        return dump(to_json(delta_local(p, e_degree, s, precision)));
    }, py::arg("p"), py::arg("e_degree"), py::arg("kind"), py::arg("arg"), py::arg("precision") = 8);

    m.def("constant", [](const std::string& poly, const std::string& mode, const std::string& invariants) {
        const OrderData o = order_from(poly);
        if (!invariants.empty()) return dump(to_json(assemble_constant_general(parse_invariants(json::parse(invariants), o.n))));
        if (mode == "general") return dump(to_json(assemble_constant_general(general_inputs_over_Q(o))));
        return dump(to_json(assemble_constant_Q(o)));
    }, py::arg("poly"), py::arg("mode") = "Q", py::arg("invariants") = "");

    m.def("count_points", [](const std::string& poly, double T, int threads) {
        CountKernelConfig cfg;
        cfg.threads = threads;
        py::gil_scoped_release release;
        return count_points_n2(parse_poly(poly), T, cfg);
    }, py::arg("poly"), py::arg("T"), py::arg("threads") = 1);

    m.def("count_points_bruteforce", [](const std::string& poly, double T) {
        return count_points_bruteforce(parse_poly(poly), T);
    }, py::arg("poly"), py::arg("T"));

    m.def("census", [](const std::string& poly, double tmax, double tmin, int threads) {
        CountKernelConfig cfg;
        cfg.threads = threads;
        cfg.schedule = geometric_schedule(tmin, tmax);
        py::gil_scoped_release release;
        return dump(to_json(census_series(parse_poly(poly), cfg)));
    }, py::arg("poly"), py::arg("tmax"), py::arg("tmin") = 10.0, py::arg("threads") = 1);

    m.def("analytic", [](int n) { return dump(to_json(arch_constants(n))); }, py::arg("n"));
}
