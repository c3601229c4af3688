#include "orbcount/io.hpp"

#include <fstream>
#include <set>

namespace orbcount {

json to_json(const Int& v) {
    if (v.fits_slong_p()) return v.get_si();
    return to_string(v);
}

json to_json(const Rat& v) { return to_string(v); }

json to_json(const Symbolic& s) {
    json logs = json::array();
    for (const auto& [name, e] : s.log_powers())
        logs.push_back({{"name", name}, {"value", static_cast<double>(s.log_values().at(name))}, {"power", e}});
    json zetas = json::array();
    for (const auto& [k, e] : s.zeta_powers()) zetas.push_back({{"k", k}, {"power", e}});
    return {{"symbolic", s.to_string()},
            {"float", static_cast<double>(s.value())},
            {"rational", to_string(s.coeff())},
            {"pi_power", s.pi_half_power() / 2.0},
            {"sqrt_arg", to_json(s.root())},
            {"log_terms", logs},
            {"zeta_terms", zetas}};
}

json to_json(const Value& v) {
    if (v.exact) return to_json(*v.exact);
    return {{"symbolic", nullptr}, {"float", static_cast<double>(v.approx)}};
}

json to_json(const Cyclotomic& c) {
    json coeffs = json::array();
    for (const auto& a : c.coeffs()) coeffs.push_back(to_json(a));
    const auto z = c.value();
    return {{"order", c.order()}, {"text", c.to_string()}, {"coeffs", coeffs}, {"re", z.real()}, {"im", z.imag()}};
}

json to_json(const ModPFactorization& f) {
    json factors = json::array();
    for (const auto& g : f.factors) factors.push_back({{"coeffs", g.poly}, {"mult", g.multiplicity}});
    return {{"p", to_json(f.prime)}, {"factors", factors}};
}

namespace {

Int int_from_json(const json& j, const std::string& where) {
    if (j.is_number_integer()) return Int(j.get<long>());
    if (j.is_string()) return Int(j.get<std::string>());
    throw InvariantsError(where + ": expected an integer");
}

}  // namespace

std::optional<Symbolic> symbolic_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rational")) return std::nullopt;
    const auto& r = j.at("rational");
    Rat c = r.is_string() ? Rat(r.get<std::string>()) : Rat(r.get<long>());
    c.canonicalize();
    Symbolic s(c);
    const double pp = j.value("pi_power", 0.0);
    if (pp * 2 != static_cast<int>(pp * 2)) throw InvariantsError("pi_power must be a multiple of 1/2");
    if (pp != 0) s = s * Symbolic::pi(static_cast<int>(pp * 2));
    for (const char* key : {"sqrt_arg", "sqrt"})
        if (j.contains(key)) {
            const Int m = int_from_json(j.at(key), key);
            if (m <= 0) throw InvariantsError(std::string(key) + ": must be positive");
            if (m != 1) s = s * Symbolic::sqrt(m);
        }
    for (const auto& t : j.value("log_terms", json::array())) {
        if (!t.contains("name") || !t.contains("value")) throw InvariantsError("log_terms: need name and value");
        s = s * Symbolic::log(t.at("name").get<std::string>(), t.at("value").get<double>()).pow(t.value("power", 1));
    }
    for (const auto& t : j.value("zeta_terms", json::array()))
        s = s * Symbolic::zeta(t.at("k").get<int>()).pow(t.value("power", 1));
    return s;
}

Value value_from_json(const json& j) {
    if (j.is_number()) return Value::numeric(j.get<double>());
    if (auto s = symbolic_from_json(j)) return Value(*s);
    if (j.is_object() && j.contains("float")) return Value::numeric(j.at("float").get<double>());
    throw InvariantsError("expected a number or a symbolic object");
}

json order_report(const OrderData& o, const std::vector<Int>& primes) {
    const GlobalIndex g = global_index(o);
    json per = json::array();
    for (const auto& [p, s] : g.per_prime) per.push_back({{"p", to_json(p)}, {"s_p", s}});
    json local = json::array();
    for (const auto& p : primes) {
        const auto m = p_maximal_order(o, p);
        json basis = json::array();
        for (std::size_t i = 0; i < m.overorder_basis.rows(); ++i) {
            json row = json::array();
            for (std::size_t k = 0; k < m.overorder_basis.cols(); ++k) row.push_back(to_string(m.overorder_basis(i, k)));
            basis.push_back(row);
        }
        local.push_back({{"p", to_json(p)},
                         {"s_p", m.s_p},
                         {"residue_degrees", residue_degrees(o, m.overorder_basis, p)},
                         {"maximal_basis", basis},
                         {"factorization", to_json(factor_mod_p(o.poly, p))}});
    }
    json dual = json::array();
    for (std::size_t i = 0; i < o.dual_basis.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < o.dual_basis.cols(); ++k) row.push_back(to_string(o.dual_basis(i, k)));
        dual.push_back(row);
    }
    return {{"poly", o.poly.to_csv()},
            {"n", o.n},
            {"disc", to_json(o.disc)},
            {"index", to_json(g.index)},
            {"index_complete", g.complete},
            {"per_prime", per},
            {"dual_basis", dual},
            {"local", local}};
}

json to_json(const LocalZeta& z) {
    json jc = json::array(), jt = json::array();
    for (const auto& a : z.J_coeffs) jc.push_back(to_json(a));
    for (const auto& a : z.J_tilde_coeffs) jt.push_back(to_json(a));
    return {{"p", to_json(z.p)},
            {"q", to_json(z.q)},
            {"s_p", z.s_p},
            {"residue_degrees", z.residue_degrees},
            {"J_coeffs", jc},
            {"J_tilde_coeffs", jt},
            {"J_tilde_offset", z.J_tilde_offset},
            {"orbital", to_json(z.orbital_value)}};
}

json to_json(const CosetOrbital& c) {
    return {{"value", to_json(c.value)}, {"classes", c.classes}, {"lattices", c.lattices}, {"depth", c.depth}};
}

json to_json(const FundamentalLemmaReport& r) {
    return {{"p", to_json(r.p)},
            {"d", r.d},
            {"m", r.m},
            {"s_p", r.s_p},
            {"s_E", r.s_E},
            {"disc_valuation", r.disc_valuation},
            {"teichmuller_minpoly", r.teichmuller_minpoly},
            {"lhs",
             {{"abs_delta_gamma", to_json(r.abs_delta_gamma)},
              {"c_G_inverse", to_json(r.c_G_inverse)},
              {"twisted_orbital", to_json(r.twisted)},
              {"abs_sq", to_json(r.lhs_abs_sq)},
              {"abs", r.lhs_abs}}},
            {"rhs",
             {{"abs_delta_gamma_E", to_json(r.abs_delta_gamma_E)},
              {"c_H_inverse", to_json(r.c_H_inverse)},
              {"stable_orbital", to_json(r.stable)},
              {"abs_sq", to_json(r.rhs_abs_sq)},
              {"abs", r.rhs_abs}}},
            {"equal", r.equal}};
}

json to_json(const ResidueReport& r) {
    json local = json::object();
    for (const auto& [p, v] : r.local_factors) local[to_string(p)] = to_json(v);
    return {{"disc_K", to_json(r.disc_K)},
            {"res_zeta_K", to_json(r.res_zeta_K)},
            {"res_zeta_R", to_json(r.res_zeta_R)},
            {"local_factors", local},
            {"index", to_json(r.index)}};
}

json to_json(const YunReport& r) {
    json terms = json::array();
    for (const auto& t : r.terms)
        terms.push_back({{"conductor", to_json(t.conductor)},
                         {"disc", to_json(t.disc)},
                         {"class_number", to_json(t.class_number)},
                         {"unit_index", to_json(t.unit_index)}});
    return {{"D", to_json(r.D)},
            {"conductor", to_json(r.conductor)},
            {"terms", terms},
            {"yun_residue", to_json(r.yun_residue)},
            {"order_residue", to_json(r.order_residue)},
            {"relative_error", r.relative_error},
            {"match", r.match}};
}

json to_json(const ArchConstants& a) {
    json gr = json::array(), gc = json::array(), lam = json::object();
    for (const auto& g : a.gamma_real) gr.push_back(to_json(g));
    for (const auto& g : a.gamma_complex) gc.push_back(to_json(g));
    for (const auto& [k, v] : a.lambda_values) lam[std::to_string(k)] = to_json(v);
    return {{"n", a.n},
            {"d", a.d},
            {"gamma_real", gr},
            {"gamma_complex", gc},
            {"lambda", lam},
            {"w_real", to_json(a.ball_volume_real)},
            {"w_complex", to_json(a.ball_volume_complex)},
            {"vol_U_real", to_json(a.vol_compact_real)},
            {"vol_U_complex", to_json(a.vol_compact_complex)}};
}

json to_json(const EndoDatum& e) {
    json deltas = json::array();
    for (const auto& [p, v] : e.delta_locals) deltas.push_back({{"p", to_json(p)}, {"value", v}});
    return {{"field", e.field},
            {"degree", e.degree},
            {"u_order", e.u_order},
            {"u_index", e.u_index},
            {"m", e.m},
            {"local_table", e.local_table},
            {"delta_locals", deltas},
            {"delta_global", to_json(e.delta_global)},
            {"contributes", e.contributes}};
}

json to_json(const DeltaReport& r) {
    json hist = json::array();
    for (const auto& [k, v] : r.history) hist.push_back({{"k", k}, {"index", to_json(v)}});
    return {{"delta", to_json(r.value)}, {"precision", r.precision}, {"shape", r.shape}, {"history", hist}};
}

json to_json(const SatakeRow& r) {
    return {{"j", r.j},
            {"divisible", r.divisible},
            {"image", r.image.is_zero() ? "0" : r.image.to_string("W")},
            {"expected", r.expected.is_zero() ? "0" : r.expected.to_string("W")},
            {"equal", r.equal}};
}

json to_json(const ConstantReport& c) {
    json local = json::object();
    for (const auto& [p, v] : c.local_factors) local[to_string(p)] = to_json(v);
    json lam = json::array();
    for (const auto& v : c.lambda_values) lam.push_back(to_json(v));
    json data = json::array();
    for (const auto& e : c.data) data.push_back(to_json(e));
    json out = {{"mode", c.mode},
                {"poly", c.poly},
                {"n", c.n},
                {"d", c.d},
                {"res_zeta_K", to_json(c.res_zeta_K)},
                {"res_zeta_R", to_json(c.res_zeta_R)},
                {"index", to_json(c.index)},
                {"local_factors", local},
                {"w_n", to_json(c.w_n)},
                {"vol_U_inf", to_json(c.vol_U_inf)},
                {"lambda_values", lam},
                {"lambda_product", to_json(c.lambda_product)},
                {"numerator", to_json(c.numerator)},
                {"term_count", c.term_count},
                {"endoscopic_data", data},
                {"denominator_theorem", to_json(c.denominator_theorem)},
                {"denominator_proof", to_json(c.denominator_proof)},
                {"denominators_agree", c.denominators_agree},
                {"measure_ratio", to_json(c.measure_ratio)},
                {"C", to_json(c.constant)}};
    if (c.ems_constant) out["C_ems"] = to_json(*c.ems_constant);
    return out;
}

json to_json(const CensusReport& r) {
    json cps = json::array();
    for (const auto& c : r.checkpoints)
        cps.push_back({{"T", static_cast<double>(c.T)}, {"count", c.count}, {"ratio", static_cast<double>(c.ratio)}});
    json out = {{"poly", r.poly},
                {"n", r.n},
                {"d", r.d},
                {"checkpoints", cps},
                {"slope_fit", static_cast<double>(r.slope_fit)},
                {"sample_checked", r.sample_checked},
                {"sample_failed", r.sample_failed}};
    if (r.reference_constant) {
        out["reference_constant"] = static_cast<double>(*r.reference_constant);
        out["relative_deviation"] = static_cast<double>(*r.relative_deviation);
    }
    return out;
}

GeneralInputs parse_invariants(const json& j, std::optional<int> expected_n) {
    auto need = [](const json& obj, const std::string& key, const std::string& where) -> const json& {
        if (!obj.is_object() || !obj.contains(key)) throw InvariantsError(where + ": missing \"" + key + "\"");
        return obj.at(key);
    };
    try {
        const int version = need(j, "schema_version", "root").get<int>();
        if (version != kInvariantsSchemaVersion)
            throw InvariantsError("schema_version: unsupported version " + std::to_string(version));
        GeneralInputs in;
        in.n = need(j, "n", "root").get<int>();
        if (in.n < 2) throw InvariantsError("n: must be at least 2");
        if (expected_n && *expected_n != in.n)
            throw InvariantsError("n: file has n = " + std::to_string(in.n) + ", polynomial has degree " +
                                  std::to_string(*expected_n));
        if (j.contains("base_field")) {
            const json& b = j.at("base_field");
            in.base.name = b.value("name", std::string("F"));
            in.base.degree = need(b, "degree", "base_field").get<int>();
            in.base.r1 = need(b, "r1", "base_field").get<int>();
            in.base.r2 = need(b, "r2", "base_field").get<int>();
            in.base.disc = int_from_json(need(b, "disc", "base_field"), "base_field.disc");
            if (in.base.r1 + 2 * in.base.r2 != in.base.degree)
                throw InvariantsError("base_field: r1 + 2 r2 must equal degree");
            in.res_zeta_F = value_from_json(need(b, "res_zeta", "base_field"));
            const json& z = need(b, "zeta", "base_field");
            for (int k = 2; k <= in.n; ++k)
                in.zeta_F[k] = value_from_json(need(z, std::to_string(k), "base_field.zeta"));
        } else {
            in.res_zeta_F = Value(Symbolic(1));
            for (int k = 2; k <= in.n; ++k) in.zeta_F[k] = Value(Symbolic::zeta(k));
        }
        if (j.contains("res_zeta_K")) in.res_zeta_K = value_from_json(j.at("res_zeta_K"));
        if (j.contains("relative_disc_norm")) in.relative_disc_norm = int_from_json(j.at("relative_disc_norm"), "relative_disc_norm");
        const json& fields = need(j, "fields", "root");
        if (!fields.is_array() || fields.empty()) throw InvariantsError("fields: expected a nonempty array");
        std::set<std::string> names;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const std::string where = "fields[" + std::to_string(i) + "]";
            const json& f = fields[i];
            GeneralFieldInput g;
            g.field.name = need(f, "name", where).get<std::string>();
            if (!names.insert(g.field.name).second)
                throw InvariantsError(where + ".name: duplicate E record '" + g.field.name + "'");
            g.field.degree = need(f, "degree", where).get<int>();
            if (g.field.degree < 1 || in.n % g.field.degree != 0)
                throw InvariantsError(where + ".degree: " + std::to_string(g.field.degree) + " does not divide n = " +
                                      std::to_string(in.n));
            g.field.cyclic = f.value("cyclic", true);
            for (const auto& p : f.value("ramified_primes", json::array()))
                g.field.ramified_primes.push_back(int_from_json(p, where + ".ramified_primes"));
            if (f.contains("real_places")) {
                for (const auto& v : f.at("real_places")) {
                    const auto s = v.get<std::string>();
                    if (s == "split") g.field.real_places.push_back(RealPlaceType::split);
                    else if (s == "complex") g.field.real_places.push_back(RealPlaceType::complex);
                    else throw InvariantsError(where + ".real_places: unknown type '" + s + "'");
                }
            } else {
                g.field.real_places.assign(static_cast<std::size_t>(in.base.r1), RealPlaceType::split);
            }
            for (const auto& d : f.value("delta_locals", json::array())) {
                const int v = need(d, "value", where + ".delta_locals").get<int>();
                if (v < 1) throw InvariantsError(where + ".delta_locals: value must be positive");
                g.field.delta_locals[int_from_json(need(d, "p", where + ".delta_locals"), where + ".delta_locals.p")] = v;
            }
            g.res_zeta_RE = value_from_json(need(f, "res_zeta_RE", where));
            in.fields.push_back(std::move(g));
        }
        return in;
    } catch (const json::exception& e) {
        throw InvariantsError(std::string("malformed invariants: ") + e.what());
    }
}

GeneralInputs load_invariants(const std::string& path, std::optional<int> expected_n) {
    std::ifstream f(path);
    if (!f) throw InvariantsError("cannot open " + path);
    json j;
    try {
        j = json::parse(f);
    } catch (const json::exception& e) {
        throw InvariantsError(path + ": " + e.what());
    }
    return parse_invariants(j, expected_n);
}

}  // namespace orbcount
