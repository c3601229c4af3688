// orbcount: command-line front end.  One subcommand per run; JSON on stdout.
// Exit status 2 on usage errors, 1 on computation errors.

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "orbcount/io.hpp"

using namespace orbcount;

namespace {

int default_threads() {
    if (const char* env = std::getenv("ORBCOUNT_THREADS")) {
        const int t = std::atoi(env);
        if (t > 0) return t;
    }
    return 1;
}

std::vector<Int> parse_primes(const std::string& text) {
    std::vector<Int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.emplace_back(item);
    return out;
}

LocalExtensionSpec parse_spec(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw EndoscopyError("extension spec must be unramified:<f> or sqrt:<a>");
    const std::string kind = text.substr(0, colon);
    const std::string arg = text.substr(colon + 1);
    LocalExtensionSpec s;
    if (kind == "unramified") {
        s.kind = LocalExtensionSpec::Kind::unramified;
        s.degree = std::stoi(arg);
    } else if (kind == "sqrt") {
        s.kind = LocalExtensionSpec::Kind::sqrt;
        s.degree = 2;
        s.radicand = Int(arg);
    } else {
        throw EndoscopyError("unknown extension kind '" + kind + "'");
    }
    return s;
}

std::optional<Symbolic> res_K_option(const std::string& text) {
    if (text.empty()) return std::nullopt;
    const json j = json::parse(text);
    if (auto s = symbolic_from_json(j)) return s;
    // a bare number becomes an opaque named constant
    return Symbolic::log("ResK", j.is_number() ? j.get<double>() : j.at("float").get<double>());
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Counting integral matrices with a given characteristic polynomial"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    std::string poly, primes, res_k, invariants, spec, format = "json", mode = "Q";
    long prime = 0;
    int twist_order = 1, d = 1, n = 2, jmax = 12, e_degree = 1, precision = 8, checkpoints = 0;
    int threads = default_threads();
    bool ramified = false, ref_constant = false, strict = false;
    long double tmax = 0, tmin = 10;
    std::uint64_t mc_samples = 0, seed = 0x5eed;

    auto* order = app.add_subcommand("order", "Discriminant, p-maximal overorders and index of Z[x]/(chi)");
    order->add_option("--poly", poly, "Coefficients, highest degree first")->required();
    order->add_option("--primes", primes, "Comma-separated primes for local data");

    auto* orbital = app.add_subcommand("orbital", "Local zeta factor and orbital integral at p");
    orbital->add_option("--poly", poly, "Coefficients, highest degree first")->required();
    orbital->add_option("--prime", prime, "Prime p")->required();
    orbital->add_option("--twist-order", twist_order, "Order d of the twisting character");
    orbital->add_flag("--ramified", ramified, "Ramified twist");

    auto* fl = app.add_subcommand("fl-check", "Both sides of the fundamental lemma at p");
    fl->add_option("--poly", poly, "Coefficients, highest degree first")->required();
    fl->add_option("--prime", prime, "Prime p")->required();
    fl->add_option("--d", d, "Degree of the unramified extension E_p")->required();

    auto* zeta = app.add_subcommand("zeta-order", "Residue of the zeta function of Z[x]/(chi)");
    zeta->add_option("--poly", poly, "Coefficients, highest degree first")->required();
    zeta->add_option("--res-zeta-K", res_k, "Res zeta_K as a number or symbolic JSON (degree >= 3)");

    auto* satake = app.add_subcommand("satake", "Satake transfer identity check");
    satake->add_option("--n", n, "Rank n")->required();
    satake->add_option("--d", d, "Degree d, dividing n")->required();
    satake->add_option("--jmax", jmax, "Largest j (<= 12)");
    satake->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    auto* delta = app.add_subcommand("delta", "delta_v(E) by brute force in finite unit groups");
    delta->add_option("--p", prime, "Residue characteristic")->required();
    delta->add_option("--e-degree", e_degree, "Degree of the unramified E_v over Q_p");
    delta->add_option("--spec", spec, "K_v over E_v: unramified:<f> or sqrt:<a>")->required();
    delta->add_option("--precision", precision, "Largest k");

    auto* constant = app.add_subcommand("constant", "Leading constant C(chi)");
    constant->add_option("--poly", poly, "Coefficients, highest degree first")->required();
    constant->add_option("--invariants", invariants, "Invariants file for general mode");
    constant->add_option("--res-zeta-K", res_k, "Res zeta_K as a number or symbolic JSON (degree >= 3)");
    constant->add_option("--mode", mode, "Q or general")->check(CLI::IsMember({"Q", "general"}));

    auto* census = app.add_subcommand("census", "Exact counts N(chi, T) at checkpoints");
    census->add_option("--poly", poly, "Coefficients, highest degree first")->required();
    census->add_option("--tmax", tmax, "Largest T")->required();
    census->add_option("--tmin", tmin, "Smallest checkpoint");
    census->add_option("--checkpoints", checkpoints, "Number of geometric checkpoints (default: ratio sqrt 2)");
    census->add_flag("--ref-constant", ref_constant, "Compare with the assembled constant");
    census->add_option("--threads", threads, "Worker threads (default ORBCOUNT_THREADS or 1)");
    census->add_flag("--strict", strict, "Count ||x|| < T instead of ||x|| <= T");
    census->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    auto* analytic = app.add_subcommand("analytic", "Archimedean constants for GL_n");
    analytic->add_option("--n", n, "Rank n")->required();
    analytic->add_option("--mc-samples", mc_samples, "Monte-Carlo samples for the ball volumes");
    analytic->add_option("--seed", seed, "Monte-Carlo seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (order->parsed()) {
            const OrderData o = build_order(parse_poly(poly));
            emit(order_report(o, parse_primes(primes)));
        } else if (orbital->parsed()) {
            const OrderData o = build_order(parse_poly(poly));
            json out = to_json(local_zeta(o, prime));
            out["coset"] = to_json(orbital_integral_coset(o, prime));
            if (twist_order > 1 || ramified)
                out["twisted"] = to_json(twisted_orbital_integral(o, prime, {twist_order, ramified}));
            emit(out);
        } else if (fl->parsed()) {
            emit(to_json(fundamental_lemma_check(build_order(parse_poly(poly)), prime, d)));
        } else if (zeta->parsed()) {
            const OrderData o = build_order(parse_poly(poly));
            json out = to_json(residue_zeta_order(o, res_K_option(res_k)));
            if (o.n == 2) out["yun_check"] = to_json(yun_global_residue_check(o));
            emit(out);
        } else if (satake->parsed()) {
            const auto rows = satake_transfer_check(n, d, jmax);
            if (format == "csv") {
                std::cout << "j,divisible,image,expected,equal\n";
                for (const auto& r : rows) {
                    const json j = to_json(r);
                    std::cout << r.j << "," << r.divisible << ",\"" << j["image"].get<std::string>() << "\",\""
                              << j["expected"].get<std::string>() << "\"," << r.equal << "\n";
                }
            } else {
                json out = {{"n", n}, {"d", d}, {"rows", json::array()}};
                bool all = true;
                for (const auto& r : rows) {
                    out["rows"].push_back(to_json(r));
                    all = all && r.equal;
                }
                out["all_equal"] = all;
                emit(out);
            }
        } else if (delta->parsed()) {
            emit(to_json(delta_local(prime, e_degree, parse_spec(spec), precision)));
        } else if (constant->parsed()) {
            const OrderData o = build_order(parse_poly(poly));
            if (!invariants.empty()) {
                auto r = assemble_constant_general(load_invariants(invariants, o.n));
                r.poly = o.poly.to_string();
                emit(to_json(r));
            } else if (mode == "general") {
                auto r = assemble_constant_general(general_inputs_over_Q(o, res_K_option(res_k)));
                r.poly = o.poly.to_string();
                emit(to_json(r));
            } else {
                emit(to_json(assemble_constant_Q(o, res_K_option(res_k))));
            }
        } else if (census->parsed()) {
            const IntPoly chi = parse_poly(poly);
            CountKernelConfig cfg;
            cfg.include_boundary = !strict;
            cfg.threads = threads;
            if (checkpoints > 1) cfg.schedule = geometric_schedule(tmin, tmax, std::pow(tmax / tmin, 1.0L / (checkpoints - 1)));
            else cfg.schedule = geometric_schedule(std::min(tmin, tmax), tmax);
            std::optional<long double> ref;
            if (ref_constant) ref = assemble_constant_Q(build_order(chi)).constant.approx;
            const CensusReport r = census_series(chi, cfg, ref);
            if (format == "csv") {
                std::cout << "T,count,count/T^d\n";
                for (const auto& c : r.checkpoints) {
                    std::ostringstream line;
                    line.precision(10);
                    line << static_cast<double>(c.T) << "," << c.count << "," << static_cast<double>(c.ratio);
                    std::cout << line.str() << "\n";
                }
            }
            emit(to_json(r));
        } else if (analytic->parsed()) {
            json out = to_json(arch_constants(n));
            if (mc_samples > 0) {
                out["monte_carlo"] = {
                    {"samples", mc_samples},
                    {"seed", seed},
                    {"w_real", ball_volume_monte_carlo(n, Place::real, mc_samples, seed)},
                    {"w_complex", ball_volume_monte_carlo(n, Place::complex, mc_samples, seed)}};
            }
            emit(out);
        }
    } catch (const std::exception& e) {
        std::cout << json{{"error", e.what()}}.dump() << "\n";
        return 1;
    }
    return 0;
}
