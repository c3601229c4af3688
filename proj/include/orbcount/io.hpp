#pragma once

#include <string>

#include "json.hpp"
#include "orbcount/analytic.hpp"
#include "orbcount/census.hpp"
#include "orbcount/endoscopy.hpp"
#include "orbcount/lattice.hpp"

namespace orbcount {

using json = nlohmann::json;

class InvariantsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kInvariantsSchemaVersion = 1;

json to_json(const Int& v);
json to_json(const Rat& v);
/// {"symbolic", "float", "rational", "pi_power", "sqrt_arg", "log_terms", "zeta_terms"}
json to_json(const Symbolic& s);
json to_json(const Value& v);
json to_json(const Cyclotomic& c);
json to_json(const ModPFactorization& f);

/// Inverse of to_json(Symbolic); a bare number or {"float": x} yields nullopt.
std::optional<Symbolic> symbolic_from_json(const json& j);
Value value_from_json(const json& j);

json order_report(const OrderData& o, const std::vector<Int>& primes);
json to_json(const LocalZeta& z);
json to_json(const CosetOrbital& c);
json to_json(const FundamentalLemmaReport& r);
json to_json(const ResidueReport& r);
json to_json(const YunReport& r);
json to_json(const ArchConstants& a);
json to_json(const EndoDatum& e);
json to_json(const DeltaReport& r);
json to_json(const SatakeRow& r);
json to_json(const ConstantReport& c);
json to_json(const CensusReport& r);

/// Validated general-mode inputs; n is checked against expected_n when given.
GeneralInputs parse_invariants(const json& j, std::optional<int> expected_n = std::nullopt);
GeneralInputs load_invariants(const std::string& path, std::optional<int> expected_n = std::nullopt);

}  // namespace orbcount
