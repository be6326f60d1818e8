#pragma once

// JSON encodings shared by the CLI and the tests, and the surface input
// parser.

#include "twistor/discriminant.hpp"
#include "twistor/multipoly.hpp"

#include <json.hpp>

#include <string>

namespace twistor {

using Json = nlohmann::ordered_json;

/// {"vars": [...], "ring": "...", "terms": [{"exps": [...], "coeff": ...}]}.
/// INT coefficients are one string; other rings are arrays of rational
/// strings (2 for GAUSS_RAT, 4 for SQRT3_FIELD). Leading term first.
template <typename Coeff>
Json poly_to_json(const MultiPoly<Coeff>& p) {
  Json terms = Json::array();
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    auto parts = RingTraits<Coeff>::encode(it->second);
    Json coeff = parts.size() == 1 ? Json(parts.front()) : Json(parts);
    terms.push_back(Json{{"exps", it->first}, {"coeff", std::move(coeff)}});
  }
  return Json{{"vars", p.vars()}, {"ring", ring_name(RingTraits<Coeff>::tag)}, {"terms", std::move(terms)}};
}

template <typename Coeff>
MultiPoly<Coeff> poly_from_json(const Json& j) {
  const auto ring = parse_ring_name(j.at("ring").get<std::string>());
  if (ring != RingTraits<Coeff>::tag) {
    throw std::invalid_argument("polynomial ring is " + ring_name(ring) + ", expected " +
                                ring_name(RingTraits<Coeff>::tag));
  }
  MultiPoly<Coeff> p(j.at("vars").get<std::vector<std::string>>());
  for (const auto& t : j.at("terms")) {
    const Json& c = t.at("coeff");
    std::vector<std::string> parts =
        c.is_string() ? std::vector<std::string>{c.get<std::string>()} : c.get<std::vector<std::string>>();
    Exponents e = t.at("exps").get<Exponents>();
    if (p.coefficient(e) != Coeff(0)) throw std::invalid_argument("duplicate exponent vector in polynomial JSON");
    Coeff value = RingTraits<Coeff>::decode(parts);
    if (RingTraits<Coeff>::is_zero(value)) throw std::invalid_argument("zero coefficient stored in polynomial JSON");
    p.add_term(std::move(e), value);
  }
  return p;
}

/// Parses an expression in z1..z4 with Gaussian-rational coefficients:
/// integers, `/`, `i`, `+ - * ^` and parentheses, e.g.
/// "z1*z4^2 + z4*z1^2 + (1/2 - 3i) z2^3". Juxtaposition multiplies.
GaussPoly parse_polynomial(const std::string& text, const std::vector<std::string>& vars);

/// "preset:fermat", "preset:transformed-fermat", a path to a polynomial JSON
/// file (GAUSS_RAT or INT ring, variables z1..z4), or an inline expression.
Surface load_surface(const std::string& source);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace twistor
