#pragma once

#include <json.hpp>

#include "sewprop/frac_laurent.hpp"
#include "sewprop/scalar.hpp"

namespace sewprop {

// Scalars: {"q": "p/q"} | {"cyc": k, "c": ["p/q", ...]} | {"re": x, "im": y}.
// A bare string or integer is accepted on input as a rational.
nlohmann::json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const nlohmann::json& j, const std::string& path = "$");

// Series: {"k": int, "var": "z", "terms": [[num, den, coeff], ...],
//          "order": "p/q"?, "lower_order": "p/q"?}
nlohmann::json series_to_json(const FracLaurent& f);
FracLaurent series_from_json(const nlohmann::json& j, const std::string& path = "$");

// Rational from a JSON string "p/q" or integer.
Rational rational_from_json(const nlohmann::json& j, const std::string& path = "$");

class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sewprop
