#include "sewprop/serialize.hpp"

namespace sewprop {

using nlohmann::json;

namespace {

[[noreturn]] void schema_fail(const std::string& path, const std::string& what)
{
    throw SchemaError(path + ": " + what);
}

}  // namespace

Rational rational_from_json(const json& j, const std::string& path)
{
    try {
        if (j.is_number_integer()) return Rational(j.get<long>());
        if (j.is_string()) return parse_rational(j.get<std::string>());
    } catch (const MathError& e) {
        schema_fail(path, e.what());
    }
    schema_fail(path, "expected a rational as \"p/q\" or an integer");
}

json scalar_to_json(const Scalar& s)
{
    switch (s.kind()) {
    case Scalar::Kind::rational: return json{{"q", to_string(s.rational())}};
    case Scalar::Kind::cyclotomic: {
        Cyclotomic c = s.as_cyclotomic(s.field_order());
        json coeffs = json::array();
        for (const auto& q : c.coeffs()) coeffs.push_back(to_string(q));
        return json{{"cyc", c.order()}, {"c", coeffs}};
    }
    case Scalar::Kind::complex: {
        auto z = s.to_complex();
        return json{{"re", z.real()}, {"im", z.imag()}};
    }
    }
    return {};
}

Scalar scalar_from_json(const json& j, const std::string& path)
{
    if (j.is_string() || j.is_number_integer()) return Scalar(rational_from_json(j, path));
    if (!j.is_object()) schema_fail(path, "expected a scalar object");
    if (j.contains("q")) return Scalar(rational_from_json(j.at("q"), path + ".q"));
    if (j.contains("cyc")) {
        if (!j.at("cyc").is_number_integer() || j.at("cyc").get<int>() < 1)
            schema_fail(path + ".cyc", "expected a positive integer");
        int k = j.at("cyc").get<int>();
        if (!j.contains("c") || !j.at("c").is_array()) schema_fail(path + ".c", "expected a coefficient array");
        const auto& arr = j.at("c");
        if (static_cast<int>(arr.size()) != euler_phi(k))
            schema_fail(path + ".c", "expected " + std::to_string(euler_phi(k)) + " coefficients");
        Cyclotomic out(k);
        for (std::size_t i = 0; i < arr.size(); ++i) {
            Cyclotomic term = Cyclotomic::root_power(k, static_cast<long>(i));
            term *= rational_from_json(arr[i], path + ".c[" + std::to_string(i) + "]");
            out += term;
        }
        return Scalar(out);
    }
    if (j.contains("re")) {
        if (!j.at("re").is_number() || !j.value("im", json(0.0)).is_number())
            schema_fail(path, "expected numeric re/im");
        return Scalar(std::complex<double>{j.at("re").get<double>(), j.value("im", 0.0)});
    }
    schema_fail(path, "scalar needs one of the keys q, cyc, re");
}

json series_to_json(const FracLaurent& f)
{
    json terms = json::array();
    for (const auto& [n, c] : f.terms()) {
        Rational e = make_rational(n, f.denominator());
        terms.push_back(json::array({e.get_num().get_si(), e.get_den().get_si(), scalar_to_json(c)}));
    }
    json out{{"k", f.denominator()}, {"var", f.var()}, {"terms", terms}};
    if (auto o = f.order()) out["order"] = to_string(*o);
    if (auto o = f.lower_order()) out["lower_order"] = to_string(*o);
    return out;
}

FracLaurent series_from_json(const json& j, const std::string& path)
{
    if (!j.is_object()) schema_fail(path, "expected a series object");
    if (!j.contains("k") || !j.at("k").is_number_integer() || j.at("k").get<int>() < 1)
        schema_fail(path + ".k", "expected a positive integer");
    FracLaurent out(j.at("k").get<int>(), j.value("var", std::string("z")));
    if (!j.contains("terms") || !j.at("terms").is_array()) schema_fail(path + ".terms", "expected an array");
    const auto& terms = j.at("terms");
    for (std::size_t i = 0; i < terms.size(); ++i) {
        std::string p = path + ".terms[" + std::to_string(i) + "]";
        const auto& t = terms[i];
        if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number_integer())
            schema_fail(p, "expected [num, den, coeff]");
        long den = t[1].get<long>();
        if (den == 0) schema_fail(p, "zero denominator");
        Rational e = make_rational(t[0].get<long>(), den);
        if (!is_integer(e * out.denominator())) schema_fail(p, "exponent not on the declared lattice");
        out.add_term(e, scalar_from_json(t[2], p + "[2]"));
    }
    if (j.contains("order")) out.truncate(rational_from_json(j.at("order"), path + ".order"));
    if (j.contains("lower_order")) out.bound_below(rational_from_json(j.at("lower_order"), path + ".lower_order"));
    return out;
}

}  // namespace sewprop
