#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sewprop/serialize.hpp"
#include "sewprop/voa.hpp"

namespace sewprop {

struct AlgebraSpec {
    AlgebraKind kind = AlgebraKind::heisenberg;
    Rational momentum = 0;          // Heisenberg Fock module
    Rational central_charge = 0;    // Virasoro

    friend bool operator==(const AlgebraSpec&, const AlgebraSpec&) = default;
};

struct OuterInsertion {
    Partition vector;
    Rational point;

    friend bool operator==(const OuterInsertion&, const OuterInsertion&) = default;
};

/// Everything one subcommand needs. Vectors are basis monomials given by
/// partitions; wp names a dual basis vector. For sew and commute-check, u
/// sits at 1 on P and the insertions at the points.
struct RunConfig {
    std::string command;
    AlgebraSpec algebra;
    int cutoff_grade = 24;  // L, weight cutoff of the modules
    int cutoff_q = 8;       // N, q-order or expansion window
    int order = 12;         // M, coordinate-change order
    int k = 2;
    int grade = 4;
    int range = 3;
    std::vector<Partition> insertions{{1}};
    std::vector<Rational> points;
    Partition u{1};
    Partition w;
    Partition wp{1};
    std::optional<OuterInsertion> outer;
    std::vector<Rational> taylor{1, 1, 1, 1};
    std::string fixture = "constant";
    Rational q0 = 1;
    std::string mode = "exact";
    int threads = 1;
    std::string out;
    std::uint64_t seed = 1;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

const std::vector<std::string>& subcommands();

nlohmann::json config_to_json(const RunConfig& c);
// Missing fields keep their defaults; bad fields throw SchemaError naming
// the JSON path, e.g. "$.points[1]".
RunConfig config_from_json(const nlohmann::json& j);
// Throws SchemaError for values no subcommand can run with.
void validate(const RunConfig& c);

// Exit status: 0 all identities hold, 1 a violation was found, 2 bad
// configuration, 3 a weight cutoff was exceeded.
int run(const RunConfig& c, std::ostream& out, std::ostream& err);

}  // namespace sewprop
