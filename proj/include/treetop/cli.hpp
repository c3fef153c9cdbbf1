#pragma once

// Command-line surface. Each command takes its arguments without the program
// and command names and returns the process exit code.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "treetop/json_io.hpp"

namespace treetop {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int usage = 2;
inline constexpr int construction = 3;
inline constexpr int schema = 4;
}  // namespace exit_code

/// Recorded verbatim in every report.
struct RunConfig {
    std::uint64_t seed = 0;
    /// Least eps a Good verdict must carry in the bad-points suite.
    Rational tolerance{0};
    /// Truncation and search parameters as given on the command line.
    std::map<std::string, std::string> truncation;
    std::string out;

    Json to_json() const;
};

std::string version();

/// gen --kind sigma-q|wq|gamma|t1|t2|upsilon [--depth --branching --grid --omega-run --s-depth --out --family-out]
int cmd_gen(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
/// certify --suite 2det|3det|tree-of-sets|bad-points|rho --in tree.json [--labels --label-name --cert --family
/// --samples --cantor-depth --seed --tolerance --out]
int cmd_certify(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
/// export --in tree.json --format dot [--out]
int cmd_export(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
/// analyze --op bad-points|kadec|rho --in tree.json [--labels --label-name --cantor-depth --out]
int cmd_analyze(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
/// compactify --in tree.json --coords coords.json [--pairs --seed --out]
int cmd_compactify(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Dispatches on args[0]. TREETOP_SEED overrides --seed.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace treetop
