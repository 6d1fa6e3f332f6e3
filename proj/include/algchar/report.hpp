#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "algchar/engine.hpp"
#include "algchar/patterns.hpp"
#include "json.hpp"

namespace algchar {

struct GoldenMissing : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Table = std::map<int, CountPoly>;

// $ALGCHAR_DATA_DIR, else the data directory of the source tree
std::string data_dir();
// golden table N_{n,e} from <dir>/appendix/n<n>.txt
Table load_golden(int n, const std::string& dir = data_dir());
Table parse_golden(std::istream& in);
std::string format_golden(const Table& t, int n);
std::vector<int> golden_sizes(const std::string& dir = data_dir());

struct Mismatch {
    int n = 0, e = 0;
    CountPoly expected, actual;
    std::string describe() const;
};
// first differing (n,e), scanning e upward
std::optional<Mismatch> compare_tables(int n, const Table& expected, const Table& actual);

struct IdentityResult {
    std::string name;
    bool pass = false;
    std::string detail;
};
// sum rule, linear characters, nonnegativity of N_{n,e}(t+1)
std::vector<IdentityResult> check_identities(int n, const Table& t);

// N_{n,e} for the chain [1,n]
struct ComputeResult {
    ResolvedTable table;
    EngineStats engine;
    PatternStats pattern;
    double seconds = 0;
};
ComputeResult compute_chain(int n, const EngineConfig& cfg = {});

nlohmann::json count_poly_to_json(const CountPoly& f);
CountPoly count_poly_from_json(const nlohmann::json& j);
nlohmann::json unresolved_to_json(const UnresolvedCount& u);
nlohmann::json table_to_json(const ResolvedTable& t);
ResolvedTable table_from_json(const nlohmann::json& j);
nlohmann::json categorisation_to_json(const Categorisation& o);
std::string table_to_csv(const ResolvedTable& t);
std::string table_to_latex(const ResolvedTable& t);

}  // namespace algchar
