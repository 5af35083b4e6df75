#pragma once

// Curve records ingested from text tables, and the on-disk cache of
// L-series coefficients.
//
// Curve file grammar, one record per line ('#' starts a comment):
//
//     label a1 a2 a3 a4 a6 conductor rank (x:y:z)|- torsion_order sha|-
//
// Point coordinates are integers with gcd(x, y, z) = 1. A '-' marks an
// absent generator or Sha value.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "heegner/weierstrass.hpp"

namespace heegner {

struct CurveRecord
{
    std::string label;
    std::array<mpz_class, 5> a;
    std::int64_t conductor = 0;
    int rank = 0;
    std::optional<RationalPoint> generator;
    int torsion_order = 1;
    std::optional<int> sha_analytic;

    WeierstrassCurve curve() const { return WeierstrassCurve(a); }
};

// Parses one record. Throws ParseError for grammar problems and
// ValidationError when the record violates an invariant (singular model,
// generator off the curve or of finite order).
CurveRecord parse_curve_line(std::string_view line, const std::string & source = "<input>", int line_no = 1);

// Formats a record in the curve file grammar; parse_curve_line inverts it.
std::string format_curve_line(const CurveRecord & rec);

// Strict parsing: the first bad line aborts with its line number, and
// duplicate labels are rejected.
std::vector<CurveRecord> parse_curve_stream(std::istream & in, const std::string & source);
std::vector<CurveRecord> parse_curve_file(const std::filesystem::path & path);

// Lenient parsing for batch jobs: every non-comment line yields either a
// record or the error it raised, so one corrupt line cannot hide the rest.
struct CurveLineError
{
    std::string label; // first token of the line, if any
    int line = 0;
    std::string message;
};
using CurveLine = std::variant<CurveRecord, CurveLineError>;
std::vector<CurveLine> parse_curve_stream_lenient(std::istream & in, const std::string & source);

// The reference table shipped with the library (data/curves.txt).
std::string_view builtin_curve_table();
std::vector<CurveRecord> builtin_curves();
// Finds a record by label in the built-in table.
std::optional<CurveRecord> builtin_curve(std::string_view label);

// a_E(1..M) for one curve. coefficients[n - 1] holds a_E(n).
struct CoefficientCache
{
    std::string label;
    std::vector<std::int64_t> coefficients;

    std::size_t size() const { return coefficients.size(); }
    std::int64_t operator()(std::size_t n) const { return coefficients[n - 1]; }
};

// Directory of per-label coefficient files. Files carry a format version and
// a CRC-32 of the payload; anything that fails either check is treated as
// absent. Writes go to a temporary file that is renamed into place.
class CacheStore
{
public:
    static constexpr int format_version = 1;
    // Environment variable overriding the default cache location.
    static constexpr const char * env_var = "HEEGNER_CACHE_DIR";

    explicit CacheStore(std::filesystem::path dir);
    // $HEEGNER_CACHE_DIR, else $XDG_CACHE_HOME/heegner, else ~/.cache/heegner.
    static CacheStore from_environment();

    const std::filesystem::path & directory() const { return dir_; }
    std::filesystem::path path_for(std::string_view label) const;

    void store(const CoefficientCache & cache) const;
    // Returns the first M coefficients when a valid file with at least M
    // entries exists.
    std::optional<CoefficientCache> load(std::string_view label, std::size_t M) const;

private:
    std::filesystem::path dir_;
};

// Strict reader used by CacheStore::load; throws ChecksumError or
// ValidationError on a bad file.
CoefficientCache read_cache_file(const std::filesystem::path & path);

} // namespace heegner
