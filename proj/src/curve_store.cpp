#include "heegner/curve_store.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <system_error>

#include <boost/crc.hpp>
#include <unistd.h>

#include "heegner/ec_arith.hpp"
#include "heegner/error.hpp"

namespace heegner {

namespace {

std::string_view strip_comment(std::string_view line)
{
    if (auto hash = line.find('#'); hash != std::string_view::npos)
        line = line.substr(0, hash);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
        line.remove_suffix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front())))
        line.remove_prefix(1);
    return line;
}

std::vector<std::string> tokenize(std::string_view line)
{
    std::vector<std::string> out;
    std::istringstream in{std::string(line)};
    for (std::string tok; in >> tok;)
        out.push_back(tok);
    return out;
}

mpz_class parse_integer(const std::string & tok, const std::string & what, const std::string & source, int line)
{
    mpz_class v;
    std::string_view t = tok;
    if (!t.empty() && t.front() == '+')
        t.remove_prefix(1);
    bool ok = !t.empty() && t.find_first_not_of("-0123456789") == std::string_view::npos &&
              t.find('-', 1) == std::string_view::npos && t != "-";
    if (!ok || v.set_str(std::string(t), 10) != 0)
        throw ParseError(source, line, "bad " + what + " '" + tok + "'");
    return v;
}

long parse_small(const std::string & tok, const std::string & what, long lo, long hi, const std::string & source,
                 int line)
{
    mpz_class v = parse_integer(tok, what, source, line);
    if (v < lo || v > hi)
        throw ParseError(source, line, what + " out of range: " + tok);
    return v.get_si();
}

RationalPoint parse_point(const std::string & tok, const std::string & source, int line)
{
    if (tok.size() < 7 || tok.front() != '(' || tok.back() != ')')
        throw ParseError(source, line, "bad generator '" + tok + "', expected (x:y:z)");
    std::string body = tok.substr(1, tok.size() - 2);
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= body.size(); ++i) {
        if (i == body.size() || body[i] == ':') {
            parts.push_back(body.substr(start, i - start));
            start = i + 1;
        }
    }
    if (parts.size() != 3)
        throw ParseError(source, line, "bad generator '" + tok + "', expected (x:y:z)");
    mpz_class x = parse_integer(parts[0], "generator coordinate", source, line);
    mpz_class y = parse_integer(parts[1], "generator coordinate", source, line);
    mpz_class z = parse_integer(parts[2], "generator coordinate", source, line);
    if (gcd(gcd(x, y), z) != 1)
        throw ParseError(source, line, "generator coordinates are not coprime: " + tok);
    if (z < 0)
        throw ParseError(source, line, "generator must have z >= 0: " + tok);
    try {
        return RationalPoint::from_projective(x, y, z);
    } catch (const DomainError & e) {
        throw ParseError(source, line, e.what());
    }
}

} // namespace

CurveRecord parse_curve_line(std::string_view line, const std::string & source, int line_no)
{
    std::vector<std::string> tok = tokenize(strip_comment(line));
    if (tok.size() != 11)
        throw ParseError(source, line_no, "expected 11 fields, found " + std::to_string(tok.size()));

    CurveRecord rec;
    rec.label = tok[0];
    for (int i = 0; i < 5; ++i)
        rec.a[i] = parse_integer(tok[1 + i], "coefficient", source, line_no);
    rec.conductor = parse_small(tok[6], "conductor", 1, 1000000000000L, source, line_no);
    rec.rank = static_cast<int>(parse_small(tok[7], "rank", 0, 100, source, line_no));
    if (tok[8] != "-")
        rec.generator = parse_point(tok[8], source, line_no);
    rec.torsion_order = static_cast<int>(parse_small(tok[9], "torsion order", 1, 16, source, line_no));
    if (tok[10] != "-")
        rec.sha_analytic = static_cast<int>(parse_small(tok[10], "sha", 1, 1000000, source, line_no));

    const std::string where = source + ":" + std::to_string(line_no) + ": " + rec.label + ": ";
    mpz_class disc = WeierstrassCurve::discriminant_of(rec.a);
    if (disc == 0)
        throw ValidationError(where + "singular model (discriminant 0)");
    if (!mpz_divisible_p(disc.get_mpz_t(), mpz_class(rec.conductor).get_mpz_t()))
        throw ValidationError(where + "conductor does not divide the discriminant");
    if (rec.generator) {
        WeierstrassCurve E = rec.curve();
        if (!on_curve(E, *rec.generator))
            throw ValidationError(where + "generator " + rec.generator->to_string() + " is not on the curve");
        if (is_torsion(E, *rec.generator))
            throw ValidationError(where + "generator " + rec.generator->to_string() + " has finite order");
    }
    return rec;
}

std::string format_curve_line(const CurveRecord & rec)
{
    std::ostringstream os;
    os << rec.label;
    for (const auto & c : rec.a)
        os << ' ' << c;
    os << ' ' << rec.conductor << ' ' << rec.rank << ' ';
    os << (rec.generator ? rec.generator->to_string() : "-");
    os << ' ' << rec.torsion_order << ' ';
    if (rec.sha_analytic)
        os << *rec.sha_analytic;
    else
        os << '-';
    return os.str();
}

std::vector<CurveRecord> parse_curve_stream(std::istream & in, const std::string & source)
{
    std::vector<CurveRecord> out;
    std::set<std::string> seen;
    std::string line;
    for (int line_no = 1; std::getline(in, line); ++line_no) {
        if (strip_comment(line).empty())
            continue;
        CurveRecord rec = parse_curve_line(line, source, line_no);
        if (!seen.insert(rec.label).second)
            throw ParseError(source, line_no, "duplicate label " + rec.label);
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<CurveRecord> parse_curve_file(const std::filesystem::path & path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open curve file " + path.string());
    return parse_curve_stream(in, path.string());
}

std::vector<CurveLine> parse_curve_stream_lenient(std::istream & in, const std::string & source)
{
    std::vector<CurveLine> out;
    std::set<std::string> seen;
    std::string line;
    for (int line_no = 1; std::getline(in, line); ++line_no) {
        std::string_view body = strip_comment(line);
        if (body.empty())
            continue;
        std::vector<std::string> tok = tokenize(body);
        std::string label = tok.empty() ? std::string() : tok[0];
        try {
            CurveRecord rec = parse_curve_line(line, source, line_no);
            if (!seen.insert(rec.label).second)
                throw ParseError(source, line_no, "duplicate label " + rec.label);
            out.emplace_back(std::move(rec));
        } catch (const Error & e) {
            out.emplace_back(CurveLineError{label, line_no, e.what()});
        }
    }
    return out;
}

std::vector<CurveRecord> builtin_curves()
{
    std::istringstream in{std::string(builtin_curve_table())};
    return parse_curve_stream(in, "<builtin>");
}

std::optional<CurveRecord> builtin_curve(std::string_view label)
{
    for (auto & rec : builtin_curves())
        if (rec.label == label)
            return rec;
    return std::nullopt;
}

CacheStore::CacheStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

CacheStore CacheStore::from_environment()
{
    if (const char * d = std::getenv(env_var); d && *d)
        return CacheStore(d);
    if (const char * x = std::getenv("XDG_CACHE_HOME"); x && *x)
        return CacheStore(std::filesystem::path(x) / "heegner");
    if (const char * h = std::getenv("HOME"); h && *h)
        return CacheStore(std::filesystem::path(h) / ".cache" / "heegner");
    return CacheStore(std::filesystem::temp_directory_path() / "heegner-cache");
}

std::filesystem::path CacheStore::path_for(std::string_view label) const
{
    std::string safe;
    for (char c : label)
        safe += std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.' ? c : '_';
    return dir_ / (safe + ".an");
}

namespace {

std::uint32_t crc_of(const std::string & payload)
{
    boost::crc_32_type crc;
    crc.process_bytes(payload.data(), payload.size());
    return crc.checksum();
}

} // namespace

void CacheStore::store(const CoefficientCache & cache) const
{
    std::filesystem::create_directories(dir_);
    std::ostringstream payload;
    for (std::size_t i = 0; i < cache.coefficients.size(); ++i)
        payload << cache.coefficients[i] << ((i + 1) % 16 == 0 ? '\n' : ' ');
    payload << '\n';
    std::string body = payload.str();

    std::filesystem::path target = path_for(cache.label);
    std::filesystem::path tmp = target;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot write cache file " + tmp.string());
        out << "heegner-an " << format_version << '\n';
        out << "label " << cache.label << '\n';
        out << "count " << cache.coefficients.size() << '\n';
        out << "crc32 " << std::hex << std::setw(8) << std::setfill('0') << crc_of(body) << std::dec << '\n';
        out << body;
        if (!out.flush())
            throw Error("cannot write cache file " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

CoefficientCache read_cache_file(const std::filesystem::path & path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open cache file " + path.string());
    std::string magic, key;
    int version = 0;
    CoefficientCache out;
    std::size_t count = 0;
    std::string crc_text;
    if (!(in >> magic >> version) || magic != "heegner-an")
        throw ValidationError(path.string() + ": not a coefficient cache");
    if (version != CacheStore::format_version)
        throw ValidationError(path.string() + ": unsupported cache version " + std::to_string(version));
    if (!(in >> key >> out.label) || key != "label" || !(in >> key >> count) || key != "count" ||
        !(in >> key >> crc_text) || key != "crc32")
        throw ValidationError(path.string() + ": malformed cache header");
    in.get(); // newline ending the header
    std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::uint32_t expected = static_cast<std::uint32_t>(std::stoul(crc_text, nullptr, 16));
    if (crc_of(body) != expected)
        throw ChecksumError(path.string() + ": checksum mismatch");
    std::istringstream values(body);
    out.coefficients.reserve(count);
    for (std::int64_t v; values >> v;)
        out.coefficients.push_back(v);
    if (out.coefficients.size() != count)
        throw ValidationError(path.string() + ": expected " + std::to_string(count) + " coefficients");
    if (count == 0 || out.coefficients[0] != 1)
        throw ValidationError(path.string() + ": a(1) must be 1");
    return out;
}

std::optional<CoefficientCache> CacheStore::load(std::string_view label, std::size_t M) const
{
    std::filesystem::path p = path_for(label);
    std::error_code ec;
    if (!std::filesystem::exists(p, ec))
        return std::nullopt;
    try {
        CoefficientCache c = read_cache_file(p);
        if (c.label != label || c.size() < M)
            return std::nullopt;
        c.coefficients.resize(M);
        return c;
    } catch (const std::exception &) {
        return std::nullopt;
    }
}

} // namespace heegner
