// heegner: survey I_E, nu_N and the conjecture verdict over a curve file,
// or inspect single traces, class numbers and L-series coefficients.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "heegner/ec_arith.hpp"
#include "heegner/error.hpp"
#include "heegner/heegner.hpp"
#include "heegner/quadforms.hpp"
#include "heegner/survey.hpp"

using namespace heegner;
using nlohmann::json;

namespace {

struct Common
{
    std::string curves;
    bool json_output = false;
    bool no_cache = false;
};

std::vector<CurveLine> load_lines(const Common & c)
{
    if (c.curves.empty()) {
        std::istringstream in{std::string(builtin_curve_table())};
        return parse_curve_stream_lenient(in, "<builtin>");
    }
    std::ifstream in(c.curves);
    if (!in)
        throw Error("cannot open curve file " + c.curves);
    return parse_curve_stream_lenient(in, c.curves);
}

CurveRecord find_curve(const Common & c, const std::string & label)
{
    std::vector<CurveRecord> all;
    if (c.curves.empty()) {
        all = builtin_curves();
    } else {
        all = parse_curve_file(c.curves);
    }
    for (auto & rec : all)
        if (rec.label == label)
            return rec;
    throw ValidationError("no curve labelled " + label);
}

std::shared_ptr<const CacheStore> cache_for(const Common & c)
{
    if (c.no_cache)
        return nullptr;
    return std::make_shared<const CacheStore>(CacheStore::from_environment());
}

int cmd_survey(const Common & c, const SurveyOptions & opts, const std::string & format, bool timing, bool quiet)
{
    SurveyOptions o = opts;
    o.cache = cache_for(c);
    auto progress = [&](const SurveyRow & r) {
        if (!quiet)
            std::cerr << r.label << ": I_E=" << (r.I_E ? std::to_string(*r.I_E) : "-") << " " << r.status << '\n';
    };
    SurveyReport report = run_survey(load_lines(c), o, progress);
    if (format == "json" || c.json_output)
        std::cout << to_json(report, timing).dump(2) << '\n';
    else
        write_tsv(std::cout, report, timing);
    return report.exit_code();
}

int cmd_trace(const Common & c, const std::string & label, std::int64_t D, std::int64_t r, Precision prec)
{
    CurveRecord rec = find_curve(c, label);
    HeegnerPair pair = make_heegner_pair(rec.conductor, D, r);
    CurveContext ctx(rec, prec, cache_for(c));
    std::vector<HeegnerPoint> pts = heegner_points(pair, prec);
    Complex z = trace_sum(ctx, pair);
    TraceResult t = compute_trace(ctx, pair);

    if (c.json_output) {
        json forms = json::array();
        for (const HeegnerPoint & h : pts)
            forms.push_back({{"form", to_string(h.form)}, {"tau_re", h.tau.re().str(30)}, {"tau_im", h.tau.im().str(30)}});
        json out = {
            {"label", rec.label},
            {"N", pair.N},
            {"D", pair.D},
            {"r", pair.r},
            {"u_D", t.u_D},
            {"forms", forms},
            {"trace_re", z.re().str(40)},
            {"trace_im", z.im().str(40)},
            {"recognized", t.recognized},
            {"torsion", t.torsion},
            {"point", t.recognized ? json(t.point.to_string()) : json(nullptr)},
            {"index", t.recognized && !t.torsion ? json(t.index) : json(nullptr)},
            {"residual", t.residual},
            {"precision_bits", t.precision_bits},
            {"error", t.error},
        };
        std::cout << out.dump(2) << '\n';
    } else {
        std::cout << rec.label << "  N=" << pair.N << "  D=" << pair.D << "  r=" << pair.r << "  u_D=" << t.u_D << '\n';
        for (const HeegnerPoint & h : pts)
            std::cout << "  " << to_string(h.form) << "  tau = " << h.tau.re().str(25) << " + " << h.tau.im().str(25)
                      << " i\n";
        std::cout << "trace    " << z.re().str(40) << " + " << z.im().str(40) << " i\n";
        if (!t.recognized) {
            std::cout << "unrecognised: " << t.error << '\n';
        } else {
            std::cout << "point    " << t.point.to_string() << (t.torsion ? "  (torsion)" : "") << '\n';
            if (!t.torsion)
                std::cout << "index    " << t.index << '\n';
            std::cout << "residual " << t.residual << "  at " << t.precision_bits << " bits\n";
        }
    }
    return t.recognized ? exit_ok : exit_data_error;
}

void print_value(const Common & c, const std::string & key, const json & value)
{
    if (c.json_output)
        std::cout << json{{key, value}}.dump() << '\n';
    else if (value.is_array()) {
        bool first = true;
        for (const auto & v : value) {
            std::cout << (first ? "" : ",") << v.dump();
            first = false;
        }
        std::cout << '\n';
    } else
        std::cout << value.dump() << '\n';
}

} // namespace

int main(int argc, char ** argv)
{
    CLI::App app{"Heegner point traces, the index I_E and components of X0+(N)(R)"};
    app.require_subcommand(1);
    Common c;
    app.add_option("--curves", c.curves, "Curve file (default: the built-in table)");
    app.add_flag("--json", c.json_output, "Machine-readable output");
    app.add_flag("--no-cache", c.no_cache, "Do not read or write the a_n cache");

    SurveyOptions sopts;
    std::string format = "tsv";
    bool no_timing = false, quiet = false, no_revalidate = false;
    auto * survey = app.add_subcommand("survey", "I_E, nu and verdict for every rank-one prime-conductor curve");
    survey->add_option("--curves", c.curves, "Curve file (default: the built-in table)");
    survey->add_option("--dmax", sopts.dmax, "Largest |D|")->check(CLI::PositiveNumber);
    survey->add_option("--prec", sopts.precision_bits, "Working precision in bits")->check(CLI::Range(64, 1 << 16));
    survey->add_option("--jobs", sopts.jobs, "Curves computed in parallel")->check(CLI::PositiveNumber);
    survey->add_option("--format", format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));
    survey->add_flag("--no-timing", no_timing, "Omit timings so reports are reproducible byte for byte");
    survey->add_flag("--no-revalidate", no_revalidate, "Skip the recomputation at 64 more bits");
    survey->add_flag("--quiet,-q", quiet, "No progress on stderr");

    std::string label;
    std::int64_t D = 0, r = 0;
    Precision prec = default_precision;
    auto * trace = app.add_subcommand("trace", "One trace y_{D,r}: forms, tau, sum, point and index");
    trace->add_option("label", label)->required();
    trace->add_option("D", D)->required();
    trace->add_option("r", r)->required();
    trace->add_option("--prec", prec, "Working precision in bits")->check(CLI::Range(64, 1 << 16));

    std::int64_t N = 0;
    auto * nu_cmd = app.add_subcommand("nu", "Number of real components of X0+(N), N prime");
    nu_cmd->add_option("N", N)->required();

    std::int64_t Delta = 0;
    auto * classnum = app.add_subcommand("classnum", "Class number of a discriminant");
    classnum->add_option("Delta", Delta)->required();

    std::size_t M = 0;
    auto * an = app.add_subcommand("an", "a_E(1..M)");
    an->add_option("label", label)->required();
    an->add_option("M", M)->required()->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));

    for (auto * sub : {trace, nu_cmd, classnum, an}) {
        sub->add_option("--curves", c.curves, "Curve file (default: the built-in table)");
        sub->add_flag("--json", c.json_output, "Machine-readable output");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError & e) {
        return app.exit(e) == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*survey) {
            sopts.revalidate = !no_revalidate;
            return cmd_survey(c, sopts, format, !no_timing, quiet);
        }
        if (*trace)
            return cmd_trace(c, label, D, r, prec);
        if (*nu_cmd) {
            print_value(c, "nu", nu(N));
            return exit_ok;
        }
        if (*classnum) {
            if (!is_discriminant(Delta))
                throw DomainError(std::to_string(Delta) + " is not a discriminant");
            print_value(c, "class_number",
                        Delta < 0 ? class_number(Delta) : indefinite_class_number(Delta));
            return exit_ok;
        }
        if (*an) {
            CurveRecord rec = find_curve(c, label);
            CoefficientCache table = an_table(rec.curve(), M, rec.label);
            print_value(c, "an", table.coefficients);
            return exit_ok;
        }
    } catch (const DomainError & e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception & e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_data_error;
    }
    return exit_usage;
}
