#include "heegner/survey.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <iomanip>
#include <ostream>
#include <thread>
#include <tuple>

#include "heegner/ec_arith.hpp"
#include "heegner/error.hpp"
#include "heegner/quadforms.hpp"

namespace heegner {

int SurveyReport::exit_code() const
{
    bool failed = false;
    for (const SurveyRow & r : rows) {
        if (r.verdict == Verdict::counterexample)
            return exit_counterexample;
        failed = failed || !r.ok();
    }
    return failed ? exit_data_error : exit_ok;
}

bool in_survey_scope(const CurveRecord & rec)
{
    return rec.rank == 1 && rec.conductor > 1 && is_prime(static_cast<std::uint64_t>(rec.conductor));
}

SurveyRow survey_curve(const CurveRecord & rec, const SurveyOptions & opts)
{
    const auto start = std::chrono::steady_clock::now();
    SurveyRow row;
    row.label = rec.label;
    row.conductor = rec.conductor;
    row.sha = rec.sha_analytic;
    row.precision_bits = opts.precision_bits;
    try {
        if (!rec.generator)
            throw ValidationError(rec.label + ": rank one curve without a generator");
        row.nu = nu(rec.conductor);

        CurveContext ctx(rec, opts.precision_bits, opts.cache);
        GlobalIndexOptions gopts;
        gopts.dmax = opts.dmax;
        gopts.early_exit = opts.early_exit;
        gopts.revalidate = opts.revalidate;
        GlobalIndexResult g = global_index(ctx, gopts);

        row.pairs = g.pairs_total;
        row.traces = g.traces.size();
        row.unrecognized = g.unrecognized;
        row.work_terms = g.work_terms;
        for (const TraceResult & t : g.traces)
            row.precision_bits = std::max(row.precision_bits, t.precision_bits);
        row.I_E = g.index;

        if (g.unrecognized) {
            std::string first;
            for (const TraceResult & t : g.traces)
                if (!t.recognized) {
                    first = "D=" + std::to_string(t.pair.D) + " r=" + std::to_string(t.pair.r) + ": " + t.error;
                    break;
                }
            row.status = std::to_string(g.unrecognized) + " unrecognised trace(s), first " + first;
        } else if (!g.index) {
            row.status = "every trace is torsion";
        } else {
            row.verdict = conjecture_check(*g.index, *row.nu, rec.sha_analytic);
        }
    } catch (const std::exception & e) {
        row.status = e.what();
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

SurveyReport run_survey(const std::vector<CurveLine> & lines, const SurveyOptions & opts,
                        const std::function<void(const SurveyRow &)> & progress)
{
    SurveyReport report;
    report.dmax = opts.dmax;
    report.precision_bits = opts.precision_bits;

    std::vector<const CurveRecord *> work;
    for (const CurveLine & line : lines) {
        if (const auto * err = std::get_if<CurveLineError>(&line)) {
            SurveyRow row;
            row.label = err->label.empty() ? "line " + std::to_string(err->line) : err->label;
            row.status = err->message;
            row.sha.reset();
            report.rows.push_back(std::move(row));
        } else if (const auto & rec = std::get<CurveRecord>(line); in_survey_scope(rec)) {
            work.push_back(&rec);
        } else {
            ++report.skipped;
        }
    }

    std::vector<SurveyRow> rows(work.size());
    std::atomic<std::size_t> next{0};
    std::mutex progress_mutex;
    auto worker = [&] {
        for (std::size_t i; (i = next++) < work.size();) {
            rows[i] = survey_curve(*work[i], opts);
            if (progress) {
                std::lock_guard lock(progress_mutex);
                progress(rows[i]);
            }
        }
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(work.size())));
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j)
        pool.emplace_back(worker);
    worker();
    for (std::thread & t : pool)
        t.join();

    for (SurveyRow & r : rows)
        report.rows.push_back(std::move(r));
    std::stable_sort(report.rows.begin(), report.rows.end(), [](const SurveyRow & a, const SurveyRow & b) {
        return std::tie(a.conductor, a.label) < std::tie(b.conductor, b.label);
    });
    return report;
}

std::string caveat_text(std::int64_t dmax)
{
    return "I_E is the gcd of the trace indexes over fundamental D >= -" + std::to_string(dmax) +
           "; at a finite bound it is likely, not proven, to be the index";
}

namespace {

template <class T>
std::string or_dash(const std::optional<T> & v)
{
    return v ? std::to_string(*v) : "-";
}

} // namespace

void write_tsv(std::ostream & os, const SurveyReport & report, bool timing)
{
    os << "# dmax=" << report.dmax << " precision_bits=" << report.precision_bits << " skipped=" << report.skipped
       << '\n';
    os << "# " << caveat_text(report.dmax) << '\n';
    os << "# Sha marked * is the analytic order as ingested, not computed\n";
    os << "label\tN\tI_E\tnu\tSha\tverdict\tstatus\tprec\tpairs\ttraces\tterms";
    if (timing)
        os << "\tseconds";
    os << '\n';
    for (const SurveyRow & r : report.rows) {
        os << r.label << '\t' << r.conductor << '\t' << or_dash(r.I_E) << '\t' << or_dash(r.nu) << '\t'
           << (r.sha ? std::to_string(*r.sha) + "*" : "-") << '\t' << (r.verdict ? to_string(*r.verdict) : "-")
           << '\t' << r.status << '\t' << r.precision_bits << '\t' << r.pairs << '\t' << r.traces << '\t'
           << r.work_terms;
        if (timing)
            os << '\t' << std::fixed << std::setprecision(2) << r.seconds << std::defaultfloat;
        os << '\n';
    }
}

namespace {

template <class T>
nlohmann::json optional_json(const std::optional<T> & v)
{
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T>
std::optional<T> optional_from(const nlohmann::json & j)
{
    if (j.is_null())
        return std::nullopt;
    return j.get<T>();
}

} // namespace

nlohmann::json to_json(const SurveyReport & report, bool timing)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const SurveyRow & r : report.rows) {
        nlohmann::json row = {
            {"label", r.label},
            {"conductor", r.conductor},
            {"I_E", optional_json(r.I_E)},
            {"nu", optional_json(r.nu)},
            {"sha", r.sha ? nlohmann::json{{"value", *r.sha}, {"source", "ingested"}} : nlohmann::json(nullptr)},
            {"verdict", r.verdict ? nlohmann::json(to_string(*r.verdict)) : nlohmann::json(nullptr)},
            {"status", r.status},
            {"precision_bits", r.precision_bits},
            {"pairs", r.pairs},
            {"traces", r.traces},
            {"unrecognized", r.unrecognized},
            {"work_terms", r.work_terms},
        };
        if (timing)
            row["seconds"] = r.seconds;
        rows.push_back(std::move(row));
    }
    return {
        {"dmax", report.dmax},
        {"precision_bits", report.precision_bits},
        {"caveat", caveat_text(report.dmax)},
        {"skipped", report.skipped},
        {"exit_code", report.exit_code()},
        {"rows", std::move(rows)},
    };
}

SurveyReport report_from_json(const nlohmann::json & j)
{
    SurveyReport report;
    try {
        report.dmax = j.at("dmax").get<std::int64_t>();
        report.precision_bits = j.at("precision_bits").get<Precision>();
        report.skipped = j.at("skipped").get<std::size_t>();
        for (const auto & r : j.at("rows")) {
            SurveyRow row;
            row.label = r.at("label").get<std::string>();
            row.conductor = r.at("conductor").get<std::int64_t>();
            row.I_E = optional_from<std::int64_t>(r.at("I_E"));
            row.nu = optional_from<std::int64_t>(r.at("nu"));
            if (const auto & s = r.at("sha"); !s.is_null())
                row.sha = s.at("value").get<int>();
            if (const auto & v = r.at("verdict"); !v.is_null()) {
                row.verdict = verdict_from_string(v.get<std::string>());
                if (!row.verdict)
                    throw ParseError("<json>", 0, "unknown verdict " + v.get<std::string>());
            }
            row.status = r.at("status").get<std::string>();
            row.precision_bits = r.at("precision_bits").get<Precision>();
            row.pairs = r.at("pairs").get<std::size_t>();
            row.traces = r.at("traces").get<std::size_t>();
            row.unrecognized = r.at("unrecognized").get<std::size_t>();
            row.work_terms = r.at("work_terms").get<std::size_t>();
            if (r.contains("seconds"))
                row.seconds = r.at("seconds").get<double>();
            report.rows.push_back(std::move(row));
        }
    } catch (const nlohmann::json::exception & e) {
        throw ParseError("<json>", 0, e.what());
    }
    return report;
}

std::optional<Verdict> verdict_from_string(const std::string & s)
{
    for (Verdict v : {Verdict::vacuous, Verdict::satisfied_by_nu, Verdict::satisfied_by_sha,
                      Verdict::satisfied_by_both, Verdict::counterexample, Verdict::indeterminate})
        if (to_string(v) == s)
            return v;
    return std::nullopt;
}

} // namespace heegner
