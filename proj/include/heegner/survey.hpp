#pragma once

// Batch driver: I_E, nu_N and the conjecture verdict for every rank-one
// curve of prime conductor in a curve file, with TSV and JSON reports.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "heegner/curve_store.hpp"
#include "heegner/heegner.hpp"

namespace heegner {

struct SurveyOptions
{
    std::int64_t dmax = default_dmax;
    Precision precision_bits = default_precision;
    unsigned jobs = 1;
    bool revalidate = true;
    bool early_exit = true;
    std::shared_ptr<const CacheStore> cache;
};

struct SurveyRow
{
    std::string label;
    std::int64_t conductor = 0;
    std::optional<std::int64_t> I_E;
    std::optional<std::int64_t> nu;
    std::optional<int> sha; // as ingested
    std::optional<Verdict> verdict;
    std::string status = "ok"; // "ok" or an error message
    Precision precision_bits = 0;
    std::size_t pairs = 0;
    std::size_t traces = 0;
    std::size_t unrecognized = 0;
    std::size_t work_terms = 0;
    double seconds = 0;

    bool ok() const { return status == "ok"; }
    friend bool operator==(const SurveyRow &, const SurveyRow &) = default;
};

struct SurveyReport
{
    std::int64_t dmax = default_dmax;
    Precision precision_bits = default_precision;
    std::vector<SurveyRow> rows;
    std::size_t skipped = 0; // parsed curves outside the survey's scope

    // 3 if some verdict is a counterexample, else 2 if some row failed, else 0.
    int exit_code() const;
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_data_error = 2;
inline constexpr int exit_counterexample = 3;

// True for rank one and prime conductor.
bool in_survey_scope(const CurveRecord & rec);

SurveyRow survey_curve(const CurveRecord & rec, const SurveyOptions & opts);

// Rows ordered by conductor then label. Lines that failed to parse become
// error rows; curves out of scope are counted in skipped.
SurveyReport run_survey(const std::vector<CurveLine> & lines, const SurveyOptions & opts,
                        const std::function<void(const SurveyRow &)> & progress = {});

std::string caveat_text(std::int64_t dmax);

void write_tsv(std::ostream & os, const SurveyReport & report, bool timing = true);

// Schema: {"dmax", "precision_bits", "caveat", "skipped", "exit_code",
// "rows": [{"label", "conductor", "I_E", "nu", "sha": {"value",
// "source"} | null, "verdict", "status", "precision_bits", "pairs",
// "traces", "unrecognized", "work_terms", "seconds"?}]}. Absent values are
// null.
nlohmann::json to_json(const SurveyReport & report, bool timing = true);
SurveyReport report_from_json(const nlohmann::json & j);

std::optional<Verdict> verdict_from_string(const std::string & s);

} // namespace heegner
