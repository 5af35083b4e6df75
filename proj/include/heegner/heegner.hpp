#pragma once

// Heegner points, their weighted traces y_{D,r}, exact recognition of the
// traces as rational points, and the index I_E of the subgroup they
// generate.

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "heegner/bigfloat.hpp"
#include "heegner/curve_store.hpp"
#include "heegner/modparam.hpp"
#include "heegner/quadforms.hpp"
#include "heegner/weierstrass.hpp"

namespace heegner {

inline constexpr Precision default_precision = 256;
inline constexpr std::int64_t default_dmax = 163;

// 3 for D = -3, 2 for D = -4 or N | D, else 1.
int weight_uD(std::int64_t D, std::int64_t N);

struct HeegnerPoint
{
    QuadForm form;
    Complex tau; // (-B + sqrt(D)) / (2A)
};
std::vector<HeegnerPoint> heegner_points(const HeegnerPair & pair, Precision prec);

// Table of a_E(n) that grows on demand, optionally backed by a CacheStore.
// Safe to share between threads.
class CoefficientSource
{
public:
    CoefficientSource(WeierstrassCurve E, std::string label, std::shared_ptr<const CacheStore> cache = nullptr);
    // a_E(1..M') for some M' >= M.
    std::shared_ptr<const CoefficientCache> get(std::size_t M);

private:
    WeierstrassCurve curve_;
    std::string label_;
    std::shared_ptr<const CacheStore> cache_;
    std::mutex mutex_;
    std::shared_ptr<const CoefficientCache> an_;
};

// Per-curve state shared by every trace: the model, the period lattice at
// the working precision and the coefficient table.
class CurveContext
{
public:
    CurveContext(CurveRecord record, Precision prec, std::shared_ptr<const CacheStore> cache = nullptr);
    CurveContext(CurveRecord record, Precision prec, std::shared_ptr<CoefficientSource> source);

    // Same curve and coefficient table at another precision.
    std::unique_ptr<CurveContext> at_precision(Precision prec) const;

    const CurveRecord & record() const { return record_; }
    const WeierstrassCurve & curve() const { return curve_; }
    Precision precision() const { return prec_; }
    const PeriodLattice & lattice() const { return lattice_; }
    std::shared_ptr<const CoefficientCache> coefficients(std::size_t M) { return source_->get(M); }

    // Neron-Tate height of the stored generator.
    const Real & generator_height();

private:
    CurveRecord record_;
    WeierstrassCurve curve_;
    Precision prec_;
    PeriodLattice lattice_;
    std::shared_ptr<CoefficientSource> source_;
    std::mutex mutex_;
    std::optional<Real> gen_height_;
};

// Number of coefficients trace_sum needs for (D, r) at precision prec.
std::size_t coefficients_needed(const HeegnerPair & pair, Precision prec);

// Sum of phi over the Heegner points of (D, r), each evaluated at its best
// representative. terms receives the number of q-series terms summed.
Complex trace_sum(CurveContext & ctx, const HeegnerPair & pair, std::size_t * terms = nullptr);

struct Recognition
{
    RationalPoint point;
    double residual = 0; // relative error of x(z), or of z itself for recognize_on_generator
};

// Rational point whose image in C / Lambda is z: x by continued fractions
// with denominators up to denominator_bound, then y solved exactly and
// matched to the complex value. Throws RecognitionError.
Recognition recognize(const Complex & z, const PeriodLattice & L, const WeierstrassCurve & E,
                      const mpz_class & denominator_bound);

// Fallback for rank one: the point P = k g + t with |k| <= max_multiple and
// t torsion such that u P = z in C / Lambda, found by walking the multiples
// of the elliptic logarithm of g. P is exact by construction. Throws
// RecognitionError unless the match is unique modulo torsion.
inline constexpr int generator_search_bound = 1000;
Recognition recognize_on_generator(const Complex & z, int u, const PeriodLattice & L, const WeierstrassCurve & E,
                                   const RationalPoint & generator, int max_multiple = generator_search_bound);

// I >= 1 with point = +-I g modulo torsion, found from the height ratio and
// confirmed in exact arithmetic. Throws InconsistencyError.
int index_of(const RationalPoint & point, const CurveRecord & rec);
int index_of(const RationalPoint & point, const CurveRecord & rec, const Real & generator_height);

struct TraceResult
{
    HeegnerPair pair;
    bool recognized = false;
    bool torsion = false;
    RationalPoint point;
    int index = 0; // 0 when torsion or unrecognised
    int u_D = 1;
    double residual = 0;
    Precision precision_bits = 0;
    std::size_t forms = 0;
    std::size_t terms = 0;
    std::string error;
};

// Trace for (D, r) and for (D, -r), the latter being the complex conjugate
// of the former. Recognition escalates precision (doubling, at most three
// times) when the first attempt fails.
std::vector<TraceResult> compute_traces(CurveContext & ctx, const HeegnerPair & pair);
TraceResult compute_trace(CurveContext & ctx, const HeegnerPair & pair);

struct GlobalIndexOptions
{
    std::int64_t dmax = default_dmax;
    bool early_exit = true;  // stop once the gcd reaches 1
    bool revalidate = true;  // recompute every trace at precision + 64
    std::size_t max_pairs = 0; // 0 = all
};

struct GlobalIndexResult
{
    std::optional<std::int64_t> index; // absent if no trace was non-torsion
    std::vector<TraceResult> traces;
    std::size_t pairs_total = 0;
    std::size_t unrecognized = 0;
    std::size_t revalidation_mismatches = 0;
    std::size_t work_terms = 0;
    bool early_exit = false;
};

GlobalIndexResult global_index(CurveContext & ctx, const GlobalIndexOptions & opts = {},
                               const std::function<void(const TraceResult &)> & progress = {});

enum class Verdict
{
    vacuous,
    satisfied_by_nu,
    satisfied_by_sha,
    satisfied_by_both,
    counterexample,
    indeterminate,
};
std::string to_string(Verdict v);

// If I_E > 1 then nu > 1 or |Sha| > 1.
Verdict conjecture_check(std::int64_t I_E, std::int64_t nu_value, std::optional<int> sha);

} // namespace heegner
