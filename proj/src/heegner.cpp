#include "heegner/heegner.hpp"

#include <algorithm>
#include <numeric>

#include "heegner/ec_arith.hpp"
#include "heegner/error.hpp"

namespace heegner {

namespace {

// Extra bits asked of phi so that recognition has room to spare.
constexpr Precision phi_guard = 16;

// Escalation rounds after the first attempt.
constexpr int max_escalations = 3;

mpq_class exact_value(const Real & x)
{
    mpz_class m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x.get());
    mpq_class q(m);
    if (e > 0)
        mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
    else if (e < 0)
        mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
    q.canonicalize();
    return q;
}

bool is_rational_square(const mpq_class & q, mpq_class & root)
{
    if (q < 0)
        return false;
    if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t()))
        return false;
    mpz_class n, d;
    mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
    root = mpq_class(n, d);
    root.canonicalize();
    return true;
}

// |a - b| <= 2^-bits * max(1, |b|)
bool close(const Real & a, const mpq_class & b, long bits)
{
    const Precision p = a.precision();
    Real exact(b, p);
    Real scale = max(Real(1, p), abs(exact));
    return abs(a - exact) <= ldexp_one(-bits, p) * scale;
}

double relative_residual(const Real & a, const mpq_class & b)
{
    const Precision p = a.precision();
    Real exact(b, p);
    Real scale = max(Real(1, p), abs(exact));
    return (abs(a - exact) / scale).to_double();
}

} // namespace

int weight_uD(std::int64_t D, std::int64_t N)
{
    if (D >= 0 || !is_fundamental_discriminant(D))
        throw DomainError(std::to_string(D) + " is not a negative fundamental discriminant");
    if (D == -3)
        return 3;
    if (D == -4 || (N != 0 && D % N == 0))
        return 2;
    return 1;
}

std::vector<HeegnerPoint> heegner_points(const HeegnerPair & pair, Precision prec)
{
    std::vector<HeegnerPoint> out;
    Real root_d = sqrt(Real(-pair.D, prec));
    for (const QuadForm & f : heegner_forms(pair)) {
        Complex tau(Real(-f.B, prec), root_d);
        tau /= 2 * f.A;
        out.push_back({f, std::move(tau)});
    }
    return out;
}

CoefficientSource::CoefficientSource(WeierstrassCurve E, std::string label, std::shared_ptr<const CacheStore> cache)
    : curve_(std::move(E)), label_(std::move(label)), cache_(std::move(cache))
{
}

std::shared_ptr<const CoefficientCache> CoefficientSource::get(std::size_t M)
{
    std::lock_guard lock(mutex_);
    if (an_ && an_->size() >= M)
        return an_;
    const std::size_t target = std::max({M, an_ ? an_->size() * 3 / 2 : 0, std::size_t{64}});
    const bool cached = cache_ && !label_.empty();
    if (cached) {
        auto hit = cache_->load(label_, target);
        if (!hit)
            hit = cache_->load(label_, M);
        if (hit) {
            an_ = std::make_shared<const CoefficientCache>(std::move(*hit));
            return an_;
        }
    }
    auto table = std::make_shared<const CoefficientCache>(an_table(curve_, target, label_));
    if (cached) {
        try {
            cache_->store(*table);
        } catch (const std::exception &) {
            // an unwritable cache only costs time
        }
    }
    an_ = std::move(table);
    return an_;
}

CurveContext::CurveContext(CurveRecord record, Precision prec, std::shared_ptr<const CacheStore> cache)
    : CurveContext(record, prec, std::make_shared<CoefficientSource>(record.curve(), record.label, std::move(cache)))
{
}

CurveContext::CurveContext(CurveRecord record, Precision prec, std::shared_ptr<CoefficientSource> source)
    : record_(std::move(record)),
      curve_(record_.curve()),
      prec_(prec),
      lattice_(curve_, prec),
      source_(std::move(source))
{
}

std::unique_ptr<CurveContext> CurveContext::at_precision(Precision prec) const
{
    return std::make_unique<CurveContext>(record_, prec, source_);
}

const Real & CurveContext::generator_height()
{
    std::lock_guard lock(mutex_);
    if (!gen_height_) {
        if (!record_.generator)
            throw DomainError(record_.label + ": no generator on record");
        gen_height_ = canonical_height(curve_, *record_.generator, 128).value;
    }
    return *gen_height_;
}

std::size_t coefficients_needed(const HeegnerPair & pair, Precision prec)
{
    std::size_t M = 1;
    for (const HeegnerPoint & h : heegner_points(pair, prec)) {
        Complex tau = best_representative(h.tau, pair.N);
        M = std::max(M, terms_needed(tau.im(), prec + phi_guard));
    }
    return M;
}

Complex trace_sum(CurveContext & ctx, const HeegnerPair & pair, std::size_t * terms)
{
    const Precision prec = ctx.precision();
    std::vector<Complex> taus;
    std::size_t M = 1, total = 0;
    for (const HeegnerPoint & h : heegner_points(pair, prec)) {
        Complex tau = best_representative(h.tau, pair.N);
        std::size_t m = terms_needed(tau.im(), prec + phi_guard);
        M = std::max(M, m);
        total += m;
        taus.push_back(std::move(tau));
    }
    auto an = ctx.coefficients(M);
    Complex sum(prec);
    for (const Complex & tau : taus)
        sum += phi(*an, tau, prec + phi_guard).with_precision(prec);
    if (terms)
        *terms = total;
    return sum;
}

Recognition recognize(const Complex & z, const PeriodLattice & L, const WeierstrassCurve & E,
                      const mpz_class & denominator_bound)
{
    ComplexPoint cp = complex_to_point(L, z);
    if (cp.infinity)
        return {RationalPoint::infinity(), 0};

    const Precision prec = L.precision();
    const Real & xr = cp.x.re();
    Real scale = max(Real(1, prec), abs(xr));
    if (abs(cp.x.im()) > ldexp_one(-static_cast<long>(prec / 2), prec) * scale)
        throw RecognitionError("x(z) is not real");

    // First continued-fraction convergent within the tolerance.
    const long tol_bits = static_cast<long>(3 * prec / 4);
    mpq_class target = exact_value(xr);
    mpz_class num = target.get_num(), den = target.get_den();
    mpz_class h1 = 1, h2 = 0, k1 = 0, k2 = 1;
    std::optional<mpq_class> x;
    while (den != 0) {
        mpz_class a;
        mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        mpz_class h = a * h1 + h2, k = a * k1 + k2;
        if (k > denominator_bound)
            break;
        mpq_class c(h, k);
        if (close(xr, c, tol_bits)) {
            x = c;
            break;
        }
        h2 = h1, h1 = h, k2 = k1, k1 = k;
        mpz_class r = num - a * den;
        num = den, den = r;
    }
    if (!x)
        throw RecognitionError("no rational x with denominator up to " + denominator_bound.get_str());
    if (!mpz_perfect_square_p(x->get_den_mpz_t()))
        throw RecognitionError("denominator of x = " + x->get_str() + " is not a square");

    const mpq_class & X = *x;
    mpq_class lin = E.a1() * X + E.a3();
    mpq_class disc = lin * lin + 4 * (X * X * X + E.a2() * X * X + E.a4() * X + E.a6());
    mpq_class s;
    if (!is_rational_square(disc, s))
        throw RecognitionError("no rational y above x = " + X.get_str());
    mpq_class y_plus = (-lin + s) / 2, y_minus = (-lin - s) / 2;
    const Real & yr = cp.y.re();
    Real d_plus = abs(yr - Real(y_plus, prec)), d_minus = abs(yr - Real(y_minus, prec));
    mpq_class Y = d_plus <= d_minus ? y_plus : y_minus;
    if (!close(yr, Y, static_cast<long>(prec / 2)))
        throw RecognitionError("y(z) does not match either root above x = " + X.get_str());

    RationalPoint P(X, Y);
    if (!on_curve(E, P))
        throw InconsistencyError("recognised point " + P.to_string() + " is not on the curve");
    return {P, relative_residual(xr, X)};
}

Recognition recognize_on_generator(const Complex & z, int u, const PeriodLattice & L, const WeierstrassCurve & E,
                                   const RationalPoint & generator, int max_multiple)
{
    const Precision prec = L.precision();
    const Complex zg = point_to_complex(L, E, generator);
    struct Torsion
    {
        RationalPoint point;
        Complex z;
    };
    std::vector<Torsion> torsion;
    for (const RationalPoint & t : torsion_points(E))
        torsion.push_back({t, point_to_complex(L, E, t)});

    const Real tol = abs(L.omega1()) * ldexp_one(-static_cast<long>(prec / 2), prec);
    struct Match
    {
        long k;
        const Torsion * t;
        Real distance;
    };
    std::vector<Match> found;
    Complex acc(prec); // k zg
    for (long k = 0; k <= max_multiple; ++k, acc += zg) {
        for (const Torsion & t : torsion) {
            for (long sign : {1L, -1L}) {
                if (k == 0 && sign < 0)
                    continue;
                Complex d = (acc * sign + t.z) * u - z;
                Real dist = abs(L.reduce(d));
                if (dist < tol)
                    found.push_back({k * sign, &t, dist});
            }
        }
    }
    if (found.empty())
        throw RecognitionError("no multiple of the generator up to " + std::to_string(max_multiple) + " matches");
    for (const Match & m : found)
        if (std::labs(m.k) != std::labs(found.front().k))
            throw InconsistencyError("generator multiples " + std::to_string(found.front().k) + " and " +
                                     std::to_string(m.k) + " both match the trace");
    const Match & best = *std::min_element(found.begin(), found.end(),
                                           [](const Match & a, const Match & b) { return a.distance < b.distance; });
    RationalPoint P = add(E, scalar_mul(E, best.k, generator), best.t->point);
    return {P, (best.distance / abs(L.omega1())).to_double()};
}

int index_of(const RationalPoint & point, const CurveRecord & rec)
{
    return index_of(point, rec, canonical_height(rec.curve(), *rec.generator, 128).value);
}

int index_of(const RationalPoint & point, const CurveRecord & rec, const Real & generator_height)
{
    if (!rec.generator)
        throw DomainError(rec.label + ": no generator on record");
    const WeierstrassCurve E = rec.curve();
    if (is_torsion(E, point))
        return 0;
    const Real h = canonical_height(E, point, generator_height.precision()).value;
    const long k0 = round_to_integer(sqrt(h / generator_height)).get_si();
    for (long k : {k0, k0 - 1, k0 + 1}) {
        if (k < 1)
            continue;
        RationalPoint kg = scalar_mul(E, k, *rec.generator);
        if (is_torsion(E, subtract(E, point, kg)) || is_torsion(E, add(E, point, kg)))
            return static_cast<int>(k);
    }
    throw InconsistencyError(rec.label + ": " + point.to_string() + " is not a multiple of the generator modulo torsion");
}

namespace {

// Division of the trace by u_D: every u-th part of z that is a rational
// point, which must agree modulo torsion.
Recognition recognize_divided(const Complex & z, int u, const CurveContext & ctx)
{
    const PeriodLattice & L = ctx.lattice();
    const WeierstrassCurve & E = ctx.curve();
    mpz_class bound;
    mpz_ui_pow_ui(bound.get_mpz_t(), 2, static_cast<unsigned long>(ctx.precision() / 3));

    std::vector<Recognition> found;
    std::string last_error;
    for (int j = 0; j < u; ++j) {
        for (int k = 0; k < u; ++k) {
            Complex c = z + L.omega1() * j + L.omega2() * k;
            c /= u;
            try {
                found.push_back(recognize(c, L, E, bound));
            } catch (const RecognitionError & e) {
                last_error = e.what();
            }
        }
    }
    if (found.empty())
        throw RecognitionError(last_error);
    for (const Recognition & r : found)
        if (!is_torsion(E, subtract(E, r.point, found.front().point)))
            throw InconsistencyError("division by u_D = " + std::to_string(u) + " is not unique modulo torsion: " +
                                     found.front().point.to_string() + ", " + r.point.to_string());
    auto height = [](const Recognition & r) { return naive_height(r.point, 64).value; };
    return *std::min_element(found.begin(), found.end(),
                             [&](const Recognition & a, const Recognition & b) { return height(a) < height(b); });
}

} // namespace

TraceResult compute_trace(CurveContext & ctx, const HeegnerPair & pair)
{
    TraceResult res;
    res.pair = pair;
    res.u_D = weight_uD(pair.D, pair.N);

    std::unique_ptr<CurveContext> escalated;
    CurveContext * c = &ctx;
    for (int round = 0;; ++round) {
        res.precision_bits = c->precision();
        try {
            std::size_t terms = 0;
            Complex z = trace_sum(*c, pair, &terms);
            res.terms += terms;
            Recognition r;
            try {
                r = recognize_divided(z, res.u_D, *c);
            } catch (const RecognitionError &) {
                if (!ctx.record().generator)
                    throw;
                r = recognize_on_generator(z, res.u_D, c->lattice(), c->curve(), *ctx.record().generator);
            }
            res.point = r.point;
            res.residual = r.residual;
            res.recognized = true;
            break;
        } catch (const RecognitionError & e) {
            if (round == max_escalations) {
                res.error = e.what();
                return res;
            }
            escalated = ctx.at_precision(c->precision() * 2);
            c = escalated.get();
        } catch (const Error & e) {
            res.error = e.what();
            return res;
        }
    }
    res.forms = heegner_forms(pair).size();

    try {
        res.torsion = is_torsion(ctx.curve(), res.point);
        if (!res.torsion)
            res.index = index_of(res.point, ctx.record(), ctx.generator_height());
    } catch (const Error & e) {
        res.recognized = false;
        res.error = e.what();
    }
    return res;
}

std::vector<TraceResult> compute_traces(CurveContext & ctx, const HeegnerPair & pair)
{
    std::vector<TraceResult> out{compute_trace(ctx, pair)};
    if (pair.r_conjugate != pair.r) {
        // phi(-conj tau) = conj phi(tau), and a rational point is its own
        // conjugate.
        TraceResult mirror = out.front();
        mirror.pair.r = pair.r_conjugate;
        mirror.pair.r_conjugate = pair.r;
        mirror.terms = 0;
        out.push_back(std::move(mirror));
    }
    return out;
}

GlobalIndexResult global_index(CurveContext & ctx, const GlobalIndexOptions & opts,
                               const std::function<void(const TraceResult &)> & progress)
{
    GlobalIndexResult res;
    std::vector<HeegnerPair> pairs = heegner_pairs(ctx.record().conductor, opts.dmax);
    if (opts.max_pairs && pairs.size() > opts.max_pairs)
        pairs.resize(opts.max_pairs);
    res.pairs_total = pairs.size();

    const Precision rv_prec = ctx.precision() + 64;
    {
        std::size_t M = 1;
        for (const HeegnerPair & p : pairs)
            M = std::max(M, coefficients_needed(p, opts.revalidate ? rv_prec : ctx.precision()));
        ctx.coefficients(M);
    }
    std::unique_ptr<CurveContext> rv;
    if (opts.revalidate)
        rv = ctx.at_precision(rv_prec);

    std::int64_t g = 0;
    bool any = false;
    for (const HeegnerPair & pair : pairs) {
        std::vector<TraceResult> traces = compute_traces(ctx, pair);
        if (rv && traces.front().recognized) {
            TraceResult check = compute_trace(*rv, pair);
            res.work_terms += check.terms;
            if (!check.recognized || !(check.point == traces.front().point)) {
                ++res.revalidation_mismatches;
                for (TraceResult & t : traces) {
                    t.recognized = false;
                    t.error = "revalidation at " + std::to_string(rv_prec) + " bits disagrees" +
                              (check.recognized ? ": " + check.point.to_string() : ": " + check.error);
                }
            }
        }
        for (TraceResult & t : traces) {
            res.work_terms += t.terms;
            if (!t.recognized)
                ++res.unrecognized;
            else if (!t.torsion) {
                g = std::gcd(g, static_cast<std::int64_t>(t.index));
                any = true;
            }
            if (progress)
                progress(t);
            res.traces.push_back(std::move(t));
        }
        if (opts.early_exit && any && g == 1) {
            res.early_exit = &pair != &pairs.back();
            break;
        }
    }
    if (any)
        res.index = g;
    return res;
}

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::vacuous: return "vacuous";
    case Verdict::satisfied_by_nu: return "satisfied_by_nu";
    case Verdict::satisfied_by_sha: return "satisfied_by_sha";
    case Verdict::satisfied_by_both: return "satisfied_by_both";
    case Verdict::counterexample: return "counterexample";
    case Verdict::indeterminate: return "indeterminate";
    }
    return "unknown";
}

Verdict conjecture_check(std::int64_t I_E, std::int64_t nu_value, std::optional<int> sha)
{
    if (I_E <= 1)
        return Verdict::vacuous;
    const bool by_nu = nu_value > 1;
    const bool by_sha = sha && *sha > 1;
    if (by_nu && by_sha)
        return Verdict::satisfied_by_both;
    if (by_nu)
        return Verdict::satisfied_by_nu;
    if (by_sha)
        return Verdict::satisfied_by_sha;
    return sha ? Verdict::counterexample : Verdict::indeterminate;
}

} // namespace heegner
