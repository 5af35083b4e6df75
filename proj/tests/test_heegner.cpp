#include "doctest.h"

#include "heegner/ec_arith.hpp"
#include "heegner/error.hpp"
#include "heegner/heegner.hpp"

using namespace heegner;

namespace {

CurveRecord curve(const char * label) { return *builtin_curve(label); }

bool same_up_to_sign_and_torsion(const WeierstrassCurve & E, const RationalPoint & P, const RationalPoint & Q)
{
    return is_torsion(E, subtract(E, P, Q)) || is_torsion(E, add(E, P, Q));
}

} // namespace

TEST_CASE("weights")
{
    CHECK(weight_uD(-3, 37) == 3);
    CHECK(weight_uD(-4, 37) == 2);
    CHECK(weight_uD(-7, 37) == 1);
    CHECK(weight_uD(-43, 43) == 2);
    CHECK_THROWS_AS(weight_uD(-12, 37), DomainError);
    CHECK_THROWS_AS(weight_uD(5, 37), DomainError);
}

TEST_CASE("Heegner points solve their forms")
{
    for (const HeegnerPair & pair : heegner_pairs(359, 163)) {
        for (const HeegnerPoint & h : heegner_points(pair, 128)) {
            const Complex & t = h.tau;
            Complex v = t * t * h.form.A + t * h.form.B + Complex(Real(h.form.C, 128));
            CHECK(abs(v) < ldexp_one(-110, 128) * h.form.A);
            Real im = sqrt(Real(-pair.D, 128)) / (2 * h.form.A);
            CHECK(abs(t.im() - im) < ldexp_one(-120, 128));
        }
    }
}

TEST_CASE("recognition")
{
    CurveRecord rec = curve("359b1");
    WeierstrassCurve E = rec.curve();
    PeriodLattice L(E, 256);
    mpz_class bound = mpz_class(1) << 85;

    CHECK(recognize(Complex(256), L, E, bound).point.is_infinity());
    CHECK(recognize(L.omega2(), L, E, bound).point.is_infinity());

    for (int k : {1, -2, 3}) {
        RationalPoint P = scalar_mul(E, k, *rec.generator);
        Complex z = point_to_complex(L, E, P);
        z.re() += Real::from_double(1e-30, 256);
        z.im() -= Real::from_double(1e-30, 256);
        // the tolerance is 3/4 of the lattice precision, so 1e-30 noise
        // needs a 96-bit lattice
        PeriodLattice L96(E, 96);
        Recognition r = recognize(z.with_precision(96), L96, E, mpz_class(1) << 32);
        CHECK(r.point == P);
        CHECK(r.residual < 1e-20);
        Recognition exact = recognize(point_to_complex(L, E, P) + L.omega1() * 3, L, E, bound);
        CHECK(exact.point == P);
    }

    Complex junk(Real::from_double(0.123456789, 256), Real(0, 256));
    CHECK_THROWS_AS(recognize(junk, L, E, bound), RecognitionError);
    Complex off(Real::from_double(0.3, 256), Real::from_double(0.1, 256));
    CHECK_THROWS_AS(recognize(off, L, E, bound), RecognitionError);
}

TEST_CASE("index of a point")
{
    CurveRecord rec = curve("37a1");
    WeierstrassCurve E = rec.curve();
    const RationalPoint & g = *rec.generator;
    CHECK(index_of(g, rec) == 1);
    CHECK(index_of(negate(E, g), rec) == 1);
    CHECK(index_of(scalar_mul(E, 2, g), rec) == 2);
    CHECK(index_of(scalar_mul(E, -7, g), rec) == 7);

    // 65a1 has rank one and a point of order 2
    CurveRecord r65 = parse_curve_line("65a1 1 0 0 -1 0 65 1 (1:0:1) 2 1");
    WeierstrassCurve F = r65.curve();
    RationalPoint T(0, 0);
    REQUIRE(point_order(F, T) == 2);
    CHECK(index_of(add(F, scalar_mul(F, 2, *r65.generator), T), r65) == 2);
    CHECK(index_of(add(F, scalar_mul(F, -3, *r65.generator), T), r65) == 3);

    // y^2 = x^3 + 17 has rank two: (2, 5) is not a multiple of (-2, 3)
    CurveRecord r17 = parse_curve_line("x17 0 0 0 0 17 17 1 (-2:3:1) 1 -");
    CHECK_THROWS_AS(index_of(RationalPoint(2, 5), r17), InconsistencyError);
}

TEST_CASE("trace of 37a1 at D = -4")
{
    CurveRecord rec = curve("37a1");
    CurveContext ctx(rec, 256);
    HeegnerPair pair = make_heegner_pair(37, -4, 12);
    TraceResult t = compute_trace(ctx, pair);
    REQUIRE(t.recognized);
    CHECK(t.u_D == 2);
    CHECK(t.forms == 1);
    CHECK(!t.torsion);
    CHECK(t.index == 1);
    CHECK(same_up_to_sign_and_torsion(ctx.curve(), t.point, *rec.generator));
    CHECK(t.precision_bits == 256);
    CHECK(t.residual < 1e-60);

    // r + 2N gives the same pair
    TraceResult shifted = compute_trace(ctx, make_heegner_pair(37, -4, 12 + 74));
    CHECK(shifted.point == t.point);
}

TEST_CASE("conjugate pairs")
{
    CurveRecord rec = curve("359a1");
    CurveContext ctx(rec, 256);
    for (const HeegnerPair & pair : heegner_pairs(359, 60)) {
        if (pair.r == pair.r_conjugate)
            continue;
        HeegnerPair mirror = make_heegner_pair(359, pair.D, pair.r_conjugate);
        Complex a = trace_sum(ctx, pair), b = trace_sum(ctx, mirror);
        CHECK(abs(ctx.lattice().reduce(b - conj(a))) < ldexp_one(-200, 256));
        TraceResult ta = compute_trace(ctx, pair), tb = compute_trace(ctx, mirror);
        REQUIRE(ta.recognized);
        REQUIRE(tb.recognized);
        CHECK(ta.point == tb.point);
        CHECK(ta.index == tb.index);
    }
}

TEST_CASE("first non-torsion pair of 359a1 at two precisions")
{
    CurveRecord rec = curve("359a1");
    CurveContext lo(rec, 256);
    auto hi = lo.at_precision(320);
    std::size_t torsion = 0;
    for (const HeegnerPair & pair : heegner_pairs(359, 163)) {
        TraceResult a = compute_trace(lo, pair), b = compute_trace(*hi, pair);
        REQUIRE(a.recognized);
        REQUIRE(b.recognized);
        CHECK(a.point == b.point);
        if (a.torsion) {
            ++torsion;
            continue;
        }
        CHECK(on_curve(lo.curve(), a.point));
        CHECK(a.index == b.index);
        CHECK(a.index % 2 == 0);
        break;
    }
    CHECK(torsion >= 1);
}

TEST_CASE("global index")
{
    for (auto [label, expect] : {std::pair{"37a1", 1}, {"43a1", 1}, {"359a1", 2}, {"997a1", 2}}) {
        CurveContext ctx(curve(label), 256);
        GlobalIndexResult g = global_index(ctx);
        REQUIRE(g.index);
        CHECK_MESSAGE(*g.index == expect, label);
        CHECK(g.unrecognized == 0);
        CHECK(g.revalidation_mismatches == 0);
        for (const TraceResult & t : g.traces)
            CHECK(on_curve(ctx.curve(), t.point));
    }
}

TEST_CASE("gcd over more discriminants divides")
{
    CurveContext ctx(curve("359b1"), 256);
    GlobalIndexOptions few, many;
    few.dmax = 40;
    few.early_exit = false;
    many.dmax = 163;
    many.early_exit = false;
    auto a = global_index(ctx, few), b = global_index(ctx, many);
    REQUIRE(a.index);
    REQUIRE(b.index);
    CHECK(*a.index % *b.index == 0);
    CHECK(b.traces.size() >= a.traces.size());
}

TEST_CASE("early exit")
{
    CurveContext ctx(curve("37a1"), 256);
    std::size_t seen = 0;
    GlobalIndexResult g = global_index(ctx, {}, [&](const TraceResult &) { ++seen; });
    CHECK(g.early_exit);
    CHECK(seen == g.traces.size());
    CHECK(g.traces.size() < 2 * g.pairs_total);
}

TEST_CASE("verdicts")
{
    CHECK(conjecture_check(2, 2, 1) == Verdict::satisfied_by_nu);
    CHECK(conjecture_check(4, 1, 4) == Verdict::satisfied_by_sha);
    CHECK(conjecture_check(2, 3, 4) == Verdict::satisfied_by_both);
    CHECK(conjecture_check(1, 1, 1) == Verdict::vacuous);
    CHECK(conjecture_check(1, 5, std::nullopt) == Verdict::vacuous);
    CHECK(conjecture_check(2, 1, 1) == Verdict::counterexample);
    CHECK(conjecture_check(2, 1, std::nullopt) == Verdict::indeterminate);
    CHECK(conjecture_check(2, 2, std::nullopt) == Verdict::satisfied_by_nu);
    CHECK(to_string(Verdict::satisfied_by_sha) == "satisfied_by_sha");
}
