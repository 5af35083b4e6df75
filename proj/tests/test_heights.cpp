#include "doctest.h"

#include <cmath>

#include "heegner/curve_store.hpp"
#include "heegner/ec_arith.hpp"

using namespace heegner;

namespace {

// (1/2) log max(|num x|, |den x|) of 2^n P divided by 4^n. The error is
// O(4^-n), so n = 12 is good to about seven digits.
double doubling_limit(const WeierstrassCurve & E, RationalPoint P, int n = 12)
{
    for (int i = 0; i < n; ++i)
        P = add(E, P, P);
    const mpz_class & a = P.x().get_num();
    const mpz_class & b = P.x().get_den();
    mpz_class m = abs(a) > b ? mpz_class(abs(a)) : b;
    long e = 0;
    double mant = mpz_get_d_2exp(&e, m.get_mpz_t());
    double log_h = std::log(mant) + static_cast<double>(e) * std::log(2.0);
    return log_h / std::ldexp(1.0, 2 * n);
}

double nt(const WeierstrassCurve & E, const RationalPoint & P, Precision prec = 128)
{
    return canonical_height(E, P, prec).value.to_double();
}

} // namespace

TEST_CASE("naive height")
{
    CHECK(naive_height(RationalPoint::infinity(), 64).value.is_zero());
    CHECK(naive_height(RationalPoint(0, 0), 64).value.is_zero());
    HeightValue h = naive_height(RationalPoint(mpq_class(1, 4), mpq_class(-5, 8)), 100);
    CHECK(h.precision_bits == 100);
    CHECK(std::abs(h.value.to_double() - std::log(8.0)) < 1e-15);
}

TEST_CASE("regulator of 37a1")
{
    WeierstrassCurve E(0, 0, 1, -1, 0);
    HeightValue h = canonical_height(E, RationalPoint(0, 0), 256);
    CHECK(h.precision_bits == 256);
    CHECK(h.value.str(12).substr(0, 12) == "0.0511114082");
    CHECK(std::abs(doubling_limit(E, RationalPoint(0, 0)) - 0.0511114082) < 1e-7);
}

TEST_CASE("torsion points have height zero")
{
    WeierstrassCurve E(0, -1, 1, -10, -20);
    for (const RationalPoint & t : torsion_points(E))
        CHECK(canonical_height(E, t, 128).value.is_zero());
}

TEST_CASE("canonical height agrees with the doubling limit")
{
    for (const CurveRecord & rec : builtin_curves()) {
        if (!rec.generator)
            continue;
        WeierstrassCurve E = rec.curve();
        for (int k : {1, 2}) {
            RationalPoint P = scalar_mul(E, k, *rec.generator);
            double expect = doubling_limit(E, P, 9);
            CHECK_MESSAGE(std::abs(nt(E, P) - expect) < 1e-4 * std::max(1.0, expect), rec.label << " k=" << k);
        }
    }
}

TEST_CASE("additive reduction: y^2 = x^3 + 17")
{
    // Points meeting the singular point at 2 and 3 exercise the
    // non-archimedean corrections.
    WeierstrassCurve E(0, 0, 0, 0, 17);
    std::vector<RationalPoint> pts{{-2, 3}, {-1, 4}, {2, 5}, {4, 9}, {8, 23}, {43, 282}, {52, 375}, {5234, 378661}};
    for (const RationalPoint & P : pts) {
        REQUIRE(on_curve(E, P));
        double expect = doubling_limit(E, P, 10);
        CHECK_MESSAGE(std::abs(nt(E, P) - expect) < 1e-5 * std::max(1.0, expect), P);
    }
    // parallelogram law
    const RationalPoint &P = pts[0], &Q = pts[2];
    double lhs = nt(E, add(E, P, Q)) + nt(E, subtract(E, P, Q));
    double rhs = 2 * nt(E, P) + 2 * nt(E, Q);
    CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("quadratic in k to 2^-240")
{
    const Precision prec = 256;
    for (const char * label : {"37a1", "359b1", "4159b1", "35083b1"}) {
        CurveRecord rec = *builtin_curve(label);
        WeierstrassCurve E = rec.curve();
        Real h1 = canonical_height(E, *rec.generator, prec).value;
        for (int k = 2; k <= 5; ++k) {
            Real hk = canonical_height(E, scalar_mul(E, k, *rec.generator), prec).value;
            Real diff = abs(hk - h1 * (k * k));
            CHECK_MESSAGE(diff < ldexp_one(-240, prec) * max(Real(1, prec), hk), label << " k=" << k << " " << diff);
        }
    }
}
