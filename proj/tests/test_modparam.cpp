#include "doctest.h"

#include <numeric>
#include <random>

#include "heegner/curve_store.hpp"
#include "heegner/ec_arith.hpp"
#include "heegner/error.hpp"
#include "heegner/modparam.hpp"

using namespace heegner;

namespace {

const WeierstrassCurve E37(0, 0, 1, -1, 0);

Real tiny(long bits, Precision p) { return ldexp_one(-bits, p); }

// p(z) and p'(z) from the Laurent expansion at 0 in terms of g2 = c4/12 and
// g3 = c6/216; valid for |z| well inside the shortest period.
std::pair<Complex, Complex> laurent_wp(const WeierstrassCurve & E, const Complex & z, int terms)
{
    const Precision p = z.precision();
    std::vector<Real> c(terms + 1, Real(0, p));
    c[2] = Real(mpq_class(E.c4(), 12 * 20), p);
    c[3] = Real(mpq_class(E.c6(), 216 * 28), p);
    for (int k = 4; k <= terms; ++k) {
        Real s(0, p);
        for (int m = 2; m <= k - 2; ++m)
            s += c[m] * c[k - m];
        c[k] = s * 3 / ((2 * k + 1) * (k - 3));
    }
    Complex z2 = z * z;
    Complex one(Real(1, p));
    Complex wp = one / z2, dwp = Complex(Real(-2, p)) / (z2 * z);
    Complex pow = one; // z^(2k - 4)
    for (int k = 2; k <= terms; ++k) {
        wp += pow * z2 * c[k];
        dwp += pow * z * c[k] * (2 * k - 2);
        pow *= z2;
    }
    return {wp, dwp};
}

// Carlson's symmetric integral R_F by duplication.
Real carlson_rf(Real x, Real y, Real z)
{
    const Precision p = x.precision();
    for (;;) {
        Real A = (x + y + z) / 3;
        Real dev = max(abs(A - x), max(abs(A - y), abs(A - z)));
        if (dev < A * tiny(p / 6 + 4, p)) {
            Real X = (A - x) / A, Y = (A - y) / A;
            Real Z = -(X + Y);
            Real E2 = X * Y - Z * Z, E3 = X * Y * Z;
            Real s = Real(1, p) - E2 / 10 + E3 / 14 + E2 * E2 / 24 - E2 * E3 * 3 / 44;
            return s / sqrt(A);
        }
        Real sx = sqrt(x), sy = sqrt(y), sz = sqrt(z);
        Real lam = sx * sy + sy * sz + sz * sx;
        x = (x + lam) / 4;
        y = (y + lam) / 4;
        z = (z + lam) / 4;
    }
}

// a, b with a d - b c = 1
bool complete(std::int64_t c, std::int64_t d, std::int64_t & a, std::int64_t & b)
{
    std::int64_t old_r = d, r = c, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r) {
        std::int64_t q = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
        std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
    }
    if (std::abs(old_r) != 1)
        return false;
    // old_s d + old_t c = old_r
    a = old_s * old_r;
    b = -old_t * old_r;
    return true;
}

Complex moebius(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d, const Complex & tau)
{
    return (tau * a + Complex(Real(b, tau.precision()))) / (tau * c + Complex(Real(d, tau.precision())));
}

} // namespace

TEST_CASE("periods of 37a1")
{
    PeriodLattice L(E37, 256);
    CHECK(L.real_components() == 2);
    CHECK(L.omega1().re().str(12).substr(0, 12) == "2.9934586462");
    CHECK(L.omega1().im().is_zero());
    CHECK(L.real_period().str(9).substr(0, 9) == "5.9869172");
    CHECK(L.omega2().re().is_zero());
    CHECK(L.omega2().im() > 0);
    // p(w1/2) is the largest root
    auto [wp, dwp] = L.wp(L.omega1() / 2);
    CHECK(abs(wp - Complex(Real(L.b2(), 256)) / 12 - L.roots()[0]) < tiny(200, 256));
    CHECK(abs(dwp) < tiny(200, 256));
}

TEST_CASE("rescaled model scales the periods")
{
    // a_i -> 2^i a_i
    WeierstrassCurve F(0, 0, 8, -16, 0);
    PeriodLattice L(E37, 192), M(F, 192);
    CHECK(abs(M.omega1() * 2 - L.omega1()) < tiny(180, 192));
    CHECK(abs(M.omega2() * 2 - L.omega2()) < tiny(180, 192));
}

TEST_CASE("negative discriminant has one real component")
{
    CurveRecord r = *builtin_curve("43a1");
    PeriodLattice L(r.curve(), 128);
    CHECK(L.real_components() == 1);
    CHECK(L.omega1().im().is_zero());
    CHECK(abs(L.omega2().re() * 2 + L.omega1().re()) < tiny(120, 128));
}

TEST_CASE("Weierstrass p against its Laurent series")
{
    for (const char * label : {"37a1", "43a1", "359b1", "4159b1"}) {
        CurveRecord rec = *builtin_curve(label);
        WeierstrassCurve E = rec.curve();
        PeriodLattice L(E, 256);
        for (auto [s, t] : {std::pair{0.05, 0.0}, {0.03, 0.04}, {-0.02, 0.07}}) {
            Complex z = L.reduced_w1() * Real::from_double(s, 256) + L.reduced_w2() * Real::from_double(t, 256);
            auto [wp, dwp] = L.wp(z);
            auto [lw, ldw] = laurent_wp(E, z, 90);
            CHECK_MESSAGE(abs(wp - lw) < abs(lw) * tiny(230, 256), label);
            CHECK_MESSAGE(abs(dwp - ldw) < abs(ldw) * tiny(230, 256), label);
            auto [nw, ndw] = L.wp(-z);
            CHECK(abs(nw - wp) < abs(wp) * tiny(240, 256));
            CHECK(abs(ndw + dwp) < abs(dwp) * tiny(240, 256));
        }
    }
}

TEST_CASE("elliptic logarithm against Carlson's integral")
{
    // On the identity component, |z| = int_x^oo dt / sqrt(4 prod (t - e_i))
    // = R_F(x - e1, x - e2, x - e3).
    for (const char * label : {"37a1", "359a1", "997a1", "4159b1"}) {
        CurveRecord rec = *builtin_curve(label);
        WeierstrassCurve E = rec.curve();
        PeriodLattice L(E, 256);
        int tested = 0;
        for (int k = 1; k <= 8; ++k) {
            RationalPoint P = scalar_mul(E, k, *rec.generator);
            Real x(P.x(), 256);
            if (L.real_components() == 2 && x < L.roots()[0].re())
                continue;
            Real expect = carlson_rf(x - L.roots()[0].re(), x - L.roots()[1].re(), x - L.roots()[2].re());
            if (L.real_components() == 1)
                continue;
            Complex z = point_to_complex(L, E, P);
            CHECK(abs(z.im()) < tiny(240, 256));
            CHECK_MESSAGE(abs(abs(z.re()) - expect) < tiny(230, 256), label << " k=" << k);
            ++tested;
        }
        CHECK(tested > 0);
    }
}

TEST_CASE("elliptic logarithm round trip")
{
    for (const CurveRecord & rec : builtin_curves()) {
        if (!rec.generator)
            continue;
        WeierstrassCurve E = rec.curve();
        PeriodLattice L(E, 256);
        CHECK(point_to_complex(L, E, RationalPoint::infinity()).is_zero());
        for (int k : {1, 2, 3, -2}) {
            RationalPoint P = scalar_mul(E, k, *rec.generator);
            Complex z = point_to_complex(L, E, P);
            CHECK(abs(z) < abs(L.omega1()) + abs(L.omega2()));
            ComplexPoint c = complex_to_point(L, z);
            REQUIRE(!c.infinity);
            Real sx = max(Real(1, 256), abs(Real(P.x(), 256)));
            Real sy = max(Real(1, 256), abs(Real(P.y(), 256)));
            CHECK_MESSAGE(abs(c.x - Complex(Real(P.x(), 256))) < sx * tiny(200, 256), rec.label << " k=" << k);
            CHECK_MESSAGE(abs(c.y - Complex(Real(P.y(), 256))) < sy * tiny(200, 256), rec.label << " k=" << k);
        }
        // z(2P) = 2 z(P) mod the lattice
        Complex z1 = point_to_complex(L, E, *rec.generator);
        Complex z2 = point_to_complex(L, E, scalar_mul(E, 2, *rec.generator));
        CHECK_MESSAGE(abs(L.reduce(z2 - z1 * 2)) < tiny(200, 256), rec.label);
    }
    PeriodLattice L(E37, 128);
    CHECK(complex_to_point(L, Complex(128)).infinity);
    CHECK(complex_to_point(L, L.omega1() - L.omega2() * 3).infinity);
}

TEST_CASE("truncation of the q-series")
{
    for (double y : {0.01, 0.027, 0.1, 0.5}) {
        for (Precision p : {64, 256, 1024}) {
            std::size_t M = terms_needed(Real::from_double(y, 64), p);
            double q = std::exp(-2 * M_PI * y);
            CHECK(std::log2(2 * std::pow(q, M + 1) / (1 - q)) < -static_cast<double>(p));
            CHECK(std::log2(2 * std::pow(q, M) / (1 - q)) >= -static_cast<double>(p) - 1e-9);
        }
    }
    CHECK_THROWS_AS(terms_needed(Real(0, 64), 64), DomainError);
    CoefficientCache small{"37a1", {1, -2, -3}};
    CHECK_THROWS_AS(phi(small, Complex(Real(0, 64), Real::from_double(0.01, 64)), 64), TruncationError);
}

TEST_CASE("modular parametrisation of 37a1")
{
    const Precision prec = 256;
    CoefficientCache an = an_table(E37, 20000, "37a1");
    PeriodLattice L(E37, prec);

    Complex tau(Real::from_double(-0.3, prec), Real::from_double(0.07, prec));
    Complex f = phi(an, tau, prec);
    Complex shifted = tau;
    shifted.re() += 1;
    CHECK(abs(phi(an, shifted, prec) - f) < tiny(240, prec));

    Complex high(Real(0, prec), Real(20, prec));
    CHECK(abs(phi(an, high, prec)) < Real::from_double(1e-50, prec));

    std::mt19937 rng(37);
    std::uniform_int_distribution<std::int64_t> kd(-3, 3), dd(-40, 40);
    int tested = 0;
    while (tested < 12) {
        std::int64_t c = 37 * kd(rng), d = dd(rng), a = 0, b = 0;
        if (c == 0 || !complete(c, d, a, b))
            continue;
        // start near -d/c so the image is high in the upper half plane
        Complex t(Real(mpq_class(-d, c), prec), Real::from_double(0.3 / std::abs(c), prec));
        t.re() += Real::from_double(0.001, prec);
        Complex g = moebius(a, b, c, d, t);
        if (g.im() < Real::from_double(0.01, prec) || t.im() < Real::from_double(0.002, prec))
            continue;
        if (terms_needed(t.im(), prec) > an.size())
            continue;
        Complex diff = phi(an, g, prec) - phi(an, t, prec);
        CHECK(abs(L.reduce(diff)) < Real::from_double(1e-10, prec));
        CHECK(abs(L.reduce(diff)) < tiny(200, prec));
        ++tested;
    }
}

TEST_CASE("best representative")
{
    const Precision prec = 128;
    Complex fixed(Real(0, prec), Real(1, prec) / sqrt(Real(37, prec)));
    Complex b = best_representative(fixed, 37);
    CHECK(abs(b.im() - fixed.im()) < tiny(120, prec));

    // [37, 12, 1]: tau = (-12 + 2i) / 74 and -1/(37 tau) = (6 + i) / 37
    Complex tau(Real(mpq_class(-12, 74), prec), Real(mpq_class(2, 74), prec));
    Complex w = best_representative(tau, 37);
    CHECK(abs(w.im() - Real(mpq_class(1, 37), prec)) < tiny(120, prec));

    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(-0.5, 0.5), v(0.0005, 0.3);
    for (int i = 0; i < 200; ++i) {
        Complex t(Real::from_double(u(rng), prec), Real::from_double(v(rng), prec));
        for (std::int64_t N : {11, 37, 359, 35083}) {
            Complex r = best_representative(t, N);
            CHECK(r.im() >= t.im());
            CHECK(abs(r.re()) <= Real::from_double(0.5, prec) + tiny(100, prec));
        }
    }
}
