#include "heegner/modparam.hpp"

#include <cmath>
#include <complex>

#include "heegner/error.hpp"

namespace heegner {

namespace {

constexpr Precision guard_bits = 32;

Complex cnum(long re, Precision prec) { return Complex(Real(re, prec), Real(0, prec)); }

Complex i_times(const Complex & z) { return Complex(-z.im(), z.re()); }

// Roots of 4x^3 + b2 x^2 + 2 b4 x + b6: Durand-Kerner in double precision,
// then Newton at the target precision.
std::array<Complex, 3> cubic_roots(const WeierstrassCurve & E, Precision prec)
{
    using cd = std::complex<double>;
    const double c2 = E.b2().get_d() / 4, c1 = E.b4().get_d() / 2, c0 = E.b6().get_d() / 4;
    auto f = [&](cd x) { return ((x + c2) * x + c1) * x + c0; };
    double scale = 1 + std::max({std::abs(c2), std::cbrt(std::abs(c1)) * 2, std::cbrt(std::abs(c0)) * 2});
    std::array<cd, 3> r{cd(0.4, 0.9) * scale, cd(0.4, 0.9) * cd(0.4, 0.9) * scale,
                        cd(0.4, 0.9) * cd(0.4, 0.9) * cd(0.4, 0.9) * scale};
    for (int it = 0; it < 500; ++it) {
        for (int i = 0; i < 3; ++i) {
            cd den = 1;
            for (int j = 0; j < 3; ++j)
                if (j != i)
                    den *= r[i] - r[j];
            r[i] -= f(r[i]) / den;
        }
    }

    const Real b2(E.b2(), prec), b4x2(mpz_class(2 * E.b4()), prec), b6(E.b6(), prec);
    std::array<Complex, 3> out{Complex(prec), Complex(prec), Complex(prec)};
    for (int i = 0; i < 3; ++i) {
        Complex x(Real::from_double(r[i].real(), prec), Real::from_double(r[i].imag(), prec));
        for (int it = 0; it < 200; ++it) {
            // f = ((4x + b2) x + 2 b4) x + b6, f' = (12 x + 2 b2) x + 2 b4
            Complex fx = x * 4;
            fx.re() += b2;
            fx = fx * x;
            fx.re() += b4x2;
            fx = fx * x;
            fx.re() += b6;
            Complex d = x * 12;
            d.re() += b2 * 2;
            d = d * x;
            d.re() += b4x2;
            Complex step = fx / d;
            x -= step;
            if (step.is_zero() || abs(step).exponent() < abs(x).exponent() - prec + 2)
                break;
        }
        out[i] = x;
    }
    return out;
}

// Number of q-series terms for |q| = exp(-2 pi im_tau) to reach 2^-prec
// relative to the leading terms, with |u| in [|q|^1/2, |q|^-1/2].
long series_terms(const Real & im_tau, Precision prec)
{
    double t = im_tau.to_double();
    return static_cast<long>(std::ceil((static_cast<double>(prec) * std::log(2.0)) / (2 * M_PI * t) + 1.5)) + 1;
}

// Root of a decreasing g on [lo, hi] by bisection with Newton steps; g
// returns (value, derivative).
template <class F>
Real bracket_root(F && g, Real lo, Real hi, Precision prec)
{
    for (int it = 0; it < 4 * static_cast<int>(prec) + 200; ++it) {
        Real mid = (lo + hi) / 2;
        auto [val, deriv] = g(mid);
        if (val.sign() > 0)
            lo = mid;
        else
            hi = mid;
        // Newton from mid, accepted when it stays inside the bracket
        if (!deriv.is_zero()) {
            Real t = mid - val / deriv;
            if (t > lo && t < hi) {
                auto [v2, d2] = g(t);
                if (v2.sign() > 0)
                    lo = t;
                else
                    hi = t;
            }
        }
        Real width = hi - lo;
        if (width.is_zero() || width.exponent() < max(abs(lo), abs(hi)).exponent() - prec + 2)
            break;
    }
    return (lo + hi) / 2;
}

} // namespace

PeriodLattice::PeriodLattice(const WeierstrassCurve & E, Precision prec)
    : prec_(prec),
      omega1_(prec),
      omega2_(prec),
      w1_(prec),
      w2_(prec),
      roots_{Complex(prec), Complex(prec), Complex(prec)},
      a1_(E.a1()),
      a3_(E.a3()),
      b2_(E.b2())
{
    const Precision wp = prec + guard_bits;
    std::array<Complex, 3> r = cubic_roots(E, wp);
    const Real pi_ = pi(wp);
    if (E.discriminant() > 0) {
        components_ = 2;
        std::array<Real, 3> e{r[0].re(), r[1].re(), r[2].re()};
        std::sort(e.begin(), e.end(), [](const Real & a, const Real & b) { return a > b; });
        Real s13 = sqrt(e[0] - e[2]), s12 = sqrt(e[0] - e[1]), s23 = sqrt(e[1] - e[2]);
        omega1_ = Complex(pi_ / agm(s13, s12), Real(0, wp));
        omega2_ = Complex(Real(0, wp), pi_ / agm(s13, s23));
        for (int i = 0; i < 3; ++i)
            roots_[i] = Complex(e[i], Real(0, wp));
    } else {
        components_ = 1;
        int real_index = 0;
        for (int i = 1; i < 3; ++i)
            if (abs(r[i].im()) < abs(r[real_index].im()))
                real_index = i;
        Real e1 = r[real_index].re();
        Real b2(E.b2(), wp), b4(E.b4(), wp);
        Real a = e1 * 3 + b2 / 4;
        Real b = sqrt(e1 * e1 * 3 + b2 * e1 / 2 + b4 / 2);
        Real two_sqrt_b = sqrt(b) * 2;
        omega1_ = Complex(pi_ * 2 / agm(two_sqrt_b, sqrt(b * 2 + a)), Real(0, wp));
        omega2_ = Complex(-(omega1_.re() / 2), pi_ / agm(two_sqrt_b, sqrt(b * 2 - a)));
        roots_[0] = Complex(e1, Real(0, wp));
        int k = 1;
        for (int i = 0; i < 3; ++i)
            if (i != real_index)
                roots_[k++] = r[i];
        if (roots_[1].im() < roots_[2].im())
            std::swap(roots_[1], roots_[2]);
    }

    // Lattice reduction of tau = w2 / w1 into the fundamental domain.
    w1_ = omega1_;
    w2_ = omega2_;
    for (int it = 0; it < 1000; ++it) {
        Complex tau = w2_ / w1_;
        mpz_class n = round_to_integer(tau.re());
        if (n != 0) {
            w2_ -= w1_ * Real(n, wp);
            tau = w2_ / w1_;
        }
        if (!(norm(tau) < 1))
            break;
        Complex old = w1_;
        w1_ = w2_;
        w2_ = -old;
    }
}

Real PeriodLattice::real_period() const
{
    return omega1_.re() * components_;
}

Complex PeriodLattice::reduce(const Complex & z) const
{
    Complex tau = w2_ / w1_;
    Complex zz = z / w1_;
    Real t = zz.im() / tau.im();
    Real s = zz.re() - t * tau.re();
    mpz_class m = round_to_integer(s), n = round_to_integer(t);
    return z - w1_ * Real(m, precision()) - w2_ * Real(n, precision());
}

std::pair<Complex, Complex> PeriodLattice::wp(const Complex & z0) const
{
    const Precision wp = prec_ + guard_bits;
    Complex z = reduce(z0.with_precision(wp));
    Complex tau = w2_ / w1_;
    Complex two_pi_i_over_w = i_times(Complex(pi(wp) * 2, Real(0, wp))) / w1_;
    Complex u = exp(two_pi_i_over_w * z);
    Complex q = exp_2pi_i(tau);
    Complex one = cnum(1, wp);

    Complex om = one - u;
    if (abs(om).exponent() < -static_cast<long>(prec_) / 2)
        throw DomainError("Weierstrass p evaluated at a lattice point");

    // S1 = sum_{n in Z} q^n u / (1 - q^n u)^2 - 2 sum_{n >= 1} q^n / (1 - q^n)^2
    // S2 = sum_{n in Z} q^n u (1 + q^n u) / (1 - q^n u)^3
    Complex om2 = om * om;
    Complex S1 = u / om2;
    Complex S2 = u * (one + u) / (om2 * om);
    Complex uinv = one / u;
    Complex qn = q;
    const long terms = series_terms(tau.im(), wp);
    for (long n = 1; n <= terms; ++n) {
        Complex a = qn * u;
        Complex b = qn * uinv;
        Complex oa = one - a, ob = one - b, oq = one - qn;
        Complex oa2 = oa * oa, ob2 = ob * ob;
        S1 += a / oa2 + b / ob2 - qn * 2 / (oq * oq);
        S2 += a * (one + a) / (oa2 * oa) - b * (one + b) / (ob2 * ob);
        qn = qn * q;
    }
    Complex c2 = two_pi_i_over_w * two_pi_i_over_w;
    Complex twelfth(Real(1, wp) / 12, Real(0, wp));
    Complex p = c2 * (twelfth + S1);
    Complex dp = c2 * two_pi_i_over_w * S2;
    return {p.with_precision(prec_), dp.with_precision(prec_)};
}

ComplexPoint complex_to_point(const PeriodLattice & L, const Complex & z)
{
    Complex zr = L.reduce(z);
    if (abs(zr).exponent() < abs(L.reduced_w1()).exponent() - static_cast<long>(L.precision()) / 2)
        return {true, Complex(L.precision()), Complex(L.precision())};
    auto [p, dp] = L.wp(zr);
    const Precision prec = L.precision();
    Complex x = p;
    x.re() -= Real(mpq_class(L.b2(), 12), prec);
    Complex y = dp - x * Real(L.a1(), prec);
    y.re() -= Real(L.a3(), prec);
    y /= 2;
    return {false, x, y};
}

Complex point_to_complex(const PeriodLattice & L, const WeierstrassCurve & E, const RationalPoint & P)
{
    const Precision prec = L.precision();
    if (P.is_infinity())
        return Complex(prec);
    if (!on_curve(E, P))
        throw DomainError("point " + P.to_string() + " is not on the curve");
    const Real X = Real(mpq_class(P.x() + mpq_class(E.b2(), 12)), prec);
    const Real Y = Real(mpq_class(2 * P.y() + E.a1() * P.x() + E.a3()), prec);
    const Real shift = Real(mpq_class(E.b2(), 12), prec);
    const Real e1 = L.roots()[0].re() + shift;
    const Real half = L.omega1().re() / 2;
    const Real zero(0, prec);

    if (X >= e1 || L.real_components() == 1) {
        // p decreases from +inf to e1 on (0, w1/2]
        auto g = [&](const Real & t) {
            if (t.is_zero())
                return std::pair<Real, Real>(Real(1, prec), Real(0, prec));
            auto [p, dp] = L.wp(Complex(t, Real(0, prec)));
            return std::pair<Real, Real>(p.re() - X, dp.re());
        };
        Real t = X == e1 ? half : bracket_root(g, zero, half, prec);
        if (Y.sign() > 0)
            t = -t;
        return Complex(t, Real(0, prec));
    }
    // p increases from e3 to e2 on w2/2 + [0, w1/2]
    const Complex base = L.omega2() / 2;
    auto g = [&](const Real & t) {
        auto [p, dp] = L.wp(base + Complex(t, Real(0, prec)));
        return std::pair<Real, Real>(X - p.re(), -dp.re());
    };
    Real t = bracket_root(g, zero, half, prec);
    if (Y.sign() < 0)
        t = -t;
    return base + Complex(t, Real(0, prec));
}

Real archimedean_local_height(const PeriodLattice & L, const Complex & z)
{
    const Precision wp = L.precision() + guard_bits;
    Complex zr = L.reduce(z.with_precision(wp)) / L.reduced_w1();
    Complex tau = L.reduced_w2() / L.reduced_w1();
    Real t = zr.im() / tau.im();
    Complex u = exp_2pi_i(zr);
    Complex q = exp_2pi_i(tau);
    Complex one = cnum(1, wp);
    Real log_q = -(pi(wp) * 2 * tau.im());
    Real B2 = t * t - t + Real(1, wp) / 6;
    Real lambda = -(B2 * log_q) / 2 - log(abs(one - u));
    Complex uinv = one / u;
    Complex qn = q;
    const long terms = series_terms(tau.im(), wp);
    for (long n = 1; n <= terms; ++n) {
        lambda -= log(abs((one - qn * u) * (one - qn * uinv)));
        qn = qn * q;
    }
    return lambda.with_precision(L.precision());
}

std::size_t terms_needed(const Real & im_tau, Precision prec)
{
    const double y = im_tau.to_double();
    if (!(y > 0))
        throw DomainError("tau must lie in the upper half plane");
    const double log_q = -2 * M_PI * y; // log |q|
    // 2 |q|^(M+1) / (1 - |q|) < 2^-prec
    const double rhs = -static_cast<double>(prec) * std::log(2.0) - std::log(2.0) + std::log1p(-std::exp(log_q));
    const double m1 = rhs / log_q;
    return static_cast<std::size_t>(std::max(0.0, std::ceil(m1 - 1 + 1e-9)));
}

Complex phi(const CoefficientCache & an, const Complex & tau, Precision prec)
{
    const std::size_t M = terms_needed(tau.im(), prec);
    if (an.size() < M)
        throw TruncationError("phi needs " + std::to_string(M) + " coefficients, cache has " +
                              std::to_string(an.size()));
    const Precision wp = prec + guard_bits + static_cast<Precision>(std::log2(static_cast<double>(M) + 2));
    Complex q = exp_2pi_i(tau.with_precision(wp));

    // Horner: acc = (...(c_M q + c_{M-1}) q + ...) q + c_1, result = acc q
    mpfr_t ar, ai, nr, ni, c;
    mpfr_inits2(wp, ar, ai, nr, ni, c, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_zero(ar, 1);
    mpfr_set_zero(ai, 1);
    mpfr_srcptr qr = q.re().get(), qi = q.im().get();
    for (std::size_t n = M; n >= 1; --n) {
        mpfr_fmms(nr, ar, qr, ai, qi, MPFR_RNDN);
        mpfr_fmma(ni, ar, qi, ai, qr, MPFR_RNDN);
        std::int64_t a = an(n);
        if (a != 0) {
            mpfr_set_si(c, static_cast<long>(a), MPFR_RNDN);
            mpfr_div_ui(c, c, static_cast<unsigned long>(n), MPFR_RNDN);
            mpfr_add(nr, nr, c, MPFR_RNDN);
        }
        mpfr_swap(ar, nr);
        mpfr_swap(ai, ni);
    }
    Complex acc(wp);
    mpfr_set(acc.re().get(), ar, MPFR_RNDN);
    mpfr_set(acc.im().get(), ai, MPFR_RNDN);
    mpfr_clears(ar, ai, nr, ni, c, static_cast<mpfr_ptr>(nullptr));
    return (acc * q).with_precision(prec);
}

Complex best_representative(const Complex & tau, std::int64_t N)
{
    const Precision prec = tau.precision();
    auto translate = [&](Complex z) {
        mpz_class n = round_to_integer(z.re());
        z.re() -= Real(n, prec);
        return z;
    };
    Complex a = translate(tau);
    Complex b = translate(cnum(-1, prec) / (tau * Real(static_cast<long>(N), prec)));
    return b.im() > a.im() ? b : a;
}

} // namespace heegner
