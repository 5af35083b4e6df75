#include "heegner/ec_arith.hpp"

#include <algorithm>

#include "heegner/error.hpp"

namespace heegner {

namespace {

void require_on_curve(const WeierstrassCurve & E, const RationalPoint & P)
{
    if (!on_curve(E, P))
        throw DomainError("point " + P.to_string() + " is not on the curve");
}

} // namespace

RationalPoint negate(const WeierstrassCurve & E, const RationalPoint & P)
{
    if (P.is_infinity())
        return P;
    return RationalPoint(P.x(), -P.y() - E.a1() * P.x() - E.a3());
}

RationalPoint add(const WeierstrassCurve & E, const RationalPoint & P, const RationalPoint & Q)
{
    require_on_curve(E, P);
    require_on_curve(E, Q);
    if (P.is_infinity())
        return Q;
    if (Q.is_infinity())
        return P;

    mpq_class lambda, nu;
    if (P.x() == Q.x()) {
        mpq_class ysum = P.y() + Q.y() + E.a1() * Q.x() + E.a3();
        if (ysum == 0)
            return RationalPoint::infinity();
        const mpq_class & x = P.x();
        const mpq_class & y = P.y();
        lambda = (3 * x * x + 2 * E.a2() * x + E.a4() - E.a1() * y) / (2 * y + E.a1() * x + E.a3());
    } else {
        lambda = (Q.y() - P.y()) / (Q.x() - P.x());
    }
    nu = P.y() - lambda * P.x();
    mpq_class x3 = lambda * lambda + E.a1() * lambda - E.a2() - P.x() - Q.x();
    mpq_class y3 = -(lambda + E.a1()) * x3 - nu - E.a3();
    return RationalPoint(x3, y3);
}

RationalPoint subtract(const WeierstrassCurve & E, const RationalPoint & P, const RationalPoint & Q)
{
    return add(E, P, negate(E, Q));
}

RationalPoint scalar_mul(const WeierstrassCurve & E, const mpz_class & k, const RationalPoint & P)
{
    require_on_curve(E, P);
    if (k == 0 || P.is_infinity())
        return RationalPoint::infinity();
    RationalPoint base = k < 0 ? negate(E, P) : P;
    mpz_class n = abs(k);
    RationalPoint acc;
    for (long bit = static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2)) - 1; bit >= 0; --bit) {
        acc = add(E, acc, acc);
        if (mpz_tstbit(n.get_mpz_t(), static_cast<mp_bitcnt_t>(bit)))
            acc = add(E, acc, base);
    }
    return acc;
}

int point_order(const WeierstrassCurve & E, const RationalPoint & P)
{
    require_on_curve(E, P);
    RationalPoint acc = P;
    for (int k = 1; k <= 12; ++k) {
        if (acc.is_infinity())
            return k;
        // Torsion points of an integral model have 4x integral.
        if (mpz_divisible_p(mpz_class(4).get_mpz_t(), acc.x().get_den_mpz_t()) == 0)
            return 0;
        acc = add(E, acc, P);
    }
    return 0;
}

std::vector<RationalPoint> torsion_points(const WeierstrassCurve & E)
{
    // Nagell-Lutz on the monic integral model Y^2 = X^3 + b2 X^2 + 8 b4 X + 16 b6,
    // X = 4x, Y = 4(2y + a1 x + a3): torsion points are integral with Y = 0
    // or Y^2 dividing the discriminant of the cubic.
    mpz_class A = E.b2(), B = 8 * E.b4(), C = 16 * E.b6();
    // discriminant of X^3 + A X^2 + B X + C
    mpz_class disc = A * A * B * B - 4 * B * B * B - 4 * A * A * A * C - 27 * C * C + 18 * A * B * C;
    if (disc == 0)
        throw DomainError("singular model");
    disc = abs(disc);

    std::vector<RationalPoint> out{RationalPoint::infinity()};
    auto try_x = [&](const mpz_class & X, const mpz_class & Y) {
        // x = X / 4, y = (Y / 4 - a1 x - a3) / 2
        mpq_class x(X, 4);
        mpq_class y = (mpq_class(Y, 4) - E.a1() * x - E.a3()) / 2;
        RationalPoint P(x, y);
        if (on_curve(E, P) && point_order(E, P) != 0 && std::find(out.begin(), out.end(), P) == out.end())
            out.push_back(P);
    };
    auto roots_for = [&](const mpz_class & Y) {
        // integer roots of X^3 + A X^2 + B X + C - Y^2
        mpz_class c0 = C - Y * Y;
        std::vector<mpz_class> roots;
        if (c0 == 0) {
            roots.push_back(0);
            // X^2 + A X + B = 0
            mpz_class d = A * A - 4 * B;
            if (d >= 0) {
                mpz_class s = sqrt(d);
                if (s * s == d) {
                    for (int sg : {1, -1}) {
                        mpz_class num = -A + sg * s;
                        if (num % 2 == 0)
                            roots.push_back(num / 2);
                    }
                }
            }
            return roots;
        }
        // integer roots divide c0 and lie within the Cauchy bound
        mpz_class bound = 1 + std::max({mpz_class(abs(A)), mpz_class(abs(B)), mpz_class(abs(c0))});
        if (bound > 2000000) {
            // enumerate divisors of c0 by trial division
            mpz_class n = abs(c0);
            std::vector<mpz_class> divs{1};
            for (mpz_class p = 2; p * p <= n; ++p) {
                if (n % p != 0)
                    continue;
                int e = 0;
                while (n % p == 0) {
                    n /= p;
                    ++e;
                }
                std::size_t sz = divs.size();
                mpz_class pk = 1;
                for (int i = 0; i < e; ++i) {
                    pk *= p;
                    for (std::size_t j = 0; j < sz; ++j)
                        divs.push_back(divs[j] * pk);
                }
            }
            if (n > 1) {
                std::size_t sz = divs.size();
                for (std::size_t j = 0; j < sz; ++j)
                    divs.push_back(divs[j] * n);
            }
            for (const auto & d : divs)
                for (int sg : {1, -1}) {
                    mpz_class X = sg * d;
                    if (((X + A) * X + B) * X + c0 == 0)
                        roots.push_back(X);
                }
            return roots;
        }
        long b = bound.get_si();
        for (long X = -b; X <= b; ++X) {
            mpz_class x(X);
            if (((x + A) * x + B) * x + c0 == 0)
                roots.push_back(x);
        }
        return roots;
    };

    // Y = 0 and every Y with Y^2 | disc
    std::vector<mpz_class> ys{0};
    {
        mpz_class n = disc;
        std::vector<std::pair<mpz_class, int>> fac;
        for (mpz_class p = 2; p * p <= n && p < 1000000; ++p) {
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            if (e)
                fac.emplace_back(p, e);
        }
        if (n > 1) {
            mpz_class s = sqrt(n);
            if (s * s == n)
                fac.emplace_back(s, 2);
            else
                fac.emplace_back(n, 1);
        }
        std::vector<mpz_class> ds{1};
        for (auto & [p, e] : fac) {
            std::size_t sz = ds.size();
            mpz_class pk = 1;
            for (int i = 0; i < e / 2; ++i) {
                pk *= p;
                for (std::size_t j = 0; j < sz; ++j)
                    ds.push_back(ds[j] * pk);
            }
        }
        for (auto & d : ds) {
            ys.push_back(d);
            ys.push_back(-d);
        }
    }
    for (const auto & Y : ys)
        for (const auto & X : roots_for(Y))
            try_x(X, Y);
    return out;
}

int torsion_order(const WeierstrassCurve & E)
{
    return static_cast<int>(torsion_points(E).size());
}

} // namespace heegner
