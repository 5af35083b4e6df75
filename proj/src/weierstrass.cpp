#include "heegner/weierstrass.hpp"

#include <ostream>

#include "heegner/error.hpp"

namespace heegner {

WeierstrassCurve::WeierstrassCurve(mpz_class a1, mpz_class a2, mpz_class a3, mpz_class a4, mpz_class a6)
    : a_{std::move(a1), std::move(a2), std::move(a3), std::move(a4), std::move(a6)}
{
    const auto & [e1, e2, e3, e4, e6] = a_;
    b2_ = e1 * e1 + 4 * e2;
    b4_ = 2 * e4 + e1 * e3;
    b6_ = e3 * e3 + 4 * e6;
    b8_ = e1 * e1 * e6 + 4 * e2 * e6 - e1 * e3 * e4 + e2 * e3 * e3 - e4 * e4;
    c4_ = b2_ * b2_ - 24 * b4_;
    c6_ = -b2_ * b2_ * b2_ + 36 * b2_ * b4_ - 216 * b6_;
    disc_ = -b2_ * b2_ * b8_ - 8 * b4_ * b4_ * b4_ - 27 * b6_ * b6_ + 9 * b2_ * b4_ * b6_;
    if (disc_ == 0)
        throw DomainError("singular Weierstrass model: discriminant is zero");
}

mpz_class WeierstrassCurve::discriminant_of(const std::array<mpz_class, 5> & a)
{
    const auto & [e1, e2, e3, e4, e6] = a;
    mpz_class b2 = e1 * e1 + 4 * e2;
    mpz_class b4 = 2 * e4 + e1 * e3;
    mpz_class b6 = e3 * e3 + 4 * e6;
    mpz_class b8 = e1 * e1 * e6 + 4 * e2 * e6 - e1 * e3 * e4 + e2 * e3 * e3 - e4 * e4;
    return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
}

std::ostream & operator<<(std::ostream & os, const WeierstrassCurve & E)
{
    return os << "[" << E.a1() << "," << E.a2() << "," << E.a3() << "," << E.a4() << "," << E.a6() << "]";
}

RationalPoint::RationalPoint(mpq_class x, mpq_class y)
    : infinity_(false), x_(std::move(x)), y_(std::move(y))
{
    x_.canonicalize();
    y_.canonicalize();
}

RationalPoint RationalPoint::from_projective(const mpz_class & x, const mpz_class & y, const mpz_class & z)
{
    if (z == 0) {
        if (x != 0 || y == 0)
            throw DomainError("projective point with z = 0 must be (0:1:0)");
        return infinity();
    }
    return RationalPoint(mpq_class(x, z), mpq_class(y, z));
}

ProjectiveTriple RationalPoint::projective() const
{
    if (infinity_)
        return {0, 1, 0};
    mpz_class z;
    mpz_lcm(z.get_mpz_t(), x_.get_den_mpz_t(), y_.get_den_mpz_t());
    mpz_class X = x_.get_num() * (z / x_.get_den());
    mpz_class Y = y_.get_num() * (z / y_.get_den());
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), X.get_mpz_t(), Y.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
    return {X / g, Y / g, z / g};
}

std::string RationalPoint::to_string() const
{
    ProjectiveTriple t = projective();
    return "(" + t.x.get_str() + ":" + t.y.get_str() + ":" + t.z.get_str() + ")";
}

bool operator==(const RationalPoint & p, const RationalPoint & q)
{
    if (p.infinity_ || q.infinity_)
        return p.infinity_ == q.infinity_;
    return p.x_ == q.x_ && p.y_ == q.y_;
}

std::ostream & operator<<(std::ostream & os, const RationalPoint & P)
{
    return os << P.to_string();
}

bool on_curve(const WeierstrassCurve & E, const RationalPoint & P)
{
    if (P.is_infinity())
        return true;
    const mpq_class & x = P.x();
    const mpq_class & y = P.y();
    mpq_class lhs = y * y + mpq_class(E.a1()) * x * y + mpq_class(E.a3()) * y;
    mpq_class rhs = x * x * x + mpq_class(E.a2()) * x * x + mpq_class(E.a4()) * x + mpq_class(E.a6());
    return lhs == rhs;
}

} // namespace heegner
