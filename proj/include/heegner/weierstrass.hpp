#pragma once

// Integral Weierstrass models and exact rational points on them.

#include <array>
#include <iosfwd>
#include <string>

#include <gmpxx.h>

namespace heegner {

// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with integer coefficients and
// non-zero discriminant. The b- and c-invariants are cached on construction.
class WeierstrassCurve
{
public:
    // Throws DomainError when the discriminant vanishes.
    WeierstrassCurve(mpz_class a1, mpz_class a2, mpz_class a3, mpz_class a4, mpz_class a6);
    explicit WeierstrassCurve(const std::array<mpz_class, 5> & a)
        : WeierstrassCurve(a[0], a[1], a[2], a[3], a[4])
    {
    }

    const mpz_class & a1() const { return a_[0]; }
    const mpz_class & a2() const { return a_[1]; }
    const mpz_class & a3() const { return a_[2]; }
    const mpz_class & a4() const { return a_[3]; }
    const mpz_class & a6() const { return a_[4]; }
    const std::array<mpz_class, 5> & coefficients() const { return a_; }

    const mpz_class & b2() const { return b2_; }
    const mpz_class & b4() const { return b4_; }
    const mpz_class & b6() const { return b6_; }
    const mpz_class & b8() const { return b8_; }
    const mpz_class & c4() const { return c4_; }
    const mpz_class & c6() const { return c6_; }
    const mpz_class & discriminant() const { return disc_; }

    // Discriminant from the a-invariants alone, without constructing a curve.
    static mpz_class discriminant_of(const std::array<mpz_class, 5> & a);

    friend bool operator==(const WeierstrassCurve & l, const WeierstrassCurve & r) { return l.a_ == r.a_; }

private:
    std::array<mpz_class, 5> a_;
    mpz_class b2_, b4_, b6_, b8_, c4_, c6_, disc_;
};

std::ostream & operator<<(std::ostream & os, const WeierstrassCurve & E);

// Coprime integer triple (X:Y:Z); the point at infinity is (0:1:0).
struct ProjectiveTriple
{
    mpz_class x, y, z;
};

// A point of E(Q), either the point at infinity O or an affine point with
// exact rational coordinates. Membership on a curve is not implied by the
// type; see WeierstrassCurve-taking functions.
class RationalPoint
{
public:
    RationalPoint() = default; // O
    RationalPoint(mpq_class x, mpq_class y);

    static RationalPoint infinity() { return {}; }
    // Throws DomainError when (x, y, z) is (0, 0, 0) or z = 0 with x != 0.
    static RationalPoint from_projective(const mpz_class & x, const mpz_class & y, const mpz_class & z);

    bool is_infinity() const { return infinity_; }
    const mpq_class & x() const { return x_; }
    const mpq_class & y() const { return y_; }

    ProjectiveTriple projective() const;
    std::string to_string() const; // "(x:y:z)" with coprime integers

    friend bool operator==(const RationalPoint & p, const RationalPoint & q);

private:
    bool infinity_ = true;
    mpq_class x_{0}, y_{1};
};

std::ostream & operator<<(std::ostream & os, const RationalPoint & P);

bool on_curve(const WeierstrassCurve & E, const RationalPoint & P);

} // namespace heegner
