#pragma once

// Arbitrary-precision real and complex numbers on top of MPFR.
//
// Every Real carries its own precision in bits. Binary operations produce a
// result at the larger of the two operand precisions; mixing with machine
// integers keeps the precision of the Real operand. All rounding is to
// nearest.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

#include <gmpxx.h>
#include <mpfr.h>

namespace heegner {

using Precision = mpfr_prec_t;

class Real
{
public:
    explicit Real(Precision prec = 64);
    Real(long value, Precision prec);
    Real(const mpz_class & value, Precision prec);
    Real(const mpq_class & value, Precision prec);
    static Real from_double(double value, Precision prec);
    static Real from_string(const std::string & text, Precision prec);

    Real(const Real & other);
    Real(Real && other) noexcept;
    Real & operator=(const Real & other);
    Real & operator=(Real && other) noexcept;
    ~Real();

    Precision precision() const { return mpfr_get_prec(value_); }
    // Changes the precision, rounding the current value.
    void set_precision(Precision prec);
    Real with_precision(Precision prec) const;

    mpfr_ptr get() { return value_; }
    mpfr_srcptr get() const { return value_; }

    double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
    long to_long() const { return mpfr_get_si(value_, MPFR_RNDN); }
    std::string str(int digits = 20) const;

    bool is_zero() const { return mpfr_zero_p(value_) != 0; }
    bool is_finite() const { return mpfr_number_p(value_) != 0; }
    int sign() const { return mpfr_sgn(value_); }
    // Binary exponent e with 2^(e-1) <= |x| < 2^e; a very negative number for 0.
    long exponent() const;

    Real & operator+=(const Real & rhs);
    Real & operator-=(const Real & rhs);
    Real & operator*=(const Real & rhs);
    Real & operator/=(const Real & rhs);
    Real & operator+=(long rhs);
    Real & operator-=(long rhs);
    Real & operator*=(long rhs);
    Real & operator/=(long rhs);

    Real operator-() const;

    friend Real operator+(Real lhs, const Real & rhs) { return lhs += rhs; }
    friend Real operator-(Real lhs, const Real & rhs) { return lhs -= rhs; }
    friend Real operator*(Real lhs, const Real & rhs) { return lhs *= rhs; }
    friend Real operator/(Real lhs, const Real & rhs) { return lhs /= rhs; }
    friend Real operator+(Real lhs, long rhs) { return lhs += rhs; }
    friend Real operator-(Real lhs, long rhs) { return lhs -= rhs; }
    friend Real operator*(Real lhs, long rhs) { return lhs *= rhs; }
    friend Real operator/(Real lhs, long rhs) { return lhs /= rhs; }
    friend Real operator*(long lhs, Real rhs) { return rhs *= lhs; }

    friend bool operator==(const Real & a, const Real & b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
    friend std::partial_ordering operator<=>(const Real & a, const Real & b);
    friend bool operator==(const Real & a, long b) { return mpfr_cmp_si(a.value_, b) == 0; }
    friend std::partial_ordering operator<=>(const Real & a, long b);

private:
    mpfr_t value_;
};

std::ostream & operator<<(std::ostream & os, const Real & x);

Real pi(Precision prec);
Real sqrt(const Real & x);
Real abs(const Real & x);
Real log(const Real & x);
Real exp(const Real & x);
Real sin(const Real & x);
Real cos(const Real & x);
Real atan2(const Real & y, const Real & x);
Real floor(const Real & x);
Real square(const Real & x);
Real max(const Real & a, const Real & b);
Real min(const Real & a, const Real & b);
// Arithmetic-geometric mean of two positive reals.
Real agm(const Real & a, const Real & b);
// log|n| for a non-zero integer, at the given precision.
Real log_abs(const mpz_class & n, Precision prec);
mpz_class round_to_integer(const Real & x);
mpz_class floor_to_integer(const Real & x);
// 2^e at the given precision.
Real ldexp_one(long e, Precision prec);

class Complex
{
public:
    explicit Complex(Precision prec = 64) : re_(prec), im_(prec) {}
    Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}
    explicit Complex(Real re) : re_(std::move(re)), im_(re_.precision()) {}

    const Real & re() const { return re_; }
    const Real & im() const { return im_; }
    Real & re() { return re_; }
    Real & im() { return im_; }

    Precision precision() const { return std::max(re_.precision(), im_.precision()); }
    void set_precision(Precision prec);
    Complex with_precision(Precision prec) const;

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }

    Complex & operator+=(const Complex & rhs);
    Complex & operator-=(const Complex & rhs);
    Complex & operator*=(const Complex & rhs);
    Complex & operator/=(const Complex & rhs);
    Complex & operator*=(const Real & rhs);
    Complex & operator/=(const Real & rhs);
    Complex & operator*=(long rhs);
    Complex & operator/=(long rhs);
    Complex operator-() const { return Complex(-re_, -im_); }

    friend Complex operator+(Complex a, const Complex & b) { return a += b; }
    friend Complex operator-(Complex a, const Complex & b) { return a -= b; }
    friend Complex operator*(Complex a, const Complex & b) { return a *= b; }
    friend Complex operator/(Complex a, const Complex & b) { return a /= b; }
    friend Complex operator*(Complex a, const Real & b) { return a *= b; }
    friend Complex operator*(const Real & b, Complex a) { return a *= b; }
    friend Complex operator/(Complex a, const Real & b) { return a /= b; }
    friend Complex operator*(Complex a, long b) { return a *= b; }
    friend Complex operator*(long b, Complex a) { return a *= b; }
    friend Complex operator/(Complex a, long b) { return a /= b; }

private:
    Real re_;
    Real im_;
};

std::ostream & operator<<(std::ostream & os, const Complex & z);

Complex conj(const Complex & z);
Real abs(const Complex & z);
Real norm(const Complex & z); // |z|^2
Complex exp(const Complex & z);
Complex sqrt(const Complex & z); // principal branch
Complex square(const Complex & z);
// exp(2 pi i z)
Complex exp_2pi_i(const Complex & z);

// In-place fused helpers used on hot paths; they avoid temporaries.
// out = a * b, with scratch space t1, t2 of the working precision.
void mul_into(Complex & out, const Complex & a, const Complex & b, Real & t1, Real & t2);

} // namespace heegner
