#include "heegner/bigfloat.hpp"

#include <ostream>
#include <stdexcept>
#include <utility>

namespace heegner {

namespace {

constexpr mpfr_rnd_t rnd = MPFR_RNDN;

Precision wider(const Real & a, const Real & b)
{
    return std::max(a.precision(), b.precision());
}

} // namespace

Real::Real(Precision prec)
{
    mpfr_init2(value_, prec);
    mpfr_set_zero(value_, 1);
}

Real::Real(long value, Precision prec)
{
    mpfr_init2(value_, prec);
    mpfr_set_si(value_, value, rnd);
}

Real::Real(const mpz_class & value, Precision prec)
{
    mpfr_init2(value_, prec);
    mpfr_set_z(value_, value.get_mpz_t(), rnd);
}

Real::Real(const mpq_class & value, Precision prec)
{
    mpfr_init2(value_, prec);
    mpfr_set_q(value_, value.get_mpq_t(), rnd);
}

Real Real::from_double(double value, Precision prec)
{
    Real r(prec);
    mpfr_set_d(r.value_, value, rnd);
    return r;
}

Real Real::from_string(const std::string & text, Precision prec)
{
    Real r(prec);
    if (mpfr_set_str(r.value_, text.c_str(), 10, rnd) != 0)
        throw std::invalid_argument("not a decimal number: " + text);
    return r;
}

Real::Real(const Real & other)
{
    mpfr_init2(value_, other.precision());
    mpfr_set(value_, other.value_, rnd);
}

Real::Real(Real && other) noexcept
{
    mpfr_init2(value_, other.precision());
    mpfr_swap(value_, other.value_);
}

Real & Real::operator=(const Real & other)
{
    if (this != &other) {
        if (precision() != other.precision())
            mpfr_set_prec(value_, other.precision());
        mpfr_set(value_, other.value_, rnd);
    }
    return *this;
}

Real & Real::operator=(Real && other) noexcept
{
    if (this != &other)
        mpfr_swap(value_, other.value_);
    return *this;
}

Real::~Real()
{
    mpfr_clear(value_);
}

void Real::set_precision(Precision prec)
{
    mpfr_prec_round(value_, prec, rnd);
}

Real Real::with_precision(Precision prec) const
{
    Real r(prec);
    mpfr_set(r.value_, value_, rnd);
    return r;
}

std::string Real::str(int digits) const
{
    if (!is_finite())
        return mpfr_nan_p(value_) ? "nan" : (sign() > 0 ? "inf" : "-inf");
    char * buf = nullptr;
    std::string fmt = "%." + std::to_string(digits) + "Rg";
    mpfr_asprintf(&buf, fmt.c_str(), value_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
}

long Real::exponent() const
{
    if (is_zero())
        return -(1L << 40);
    return mpfr_get_exp(value_);
}

#define HEEGNER_COMPOUND(op, fn)                                      \
    Real & Real::operator op(const Real & rhs)                        \
    {                                                                 \
        if (precision() < rhs.precision())                            \
            mpfr_prec_round(value_, rhs.precision(), rnd);            \
        fn(value_, value_, rhs.value_, rnd);                          \
        return *this;                                                 \
    }
HEEGNER_COMPOUND(+=, mpfr_add)
HEEGNER_COMPOUND(-=, mpfr_sub)
HEEGNER_COMPOUND(*=, mpfr_mul)
HEEGNER_COMPOUND(/=, mpfr_div)
#undef HEEGNER_COMPOUND

Real & Real::operator+=(long rhs) { mpfr_add_si(value_, value_, rhs, rnd); return *this; }
Real & Real::operator-=(long rhs) { mpfr_sub_si(value_, value_, rhs, rnd); return *this; }
Real & Real::operator*=(long rhs) { mpfr_mul_si(value_, value_, rhs, rnd); return *this; }
Real & Real::operator/=(long rhs) { mpfr_div_si(value_, value_, rhs, rnd); return *this; }

Real Real::operator-() const
{
    Real r(precision());
    mpfr_neg(r.value_, value_, rnd);
    return r;
}

std::partial_ordering operator<=>(const Real & a, const Real & b)
{
    if (mpfr_unordered_p(a.value_, b.value_))
        return std::partial_ordering::unordered;
    int c = mpfr_cmp(a.value_, b.value_);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

std::partial_ordering operator<=>(const Real & a, long b)
{
    if (mpfr_nan_p(a.value_))
        return std::partial_ordering::unordered;
    int c = mpfr_cmp_si(a.value_, b);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

std::ostream & operator<<(std::ostream & os, const Real & x)
{
    return os << x.str(static_cast<int>(os.precision()));
}

Real pi(Precision prec)
{
    Real r(prec);
    mpfr_const_pi(r.get(), rnd);
    return r;
}

#define HEEGNER_UNARY(name, fn)             \
    Real name(const Real & x)               \
    {                                       \
        Real r(x.precision());              \
        fn(r.get(), x.get(), rnd);          \
        return r;                           \
    }
HEEGNER_UNARY(sqrt, mpfr_sqrt)
HEEGNER_UNARY(abs, mpfr_abs)
HEEGNER_UNARY(log, mpfr_log)
HEEGNER_UNARY(exp, mpfr_exp)
HEEGNER_UNARY(sin, mpfr_sin)
HEEGNER_UNARY(cos, mpfr_cos)
HEEGNER_UNARY(square, mpfr_sqr)
#undef HEEGNER_UNARY

Real floor(const Real & x)
{
    Real r(x.precision());
    mpfr_floor(r.get(), x.get());
    return r;
}

Real atan2(const Real & y, const Real & x)
{
    Real r(wider(y, x));
    mpfr_atan2(r.get(), y.get(), x.get(), rnd);
    return r;
}

Real max(const Real & a, const Real & b)
{
    return a >= b ? a : b;
}

Real min(const Real & a, const Real & b)
{
    return a <= b ? a : b;
}

Real agm(const Real & a, const Real & b)
{
    Real r(wider(a, b));
    mpfr_agm(r.get(), a.get(), b.get(), rnd);
    return r;
}

Real log_abs(const mpz_class & n, Precision prec)
{
    if (n == 0)
        throw std::domain_error("log of zero");
    Real r(mpz_class(abs(n)), prec);
    mpfr_log(r.get(), r.get(), rnd);
    return r;
}

mpz_class round_to_integer(const Real & x)
{
    Real r(x.precision());
    mpfr_round(r.get(), x.get());
    mpz_class out;
    mpfr_get_z(out.get_mpz_t(), r.get(), rnd);
    return out;
}

mpz_class floor_to_integer(const Real & x)
{
    mpz_class out;
    mpfr_get_z(out.get_mpz_t(), x.get(), MPFR_RNDD);
    return out;
}

Real ldexp_one(long e, Precision prec)
{
    Real r(1L, prec);
    mpfr_mul_2si(r.get(), r.get(), e, rnd);
    return r;
}

void Complex::set_precision(Precision prec)
{
    re_.set_precision(prec);
    im_.set_precision(prec);
}

Complex Complex::with_precision(Precision prec) const
{
    return Complex(re_.with_precision(prec), im_.with_precision(prec));
}

Complex & Complex::operator+=(const Complex & rhs)
{
    re_ += rhs.re_;
    im_ += rhs.im_;
    return *this;
}

Complex & Complex::operator-=(const Complex & rhs)
{
    re_ -= rhs.re_;
    im_ -= rhs.im_;
    return *this;
}

Complex & Complex::operator*=(const Complex & rhs)
{
    Precision prec = std::max(precision(), rhs.precision());
    Real t1(prec), t2(prec);
    Complex out(prec);
    mul_into(out, *this, rhs, t1, t2);
    *this = std::move(out);
    return *this;
}

Complex & Complex::operator/=(const Complex & rhs)
{
    Real den = norm(rhs);
    Complex num = *this * conj(rhs);
    re_ = num.re_ / den;
    im_ = num.im_ / den;
    return *this;
}

Complex & Complex::operator*=(const Real & rhs)
{
    re_ *= rhs;
    im_ *= rhs;
    return *this;
}

Complex & Complex::operator/=(const Real & rhs)
{
    re_ /= rhs;
    im_ /= rhs;
    return *this;
}

Complex & Complex::operator*=(long rhs)
{
    re_ *= rhs;
    im_ *= rhs;
    return *this;
}

Complex & Complex::operator/=(long rhs)
{
    re_ /= rhs;
    im_ /= rhs;
    return *this;
}

std::ostream & operator<<(std::ostream & os, const Complex & z)
{
    os << z.re();
    if (z.im().sign() >= 0)
        os << " + ";
    else
        os << " - ";
    return os << abs(z.im()) << "i";
}

Complex conj(const Complex & z)
{
    return Complex(z.re(), -z.im());
}

Real abs(const Complex & z)
{
    Real r(z.precision());
    mpfr_hypot(r.get(), z.re().get(), z.im().get(), rnd);
    return r;
}

Real norm(const Complex & z)
{
    return square(z.re()) + square(z.im());
}

Complex exp(const Complex & z)
{
    Real m = exp(z.re());
    Real s(z.precision()), c(z.precision());
    mpfr_sin_cos(s.get(), c.get(), z.im().get(), rnd);
    return Complex(m * c, m * s);
}

Complex sqrt(const Complex & z)
{
    Precision prec = z.precision();
    if (z.is_zero())
        return Complex(prec);
    // Stable half-angle formulas.
    Real r = abs(z);
    Real t = sqrt((r + abs(z.re())) / 2);
    if (z.re().sign() >= 0)
        return Complex(t, z.im() / (t * 2));
    Real im = z.im().sign() >= 0 ? t : -t;
    return Complex(abs(z.im()) / (t * 2), im);
}

Complex square(const Complex & z)
{
    return z * z;
}

Complex exp_2pi_i(const Complex & z)
{
    Precision prec = z.precision();
    Real two_pi = pi(prec) * 2;
    return exp(Complex(-(z.im() * two_pi), z.re() * two_pi));
}

void mul_into(Complex & out, const Complex & a, const Complex & b, Real & t1, Real & t2)
{
    // (ar + i ai)(br + i bi); out may alias a or b.
    mpfr_mul(t1.get(), a.re().get(), b.re().get(), rnd);
    mpfr_mul(t2.get(), a.im().get(), b.im().get(), rnd);
    mpfr_sub(t1.get(), t1.get(), t2.get(), rnd);
    mpfr_mul(t2.get(), a.re().get(), b.im().get(), rnd);
    mpfr_fma(t2.get(), a.im().get(), b.re().get(), t2.get(), rnd);
    mpfr_swap(out.re().get(), t1.get());
    mpfr_swap(out.im().get(), t2.get());
}

} // namespace heegner
