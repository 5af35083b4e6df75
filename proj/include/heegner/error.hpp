#pragma once

#include <stdexcept>
#include <string>

namespace heegner {

// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// An argument is outside the domain of the operation (bad discriminant,
// point not on the curve, bad prime where a good one is required, ...).
class DomainError : public Error
{
public:
    using Error::Error;
};

class ParseError : public Error
{
public:
    ParseError(const std::string & source, int line, const std::string & what)
        : Error(source + ":" + std::to_string(line) + ": " + what), line_(line)
    {
    }
    int line() const { return line_; }

private:
    int line_;
};

// Well-formed input that violates a data invariant.
class ValidationError : public Error
{
public:
    using Error::Error;
};

class ChecksumError : public Error
{
public:
    using Error::Error;
};

// A numerical routine could not reach the requested accuracy.
class PrecisionError : public Error
{
public:
    using Error::Error;
};

// A q-expansion was asked to evaluate with too few coefficients.
class TruncationError : public PrecisionError
{
public:
    using PrecisionError::PrecisionError;
};

// No rational point could be matched to a complex value.
class RecognitionError : public Error
{
public:
    using Error::Error;
};

// Computed quantities contradict each other (for instance an index that
// cannot be confirmed exactly).
class InconsistencyError : public Error
{
public:
    using Error::Error;
};

} // namespace heegner
