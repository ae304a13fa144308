#pragma once

#include <stdexcept>
#include <string>

namespace mkg {

/// Invalid model or algorithm parameter (k outside (0,1), q < 1, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input too short (or too long) for the requested statistic.
class SizeError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Lookup past the end of a tabulated quantity.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Exact tie in a series passed to a tie-free statistic.
class TieError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Zero variance, zero range or a vanishing correlation denominator.
class DegeneracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Floating-point result outside its admissible range beyond tolerance.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mkg
