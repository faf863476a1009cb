#ifndef TPX_ERRORS_HPP
#define TPX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tpx {

// Exit-code mapping used by the CLI: argument/guard errors -> 2,
// convergence failures -> 3, threshold violations -> 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad call arguments (mismatched ground sizes, non-bijective images, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

// Desk-scale guard exceeded (Bell numbers, tensor dimension, dense limits).
class SizeLimitError : public Error {
public:
    using Error::Error;
};

// Parameter regime the construction does not cover (e.g. N < 2k).
class RegimeError : public Error {
public:
    using Error::Error;
};

// Requested index class is empty (N < |blocks| for an I-class).
class DegenerateClassError : public Error {
public:
    using Error::Error;
};

// Gram matrix of the Haar-space spanning set is numerically unusable.
class IllConditionedError : public Error {
public:
    using Error::Error;
};

// Iterative solver ran out of iterations; carries the last iterate data.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, double last_sigma, double residual,
                     long iterations)
        : Error(msg), last_sigma(last_sigma), residual(residual),
          iterations(iterations) {}

    double last_sigma;
    double residual;
    long iterations;
};

} // namespace tpx

#endif
