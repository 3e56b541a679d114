#pragma once

#include <stdexcept>
#include <string>

namespace warpcmc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a function (e.g. r >= r_bar).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Model parameters violate an admissibility bound.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A hypothesis of a geometric statement does not hold (e.g. H <= 0).
class HypothesisError : public Error {
public:
    using Error::Error;
};

/// Operation requested for an ambient variant it does not apply to.
class NotApplicableError : public Error {
public:
    using Error::Error;
};

/// Degenerate surface data: non-graph, rho out of range, singular metric.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Evaluation at a singular point (h = 0, double root of omega, ...).
class SingularityError : public Error {
public:
    using Error::Error;
};

} // namespace warpcmc
