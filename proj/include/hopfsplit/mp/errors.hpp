#pragma once

#include <stdexcept>
#include <string>

namespace hopfsplit {

// All failure modes surface as typed exceptions. Silent NaN propagation is
// forbidden throughout; any non-finite intermediate aborts the operation.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParameterError : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
// Denominator zero (or too close) at a reported location.
struct SingularityError : Error {
    using Error::Error;
};
// Step size collapsed; names the path location where it happened.
struct StiffnessError : Error {
    using Error::Error;
};
struct OverflowError : Error {
    using Error::Error;
};
// Linear solve hit a (near-)singular matrix at a specific recursion order.
struct ResonanceError : Error {
    int order = -1;
    ResonanceError(const std::string& msg, int ord) : Error(msg), order(ord) {}
};
struct PrecisionError : Error {
    long required_bits = 0;
    PrecisionError(const std::string& msg, long bits) : Error(msg), required_bits(bits) {}
};
struct ConvergenceError : Error {
    using Error::Error;
};
struct ModelAssumptionError : Error {
    using Error::Error;
};
struct RepresentationError : Error {
    using Error::Error;
};
struct RouteError : Error {
    using Error::Error;
};
struct SeedError : Error {
    using Error::Error;
};
struct SpectrumError : Error {
    using Error::Error;
};
struct ConditioningError : Error {
    using Error::Error;
};
struct InsufficientDataError : Error {
    using Error::Error;
};
struct UnreliableEstimateError : Error {
    using Error::Error;
};
struct DirectionError : Error {
    using Error::Error;
};
struct AccuracyError : Error {
    using Error::Error;
};
struct DegenerateFrameError : Error {
    using Error::Error;
};
struct BoundViolationError : Error {
    using Error::Error;
};
struct InternalConsistencyError : Error {
    using Error::Error;
};
struct WrongBranchError : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

} // namespace hopfsplit
