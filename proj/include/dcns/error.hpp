#pragma once

#include <stdexcept>
#include <string>

namespace dcns {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Configuration-level failures (bad parameters, bad initial data, bad
/// config files). The CLI maps these to exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

class ConstraintViolation : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class InadmissibleKappa : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class InadmissibleExponents : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class SupportTooWide : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class ParseError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Numerical failures during a solve. The CLI maps these to exit code 3.
class SolverError : public Error {
public:
    using Error::Error;
};

class NonpositiveDensity : public SolverError {
public:
    using SolverError::SolverError;
};

class NonpositiveField : public SolverError {
public:
    using SolverError::SolverError;
};

class NonpositiveCoefficient : public SolverError {
public:
    using SolverError::SolverError;
};

class CFLViolation : public SolverError {
public:
    using SolverError::SolverError;
};

class SingularTridiagonal : public SolverError {
public:
    using SolverError::SolverError;
};

class ShapeMismatch : public SolverError {
public:
    using SolverError::SolverError;
};

class NoContraction : public SolverError {
public:
    using SolverError::SolverError;
};

class NotConverged : public SolverError {
public:
    using SolverError::SolverError;
};

class LegFailed : public SolverError {
public:
    LegFailed(int leg, const std::string& why)
        : SolverError("continuation leg " + std::to_string(leg) + " failed: " + why), leg_(leg)
    {}
    int leg() const noexcept { return leg_; }

private:
    int leg_;
};

} // namespace dcns
