#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace cnlse {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by the Weierstrass evaluator when the argument sits on (or inside the
/// exclusion radius of) a lattice point.
class PoleProximity : public Error {
public:
    PoleProximity(std::complex<double> z, std::complex<double> lattice_point);
    std::complex<double> argument() const noexcept { return z_; }
    std::complex<double> lattice_point() const noexcept { return lattice_point_; }

private:
    std::complex<double> z_;
    std::complex<double> lattice_point_;
};

class NotDegenerate : public Error {
public:
    using Error::Error;
};

class NegativeRadicand : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ConstraintViolation : public Error {
public:
    using Error::Error;
};

class InvalidK : public Error {
public:
    using Error::Error;
};

class UnclassifiedCase : public Error {
public:
    using Error::Error;
};

class NotPeriodicFamily : public Error {
public:
    using Error::Error;
};

/// Configuration problem; carries the offending key.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& what)
        : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

} // namespace cnlse
