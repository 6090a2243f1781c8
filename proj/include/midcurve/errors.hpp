#pragma once

#include <stdexcept>
#include <string>

namespace midcurve {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad arguments, malformed config, schedule violations. CLI exit code 2.
class invalid_input : public error {
public:
    explicit invalid_input(const std::string& msg) : error(msg) {}
};

/// Problems with external data: missing files, malformed CSV, arbitrageable
/// smile inputs. CLI exit code 2.
class data_error : public invalid_input {
public:
    explicit data_error(const std::string& msg) : invalid_input(msg) {}
};

/// Numerical failures: root not bracketed, singular systems, divergence.
/// CLI exit code 3.
class numerical_error : public error {
public:
    explicit numerical_error(const std::string& msg) : error(msg) {}
};

/// Price-to-volatility or price-to-correlation inversion failures.
class inversion_error : public numerical_error {
public:
    explicit inversion_error(const std::string& msg) : numerical_error(msg) {}
};

/// Parameter estimation failures (no root in bracket, ill-conditioned system).
class calibration_error : public numerical_error {
public:
    explicit calibration_error(const std::string& msg) : numerical_error(msg) {}
};

/// Internal API misuse, e.g. pricing with marginals in the wrong measure.
class contract_violation : public error {
public:
    explicit contract_violation(const std::string& msg) : error(msg) {}
};

} // namespace midcurve
