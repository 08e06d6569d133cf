#pragma once

#include <stdexcept>
#include <string>

namespace nlshalf {

/// Invalid or inconsistent problem setup (bad config file, violated
/// scenario invariant, unusable CLI arguments). CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure during a run (fixed-point stall, NaN/Inf, domain
/// truncation breach, violated hard identity). CLI exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem failure while reading or writing artifacts. CLI exit code 4.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace nlshalf
