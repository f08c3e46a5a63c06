#pragma once

#include <stdexcept>
#include <string>

namespace svmnet {

// Base of all library errors. The three direct subclasses map onto the
// CLI exit codes: ConfigError -> 1, DataError -> 2, NumericError -> 3.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error("config: " + msg) {}
};

struct DataError : Error {
    explicit DataError(const std::string& msg) : Error("data: " + msg) {}
};

struct NumericError : Error {
    explicit NumericError(const std::string& msg) : Error("numeric: " + msg) {}
};

}  // namespace svmnet
