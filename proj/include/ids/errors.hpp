#pragma once

#include <stdexcept>
#include <string>

namespace ids {

// Exit-code mapping: ConfigError -> 2, DataError -> 3, InternalError -> 4.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class InternalError : public std::runtime_error {
public:
    explicit InternalError(const std::string& msg) : std::runtime_error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw DataError(msg);
}

inline void check_invariant(bool cond, const std::string& msg) {
    if (!cond) throw InternalError(msg);
}

} // namespace ids
