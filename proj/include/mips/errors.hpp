#pragma once

#include <stdexcept>
#include <string>

namespace mips {

/// Bad configuration or precondition violation; CLI exit code 2.
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Runtime numerical failure (blow-up, lost mass, non-finite state); CLI exit code 3.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw validation_error(msg);
}

} // namespace mips
