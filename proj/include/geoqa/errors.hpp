#pragma once

#include <stdexcept>
#include <string>

namespace geoqa {

/// File could not be opened, read or written.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input file is syntactically broken (carries line/feature context).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input parsed but violates a semantic contract.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Profile / configuration value out of contract.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace geoqa
