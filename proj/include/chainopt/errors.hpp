#pragma once

#include <stdexcept>
#include <string>

namespace chainopt {

/// Bad input: malformed config, genome constraint violation, schema error.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem trouble: missing files, unwritable outputs.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chainopt
