#include "fbmlab/error.hpp"

#include <utility>

namespace fbmlab {

Error::Error(std::string module, const std::string& message)
    : std::runtime_error(module + ": " + message), module_(std::move(module)) {}

ConfigError::ConfigError(std::string key, const std::string& reason)
    : Error("cli", "invalid '" + key + "': " + reason), key_(std::move(key)) {}

}  // namespace fbmlab
