#include "ptlab/error.hpp"

#include <utility>

namespace ptlab {

Error::Error(std::string kind, const std::string& what)
    : std::runtime_error(what), kind_(std::move(kind)) {}

}  // namespace ptlab
