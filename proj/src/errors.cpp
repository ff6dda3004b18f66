#include "svtgv/errors.hpp"

namespace svtgv {

FormatError::FormatError(const std::string& what, std::size_t offset)
    : Error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

}  // namespace svtgv
