#include "ddtf/error.hpp"

namespace ddtf {

DegenerateRankError::DegenerateRankError(const std::string& what, double ratio)
    : Error(what + " (sigma_min/sigma_max = " + std::to_string(ratio) + ")"), ratio_(ratio) {}

}  // namespace ddtf
