#pragma once

#include <string>

namespace twopoint {

/// Formats a double with 9 significant digits ("%.9g"), '.' decimal point.
/// All CSV output goes through this so golden files are byte-stable.
std::string format_g9(double value);

} // namespace twopoint
