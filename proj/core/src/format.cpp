#include "twopoint/format.hpp"

#include <cstdio>

namespace twopoint {

std::string format_g9(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

} // namespace twopoint
