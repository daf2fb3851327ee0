#pragma once

#include <cstdio>
#include <string>

namespace ebc {

/// Shortest "%.<digits>g" rendering; all CSV and stream files use 9 digits.
inline std::string format_sig(double value, int digits = 9) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
    return buf;
}

} // namespace ebc
