#pragma once

#include <string>

namespace seqebh {

/// Shortest decimal text that parses back to the same double ("inf", "-inf", "nan" for specials).
std::string format_number(double value);

}  // namespace seqebh
