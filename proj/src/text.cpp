#include "seqebh/text.hpp"

#include <charconv>

namespace seqebh {

std::string format_number(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace seqebh
