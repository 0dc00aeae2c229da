#include "cset_transport/ext_real.hpp"

#include <charconv>

namespace cst {

std::string ExtReal::to_string() const {
  if (is_infinite()) return "inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, value_);
  return std::string(buf, res.ptr);
}

}  // namespace cst
