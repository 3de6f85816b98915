#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace cmdsr {

[[noreturn]] inline void fail(const std::string& msg) {
  throw std::runtime_error(msg);
}

}  // namespace cmdsr

// Contract check at module boundaries. The message may be an ostream chain.
#define CMDSR_REQUIRE(cond, msg)   \
  do {                             \
    if (!(cond)) {                 \
      std::ostringstream oss_;     \
      oss_ << msg;                 \
      ::cmdsr::fail(oss_.str());   \
    }                              \
  } while (0)
