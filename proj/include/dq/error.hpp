#pragma once
#include <stdexcept>
#include <string>

namespace dq {

// Library errors carry a coarse category so the CLI can map them to exit codes.
enum class errc {
  invalid_input,   // malformed text/json, precondition violation
  resource_bound,  // order/degree/sample limits exceeded
  check_failed,    // a certification the library performs on its own output failed
};

struct error : std::runtime_error {
  errc code;
  explicit error(errc c, const std::string& what) : std::runtime_error(what), code(c) {}
};

inline void require(bool ok, const std::string& what, errc c = errc::invalid_input) {
  if (!ok) throw error(c, what);
}

}  // namespace dq
