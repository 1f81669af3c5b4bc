#ifndef HALLBRIDGE_ERRORS_HPP
#define HALLBRIDGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hallbridge {

// Base class for everything thrown by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input validation failures (exit code 2 territory).
struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error("parse error: " + msg) {}
};
struct NotAdmissible : Error {
  explicit NotAdmissible(const std::string& msg) : Error("not admissible: " + msg) {}
};
struct UnknownVertexOrArrow : Error {
  explicit UnknownVertexOrArrow(const std::string& msg) : Error("unknown vertex or arrow: " + msg) {}
};
struct NotFiniteDimensional : Error {
  explicit NotFiniteDimensional(const std::string& msg) : Error("not finite dimensional: " + msg) {}
};

// Arithmetic / structural failures.
struct DivisionByZero : Error {
  DivisionByZero() : Error("division by zero") {}
};
struct NotProjective : Error {
  explicit NotProjective(const std::string& msg) : Error("not projective: " + msg) {}
};
struct GlobalDimensionExceeded : Error {
  explicit GlobalDimensionExceeded(const std::string& msg) : Error("global dimension exceeds 2: " + msg) {}
};

// Resource limits.  A truncated count would be mathematically wrong, so any
// search that would overrun its budget dies loudly instead.
struct SearchBudgetExceeded : Error {
  explicit SearchBudgetExceeded(const std::string& msg) : Error("search budget exceeded: " + msg) {}
};
struct BoundExceeded : Error {
  explicit BoundExceeded(const std::string& msg) : Error("enumeration bound exceeded: " + msg) {}
};

}  // namespace hallbridge

#endif
