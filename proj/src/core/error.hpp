#ifndef MCCF_CORE_ERROR_HPP
#define MCCF_CORE_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mccf {

// Numeric values are mirrored by mccf_status in include/mccf/mccf.h.
enum class ErrorCode : int {
  invalid_argument = 1,
  parse = 2,
  out_of_scale = 3,
  io = 4,
  rank = 5,
  dimension_mismatch = 6,
  criterion_out_of_range = 7,
  unknown_grade = 8,
  empty_input = 9,
  memory_guard = 10,
  not_found = 11,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Parse failures carry the 1-based source line.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t line, const std::string& what)
      : Error(code, "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace mccf

#endif
