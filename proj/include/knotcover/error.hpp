#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace knotcover {

  // Mirrors kc_status in the C API; keep the numeric values in sync.
  enum class ErrorCode : int {
    parse = 1,
    unknown_generator = 2,
    unknown_key = 3,
    invalid_argument = 4,
    resource_exhausted = 5,
    incomplete_table = 6,
    missing_data = 7,
    io = 8,
    internal = 9,
  };

  class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, std::string const& msg)
        : std::runtime_error(msg), code_(code) {}

    ErrorCode code() const noexcept {
      return code_;
    }

   private:
    ErrorCode code_;
  };

  class ParseError : public Error {
   public:
    ParseError(std::size_t position, std::string const& msg)
        : Error(ErrorCode::parse,
                "parse error at position " + std::to_string(position) + ": "
                    + msg),
          position_(position) {}

    std::size_t position() const noexcept {
      return position_;
    }

   private:
    std::size_t position_;
  };

  // Thrown when a search or enumeration hits its budget. `partial` records
  // how far the computation got so callers can report it.
  class ResourceError : public Error {
   public:
    ResourceError(std::string const& msg, std::size_t partial)
        : Error(ErrorCode::resource_exhausted, msg), partial_(partial) {}

    std::size_t partial_progress() const noexcept {
      return partial_;
    }

   private:
    std::size_t partial_;
  };

}  // namespace knotcover
