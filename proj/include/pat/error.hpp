#pragma once

#include <stdexcept>
#include <string>

namespace pat {

enum class ErrorKind {
    invalid_argument,   // bad parameter value
    dimension_mismatch, // shapes/grids disagree
    geometry,           // sensor circle exits grid, region out of bounds
    resolution,         // two sensors snapped to the same pixel
    io,                 // file format / filesystem
    numeric,            // non-finite values, CG breakdown, divergence
    degenerate,         // zero signal where a ratio is required
    config,             // bad experiment configuration
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
    if (!cond) throw Error(kind, msg);
}

} // namespace pat
