#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace capnet {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file; carries a 1-based line number.
struct ParseError : Error {
    ParseError(const std::string& msg, int line_no)
        : Error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
    int line;
};

/// Semantically invalid argument (bad flow, inadmissible potential, ...).
struct InvalidInput : Error {
    using Error::Error;
};

/// Numerical failure: singular system, residual above tolerance, no convergence.
struct SolverError : Error {
    using Error::Error;
};

/// Operation the library deliberately refuses (e.g. capacity with killing).
struct UnsupportedCase : Error {
    using Error::Error;
};

// Report formatting: 12 significant digits.
std::string fmt_g12(double v);

// Shortest decimal that round-trips to the same double (file serialization).
std::string fmt_shortest(double v);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex16(std::uint64_t v);

// Runs fn(i) for i in [0, n). With workers <= 1 the loop is serial; otherwise
// contiguous ranges go to threads. Callers own determinism: fn(i) must write
// only to slot i of some preallocated output.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace capnet
