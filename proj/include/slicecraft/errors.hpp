#pragma once

#include <stdexcept>
#include <string>

namespace slicecraft {

// Base class for all library errors. The CLI maps subclasses to exit codes:
// usage -> 2, data/format -> 3, infeasible search -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tile sums, grid dimensions or slice rectangles inconsistent with the grid.
class GeometryError : public Error {
 public:
  using Error::Error;
};

// Two slices claim the same CTU cell.
class OverlapError : public Error {
 public:
  using Error::Error;
};

// Some CTU cell is not covered by any slice.
class CoverageError : public Error {
 public:
  using Error::Error;
};

// A slice is neither a rectangle of complete tiles nor a run of complete
// CTU rows inside a single tile.
class StructureError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Frame index outside the file, or similar out-of-range request.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Malformed file contents (sizes, missing keys, bad values).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration value (non-power-of-two GOP, bad fraction, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A sequence trace is missing a required (poc, qp) cost map.
class TraceError : public Error {
 public:
  using Error::Error;
};

// The candidate enumeration produced no admissible partition.
class NoCandidateError : public Error {
 public:
  using Error::Error;
};

// Instance exceeds a brute-force tractability guard.
class SizeError : public Error {
 public:
  using Error::Error;
};

// Bad command line; raised by the CLI layer only.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace slicecraft
