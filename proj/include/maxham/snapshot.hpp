#ifndef MAXHAM_SNAPSHOT_HPP
#define MAXHAM_SNAPSHOT_HPP

#include <string>

#include "maxham/maxwell_field.hpp"

namespace maxham {

// Flat binary snapshot: 8-byte magic "MAXHAMS1", three int32 grid dims,
// three float64 cell sizes, float64 time, then the eight arrays
// A0, A1, A2, A3(=Az), p0, p1, p2, p3 in C order, 64-bit little-endian floats.
// A JSON sidecar <prefix>.json carries the same metadata.
void write_snapshot(const FieldState& state, const std::string& prefix);

FieldState read_snapshot(const std::string& prefix);

}  // namespace maxham

#endif
