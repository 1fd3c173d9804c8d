#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "dbar/field.hpp"

namespace dbar::io {

/// CFLD1 container: magic "CFLD", then little-endian u32 version (1), n, q,
/// axes (2n), res per axis, f64 (min, max) per axis, u32 coefficient count;
/// each coefficient is a u32 index length, u32 entries (the 1-based
/// complement multi-index J) and the row-major (re, im) f64 samples.
void write_cfld(std::ostream& os, const QForm& w);
QForm read_cfld(std::istream& is);

void write_cfld_file(const std::string& path, const QForm& w);
QForm read_cfld_file(const std::string& path);

/// Fixed real axes (0-based) mapped to the coordinate they are pinned at;
/// the nearest sample is used.
using Slice = std::map<int, double>;

/// Parses "axis=value,axis=value" (e.g. "2=0,3=0"). Empty string gives no slice.
Slice parse_slice(const std::string& text, const GridSpec& g);

/// One row per kept grid point: free-axis coordinates, then re and im of each
/// coefficient (columns named c<J>_re, c<J>_im).
void write_csv(std::ostream& os, const QForm& w, const Slice& slice = {});

}  // namespace dbar::io
