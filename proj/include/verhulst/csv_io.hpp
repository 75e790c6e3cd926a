#pragma once

// Text formats shared by the command-line front end.
//
// Input: a header line naming at least the columns `t` and `P`, then one
// comma-separated row per observation. `.` is the decimal point regardless
// of locale. Extra columns are ignored, so sampled output can be read back.

#include <istream>
#include <string>

#include "verhulst/fit.hpp"

namespace verhulst {

/// Throws InvalidData with a message naming the offending line. Rows must be
/// in increasing time unless `sort` is set; repeated times are always rejected.
TimeSeries read_time_series(std::istream& in, bool sort = false);

/// 12 significant digits, shortest of fixed/scientific, locale independent.
std::string format_number(double value);

}  // namespace verhulst
