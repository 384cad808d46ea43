#pragma once

#include <cmath>

namespace uwbpc {

inline double to_db(double linear) { return 10.0 * std::log10(linear); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace uwbpc
