#ifndef RANDCORR_COMMON_HPP
#define RANDCORR_COMMON_HPP

#include <complex>

namespace randcorr {

// Global numeric tolerance for state validation and identity checks.
inline constexpr double kTol = 1e-9;

inline constexpr double kPi = 3.14159265358979323846;

using Complex = std::complex<double>;

}  // namespace randcorr

#endif
