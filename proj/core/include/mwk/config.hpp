#pragma once

#include <numbers>

namespace mwk {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

/// Global degeneracy threshold for determinants, norms, and tangent lengths.
inline constexpr double kDegeneracyEps = 1e-12;

/// Allowed deviation of |x| from 1 for a UnitVector.
inline constexpr double kUnitNormTol = 1e-12;

/// Affine-independence threshold for inscribed simplices.
inline constexpr double kAffineDetTol = 1e-10;

/// Distance below which an altitude foot is treated as lying on a face
/// boundary.
inline constexpr double kGeneralPositionTol = 1e-10;

}  // namespace mwk
