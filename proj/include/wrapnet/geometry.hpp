#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstdint>
#include <limits>

namespace wrapnet {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using FaceId = std::uint32_t;

inline constexpr std::uint32_t kInvalidId = std::numeric_limits<std::uint32_t>::max();

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Faces with area at or below this (squared length units) are rejected.
inline constexpr double kAreaEpsilon = 1e-12;

/// Coplanarity and angle-sum tolerance (radians).
inline constexpr double kAngleEpsilon = 1e-9;

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace wrapnet
