#pragma once

#include <array>

#include "wrapnet/geometry.hpp"

namespace wrapnet {

/// Exact sign of the orientation determinant of (a, b, c): +1 when c lies to
/// the left of the directed line a->b, -1 to the right, 0 when collinear.
/// A floating-point filter answers most queries; the rest are resolved with
/// expansion arithmetic, so the result is exact for all finite inputs that do
/// not overflow or underflow.
int orient2d(const Vec2& a, const Vec2& b, const Vec2& c);

/// The same determinant evaluated only by expansion arithmetic.
int orient2d_exact(const Vec2& a, const Vec2& b, const Vec2& c);

/// True when the interiors of two triangles intersect (positive-area overlap).
/// Touching along edges or at points is not an overlap. Degenerate
/// (zero-area) triangles never overlap anything.
bool triangles_overlap(const std::array<Vec2, 3>& t, const std::array<Vec2, 3>& u);

}  // namespace wrapnet
