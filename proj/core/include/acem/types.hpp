#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace acem {

using NodeId = std::int32_t;
using ElementId = std::int32_t;
using Vec2 = Eigen::Vector2d;
/// Voigt vector [xx, yy, xy]; engineering shear for strains.
using Voigt = Eigen::Vector3d;

/// Marks an empty econn slot (no edge node) or an absent center node.
inline constexpr NodeId kNoNode = -1;

}  // namespace acem
