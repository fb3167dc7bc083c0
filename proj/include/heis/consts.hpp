#pragma once

namespace heis {

/// Homogeneous dimension of H^1.
constexpr int kQ = 4;

/// Lebesgue volume of the unit gauge ball in H^1 (pi^2 / 2).
constexpr double kUnitBallVolume = 4.9348022005446793;

}  // namespace heis
