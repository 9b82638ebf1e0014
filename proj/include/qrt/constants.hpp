#pragma once

namespace qrt {

// SI constants (2019 exact values where defined)
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kPlanck = 6.62607015e-34;             // J s
inline constexpr double kHbar = 1.054571817e-34;              // J s
inline constexpr double kBoltzmann = 1.380649e-23;            // J/K
inline constexpr double kFluxQuantum = 2.067833848e-15;       // Wb

inline constexpr double kTwoPi = 6.28318530717958647692;

// Charging energy e^2/(2C) in GHz for C in fF.
inline constexpr double kChargingEnergyGHzfF =
    kElementaryCharge * kElementaryCharge / (2.0 * kPlanck) * 1e6;

// Unit conventions used throughout:
//   - all circuit energies are linear frequencies in GHz (h = 1), i.e. the
//     E/2pi values quoted for device parameters
//   - time-domain evolution works in ns with angular frequencies (rad/ns),
//     conversion factor 2*pi
//   - dissipator rates are angular (1/ns) unless a function says otherwise

}  // namespace qrt
