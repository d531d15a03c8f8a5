#pragma once

namespace icct::units {

// Energies are handled in wavenumbers (cm^-1) at the interface level and
// converted to angular frequencies (rad/fs) for propagation. Times are fs,
// temperatures K.

/// hbar in cm^-1 * fs.
inline constexpr double hbar = 5308.8374966;

/// Boltzmann constant in cm^-1 / K.
inline constexpr double k_B = 0.69503480484;

/// cm^-1 -> rad/fs.
inline constexpr double to_angular_frequency(double wavenumber) {
    return wavenumber / hbar;
}

/// rad/fs -> cm^-1.
inline constexpr double to_wavenumber(double angular_frequency) {
    return angular_frequency * hbar;
}

/// k_B T in cm^-1.
inline constexpr double thermal_energy(double temperature_K) {
    return k_B * temperature_K;
}

/// Thermal time beta*hbar = hbar/(k_B T) in fs.
inline constexpr double thermal_time(double temperature_K) {
    return hbar / (k_B * temperature_K);
}

}  // namespace icct::units
