#ifndef SPINCOMPASS_CONSTANTS_HPP
#define SPINCOMPASS_CONSTANTS_HPP

namespace spincompass::constants {

/// |gamma_e|, electron gyromagnetic ratio in rad us^-1 mT^-1. Hyperfine
/// tensors are quoted in mT and converted to angular frequency with this
/// one constant; the external field (uT) uses it too.
inline constexpr double kGammaE = 176.0859645;

/// gamma(2H)/gamma(1H): tensor scale factor applied when a proton is
/// replaced by a deuteron.
inline constexpr double kDeuteronProtonRatio = 0.15351;

/// Geomagnetic-scale default field magnitude, uT.
inline constexpr double kDefaultFieldUT = 50.0;

/// Default singlet/triplet recombination rate, us^-1.
inline constexpr double kDefaultRateUs = 0.5;

/// Eigenvalue gap below which two levels are treated as degenerate,
/// rad us^-1. Well below hyperfine splittings (~1e2), well above
/// double-precision noise for dimensions up to ~1e3.
inline constexpr double kDegeneracyTol = 1e-7;

} // namespace spincompass::constants

#endif
