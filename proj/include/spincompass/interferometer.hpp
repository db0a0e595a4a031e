#ifndef SPINCOMPASS_INTERFEROMETER_HPP
#define SPINCOMPASS_INTERFEROMETER_HPP

#include <complex>

namespace spincompass {

/// Two-state superposition gamma_alpha |a> + gamma_beta |b>, the miniature
/// of the compass-as-interferometer picture.
struct TwoStateAmplitudes {
    std::complex<double> gamma_alpha{1.0, 0.0};
    std::complex<double> gamma_beta{0.0, 0.0};
};

/// Interference outcome m = 1 - 2 |ga|^2 |gb|^2 (1 - cos Phi).
double interference_outcome(const TwoStateAmplitudes &amps, double phi_rad);

/// Fringe contrast D = 4 |ga|^2 |gb|^2 (cos spans [-1, 1]).
double fringe_contrast(const TwoStateAmplitudes &amps);

/// Coherence C = |m(rho_c, 0)| = 2 |ga|^2 |gb|^2; D = 2 C exactly.
double toy_coherence(const TwoStateAmplitudes &amps);

} // namespace spincompass

#endif
