#include "spincompass/interferometer.hpp"

#include "spincompass/errors.hpp"

#include <cmath>

namespace spincompass {

namespace {

double weight_product(const TwoStateAmplitudes &amps) {
    const double pa = std::norm(amps.gamma_alpha);
    const double pb = std::norm(amps.gamma_beta);
    if (std::abs(pa + pb - 1.0) > 1e-12)
        throw ValidationError("interferometer: amplitudes must be normalized");
    return pa * pb;
}

} // namespace

double interference_outcome(const TwoStateAmplitudes &amps, double phi_rad) {
    return 1.0 - 2.0 * weight_product(amps) * (1.0 - std::cos(phi_rad));
}

double fringe_contrast(const TwoStateAmplitudes &amps) {
    return 4.0 * weight_product(amps);
}

double toy_coherence(const TwoStateAmplitudes &amps) {
    return 2.0 * weight_product(amps);
}

} // namespace spincompass
