#ifndef SPINCOMPASS_STATE_HPP
#define SPINCOMPASS_STATE_HPP

#include "spincompass/spin_algebra.hpp"

#include <cstdint>

namespace spincompass {

enum class TraceClass {
    Density,  // Hermitian, trace 1, positive semidefinite
    Traceless // Hermitian coherent part, zero diagonal in its tagged basis
};

/// Hermitian operator on the joint space, tagged with the basis its matrix
/// is written in: basis_tag == 0 means the product (site) basis, any other
/// value is the tag of the EigenSystem whose eigenvectors form the basis.
struct SpinState {
    ComplexMatrix matrix;
    TraceClass trace_class = TraceClass::Density;
    std::uint64_t basis_tag = 0;
};

/// Max-abs deviation from Hermiticity.
double hermiticity_defect(const ComplexMatrix &m);

/// Throws ContractError unless the state is Hermitian to `tol` and, for
/// Density states, has unit trace to 1e-10.
void check_state(const SpinState &state, double tol = 1e-12);

} // namespace spincompass

#endif
