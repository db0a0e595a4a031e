#include "spincompass/state.hpp"

#include "spincompass/errors.hpp"

#include <cmath>

namespace spincompass {

double hermiticity_defect(const ComplexMatrix &m) {
    return (m - m.adjoint().eval()).cwiseAbs().maxCoeff();
}

void check_state(const SpinState &state, double tol) {
    if (state.matrix.rows() != state.matrix.cols())
        throw ContractError("SpinState: matrix is not square");
    if (hermiticity_defect(state.matrix) > tol)
        throw ContractError("SpinState: Hermiticity defect above tolerance");
    if (state.trace_class == TraceClass::Density) {
        const double tr = state.matrix.trace().real();
        if (std::abs(tr - 1.0) > 1e-10)
            throw ContractError("SpinState: density matrix trace deviates from 1");
    }
}

} // namespace spincompass
