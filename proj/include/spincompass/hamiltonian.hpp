#ifndef SPINCOMPASS_HAMILTONIAN_HPP
#define SPINCOMPASS_HAMILTONIAN_HPP

#include "spincompass/model.hpp"
#include "spincompass/spin_algebra.hpp"
#include "spincompass/state.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace spincompass {

/// Deterministic spectral decomposition of a Hermitian matrix: energies
/// ascending, eigenvector columns phase-fixed (largest-magnitude component
/// real positive).
struct EigenSystem {
    Eigen::VectorXd energies;   // rad us^-1, ascending
    ComplexMatrix vectors;      // unitary, columns are eigenvectors
    double degeneracy_tol;      // rad us^-1
    std::uint64_t tag;          // identifies this basis in SpinState tags
};

/// Hyperfine Hamiltonian sum_k sum_j s_k . T_kj . I_kj on the full space,
/// rad us^-1 (tensors converted from mT).
ComplexMatrix build_hyperfine(const RadicalPairSystem &system);

/// Electron Zeeman term -|gamma_e| b n(theta,phi) . (s_D + s_A), rad us^-1.
ComplexMatrix build_zeeman(const FieldSpec &field, const HilbertLayout &layout);

ComplexMatrix build_total_hamiltonian(const RadicalPairSystem &system, const FieldSpec &field);

EigenSystem eigendecompose(const ComplexMatrix &hamiltonian,
                           double degeneracy_tol = 1e-7);

/// Half-open index ranges [begin, end) of eigenvalues closer than the
/// degeneracy tolerance (chained: consecutive gaps <= tol merge).
std::vector<std::pair<int, int>> degenerate_clusters(const EigenSystem &eig);

/// Basis transforms for states; tags are checked.
SpinState to_eigenbasis(const SpinState &state, const EigenSystem &eig);
SpinState to_product_basis(const SpinState &state, const EigenSystem &eig);

} // namespace spincompass

#endif
