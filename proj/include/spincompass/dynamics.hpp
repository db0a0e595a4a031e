#ifndef SPINCOMPASS_DYNAMICS_HPP
#define SPINCOMPASS_DYNAMICS_HPP

#include "spincompass/hamiltonian.hpp"
#include "spincompass/model.hpp"
#include "spincompass/state.hpp"

#include <Eigen/SparseCore>

#include <limits>
#include <vector>

namespace spincompass {

using SparseComplexMatrix = Eigen::SparseMatrix<Complex>;

/// Bare and field-induced transition frequencies omega_mn = E_m - E_n,
/// antisymmetric, rad us^-1.
struct PhaseTable {
    Eigen::MatrixXd omega0;
    Eigen::MatrixXd omegaB;
};

/// H0 eigenbasis refined so the Zeeman term is diagonal inside degenerate
/// clusters. In this basis first-order perturbation theory assigns every
/// coherence a well-defined field phase, including the exactly degenerate
/// pairs that a hyperfine-free radical produces.
struct PerturbativeFrame {
    EigenSystem basis;       // vectors = V0 * U_block, energies copied, fresh tag
    Eigen::VectorXd shifts;  // first-order energy corrections, rad us^-1
    PhaseTable table;
};

/// rho(t) = sum r_mn exp(-i (E_m - E_n) t) |m><n| under the given
/// eigensystem. Accepts product-basis or matching-eigenbasis states and
/// returns the same representation.
SpinState evolve_closed(const SpinState &rho0, const EigenSystem &eig, double t_us);

/// Equal-rate singlet yield, evaluated in closed form from the spectrum:
/// Y = sum_mn r_mn (Q_S)_nm k / (k + i w_mn). Density input gives a value
/// in [0,1]; a traceless coherent part gives a signed contribution.
double singlet_yield_spectral(const EigenSystem &eig, const SpinState &rho0, double k_us,
                              const HilbertLayout &layout);

/// Same, with the state and projector already expressed in the eigenbasis.
double spectral_yield_from_eigenbasis(const Eigen::VectorXd &energies,
                                      const ComplexMatrix &r_eig, const ComplexMatrix &q_eig,
                                      double k_us);

PerturbativeFrame perturbative_frame(const EigenSystem &eig0, const ComplexMatrix &zeeman);
PhaseTable perturbative_phase_table(const EigenSystem &eig0, const ComplexMatrix &zeeman);

/// Eq-9-style evolution: frozen |r_mn|, phases omega0 (+ omegaB when
/// include_field_phases). The state must be expressed in the frame basis.
SpinState evolve_perturbative(const SpinState &rho_in_frame, const PerturbativeFrame &frame,
                              double t_us, bool include_field_phases);

/// Singlet yield of the exact evolution with the first-order field phases
/// divided out (the "field phases excluded" map). Closed form, exact in
/// the time integral.
double singlet_yield_phase_filtered(const EigenSystem &eig_full, const PerturbativeFrame &frame,
                                    const SpinState &rho0, double k_us,
                                    const HilbertLayout &layout);

/// Jump operators of one noise model, embedded on the full space; each
/// acts with the common rate xi.
std::vector<SparseComplexMatrix> build_dissipators(NoiseModel model,
                                                   const HilbertLayout &layout);

struct OdeOptions {
    /// dt = dt_factor * min(1/|H|, 1/(kS + kT + xi_total)).
    double dt_factor = 0.02;
    /// Stop once trace (density) or Frobenius norm (traceless), relative
    /// to the initial value, falls below this.
    double trace_cutoff = 1e-7;
    /// When set, rerun at dt/2 and require the yields to agree within
    /// halving_tol (halving until they do); the refined result is
    /// returned. Costs 3x and is off in bulk campaign runs, whose results
    /// are cross-checked against the spectral solver instead.
    bool halving_check = false;
    double halving_tol = 1e-6;
    int max_halvings = 4;
    /// Hard cap t_max = t_max_factor / min(kS, kT); exceeding it raises
    /// IntegrationError.
    double t_max_factor = 80.0;
};

struct OdeYield {
    double ys = 0.0;
    double yt = 0.0;
    double t_end = 0.0;
    long steps = 0;
    double dt = 0.0;
    double residual_mass = 0.0;
    double halving_residual = std::numeric_limits<double>::quiet_NaN();
};

/// Integrate the Haberkorn master equation with optional dissipator
/// (fixed-step RK4 in matrix form) and accumulate both reaction yields.
/// Noise-free runs of low-rank states use an equivalent factored update.
OdeYield singlet_yield_ode(const RadicalPairSystem &system, const FieldSpec &field,
                           const ReactionSpec &reaction, const SpinState &rho0,
                           const OdeOptions &options = {});

} // namespace spincompass

#endif
