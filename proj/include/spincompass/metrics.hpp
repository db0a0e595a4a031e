#ifndef SPINCOMPASS_METRICS_HPP
#define SPINCOMPASS_METRICS_HPP

#include "spincompass/dynamics.hpp"
#include "spincompass/hamiltonian.hpp"
#include "spincompass/model.hpp"
#include "spincompass/state.hpp"

#include <vector>

namespace spincompass {

/// Spherical direction grid; thetas run from pole to pole inclusive.
struct AngleGrid {
    Eigen::VectorXd thetas; // [0, pi], strictly increasing, includes both poles
    Eigen::VectorXd phis;   // [0, 2pi), strictly increasing

    /// Regular grid: n_theta points spanning [0, pi], n_phi spanning
    /// [0, 2pi) without the duplicate endpoint.
    static AngleGrid regular(int n_theta, int n_phi);
    void validate() const;
};

struct YieldMap {
    AngleGrid grid;
    Eigen::MatrixXd values; // thetas x phis
};

enum class YieldMode {
    Exact,        // full dynamics (spectral solver, or master equation with noise)
    PhaseFiltered // exact amplitudes, field-induced coherence phases removed
};

/// Singlet yield per field direction at fixed magnitude b. Grid poles are
/// evaluated once and replicated across phi.
YieldMap yield_map(const RadicalPairSystem &system, const SpinState &rho0, double b_uT,
                   const ReactionSpec &reaction, const AngleGrid &grid,
                   YieldMode mode = YieldMode::Exact, int n_threads = 1);

/// D_s = max - min over the map.
double sensitivity(const YieldMap &map);

/// Off-diagonal part of the state in the H0 eigenbasis; matrix elements
/// between levels closer than the degeneracy tolerance are zeroed as well,
/// which makes the result independent of the basis choice inside
/// degenerate subspaces. Returned in the eigenbasis, Traceless.
SpinState coherent_part(const SpinState &rho0, const EigenSystem &eig0);

/// C = |Y_s(H0, GC)| at b = 0: the coherent part's singlet-yield
/// contribution under the bare hyperfine Hamiltonian.
double global_coherence(const RadicalPairSystem &system, const SpinState &rho0, double k_us);

struct EpsilonTrace {
    std::vector<double> times_us;
    std::vector<double> values;
    double weighted_mean = 0.0; // weights ~ k exp(-k t)
    double uniform_mean = 0.0;
};

/// Residual amplitude distortion of the coherences: the exact state in the
/// perturbative frame with both bare and first-order field phases divided
/// out, compared against the initial amplitudes.
EpsilonTrace epsilon_trace(const RadicalPairSystem &system, const SpinState &rho0,
                           const FieldSpec &field, const std::vector<double> &times_us,
                           double k_us);

} // namespace spincompass

#endif
