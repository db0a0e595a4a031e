#include "spincompass/metrics.hpp"

#include "spincompass/errors.hpp"
#include "spincompass/util.hpp"

#include <cmath>

namespace spincompass {

AngleGrid AngleGrid::regular(int n_theta, int n_phi) {
    if (n_theta < 2 || n_phi < 1)
        throw ValidationError("AngleGrid: need n_theta >= 2 and n_phi >= 1");
    AngleGrid grid;
    grid.thetas = Eigen::VectorXd::LinSpaced(n_theta, 0.0, M_PI);
    grid.phis = Eigen::VectorXd::LinSpaced(n_phi, 0.0, 2.0 * M_PI * (n_phi - 1) / n_phi);
    return grid;
}

void AngleGrid::validate() const {
    if (thetas.size() < 2 || phis.size() < 1)
        throw ValidationError("AngleGrid: too few points");
    if (std::abs(thetas(0)) > 1e-12 || std::abs(thetas(thetas.size() - 1) - M_PI) > 1e-12)
        throw ValidationError("AngleGrid: thetas must include both poles");
    for (Eigen::Index i = 1; i < thetas.size(); ++i)
        if (thetas(i) <= thetas(i - 1))
            throw ValidationError("AngleGrid: thetas must be strictly increasing");
    for (Eigen::Index i = 0; i < phis.size(); ++i) {
        if (phis(i) < 0.0 || phis(i) >= 2.0 * M_PI)
            throw ValidationError("AngleGrid: phis must lie in [0, 2pi)");
        if (i > 0 && phis(i) <= phis(i - 1))
            throw ValidationError("AngleGrid: phis must be strictly increasing");
    }
}

YieldMap yield_map(const RadicalPairSystem &system, const SpinState &rho0, double b_uT,
                   const ReactionSpec &reaction, const AngleGrid &grid, YieldMode mode,
                   int n_threads) {
    grid.validate();
    if (b_uT < 0.0)
        throw ValidationError("yield_map: field magnitude must be >= 0");
    const HilbertLayout &layout = system.layout();
    const int n_theta = static_cast<int>(grid.thetas.size());
    const int n_phi = static_cast<int>(grid.phis.size());

    const bool use_ode = reaction.noise && reaction.noise->xi_us > 0.0;
    const bool equal_rates = reaction.kS_us == reaction.kT_us;
    const bool spectral_ok = !use_ode && equal_rates;
    if (mode == YieldMode::PhaseFiltered && !spectral_ok)
        throw ValidationError("yield_map: the phase-filtered map requires equal rates "
                              "and no noise");

    const ComplexMatrix h0 = build_hyperfine(system);
    const ComplexMatrix qs = singlet_projector(layout);
    EigenSystem eig0;
    if (mode == YieldMode::PhaseFiltered)
        eig0 = eigendecompose(h0);

    // Unique directions: poles once (phi = 0), everything else per phi.
    struct Direction {
        int i_theta;
        int i_phi; // -1 for a pole row
        double theta, phi;
    };
    std::vector<Direction> work;
    for (int i = 0; i < n_theta; ++i) {
        const double theta = grid.thetas(i);
        const bool pole = theta < 1e-12 || theta > M_PI - 1e-12;
        if (pole) {
            work.push_back({i, -1, theta, 0.0});
        } else {
            for (int j = 0; j < n_phi; ++j)
                work.push_back({i, j, theta, grid.phis(j)});
        }
    }

    std::vector<double> results(work.size(), 0.0);
    parallel_for(static_cast<long>(work.size()), n_threads, [&](long w) {
        const Direction &d = work[static_cast<std::size_t>(w)];
        const FieldSpec field{b_uT, d.theta, d.phi};
        double y = 0.0;
        if (mode == YieldMode::PhaseFiltered) {
            const ComplexMatrix zeeman = build_zeeman(field, layout);
            const EigenSystem eig_full = eigendecompose(h0 + zeeman);
            const PerturbativeFrame frame = perturbative_frame(eig0, zeeman);
            y = singlet_yield_phase_filtered(eig_full, frame, rho0, reaction.kS_us, layout);
        } else if (spectral_ok) {
            const EigenSystem eig = eigendecompose(h0 + build_zeeman(field, layout));
            const ComplexMatrix r = eig.vectors.adjoint() * rho0.matrix * eig.vectors;
            const ComplexMatrix q = eig.vectors.adjoint() * qs * eig.vectors;
            y = spectral_yield_from_eigenbasis(eig.energies, r, q, reaction.kS_us);
        } else {
            y = singlet_yield_ode(system, field, reaction, rho0).ys;
        }
        results[static_cast<std::size_t>(w)] = y;
    });

    YieldMap map;
    map.grid = grid;
    map.values.resize(n_theta, n_phi);
    for (std::size_t w = 0; w < work.size(); ++w) {
        const Direction &d = work[w];
        if (d.i_phi < 0)
            map.values.row(d.i_theta).setConstant(results[w]);
        else
            map.values(d.i_theta, d.i_phi) = results[w];
    }
    return map;
}

double sensitivity(const YieldMap &map) {
    if (map.values.size() == 0)
        throw ValidationError("sensitivity: empty yield map");
    return map.values.maxCoeff() - map.values.minCoeff();
}

SpinState coherent_part(const SpinState &rho0, const EigenSystem &eig0) {
    const SpinState in_eig = to_eigenbasis(rho0, eig0);
    SpinState gc;
    gc.matrix = in_eig.matrix;
    gc.trace_class = TraceClass::Traceless;
    gc.basis_tag = eig0.tag;
    const Eigen::Index n = gc.matrix.rows();
    for (Eigen::Index m = 0; m < n; ++m)
        for (Eigen::Index k = 0; k < n; ++k)
            if (m == k || std::abs(eig0.energies(m) - eig0.energies(k)) <= eig0.degeneracy_tol)
                gc.matrix(m, k) = Complex(0.0, 0.0);
    return gc;
}

double global_coherence(const RadicalPairSystem &system, const SpinState &rho0, double k_us) {
    const EigenSystem eig0 = eigendecompose(build_hyperfine(system));
    const SpinState gc = coherent_part(rho0, eig0);
    const ComplexMatrix q_eig =
        eig0.vectors.adjoint() * singlet_projector(system.layout()) * eig0.vectors;
    return std::abs(spectral_yield_from_eigenbasis(eig0.energies, gc.matrix, q_eig, k_us));
}

EpsilonTrace epsilon_trace(const RadicalPairSystem &system, const SpinState &rho0,
                           const FieldSpec &field, const std::vector<double> &times_us,
                           double k_us) {
    if (times_us.empty())
        throw ValidationError("epsilon_trace: times must be non-empty");
    for (double t : times_us)
        if (t < 0.0)
            throw ValidationError("epsilon_trace: times must be >= 0");
    if (k_us <= 0.0)
        throw ValidationError("epsilon_trace: rate k must be > 0");

    const HilbertLayout &layout = system.layout();
    const ComplexMatrix h0 = build_hyperfine(system);
    const ComplexMatrix zeeman = build_zeeman(field, layout);
    const EigenSystem eig0 = eigendecompose(h0);
    const PerturbativeFrame frame = perturbative_frame(eig0, zeeman);
    const EigenSystem eig_full = eigendecompose(h0 + zeeman);

    // Exact evolution expressed in the frame basis, with the full
    // perturbative phase (bare + first order field) divided out; what is
    // left is the amplitude distortion the field causes beyond phases.
    const ComplexMatrix overlap = frame.basis.vectors.adjoint() * eig_full.vectors;
    const ComplexMatrix r_full =
        eig_full.vectors.adjoint() * rho0.matrix * eig_full.vectors;
    const ComplexMatrix r0_frame =
        frame.basis.vectors.adjoint() * rho0.matrix * frame.basis.vectors;
    const Eigen::VectorXd removal_freq = frame.basis.energies + frame.shifts;
    const Eigen::Index n = r_full.rows();

    EpsilonTrace trace;
    trace.times_us = times_us;
    trace.values.resize(times_us.size());
    ComplexMatrix rho_t(n, n), rho_frame(n, n);
    for (std::size_t i = 0; i < times_us.size(); ++i) {
        const double t = times_us[i];
        Eigen::VectorXcd phases(n), unwind(n);
        for (Eigen::Index m = 0; m < n; ++m) {
            phases(m) = std::exp(Complex(0.0, -eig_full.energies(m) * t));
            unwind(m) = std::exp(Complex(0.0, removal_freq(m) * t));
        }
        rho_t = (phases * phases.adjoint()).cwiseProduct(r_full);
        rho_frame = overlap * rho_t * overlap.adjoint();
        rho_frame = (unwind * unwind.adjoint()).cwiseProduct(rho_frame);

        double sum = 0.0;
        for (Eigen::Index m = 0; m < n; ++m)
            for (Eigen::Index nn = 0; nn < n; ++nn)
                if (m != nn)
                    sum += std::norm(rho_frame(m, nn) - r0_frame(m, nn));
        trace.values[i] = std::sqrt(sum);
    }

    double wsum = 0.0, wmean = 0.0, umean = 0.0;
    for (std::size_t i = 0; i < times_us.size(); ++i) {
        const double w = k_us * std::exp(-k_us * times_us[i]);
        wsum += w;
        wmean += w * trace.values[i];
        umean += trace.values[i];
    }
    trace.weighted_mean = wmean / wsum;
    trace.uniform_mean = umean / static_cast<double>(times_us.size());
    return trace;
}

} // namespace spincompass
