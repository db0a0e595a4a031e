#include "spincompass/dynamics.hpp"

#include "spincompass/errors.hpp"

#include <cmath>
#include <complex>

namespace spincompass {

namespace {

ComplexMatrix phase_outer(const Eigen::VectorXd &frequencies, double t) {
    const Eigen::Index n = frequencies.size();
    Eigen::VectorXcd p(n);
    for (Eigen::Index m = 0; m < n; ++m)
        p(m) = std::exp(Complex(0.0, -frequencies(m) * t));
    return p * p.adjoint();
}

} // namespace

SpinState evolve_closed(const SpinState &rho0, const EigenSystem &eig, double t_us) {
    if (t_us < 0.0)
        throw ValidationError("evolve_closed: time must be >= 0");
    const SpinState in_eig = to_eigenbasis(rho0, eig);
    SpinState out = in_eig;
    if (t_us > 0.0)
        out.matrix = phase_outer(eig.energies, t_us).cwiseProduct(in_eig.matrix);
    if (rho0.basis_tag == 0)
        return to_product_basis(out, eig);
    return out;
}

double spectral_yield_from_eigenbasis(const Eigen::VectorXd &energies,
                                      const ComplexMatrix &r_eig, const ComplexMatrix &q_eig,
                                      double k_us) {
    if (k_us <= 0.0)
        throw ValidationError("spectral yield: rate k must be > 0");
    const Eigen::Index n = energies.size();
    Complex y(0.0, 0.0);
    for (Eigen::Index m = 0; m < n; ++m)
        for (Eigen::Index nn = 0; nn < n; ++nn) {
            const double w = energies(m) - energies(nn);
            const double denom = k_us * k_us + w * w;
            const Complex kernel(k_us * k_us / denom, -k_us * w / denom);
            y += r_eig(m, nn) * q_eig(nn, m) * kernel;
        }
    if (std::abs(y.imag()) > 1e-10)
        throw ContractError("spectral yield: imaginary residue above 1e-10, basis handling bug");
    return y.real();
}

double singlet_yield_spectral(const EigenSystem &eig, const SpinState &rho0, double k_us,
                              const HilbertLayout &layout) {
    const SpinState r = to_eigenbasis(rho0, eig);
    const ComplexMatrix q_eig =
        eig.vectors.adjoint() * singlet_projector(layout) * eig.vectors;
    return spectral_yield_from_eigenbasis(eig.energies, r.matrix, q_eig, k_us);
}

PerturbativeFrame perturbative_frame(const EigenSystem &eig0, const ComplexMatrix &zeeman) {
    const Eigen::Index n = eig0.energies.size();
    PerturbativeFrame frame;
    frame.basis.energies = eig0.energies;
    frame.basis.vectors = eig0.vectors;
    frame.basis.degeneracy_tol = eig0.degeneracy_tol;
    frame.basis.tag = eig0.tag;
    frame.shifts = Eigen::VectorXd::Zero(n);

    frame.table.omega0.resize(n, n);
    frame.table.omegaB.resize(n, n);
    if (zeeman.isZero(0.0)) {
        for (Eigen::Index m = 0; m < n; ++m)
            for (Eigen::Index nn = 0; nn < n; ++nn)
                frame.table.omega0(m, nn) = eig0.energies(m) - eig0.energies(nn);
        frame.table.omegaB.setZero();
        return frame;
    }

    const ComplexMatrix zeeman_eig = eig0.vectors.adjoint() * zeeman * eig0.vectors;
    bool rotated = false;
    for (const auto &[begin, end] : degenerate_clusters(eig0)) {
        const int size = end - begin;
        if (size == 1) {
            frame.shifts(begin) = zeeman_eig(begin, begin).real();
            continue;
        }
        // Diagonalize the field inside the degenerate cluster; the cluster
        // basis rotates accordingly.
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> sub(
            zeeman_eig.block(begin, begin, size, size));
        ComplexMatrix u = sub.eigenvectors();
        for (Eigen::Index c = 0; c < u.cols(); ++c) {
            Eigen::Index imax = 0;
            double amax = -1.0;
            for (Eigen::Index r = 0; r < u.rows(); ++r)
                if (std::abs(u(r, c)) > amax + 1e-14) {
                    amax = std::abs(u(r, c));
                    imax = r;
                }
            if (amax > 0.0)
                u.col(c) *= std::conj(u(imax, c)) / std::abs(u(imax, c));
        }
        frame.shifts.segment(begin, size) = sub.eigenvalues();
        frame.basis.vectors.middleCols(begin, size) =
            (eig0.vectors.middleCols(begin, size) * u).eval();
        rotated = true;
    }
    if (rotated)
        frame.basis.tag = eig0.tag ^ 0x8000000000000000ull;

    for (Eigen::Index m = 0; m < n; ++m)
        for (Eigen::Index nn = 0; nn < n; ++nn) {
            frame.table.omega0(m, nn) = eig0.energies(m) - eig0.energies(nn);
            frame.table.omegaB(m, nn) = frame.shifts(m) - frame.shifts(nn);
        }
    return frame;
}

PhaseTable perturbative_phase_table(const EigenSystem &eig0, const ComplexMatrix &zeeman) {
    return perturbative_frame(eig0, zeeman).table;
}

SpinState evolve_perturbative(const SpinState &rho_in_frame, const PerturbativeFrame &frame,
                              double t_us, bool include_field_phases) {
    if (t_us < 0.0)
        throw ValidationError("evolve_perturbative: time must be >= 0");
    if (rho_in_frame.basis_tag != frame.basis.tag)
        throw ContractError("evolve_perturbative: state is not expressed in the frame basis");
    SpinState out = rho_in_frame;
    if (t_us == 0.0)
        return out;
    Eigen::VectorXd freq = frame.basis.energies;
    if (include_field_phases)
        freq += frame.shifts;
    out.matrix = phase_outer(freq, t_us).cwiseProduct(rho_in_frame.matrix);
    return out;
}

double singlet_yield_phase_filtered(const EigenSystem &eig_full, const PerturbativeFrame &frame,
                                    const SpinState &rho0, double k_us,
                                    const HilbertLayout &layout) {
    if (k_us <= 0.0)
        throw ValidationError("phase-filtered yield: rate k must be > 0");
    if (rho0.basis_tag != 0)
        throw ContractError("phase-filtered yield: state must be in the product basis");
    const Eigen::Index n = eig_full.energies.size();

    const ComplexMatrix w_overlap = frame.basis.vectors.adjoint() * eig_full.vectors;
    const ComplexMatrix r_full =
        eig_full.vectors.adjoint() * rho0.matrix * eig_full.vectors;
    const ComplexMatrix q_frame =
        frame.basis.vectors.adjoint() * singlet_projector(layout) * frame.basis.vectors;

    const Eigen::VectorXd &e = eig_full.energies;
    const Eigen::VectorXd &delta = frame.shifts;

    // Y = sum_{m,n} q(n,m) sum_{a,b} W(m,a) r(a,b) conj(W(n,b))
    //       * k / (k + i (E_a - E_b - (delta_m - delta_n))),
    // the exact reaction-weighted time integral with the first-order field
    // phase exp(+i omegaB_mn t) divided out of each coherence.
    Complex y(0.0, 0.0);
    for (Eigen::Index m = 0; m < n; ++m) {
        for (Eigen::Index nn = 0; nn < n; ++nn) {
            const Complex qnm = q_frame(nn, m);
            if (std::abs(qnm) < 1e-16)
                continue;
            const double shift = delta(m) - delta(nn);
            Complex acc(0.0, 0.0);
            for (Eigen::Index a = 0; a < n; ++a) {
                const Complex wma = w_overlap(m, a);
                if (std::abs(wma) < 1e-16)
                    continue;
                for (Eigen::Index b = 0; b < n; ++b) {
                    const double w = e(a) - e(b) - shift;
                    const double denom = k_us * k_us + w * w;
                    const Complex kernel(k_us * k_us / denom, -k_us * w / denom);
                    acc += wma * r_full(a, b) * std::conj(w_overlap(nn, b)) * kernel;
                }
            }
            y += qnm * acc;
        }
    }
    if (std::abs(y.imag()) > 1e-8)
        throw ContractError("phase-filtered yield: imaginary residue above 1e-8");
    return y.real();
}

std::vector<SparseComplexMatrix> build_dissipators(NoiseModel model,
                                                   const HilbertLayout &layout) {
    std::vector<SparseComplexMatrix> ops;
    auto push_dense = [&ops](const ComplexMatrix &m) { ops.push_back(m.sparseView()); };

    switch (model) {
    case NoiseModel::LocalDephasing: {
        ComplexMatrix sigma_z(2, 2);
        sigma_z << 1.0, 0.0, 0.0, -1.0;
        push_dense(embed(sigma_z, 0, layout));
        push_dense(embed(sigma_z, 1, layout));
        break;
    }
    case NoiseModel::Relaxation: {
        ComplexMatrix sigma_p = ComplexMatrix::Zero(2, 2);
        sigma_p(0, 1) = 1.0;
        const ComplexMatrix sigma_m = sigma_p.adjoint();
        push_dense(embed(sigma_p, 0, layout));
        push_dense(embed(sigma_m, 0, layout));
        push_dense(embed(sigma_p, 1, layout));
        push_dense(embed(sigma_m, 1, layout));
        break;
    }
    case NoiseModel::SingletTripletDephasing: {
        const Eigen::Index n = layout.total_dim();
        push_dense(2.0 * singlet_projector(layout) - ComplexMatrix::Identity(n, n));
        break;
    }
    }
    return ops;
}

namespace {

// Shared pieces of one master-equation integration.
struct OdeProblem {
    ComplexMatrix g;                 // -iH - (kS/2)Qs - (kT/2)Qt - (xi/2) sum L'L
    SparseComplexMatrix qs;          // sparse singlet projector for traces
    std::vector<SparseComplexMatrix> jumps;
    std::vector<SparseComplexMatrix> jumps_adj;
    double xi = 0.0;
    double ks = 0.0;
    double kt = 0.0;
};

double singlet_trace(const SparseComplexMatrix &qs, const ComplexMatrix &rho) {
    Complex tr(0.0, 0.0);
    for (int outer = 0; outer < qs.outerSize(); ++outer)
        for (SparseComplexMatrix::InnerIterator it(qs, outer); it; ++it)
            tr += it.value() * rho(it.col(), it.row());
    return tr.real();
}

// d rho / dt in matrix form: G rho + (G rho)' + xi sum_j L_j rho L_j'.
void master_rhs(const OdeProblem &prob, const ComplexMatrix &rho, ComplexMatrix &tmp,
                ComplexMatrix &tmp2, ComplexMatrix &out) {
    tmp.noalias() = prob.g * rho;
    out = tmp;
    out += tmp.adjoint();
    if (prob.xi > 0.0)
        for (std::size_t j = 0; j < prob.jumps.size(); ++j) {
            tmp2.noalias() = prob.jumps[j] * rho;
            tmp.noalias() = tmp2 * prob.jumps_adj[j];
            out += prob.xi * tmp;
        }
}

double hermiticity_defect_noalloc(const ComplexMatrix &m) {
    double defect = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i <= j; ++i)
            defect = std::max(defect, std::abs(m(i, j) - std::conj(m(j, i))));
    return defect;
}

struct IntegrationOutcome {
    double ys = 0.0, yt = 0.0, t_end = 0.0, residual = 0.0;
    long steps = 0;
};

// Dense-matrix RK4 over the density matrix.
IntegrationOutcome integrate_matrix(const OdeProblem &prob, const ComplexMatrix &rho0,
                                    bool traceless, double dt, double cutoff_mass,
                                    double t_max) {
    const Eigen::Index n = rho0.rows();
    ComplexMatrix rho = rho0;
    ComplexMatrix k1(n, n), k2(n, n), k3(n, n), k4(n, n), stage(n, n), tmp(n, n), tmp2(n, n);

    auto mass = [&](const ComplexMatrix &m) {
        return traceless ? m.norm() : m.trace().real();
    };
    auto rate_pair = [&](const ComplexMatrix &m, double &dys, double &dyt) {
        const double ts = singlet_trace(prob.qs, m);
        dys = prob.ks * ts;
        dyt = prob.kt * (m.trace().real() - ts);
    };

    IntegrationOutcome out;
    double t = 0.0;
    double ys = 0.0, yt = 0.0;
    long steps = 0;
    while (mass(rho) > cutoff_mass) {
        if (t > t_max)
            throw IntegrationError("master equation integration exceeded the time cap",
                                   mass(rho));
        double s1y, s1t, s2y, s2t, s3y, s3t, s4y, s4t;
        master_rhs(prob, rho, tmp, tmp2, k1);
        rate_pair(rho, s1y, s1t);
        stage = rho + (0.5 * dt) * k1;
        master_rhs(prob, stage, tmp, tmp2, k2);
        rate_pair(stage, s2y, s2t);
        stage = rho + (0.5 * dt) * k2;
        master_rhs(prob, stage, tmp, tmp2, k3);
        rate_pair(stage, s3y, s3t);
        stage = rho + dt * k3;
        master_rhs(prob, stage, tmp, tmp2, k4);
        rate_pair(stage, s4y, s4t);

        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        ys += (dt / 6.0) * (s1y + 2.0 * s2y + 2.0 * s3y + s4y);
        yt += (dt / 6.0) * (s1t + 2.0 * s2t + 2.0 * s3t + s4t);
        t += dt;
        ++steps;

        if (hermiticity_defect_noalloc(rho) > 1e-10)
            throw ContractError("master equation integration lost Hermiticity");
        if ((steps & 0xff) == 0)
            rho = (0.5 * (rho + rho.adjoint().eval())).eval();
    }
    out.ys = ys;
    out.yt = yt;
    out.t_end = t;
    out.steps = steps;
    out.residual = mass(rho);
    return out;
}

// Noise-free fast path: rho = X X' stays a product of the one-sided
// propagator, so RK4 advances the N x m factor instead of the N x N
// matrix. Exactly the same ODE, positivity preserved by construction.
IntegrationOutcome integrate_factored(const OdeProblem &prob, const ComplexMatrix &x0,
                                      double dt, double cutoff_mass, double t_max) {
    ComplexMatrix x = x0;
    const Eigen::Index n = x0.rows();
    const Eigen::Index m = x0.cols();
    ComplexMatrix k1(n, m), k2(n, m), k3(n, m), k4(n, m), stage(n, m), qx(n, m);

    auto rate_pair = [&](const ComplexMatrix &xc, double &dys, double &dyt) {
        qx.noalias() = prob.qs * xc;
        const double ts = xc.cwiseProduct(qx.conjugate()).sum().real();
        dys = prob.ks * ts;
        dyt = prob.kt * (xc.squaredNorm() - ts);
    };

    IntegrationOutcome out;
    double t = 0.0, ys = 0.0, yt = 0.0;
    long steps = 0;
    while (x.squaredNorm() > cutoff_mass) {
        if (t > t_max)
            throw IntegrationError("master equation integration exceeded the time cap",
                                   x.squaredNorm());
        double s1y, s1t, s2y, s2t, s3y, s3t, s4y, s4t;
        k1.noalias() = prob.g * x;
        rate_pair(x, s1y, s1t);
        stage = x + (0.5 * dt) * k1;
        k2.noalias() = prob.g * stage;
        rate_pair(stage, s2y, s2t);
        stage = x + (0.5 * dt) * k2;
        k3.noalias() = prob.g * stage;
        rate_pair(stage, s3y, s3t);
        stage = x + dt * k3;
        k4.noalias() = prob.g * stage;
        rate_pair(stage, s4y, s4t);

        x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        ys += (dt / 6.0) * (s1y + 2.0 * s2y + 2.0 * s3y + s4y);
        yt += (dt / 6.0) * (s1t + 2.0 * s2t + 2.0 * s3t + s4t);
        t += dt;
        ++steps;
    }
    out.ys = ys;
    out.yt = yt;
    out.t_end = t;
    out.steps = steps;
    out.residual = x.squaredNorm();
    return out;
}

} // namespace

OdeYield singlet_yield_ode(const RadicalPairSystem &system, const FieldSpec &field,
                           const ReactionSpec &reaction, const SpinState &rho0,
                           const OdeOptions &options) {
    if (rho0.basis_tag != 0)
        throw ContractError("singlet_yield_ode: state must be in the product basis");
    if (reaction.kS_us <= 0.0 || reaction.kT_us <= 0.0)
        throw ValidationError("singlet_yield_ode: reaction rates must be > 0");
    const HilbertLayout &layout = system.layout();
    const Eigen::Index n = layout.total_dim();
    if (rho0.matrix.rows() != n)
        throw ValidationError("singlet_yield_ode: state dimension does not match the system");

    const ComplexMatrix h = build_total_hamiltonian(system, field);
    const ComplexMatrix qs_dense = singlet_projector(layout);

    OdeProblem prob;
    prob.ks = reaction.kS_us;
    prob.kt = reaction.kT_us;
    prob.qs = qs_dense.sparseView();
    prob.xi = reaction.noise ? reaction.noise->xi_us : 0.0;
    if (reaction.noise && prob.xi > 0.0) {
        prob.jumps = build_dissipators(reaction.noise->model, layout);
        prob.jumps_adj.reserve(prob.jumps.size());
        for (const auto &l : prob.jumps)
            prob.jumps_adj.push_back(SparseComplexMatrix(l.adjoint()));
    }

    prob.g = Complex(0.0, -1.0) * h - (0.5 * prob.kt) * ComplexMatrix::Identity(n, n);
    prob.g -= (0.5 * (prob.ks - prob.kt)) * qs_dense; // (kS/2)Qs + (kT/2)Qt collapsed
    for (const auto &l : prob.jumps)
        prob.g -= (0.5 * prob.xi) * ComplexMatrix(l.adjoint() * l);

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> spectral(h, Eigen::EigenvaluesOnly);
    const double h_norm =
        std::max(std::abs(spectral.eigenvalues().minCoeff()),
                 std::abs(spectral.eigenvalues().maxCoeff()));
    const double xi_total = prob.xi * static_cast<double>(prob.jumps.size());
    const double rate_scale = reaction.kS_us + reaction.kT_us + xi_total;
    const double dt0 = options.dt_factor / std::max(h_norm, rate_scale);
    const double t_max = options.t_max_factor / std::min(reaction.kS_us, reaction.kT_us);

    const bool traceless = rho0.trace_class == TraceClass::Traceless;
    const double initial_mass = traceless ? rho0.matrix.norm() : rho0.matrix.trace().real();
    OdeYield result;
    result.dt = dt0;
    if (initial_mass <= 0.0)
        return result;
    const double cutoff_mass = options.trace_cutoff * initial_mass;

    // Factored update applies when there is no dissipator and the state is
    // genuinely low rank (singlet-born states have rank N/4).
    ComplexMatrix x0;
    if (prob.xi == 0.0 && !traceless) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> factor(rho0.matrix);
        const double lam_max = factor.eigenvalues().maxCoeff();
        if (factor.eigenvalues().minCoeff() < -1e-10)
            throw ContractError("singlet_yield_ode: density matrix is not positive");
        Eigen::Index rank = 0;
        for (Eigen::Index i = 0; i < n; ++i)
            if (factor.eigenvalues()(i) > 1e-14 * lam_max)
                ++rank;
        if (rank <= n / 2) {
            x0.resize(n, rank);
            Eigen::Index c = 0;
            for (Eigen::Index i = 0; i < n; ++i)
                if (factor.eigenvalues()(i) > 1e-14 * lam_max)
                    x0.col(c++) =
                        factor.eigenvectors().col(i) * std::sqrt(factor.eigenvalues()(i));
        }
    }

    auto run_once = [&](double dt) {
        if (x0.size() > 0)
            return integrate_factored(prob, x0, dt, cutoff_mass, t_max);
        return integrate_matrix(prob, rho0.matrix, traceless, dt, cutoff_mass, t_max);
    };

    IntegrationOutcome outcome = run_once(dt0);
    double dt = dt0;
    if (options.halving_check) {
        int halvings = 0;
        for (;;) {
            const IntegrationOutcome refined = run_once(0.5 * dt);
            const double residual = std::max(std::abs(refined.ys - outcome.ys),
                                             std::abs(refined.yt - outcome.yt));
            if (residual <= options.halving_tol) {
                outcome = refined;
                dt *= 0.5;
                result.halving_residual = residual;
                break;
            }
            if (++halvings > options.max_halvings)
                throw IntegrationError(
                    "step-halving convergence check failed after max halvings", residual);
            outcome = refined;
            dt *= 0.5;
        }
    }

    result.ys = outcome.ys;
    result.yt = outcome.yt;
    result.t_end = outcome.t_end;
    result.steps = outcome.steps;
    result.dt = dt;
    result.residual_mass = outcome.residual;
    return result;
}

} // namespace spincompass
