#include "spincompass/hamiltonian.hpp"

#include "spincompass/constants.hpp"
#include "spincompass/errors.hpp"

#include <atomic>
#include <cmath>

namespace spincompass {

namespace {

std::uint64_t next_eigen_tag() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1);
}

} // namespace

ComplexMatrix build_hyperfine(const RadicalPairSystem &system) {
    const HilbertLayout &layout = system.layout();
    const Eigen::Index n = layout.total_dim();
    ComplexMatrix h = ComplexMatrix::Zero(n, n);

    const SpinOperatorTriple electron = spin_operators(2);
    for (int j = 0; j < static_cast<int>(system.nuclei().size()); ++j) {
        const Nucleus &nuc = system.nuclei()[static_cast<std::size_t>(j)];
        const int electron_site = nuc.radical == Radical::D ? 0 : 1;
        const int nucleus_site = system.nucleus_site(j);
        const SpinOperatorTriple nuclear = spin_operators(nuc.multiplicity);
        const ComplexMatrix *s[3] = {&electron.sx, &electron.sy, &electron.sz};
        const ComplexMatrix *i_ops[3] = {&nuclear.sx, &nuclear.sy, &nuclear.sz};

        const int pair_dim = 2 * nuc.multiplicity;
        ComplexMatrix pair = ComplexMatrix::Zero(pair_dim, pair_dim);
        for (int u = 0; u < 3; ++u)
            for (int v = 0; v < 3; ++v) {
                const double coupling = nuc.tensor_mT(u, v) * constants::kGammaE;
                if (coupling != 0.0)
                    pair += coupling * kron(*s[u], *i_ops[v]);
            }
        h += embed_two(pair, electron_site, nucleus_site, layout);
    }
    return h;
}

ComplexMatrix build_zeeman(const FieldSpec &field, const HilbertLayout &layout) {
    const Eigen::Index n = layout.total_dim();
    if (field.b_uT == 0.0)
        return ComplexMatrix::Zero(n, n);
    const double b_mT = field.b_uT * 1e-3;
    const Eigen::Vector3d dir(std::sin(field.theta_rad) * std::cos(field.phi_rad),
                              std::sin(field.theta_rad) * std::sin(field.phi_rad),
                              std::cos(field.theta_rad));
    const SpinOperatorTriple electron = spin_operators(2);
    const ComplexMatrix local =
        dir(0) * electron.sx + dir(1) * electron.sy + dir(2) * electron.sz;
    const double scale = -constants::kGammaE * b_mT;
    return scale * (embed(local, 0, layout) + embed(local, 1, layout));
}

ComplexMatrix build_total_hamiltonian(const RadicalPairSystem &system, const FieldSpec &field) {
    return build_hyperfine(system) + build_zeeman(field, system.layout());
}

EigenSystem eigendecompose(const ComplexMatrix &hamiltonian, double degeneracy_tol) {
    if (hamiltonian.rows() != hamiltonian.cols())
        throw ContractError("eigendecompose: matrix is not square");
    const double scale = std::max(1.0, hamiltonian.cwiseAbs().maxCoeff());
    if (hermiticity_defect(hamiltonian) > 1e-10 * scale)
        throw ContractError("eigendecompose: input is not Hermitian to 1e-10");

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hamiltonian);
    if (solver.info() != Eigen::Success)
        throw ContractError("eigendecompose: eigensolver failed to converge");

    EigenSystem eig;
    eig.energies = solver.eigenvalues();
    eig.vectors = solver.eigenvectors();
    eig.degeneracy_tol = degeneracy_tol;
    eig.tag = next_eigen_tag();

    // Phase convention: largest-magnitude component real positive.
    for (Eigen::Index c = 0; c < eig.vectors.cols(); ++c) {
        Eigen::Index imax = 0;
        double amax = -1.0;
        for (Eigen::Index r = 0; r < eig.vectors.rows(); ++r) {
            const double a = std::abs(eig.vectors(r, c));
            if (a > amax + 1e-14) {
                amax = a;
                imax = r;
            }
        }
        const Complex pivot = eig.vectors(imax, c);
        if (std::abs(pivot) > 0.0)
            eig.vectors.col(c) *= std::conj(pivot) / std::abs(pivot);
    }
    return eig;
}

std::vector<std::pair<int, int>> degenerate_clusters(const EigenSystem &eig) {
    std::vector<std::pair<int, int>> clusters;
    const int n = static_cast<int>(eig.energies.size());
    int begin = 0;
    for (int i = 1; i <= n; ++i) {
        if (i == n || eig.energies(i) - eig.energies(i - 1) > eig.degeneracy_tol) {
            clusters.emplace_back(begin, i);
            begin = i;
        }
    }
    return clusters;
}

SpinState to_eigenbasis(const SpinState &state, const EigenSystem &eig) {
    if (state.basis_tag == eig.tag)
        return state;
    if (state.basis_tag != 0)
        throw ContractError("to_eigenbasis: state is expressed in a different eigenbasis");
    SpinState out;
    out.matrix = eig.vectors.adjoint() * state.matrix * eig.vectors;
    out.trace_class = state.trace_class;
    out.basis_tag = eig.tag;
    return out;
}

SpinState to_product_basis(const SpinState &state, const EigenSystem &eig) {
    if (state.basis_tag == 0)
        return state;
    if (state.basis_tag != eig.tag)
        throw ContractError("to_product_basis: state/basis tag mismatch");
    SpinState out;
    out.matrix = eig.vectors * state.matrix * eig.vectors.adjoint();
    out.trace_class = state.trace_class;
    out.basis_tag = 0;
    return out;
}

} // namespace spincompass
