#include "spincompass/spin_algebra.hpp"

#include "spincompass/errors.hpp"

#include <cmath>
#include <string>

namespace spincompass {

HilbertLayout::HilbertLayout(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.size() < 2)
        throw ValidationError("HilbertLayout: need at least the two electron sites");
    if (dims_[0] != 2 || dims_[1] != 2)
        throw ValidationError("HilbertLayout: electron sites must have dimension 2");
    total_ = 1;
    for (int d : dims_) {
        if (d < 2)
            throw ValidationError("HilbertLayout: site dimension must be >= 2, got " +
                                  std::to_string(d));
        total_ *= d;
    }
}

SpinOperatorTriple spin_operators(int multiplicity) {
    if (multiplicity < 2)
        throw ValidationError("spin_operators: multiplicity must be >= 2, got " +
                              std::to_string(multiplicity));
    const int d = multiplicity;
    const double s = 0.5 * (d - 1);

    ComplexMatrix sz = ComplexMatrix::Zero(d, d);
    ComplexMatrix sp = ComplexMatrix::Zero(d, d); // raising operator S+
    for (int i = 0; i < d; ++i) {
        const double m = s - i;
        sz(i, i) = m;
        if (i >= 1)
            sp(i - 1, i) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
    }
    const ComplexMatrix sm = sp.adjoint();

    SpinOperatorTriple ops;
    ops.sx = 0.5 * (sp + sm);
    ops.sy = Complex(0.0, -0.5) * (sp - sm);
    ops.sz = std::move(sz);
    return ops;
}

namespace {

// Product of site dimensions over [from, to).
Eigen::Index dim_product(const HilbertLayout &layout, int from, int to) {
    Eigen::Index p = 1;
    for (int s = from; s < to; ++s)
        p *= layout.dim(s);
    return p;
}

} // namespace

ComplexMatrix embed(const ComplexMatrix &local_op, int site, const HilbertLayout &layout) {
    if (site < 0 || site >= layout.site_count())
        throw ValidationError("embed: site index out of range");
    const int d = layout.dim(site);
    if (local_op.rows() != d || local_op.cols() != d)
        throw ValidationError("embed: operator dimension " + std::to_string(local_op.rows()) +
                              " does not match site dimension " + std::to_string(d));

    const Eigen::Index pre = dim_product(layout, 0, site);
    const Eigen::Index suf = dim_product(layout, site + 1, layout.site_count());
    const Eigen::Index n = layout.total_dim();

    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (Eigen::Index p = 0; p < pre; ++p)
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                const Complex v = local_op(a, b);
                if (v == Complex(0.0, 0.0))
                    continue;
                const Eigen::Index row0 = (p * d + a) * suf;
                const Eigen::Index col0 = (p * d + b) * suf;
                for (Eigen::Index q = 0; q < suf; ++q)
                    out(row0 + q, col0 + q) = v;
            }
    return out;
}

ComplexMatrix embed_two(const ComplexMatrix &pair_op, int site_a, int site_b,
                        const HilbertLayout &layout) {
    if (site_a < 0 || site_b < 0 || site_a >= layout.site_count() ||
        site_b >= layout.site_count() || site_a == site_b)
        throw ValidationError("embed_two: invalid site pair");
    if (site_a > site_b)
        throw ValidationError("embed_two: sites must be given in layout order");
    const int da = layout.dim(site_a);
    const int db = layout.dim(site_b);
    if (pair_op.rows() != da * db || pair_op.cols() != da * db)
        throw ValidationError("embed_two: operator dimension does not match the site pair");

    const Eigen::Index pre = dim_product(layout, 0, site_a);
    const Eigen::Index mid = dim_product(layout, site_a + 1, site_b);
    const Eigen::Index suf = dim_product(layout, site_b + 1, layout.site_count());
    const Eigen::Index n = layout.total_dim();

    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (Eigen::Index p = 0; p < pre; ++p)
        for (int a = 0; a < da; ++a)
            for (int a2 = 0; a2 < da; ++a2)
                for (Eigen::Index m = 0; m < mid; ++m)
                    for (int b = 0; b < db; ++b)
                        for (int b2 = 0; b2 < db; ++b2) {
                            const Complex v = pair_op(a * db + b, a2 * db + b2);
                            if (v == Complex(0.0, 0.0))
                                continue;
                            const Eigen::Index row0 = (((p * da + a) * mid + m) * db + b) * suf;
                            const Eigen::Index col0 = (((p * da + a2) * mid + m) * db + b2) * suf;
                            for (Eigen::Index q = 0; q < suf; ++q)
                                out(row0 + q, col0 + q) = v;
                        }
    return out;
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

ComplexMatrix singlet_projector(const HilbertLayout &layout) {
    // Electron-pair basis |m_D m_A| ordered aa, ab, ba, bb.
    ComplexMatrix s4 = ComplexMatrix::Zero(4, 4);
    s4(1, 1) = 0.5;
    s4(2, 2) = 0.5;
    s4(1, 2) = -0.5;
    s4(2, 1) = -0.5;
    return embed_two(s4, 0, 1, layout);
}

} // namespace spincompass
