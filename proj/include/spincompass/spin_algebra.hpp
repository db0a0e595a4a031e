#ifndef SPINCOMPASS_SPIN_ALGEBRA_HPP
#define SPINCOMPASS_SPIN_ALGEBRA_HPP

#include <Eigen/Dense>
#include <vector>

namespace spincompass {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Cartesian angular-momentum matrices for one site, hbar = 1, basis
/// |s,m> ordered m = s down to -s.
struct SpinOperatorTriple {
    ComplexMatrix sx, sy, sz;
};

/// Ordered site dimensions of the joint Hilbert space. Sites 0 and 1 are
/// the two electrons (dimension 2, radical D first, radical A second);
/// nuclear sites follow.
class HilbertLayout {
  public:
    explicit HilbertLayout(std::vector<int> dims);

    int site_count() const { return static_cast<int>(dims_.size()); }
    int dim(int site) const { return dims_.at(static_cast<std::size_t>(site)); }
    Eigen::Index total_dim() const { return total_; }
    const std::vector<int> &dims() const { return dims_; }

  private:
    std::vector<int> dims_;
    Eigen::Index total_;
};

/// Angular-momentum matrices for a site of the given multiplicity d >= 2
/// (spin s = (d-1)/2).
SpinOperatorTriple spin_operators(int multiplicity);

/// Lift a local operator to the joint space: identity on every other site.
ComplexMatrix embed(const ComplexMatrix &local_op, int site, const HilbertLayout &layout);

/// Lift an operator acting on the ordered pair (site_a, site_b), given in
/// the d_a x d_b product basis with site_a the slower index.
ComplexMatrix embed_two(const ComplexMatrix &pair_op, int site_a, int site_b,
                        const HilbertLayout &layout);

/// |S><S| (x) Identity(nuclear), with |S> = (|ab> - |ba>)/sqrt(2) on the
/// two electron sites. Idempotent, trace N/4.
ComplexMatrix singlet_projector(const HilbertLayout &layout);

/// Kronecker product, a slower index.
ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);

} // namespace spincompass

#endif
