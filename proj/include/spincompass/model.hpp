#ifndef SPINCOMPASS_MODEL_HPP
#define SPINCOMPASS_MODEL_HPP

#include "spincompass/spin_algebra.hpp"
#include "spincompass/state.hpp"

#include <optional>
#include <string>
#include <vector>

namespace spincompass {

enum class Radical { D, A };

/// One nuclear spin: multiplicity (2 for 1H, 3 for 14N or 2H) and its 3x3
/// hyperfine tensor in mT. Anisotropic, non-symmetric tensors are allowed.
struct Nucleus {
    std::string label;
    Radical radical = Radical::D;
    int multiplicity = 2;
    Eigen::Matrix3d tensor_mT = Eigen::Matrix3d::Zero();
};

/// The molecule: two electrons plus the declared nuclei. The joint layout
/// orders sites as (electron D, electron A, nuclei of D in declaration
/// order, nuclei of A in declaration order).
class RadicalPairSystem {
  public:
    explicit RadicalPairSystem(std::vector<Nucleus> nuclei);

    const std::vector<Nucleus> &nuclei() const { return nuclei_; }
    const HilbertLayout &layout() const { return layout_; }
    /// Layout site of nucleus `idx` (declaration order).
    int nucleus_site(int idx) const { return sites_.at(static_cast<std::size_t>(idx)); }

  private:
    std::vector<Nucleus> nuclei_;
    std::vector<int> sites_;
    HilbertLayout layout_;
};

/// Magnetic field: magnitude in uT, direction in spherical angles.
struct FieldSpec {
    double b_uT = 50.0;
    double theta_rad = 0.0;
    double phi_rad = 0.0;
};

enum class NoiseModel { LocalDephasing, Relaxation, SingletTripletDephasing };

struct NoiseSpec {
    NoiseModel model = NoiseModel::LocalDephasing;
    double xi_us = 0.0; // common rate of all jump operators, us^-1
};

struct ReactionSpec {
    double kS_us = 0.5;
    double kT_us = 0.5;
    std::optional<NoiseSpec> noise;
};

enum class ElectronState { Singlet, TripletPlus, TripletZero, TripletMinus, Mixed };

/// Per-nucleus thermal-like polarization exp(beta n.I)/Z along a unit axis.
/// beta = 0 is fully depolarized.
struct NuclearPolarizationSpec {
    std::string label;
    Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
    double beta = 0.0;
};

struct InitialStateSpec {
    ElectronState electron = ElectronState::Singlet;
    std::vector<NuclearPolarizationSpec> polarizations; // unlisted nuclei depolarized
};

struct ModelConfig {
    RadicalPairSystem system;
    FieldSpec field;
    ReactionSpec reaction;
    InitialStateSpec initial;
};

const char *to_string(NoiseModel model);
const char *to_string(ElectronState state);

/// Parse and validate a JSON config document. Unknown keys are rejected;
/// absent keys get the standard defaults (b = 50 uT along z, kS = kT =
/// 0.5 us^-1, singlet-born electrons, depolarized nuclei).
ModelConfig parse_config(const std::string &text);

/// Canonical JSON serialization; parse_config(serialize_config(c)) yields
/// an identical model.
std::string serialize_config(const ModelConfig &config);

/// rho0 = (electron density matrix) (x) product of nuclear density
/// matrices, in the product basis.
SpinState build_initial_state(const RadicalPairSystem &system, const InitialStateSpec &spec);

/// Density matrix exp(beta axis.I)/Z for one site of the given multiplicity.
ComplexMatrix polarized_nuclear_state(int multiplicity, const Eigen::Vector3d &axis, double beta);

} // namespace spincompass

#endif
