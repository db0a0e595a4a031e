#include "spincompass/model.hpp"

#include "spincompass/constants.hpp"
#include "spincompass/errors.hpp"
#include "spincompass/util.hpp"

#include <json.hpp>

#include <cmath>
#include <set>

namespace spincompass {

using nlohmann::json;

RadicalPairSystem::RadicalPairSystem(std::vector<Nucleus> nuclei)
    : nuclei_(std::move(nuclei)),
      sites_(),
      layout_([&] {
          std::vector<int> dims = {2, 2};
          for (const Nucleus &n : nuclei_)
              if (n.radical == Radical::D)
                  dims.push_back(n.multiplicity);
          for (const Nucleus &n : nuclei_)
              if (n.radical == Radical::A)
                  dims.push_back(n.multiplicity);
          return HilbertLayout(dims);
      }()) {
    std::set<std::string> labels;
    for (const Nucleus &n : nuclei_) {
        if (n.multiplicity < 2)
            throw ValidationError("nucleus '" + n.label + "': multiplicity must be >= 2");
        if (!n.tensor_mT.allFinite())
            throw ValidationError("nucleus '" + n.label + "': tensor entries must be finite");
        if (!labels.insert(n.label).second)
            throw ValidationError("duplicate nucleus label '" + n.label + "'");
    }
    // Site assignment mirrors the layout: D nuclei first, then A nuclei.
    sites_.resize(nuclei_.size());
    int next = 2;
    for (std::size_t i = 0; i < nuclei_.size(); ++i)
        if (nuclei_[i].radical == Radical::D)
            sites_[i] = next++;
    for (std::size_t i = 0; i < nuclei_.size(); ++i)
        if (nuclei_[i].radical == Radical::A)
            sites_[i] = next++;
}

const char *to_string(NoiseModel model) {
    switch (model) {
    case NoiseModel::LocalDephasing:
        return "local_dephasing";
    case NoiseModel::Relaxation:
        return "relaxation";
    case NoiseModel::SingletTripletDephasing:
        return "singlet_triplet_dephasing";
    }
    return "?";
}

const char *to_string(ElectronState state) {
    switch (state) {
    case ElectronState::Singlet:
        return "singlet";
    case ElectronState::TripletPlus:
        return "triplet_plus";
    case ElectronState::TripletZero:
        return "triplet_zero";
    case ElectronState::TripletMinus:
        return "triplet_minus";
    case ElectronState::Mixed:
        return "mixed";
    }
    return "?";
}

namespace {

NoiseModel noise_model_from_string(const std::string &s, const std::string &path) {
    if (s == "local_dephasing")
        return NoiseModel::LocalDephasing;
    if (s == "relaxation")
        return NoiseModel::Relaxation;
    if (s == "singlet_triplet_dephasing")
        return NoiseModel::SingletTripletDephasing;
    throw ParseError(path + ": unknown noise model '" + s + "'");
}

ElectronState electron_state_from_string(const std::string &s, const std::string &path) {
    if (s == "singlet")
        return ElectronState::Singlet;
    if (s == "triplet_plus")
        return ElectronState::TripletPlus;
    if (s == "triplet_zero")
        return ElectronState::TripletZero;
    if (s == "triplet_minus")
        return ElectronState::TripletMinus;
    if (s == "mixed")
        return ElectronState::Mixed;
    throw ParseError(path + ": unknown electron state '" + s + "'");
}

void reject_unknown_keys(const json &obj, const std::set<std::string> &allowed,
                         const std::string &path) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ParseError(path + ": unknown key '" + it.key() + "'");
}

double require_number(const json &obj, const std::string &key, const std::string &path) {
    if (!obj.contains(key))
        throw ParseError(path + ": missing key '" + key + "'");
    if (!obj[key].is_number())
        throw ParseError(path + "." + key + ": expected a number");
    return obj[key].get<double>();
}

} // namespace

ModelConfig parse_config(const std::string &text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    if (!doc.is_object())
        throw ParseError("config: top level must be an object");
    reject_unknown_keys(doc, {"nuclei", "field", "reaction", "initial"}, "config");

    std::vector<Nucleus> nuclei;
    if (doc.contains("nuclei")) {
        if (!doc["nuclei"].is_array())
            throw ParseError("nuclei: expected an array");
        int idx = 0;
        for (const json &jn : doc["nuclei"]) {
            const std::string path = "nuclei[" + std::to_string(idx) + "]";
            if (!jn.is_object())
                throw ParseError(path + ": expected an object");
            reject_unknown_keys(jn, {"label", "radical", "multiplicity", "tensor_mT"}, path);
            Nucleus n;
            if (!jn.contains("label") || !jn["label"].is_string())
                throw ParseError(path + ": missing string key 'label'");
            n.label = jn["label"].get<std::string>();
            if (!jn.contains("radical") || !jn["radical"].is_string())
                throw ParseError(path + ": missing string key 'radical'");
            const std::string rad = jn["radical"].get<std::string>();
            if (rad == "D")
                n.radical = Radical::D;
            else if (rad == "A")
                n.radical = Radical::A;
            else
                throw ParseError(path + ".radical: expected \"D\" or \"A\"");
            const double mult = require_number(jn, "multiplicity", path);
            n.multiplicity = static_cast<int>(mult);
            if (n.multiplicity != mult || n.multiplicity < 2)
                throw ValidationError(path + ".multiplicity: must be an integer >= 2");
            if (!jn.contains("tensor_mT") || !jn["tensor_mT"].is_array() ||
                jn["tensor_mT"].size() != 9)
                throw ParseError(path + ".tensor_mT: expected 9 numbers (row-major)");
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) {
                    const json &v = jn["tensor_mT"][static_cast<std::size_t>(3 * r + c)];
                    if (!v.is_number())
                        throw ParseError(path + ".tensor_mT: expected 9 numbers");
                    n.tensor_mT(r, c) = v.get<double>();
                }
            nuclei.push_back(std::move(n));
            ++idx;
        }
    }

    FieldSpec field;
    if (doc.contains("field")) {
        const json &jf = doc["field"];
        if (!jf.is_object())
            throw ParseError("field: expected an object");
        reject_unknown_keys(jf, {"b_uT", "theta_rad", "phi_rad"}, "field");
        if (jf.contains("b_uT"))
            field.b_uT = require_number(jf, "b_uT", "field");
        if (jf.contains("theta_rad"))
            field.theta_rad = require_number(jf, "theta_rad", "field");
        if (jf.contains("phi_rad"))
            field.phi_rad = require_number(jf, "phi_rad", "field");
        if (field.b_uT < 0.0)
            throw ValidationError("field.b_uT: must be >= 0");
        if (field.theta_rad < 0.0 || field.theta_rad > M_PI + 1e-12)
            throw ValidationError("field.theta_rad: must lie in [0, pi]");
    }

    ReactionSpec reaction;
    if (doc.contains("reaction")) {
        const json &jr = doc["reaction"];
        if (!jr.is_object())
            throw ParseError("reaction: expected an object");
        reject_unknown_keys(jr, {"kS_us", "kT_us", "noise"}, "reaction");
        if (jr.contains("kS_us"))
            reaction.kS_us = require_number(jr, "kS_us", "reaction");
        if (jr.contains("kT_us"))
            reaction.kT_us = require_number(jr, "kT_us", "reaction");
        if (reaction.kS_us <= 0.0)
            throw ValidationError("reaction.kS_us: must be > 0");
        if (reaction.kT_us <= 0.0)
            throw ValidationError("reaction.kT_us: must be > 0");
        if (jr.contains("noise")) {
            const json &jx = jr["noise"];
            if (!jx.is_object())
                throw ParseError("reaction.noise: expected an object");
            reject_unknown_keys(jx, {"model", "xi_us"}, "reaction.noise");
            if (!jx.contains("model") || !jx["model"].is_string())
                throw ParseError("reaction.noise: missing string key 'model'");
            NoiseSpec noise;
            noise.model = noise_model_from_string(jx["model"].get<std::string>(),
                                                  "reaction.noise.model");
            noise.xi_us = require_number(jx, "xi_us", "reaction.noise");
            if (noise.xi_us < 0.0)
                throw ValidationError("reaction.noise.xi_us: must be >= 0");
            reaction.noise = noise;
        }
    }

    InitialStateSpec initial;
    if (doc.contains("initial")) {
        const json &ji = doc["initial"];
        if (!ji.is_object())
            throw ParseError("initial: expected an object");
        reject_unknown_keys(ji, {"electron", "polarizations"}, "initial");
        if (ji.contains("electron")) {
            if (!ji["electron"].is_string())
                throw ParseError("initial.electron: expected a string");
            initial.electron =
                electron_state_from_string(ji["electron"].get<std::string>(), "initial.electron");
        }
        if (ji.contains("polarizations")) {
            if (!ji["polarizations"].is_array())
                throw ParseError("initial.polarizations: expected an array");
            int idx = 0;
            for (const json &jp : ji["polarizations"]) {
                const std::string path = "initial.polarizations[" + std::to_string(idx) + "]";
                if (!jp.is_object())
                    throw ParseError(path + ": expected an object");
                reject_unknown_keys(jp, {"label", "axis", "beta"}, path);
                NuclearPolarizationSpec p;
                if (!jp.contains("label") || !jp["label"].is_string())
                    throw ParseError(path + ": missing string key 'label'");
                p.label = jp["label"].get<std::string>();
                if (!jp.contains("axis") || !jp["axis"].is_array() || jp["axis"].size() != 3)
                    throw ParseError(path + ".axis: expected 3 numbers");
                for (int c = 0; c < 3; ++c) {
                    const json &v = jp["axis"][static_cast<std::size_t>(c)];
                    if (!v.is_number())
                        throw ParseError(path + ".axis: expected 3 numbers");
                    p.axis(c) = v.get<double>();
                }
                p.beta = require_number(jp, "beta", path);
                initial.polarizations.push_back(std::move(p));
                ++idx;
            }
        }
    }

    ModelConfig config{RadicalPairSystem(std::move(nuclei)), field, reaction, initial};

    // Cross-checks that need the assembled system.
    std::set<std::string> seen;
    for (const NuclearPolarizationSpec &p : config.initial.polarizations) {
        bool found = false;
        for (const Nucleus &n : config.system.nuclei())
            found = found || n.label == p.label;
        if (!found)
            throw ValidationError("initial.polarizations: unknown nucleus label '" + p.label +
                                  "'");
        if (!seen.insert(p.label).second)
            throw ValidationError("initial.polarizations: duplicate label '" + p.label + "'");
    }
    return config;
}

std::string serialize_config(const ModelConfig &config) {
    json doc = json::object();
    doc["nuclei"] = json::array();
    for (const Nucleus &n : config.system.nuclei()) {
        json jn;
        jn["label"] = n.label;
        jn["radical"] = n.radical == Radical::D ? "D" : "A";
        jn["multiplicity"] = n.multiplicity;
        json t = json::array();
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                t.push_back(n.tensor_mT(r, c));
        jn["tensor_mT"] = std::move(t);
        doc["nuclei"].push_back(std::move(jn));
    }
    doc["field"] = {{"b_uT", config.field.b_uT},
                    {"theta_rad", config.field.theta_rad},
                    {"phi_rad", config.field.phi_rad}};
    doc["reaction"] = {{"kS_us", config.reaction.kS_us}, {"kT_us", config.reaction.kT_us}};
    if (config.reaction.noise) {
        doc["reaction"]["noise"] = {{"model", to_string(config.reaction.noise->model)},
                                    {"xi_us", config.reaction.noise->xi_us}};
    }
    doc["initial"] = {{"electron", to_string(config.initial.electron)}};
    if (!config.initial.polarizations.empty()) {
        json arr = json::array();
        for (const NuclearPolarizationSpec &p : config.initial.polarizations) {
            arr.push_back({{"label", p.label},
                           {"axis", {p.axis(0), p.axis(1), p.axis(2)}},
                           {"beta", p.beta}});
        }
        doc["initial"]["polarizations"] = std::move(arr);
    }
    return doc.dump(2) + "\n";
}

ComplexMatrix polarized_nuclear_state(int multiplicity, const Eigen::Vector3d &axis,
                                      double beta) {
    if (std::abs(axis.norm() - 1.0) > 1e-9)
        throw ValidationError("polarization axis must be a unit vector");
    const SpinOperatorTriple ops = spin_operators(multiplicity);
    const ComplexMatrix projection =
        axis(0) * ops.sx + axis(1) * ops.sy + axis(2) * ops.sz;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(projection);
    Eigen::VectorXd w = (beta * solver.eigenvalues().array()).exp();
    ComplexMatrix rho = solver.eigenvectors() * w.asDiagonal().toDenseMatrix().cast<Complex>() *
                        solver.eigenvectors().adjoint();
    rho /= rho.trace().real();
    return 0.5 * (rho + rho.adjoint().eval());
}

SpinState build_initial_state(const RadicalPairSystem &system, const InitialStateSpec &spec) {
    ComplexMatrix electron = ComplexMatrix::Zero(4, 4);
    switch (spec.electron) {
    case ElectronState::Singlet:
        electron(1, 1) = electron(2, 2) = 0.5;
        electron(1, 2) = electron(2, 1) = -0.5;
        break;
    case ElectronState::TripletPlus:
        electron(0, 0) = 1.0;
        break;
    case ElectronState::TripletZero:
        electron(1, 1) = electron(2, 2) = 0.5;
        electron(1, 2) = electron(2, 1) = 0.5;
        break;
    case ElectronState::TripletMinus:
        electron(3, 3) = 1.0;
        break;
    case ElectronState::Mixed:
        electron = 0.25 * ComplexMatrix::Identity(4, 4);
        break;
    }

    // Nuclear factors in site order (D nuclei, then A nuclei).
    const int n_nuclei = static_cast<int>(system.nuclei().size());
    std::vector<int> nucleus_at_site(static_cast<std::size_t>(system.layout().site_count()), -1);
    for (int i = 0; i < n_nuclei; ++i)
        nucleus_at_site[static_cast<std::size_t>(system.nucleus_site(i))] = i;

    ComplexMatrix rho = electron;
    for (int site = 2; site < system.layout().site_count(); ++site) {
        const Nucleus &n = system.nuclei()[static_cast<std::size_t>(nucleus_at_site[site])];
        const NuclearPolarizationSpec *pol = nullptr;
        for (const NuclearPolarizationSpec &p : spec.polarizations)
            if (p.label == n.label)
                pol = &p;
        ComplexMatrix factor;
        if (pol == nullptr || pol->beta == 0.0) {
            factor = ComplexMatrix::Identity(n.multiplicity, n.multiplicity) /
                     static_cast<double>(n.multiplicity);
        } else {
            factor = polarized_nuclear_state(n.multiplicity, pol->axis, pol->beta);
        }
        rho = kron(rho, factor);
    }

    SpinState state{std::move(rho), TraceClass::Density, 0};
    check_state(state, 1e-12);
    return state;
}

} // namespace spincompass
