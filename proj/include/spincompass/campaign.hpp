#ifndef SPINCOMPASS_CAMPAIGN_HPP
#define SPINCOMPASS_CAMPAIGN_HPP

#include "spincompass/metrics.hpp"
#include "spincompass/model.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace spincompass {

enum class CampaignKind { RandomHyperfine, NuclearPolarization, NoiseSweep, Deuteration };

const char *to_string(CampaignKind kind);

struct CampaignSpec {
    CampaignKind kind = CampaignKind::RandomHyperfine;
    long n_samples = 500;
    std::uint64_t seed = 0;
    int nucleus_count_min = 2;
    int nucleus_count_max = 3;
    double tensor_scale_mT = 0.5;
    double reference_probe_fraction = 0.0;
    double beta_max = 3.0; // nuclear-polarization sampling range
    std::vector<double> xi_values_us;
    std::vector<NoiseModel> models;
    std::optional<ModelConfig> base_config; // required for all kinds but RandomHyperfine
    int grid_theta = 19;
    int grid_phi = 36;
    std::vector<std::vector<std::string>> mutations; // Deuteration label sets
};

struct CampaignRecord {
    long sample_id = 0;
    std::uint64_t seed = 0;
    std::string config_digest;
    std::string model = "none";
    double xi_us = 0.0;
    double coherence = 0.0;   // C
    double sensitivity = 0.0; // D_s
    double wall_ms = 0.0;     // measured; reported in metadata, not the CSV
    int nucleus_count = 0;
    bool reference_probe = false;
    bool failed = false;
    std::string error;
};

struct BinnedMean {
    double center = 0.0;
    double mean = 0.0;
    long count = 0;
};

struct CampaignSummary {
    long n_ok = 0;
    long n_failed = 0;
    double spearman = 0.0;
    std::vector<BinnedMean> bins;
    double collapse_deviation = 0.0; // noise sweeps only
    double total_wall_ms = 0.0;
};

/// Random molecule: multiplicities drawn from {2,3}, tensor entries iid
/// uniform on [-scale, scale] mT; all nuclei on radical D when
/// reference_probe, otherwise split uniformly between the radicals.
RadicalPairSystem random_hyperfine_system(std::uint64_t seed, int nucleus_count,
                                          double tensor_scale_mT, bool reference_probe);
RadicalPairSystem random_hyperfine_system(std::mt19937_64 &rng, int nucleus_count,
                                          double tensor_scale_mT, bool reference_probe);

/// Replace the named protons by deuterons: multiplicity 2 -> 3, tensor
/// scaled by gamma(2H)/gamma(1H).
RadicalPairSystem deuterate(const RadicalPairSystem &system,
                            const std::vector<std::string> &labels);

/// (C, D_s) per sample for the RandomHyperfine / NuclearPolarization /
/// Deuteration kinds. Per-sample failures are recorded and skipped.
std::vector<CampaignRecord> run_scatter_campaign(const CampaignSpec &spec, int n_threads = 1);

/// (C, D_s) per (model, xi): D_s from the master-equation yield map, C by
/// propagating the coherent part under the same generator at b = 0.
std::vector<CampaignRecord> run_noise_sweep(const ModelConfig &base,
                                            const std::vector<NoiseModel> &models,
                                            const std::vector<double> &xi_values_us,
                                            const AngleGrid &grid, std::uint64_t seed,
                                            int n_threads = 1);

/// Dispatch on spec.kind.
std::vector<CampaignRecord> run_campaign(const CampaignSpec &spec, int n_threads = 1);

CampaignSpec parse_campaign_spec(const std::string &text);
std::string serialize_campaign_spec(const CampaignSpec &spec);

/// Rank correlation with average ranks on ties.
double spearman_rank_correlation(const std::vector<double> &x, const std::vector<double> &y);

/// Mean D_s per C-bin over [min C, max C]; empty bins are dropped.
std::vector<BinnedMean> binned_means(const std::vector<CampaignRecord> &records, int n_bins);

/// Maximum pairwise deviation of the per-model D_s(C) piecewise-linear
/// curves over their common C interval, normalized by the overall D_s
/// range. Zero when fewer than two models are present.
double collapse_deviation(const std::vector<CampaignRecord> &records);

CampaignSummary summarize_campaign(const CampaignSpec &spec,
                                   const std::vector<CampaignRecord> &records);

/// CSV with header sample_id,seed,config_digest,model,xi_us,C,Ds,wall_ms.
/// Content is byte-reproducible for a fixed seed; per-sample wall time is
/// reported in the metadata sidecar instead of the CSV.
void write_campaign_csv(std::ostream &out, const std::vector<CampaignRecord> &records);

/// JSON sidecar: spec echo, sampling conventions, code version, summary,
/// timings, and per-sample failures.
std::string campaign_metadata_json(const CampaignSpec &spec,
                                   const std::vector<CampaignRecord> &records,
                                   const CampaignSummary &summary);

} // namespace spincompass

#endif
