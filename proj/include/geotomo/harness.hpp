#pragma once

#include <map>
#include <optional>
#include <string>

#include "geotomo/algebraic.hpp"
#include "geotomo/convexrec.hpp"
#include "geotomo/metrics.hpp"
#include "geotomo/noise.hpp"
#include "geotomo/phantoms.hpp"

namespace geotomo {

/// Named tilt schedules of the simulation study, or an explicit angle list.
TiltSchedule named_schedule(const std::string& name);

/// Per-algorithm options; fields unused by an algorithm are ignored.
struct AlgorithmOptions {
    SirtConfig sirt;
    BartConfig bart;
    DartConfig dart;
    GkxrConfig gkxr;
    NgonConfig ngon;
    double shadow_threshold = 0.0;  // T for extract_shadows
};

struct ExperimentConfig {
    std::vector<int> phantoms{1};
    std::vector<std::string> algorithms{"sirt", "bart", "dart", "gkxr", "ufbp", "mpw", "2ngon"};
    std::vector<std::string> schedules{"S_140_1"};
    std::vector<double> sigmas{0.0};
    int trials = 20;  // desk-scale default; the full study used 100
    uint64_t base_seed = 20240901;
    std::string out_dir;
    int workers = 0;  // 0: hardware concurrency
    bool save_images = false;
    int size = 512;
    int hires_factor = 4;
    AlgorithmOptions options;
};

struct TrialReport {
    int phantom = 0;
    std::string algorithm;
    std::string schedule;
    double sigma = 0.0;
    int trial = 0;
    uint64_t seed = 0;
    std::string status;  // ok | no_reconstruction:<reason> | error:<message>
    long long delta_s = 0;
    long long delta_h = 0;
    double wall_time_ms = 0.0;

    bool ok() const { return status == "ok"; }
};

struct CellSummary {
    int phantom = 0;
    std::string algorithm;
    std::string schedule;
    double sigma = 0.0;
    int n_trials = 0;
    int n_ok = 0;
    int n_no_reconstruction = 0;
    int n_error = 0;
    double mean_delta_s = 0.0;
    double std_delta_s = 0.0;
    double mean_delta_h = 0.0;
    double std_delta_h = 0.0;
    double mean_wall_time_ms = 0.0;
};

struct ExperimentResult {
    std::vector<TrialReport> trials;
    std::vector<CellSummary> summary;

    const CellSummary* find(int phantom, const std::string& algo, const std::string& schedule,
                            double sigma) const;
};

/// Simulated measurement data for one trial: the phantom is rasterized at
/// hires_factor times the reconstruction resolution, projected, perturbed by
/// sigma-noise at that resolution, binned back down by the factor, and
/// rescaled by 1/factor^2 so projection values count reconstruction-scale
/// pixels (object gray level 1).
Sinogram generate_sinogram(const PhantomSpec& phantom, const TiltSchedule& schedule, double sigma,
                           uint64_t seed, int size = 512, int hires_factor = 4);

/// Noise-free high-resolution projection of the phantom (the cacheable part
/// of generate_sinogram).
Sinogram project_hires(const PhantomSpec& phantom, const TiltSchedule& schedule, int size = 512,
                       int hires_factor = 4);

/// Noise + binning + rescaling applied to a high-resolution projection.
Sinogram degrade_sinogram(const Sinogram& hires, double sigma, uint64_t seed, int hires_factor);

/// Reconstruction outcome of one algorithm run.
struct Reconstruction {
    PixelSet mask;                          // reconstruction-scale pixel set
    std::optional<ConvexPolygon> polygon;   // object-based algorithms only
    std::string no_reconstruction_reason;   // non-empty: deliberate refusal
};

/// Dispatch by algorithm name: sirt | bart | dart | gkxr | ufbp | mpw | 2ngon.
/// `seed` drives the seeded reconstructors (DART fixing, GKXR annealing).
Reconstruction reconstruct(const std::string& algorithm, const Sinogram& sino,
                           const AlgorithmOptions& options, uint64_t seed);

/// Deterministic per-trial seed.
uint64_t trial_seed(uint64_t base, int phantom, const std::string& algorithm,
                    const std::string& schedule, double sigma, int trial);

/// One seeded trial: generate, reconstruct, score against the ground truth.
TrialReport run_single_trial(int phantom, const std::string& algorithm,
                             const std::string& schedule, double sigma, int trial,
                             const ExperimentConfig& cfg);

/// The full benchmark grid. Trials are pre-seeded and independent, so the
/// worker count never changes any output byte. When cfg.out_dir is set,
/// trials.csv and summary.csv (and per-trial images with save_images) are
/// written there.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Writes/reads the CSV artifacts.
void write_trials_csv(const std::string& path, const std::vector<TrialReport>& trials);
void write_summary_csv(const std::string& path, const std::vector<CellSummary>& summary);
std::vector<TrialReport> read_trials_csv(const std::string& path);

/// Summary statistics recomputed from trial rows (mean/std over ok trials).
std::vector<CellSummary> summarize(const std::vector<TrialReport>& trials);

struct StackSliceReport {
    int slice = 0;
    std::string status;
    std::string polygon_csv;  // written output paths, empty when not written
    std::string image_pgm;
};

/// Slice-by-slice reconstruction of a directory of slice_%04d.csv sinograms.
/// Shadow-based algorithms share one cross-slice shadow extraction (with the
/// morphological opening over neighboring slices when enabled). Per-slice
/// failures are recorded and the stack continues. Writes one polygon CSV/PGM
/// per slice plus manifest.csv into out_dir.
std::vector<StackSliceReport> run_stack(const std::string& dir, const std::string& algorithm,
                                        const ExperimentConfig& cfg, const std::string& out_dir,
                                        bool cross_slice_opening = true);

/// L2 norm of A*raster(reconstruction) - b at the reconstruction resolution.
double residual_norm(const Sinogram& sino, const PixelSet& reconstruction);

}  // namespace geotomo
