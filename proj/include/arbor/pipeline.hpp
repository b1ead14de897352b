#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arbor/config.hpp"
#include "arbor/image.hpp"

namespace arbor {

/// Exit codes shared by every command: 0 success, 1 degenerate-result
/// warning escalated by --strict, 2 invalid input.
inline constexpr int kExitOk = 0;
inline constexpr int kExitWarning = 1;
inline constexpr int kExitInvalid = 2;

/// Synthetic disk target used by the ablation harness and smoke runs: a
/// centered disk of the given radius fraction, gray on white.
Image make_disk_image(int size, double radius_frac, double inside_gray = 0.35);
Mask make_disk_mask(int size, double radius_frac);

/// Write-then-rename so outputs appear atomically.
void write_text_atomic(const std::string& path, const std::string& content);

/// Worker count resolution: explicit flag, else ARBOR_JOBS, else 1.
int resolve_jobs(int flag_value);

struct CurateOptions {
    std::string in_dir;
    double threshold = 1e-4;
    int patch = 16;
    std::string out_path;
    int jobs = 0;
    bool strict = false;
};
int cmd_curate(const CurateOptions& opts);

struct ReconstructOptions {
    std::string image_path;
    std::string mask_path;
    std::string genus = "default";
    std::string out_dir;
    bool strict = false;
};
int cmd_reconstruct(const PipelineConfig& cfg, const ReconstructOptions& opts);

struct GrowOptions {
    std::string checkpoint_path;  // exactly one of checkpoint/occupancy
    std::string occupancy_path;
    std::string genus = "Magnolia";
    std::string obstacles_path;
    std::vector<int> snapshots;  // empty: plain grow
    std::string out_dir;
    bool strict = false;
};
int cmd_grow(const PipelineConfig& cfg, const GrowOptions& opts);
int cmd_simulate(const PipelineConfig& cfg, const GrowOptions& opts);

struct MeasureOptions {
    std::string skeleton_path;
    std::string leaves_path;     // optional pre-made leaf set
    double leaf_density = -1.0;  // < 0: config default
    std::string out_path;
    bool strict = false;
};
int cmd_measure(const PipelineConfig& cfg, const MeasureOptions& opts);

struct EvaluateOptions {
    std::vector<std::string> skeleton_paths;
    std::vector<std::string> reference_paths;  // empty, one shared, or 1:1
    std::string out_path;
    int jobs = 0;
    bool strict = false;
};
int cmd_evaluate(const PipelineConfig& cfg, const EvaluateOptions& opts);

struct AblateOptions {
    std::string out_path;
    int iterations = 300;
    int grid = 32;
    int render = 64;
    bool strict = false;
};
/// Disk-fit reconstruction sweep over alpha/beta ratios {0.01, 0.1, 1, 10}
/// (beta fixed at 1), one report row per ratio.
int cmd_ablate(const PipelineConfig& cfg, const AblateOptions& opts);

}  // namespace arbor
