#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sdfshadow/pipeline.hpp"

namespace sdfshadow {

/// One benchmark or experiment configuration. Loaded from JSON; every key is
/// optional and falls back to the value below.
struct Scenario {
    std::string id = "default";
    std::string scene = "sphere";
    std::string size = "M";           // S, M or L; overridden by explicit dims
    std::optional<Dims> coarse_dims;
    std::optional<Dims> fine_dims;
    int rays_per_texel = 5;           // x
    double mask_distance = 0.1;       // d; "inf" in JSON for an unbounded mask
    double alpha = 0.95;
    std::uint64_t frames = 10;
    bool animate = true;
    double light_angle = 0.0;         // 0 keeps the scene default
    std::optional<double> beta;
    double bias = kDefaultBias;
    std::uint64_t seed = 1;
    int repeats = 5;                  // timing repeats per frame, median reported
    bool render = true;               // time the lighting pass each frame
    int image_width = 0;              // 0 keeps the scene camera size
    int image_height = 0;
    std::string output_dir;           // empty: no artifacts

    Dims coarse() const;
    Dims fine() const;
    PipelineConfig pipeline_config() const;
    Scene build_scene(const std::string& asset_dir = {}) const;
    void validate() const;  // throws ConfigError / UsageError
};

Scenario scenario_from_json(const std::string& text);
Scenario load_scenario(const std::string& path);
std::string scenario_to_json(const Scenario& s);

/// Timing series for one scenario.
struct ScenarioRun {
    Scenario scenario;
    std::vector<PassTimings> frames;
    std::size_t worker_count = 1;

    /// Median over frames (skipping frame 0 when there are others).
    PassTimings typical() const;
};

/// Runs all frames. Each frame-pass is timed `repeats` times on copies of the
/// pipeline state and the median kept. Non-timing columns are deterministic.
/// Writes final fields, image and slice into output_dir when set.
ScenarioRun run_scenario(const Scenario& s, const std::string& asset_dir = {});

/// CSV with header scenario_id,frame,pass,duration_ns,masked_texels,rays_traced
/// and one row per frame per pass (V, JF, RT, DL).
void write_csv_header(std::ostream& out);
void write_csv(std::ostream& out, const ScenarioRun& run);

struct TrendVerdict {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct TrendRow {
    std::string scenario_id;
    double knob_value = 0;
    std::size_t cells = 0;
    std::size_t masked_texels = 0;
    std::size_t rays_traced = 0;
    std::int64_t flood_ns = 0;
    std::int64_t sample_ns = 0;
};

struct TrendReport {
    std::string knob;  // "x", "d" or "size"
    std::vector<TrendRow> rows;
    std::vector<TrendVerdict> verdicts;

    bool all_pass() const;
    void print(std::ostream& out) const;
};

/// Relative tolerance on RT cost against a straight-line fit in x (and on the x=10 / x=5 ratio).
inline constexpr double kLinearTolerance = 0.30;

/// Orders the runs by the one knob that differs between them and checks the
/// expected orderings. Throws ConfigError if fewer than two runs are given or
/// if more than one knob varies.
TrendReport trend_report(const std::vector<ScenarioRun>& runs);

/// Stale-value decay measured on an animated scenario.
struct GhostingConfig {
    Scenario scenario;
    double min_gap = 0.02;      // smallest stale gap tracked
    double slack = 0.10;        // relative slack on the envelope
    double abs_tolerance = 1e-5;
};

struct GhostingAge {
    int age = 0;                // frames since the texel's coarse value settled
    std::size_t texels = 0;
    double mean_deficit_ratio = 0;  // mean deficit / initial gap
    double envelope = 0;            // alpha^(age + 1)
    double mean_oracle_error = 0;   // mean |fine - exact distance|
};

struct GhostingReport {
    std::vector<GhostingAge> curve;
    std::size_t tracked_texels = 0;
    std::size_t excluded_inside = 0;     // resolved sign went negative after settling
    std::size_t envelope_checks = 0;
    std::size_t envelope_violations = 0;
    double worst_envelope_ratio = 0;     // max deficit / (alpha^(k+1) * gap)
    std::size_t immediate_checks = 0;
    std::size_t immediate_violations = 0;
    std::optional<int> half_life;        // first age whose mean ratio <= 0.5

    void print(std::ostream& out) const;
};

/// Texels whose coarse value rose when the moving object left them are
/// tracked from the frame their coarse value last changed. Their deficit
/// min(c, r) - f must stay within (1 + slack) * alpha^(k+1) * gap, and every
/// texel with c > d must equal c in every frame.
GhostingReport ghosting_experiment(const GhostingConfig& config, const std::string& asset_dir = {});

}  // namespace sdfshadow
