#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "personrank/rank.hpp"
#include "personrank/types.hpp"

namespace personrank {

struct PredictionRecord {
    std::string scene_id;
    int predicted_index = 0;
    double predicted_score = 0.0; // confidence ordering detections across scenes
    std::optional<int> gt_index;
    std::optional<std::string> category;
};

/// values[k] = fraction of scenes whose annotated person is within the top
/// k+1 ranks. Monotone nondecreasing; reaches 1 at the largest scene size.
struct CmcCurve {
    std::vector<double> values;
};

/// All-point average precision over one category's records: sort by
/// descending confidence (ties by ascending scene_id), a record is correct
/// iff predicted_index == gt_index, AP = mean precision at the correct hits
/// (0 when none). Throws EmptyCategory if no record matches the category.
double average_precision(const std::vector<PredictionRecord>& records, const std::string& category);

CmcCurve cmc(const std::vector<ScoreVector>& rankings, const std::vector<int>& gt_indices,
             int k_max);

/// Person closest to the image center; ties go to the lowest index.
int baseline_most_center(const Scene& scene);

/// Person with the largest box area; ties go to the lowest index.
int baseline_max_scale(const Scene& scene);

struct EvalConfig {
    SolveConfig solve;
    FeatureConfig features;
    SelectBy select_by = SelectBy::fused_solve;
    bool with_baselines = false;
};

struct MethodMetrics {
    std::map<std::string, double> per_category_ap;
    double map_category_mean = 0.0;
    double ap_pooled = 0.0; // single AP over all records regardless of category
    double top1_accuracy = 0.0;
    CmcCurve cmc;
};

struct EvalReport {
    MethodMetrics model;
    std::optional<MethodMetrics> most_center;
    std::optional<MethodMetrics> max_scale;
    int num_scenes = 0;

    /// Deterministic serialization: two runs on identical inputs produce
    /// byte-identical text.
    std::string to_json() const;
    std::string cmc_csv() const; // "rank,match_rate" rows for the model curve
};

/// Ranks every scene, scores the predictions with mAP/CMC/top-1 and, when
/// requested, the two geometry baselines on the same scenes. Scenes must all
/// carry a ground-truth flag.
EvalReport run_eval(const std::vector<Scene>& scenes, const WeightSet& weights,
                    const EvalConfig& cfg);

} // namespace personrank
