#include "personrank/eval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "personrank/errors.hpp"
#include "personrank/features.hpp"

namespace personrank {

using nlohmann::json;

double average_precision(const std::vector<PredictionRecord>& records, const std::string& category) {
    std::vector<const PredictionRecord*> selected;
    for (const auto& r : records) {
        const std::string cat = r.category.value_or("");
        if (cat == category) selected.push_back(&r);
    }
    if (selected.empty())
        throw Error(ErrorCode::EmptyCategory, "no records in category '" + category + "'");
    for (const auto* r : selected)
        if (!r->gt_index)
            throw Error(ErrorCode::MissingGroundTruth, "record '" + r->scene_id + "' lacks gt_index");

    std::stable_sort(selected.begin(), selected.end(), [](const auto* a, const auto* b) {
        if (a->predicted_score != b->predicted_score) return a->predicted_score > b->predicted_score;
        return a->scene_id < b->scene_id;
    });

    double precision_sum = 0.0;
    int correct = 0;
    for (std::size_t rank = 0; rank < selected.size(); ++rank) {
        if (selected[rank]->predicted_index == *selected[rank]->gt_index) {
            ++correct;
            precision_sum += static_cast<double>(correct) / (rank + 1);
        }
    }
    return correct == 0 ? 0.0 : precision_sum / correct;
}

CmcCurve cmc(const std::vector<ScoreVector>& rankings, const std::vector<int>& gt_indices,
             int k_max) {
    if (rankings.size() != gt_indices.size() || rankings.empty())
        throw Error(ErrorCode::MissingGroundTruth, "rankings/gt size mismatch or empty");
    CmcCurve curve;
    curve.values.assign(k_max, 0.0);
    for (std::size_t s = 0; s < rankings.size(); ++s) {
        const auto& order = rankings[s].ranking;
        const auto pos = std::find(order.begin(), order.end(), gt_indices[s]);
        if (pos == order.end())
            throw Error(ErrorCode::MissingGroundTruth,
                        "gt index not present in ranking for scene '" + rankings[s].scene_id + "'");
        const int rank = static_cast<int>(pos - order.begin()); // 0-based
        for (int k = rank; k < k_max; ++k) curve.values[k] += 1.0;
    }
    for (double& v : curve.values) v /= static_cast<double>(rankings.size());
    return curve;
}

int baseline_most_center(const Scene& scene) {
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < scene.person_count(); ++i) {
        const double dx = scene.persons[i].box.center_x() - 0.5 * scene.image_w;
        const double dy = scene.persons[i].box.center_y() - 0.5 * scene.image_h;
        const double dist = std::sqrt(dx * dx + dy * dy);
        if (dist < best_dist) {
            best_dist = dist;
            best = i;
        }
    }
    return best;
}

int baseline_max_scale(const Scene& scene) {
    int best = 0;
    double best_area = -1.0;
    for (int i = 0; i < scene.person_count(); ++i) {
        const double area = scene.persons[i].box.area();
        if (area > best_area) {
            best_area = area;
            best = i;
        }
    }
    return best;
}

namespace {

MethodMetrics compute_metrics(const std::vector<PredictionRecord>& records,
                              const std::vector<ScoreVector>& rankings,
                              const std::vector<int>& gts, int k_max) {
    MethodMetrics m;
    std::vector<std::string> categories;
    for (const auto& r : records) {
        const std::string cat = r.category.value_or("");
        if (std::find(categories.begin(), categories.end(), cat) == categories.end())
            categories.push_back(cat);
    }
    std::sort(categories.begin(), categories.end());
    double sum = 0.0;
    for (const auto& cat : categories) {
        const double ap = average_precision(records, cat);
        m.per_category_ap[cat] = ap;
        sum += ap;
    }
    m.map_category_mean = sum / categories.size();

    // Pooled AP ignores category boundaries: evaluate all records as one pool.
    std::vector<PredictionRecord> pooled = records;
    for (auto& r : pooled) r.category = "all";
    m.ap_pooled = average_precision(pooled, "all");

    int hits = 0;
    for (const auto& r : records)
        if (r.predicted_index == *r.gt_index) ++hits;
    m.top1_accuracy = static_cast<double>(hits) / records.size();
    m.cmc = cmc(rankings, gts, k_max);
    return m;
}

json metrics_to_json(const MethodMetrics& m) {
    json j;
    j["per_category_ap"] = m.per_category_ap; // std::map: keys serialize sorted
    j["map_category_mean"] = m.map_category_mean;
    j["ap_pooled"] = m.ap_pooled;
    j["top1_accuracy"] = m.top1_accuracy;
    j["cmc"] = m.cmc.values;
    return j;
}

} // namespace

std::string EvalReport::to_json() const {
    json j;
    j["num_scenes"] = num_scenes;
    j["model"] = metrics_to_json(model);
    if (most_center) j["baseline_most_center"] = metrics_to_json(*most_center);
    if (max_scale) j["baseline_max_scale"] = metrics_to_json(*max_scale);
    return j.dump(2) + "\n";
}

std::string EvalReport::cmc_csv() const {
    std::ostringstream out;
    out << "rank,match_rate\n";
    for (std::size_t k = 0; k < model.cmc.values.size(); ++k) {
        std::ostringstream value;
        value.precision(17);
        value << model.cmc.values[k];
        out << (k + 1) << "," << value.str() << "\n";
    }
    return out.str();
}

EvalReport run_eval(const std::vector<Scene>& scenes, const WeightSet& weights,
                    const EvalConfig& cfg) {
    if (scenes.empty()) throw Error(ErrorCode::EmptyCategory, "no scenes to evaluate");

    // Deterministic order regardless of input file order.
    std::vector<const Scene*> ordered;
    for (const auto& s : scenes) ordered.push_back(&s);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const Scene* a, const Scene* b) { return a->id < b->id; });

    int k_max = 0;
    for (const auto* s : ordered) k_max = std::max(k_max, s->person_count());

    std::vector<PredictionRecord> model_records, center_records, scale_records;
    std::vector<ScoreVector> model_rankings, center_rankings, scale_rankings;
    std::vector<int> gts;

    for (const auto* scene : ordered) {
        const auto gt = scene->gt_index();
        if (!gt)
            throw Error(ErrorCode::MissingGroundTruth,
                        "scene '" + scene->id + "' has no important-person flag");
        gts.push_back(*gt);

        const auto bundles = build_bundles(*scene, cfg.features);
        const RankResult result = rank_scene(*scene, bundles, weights, cfg.solve, cfg.select_by);
        const auto& ranking = result.ranking(cfg.select_by);
        const auto& scores =
            cfg.select_by == SelectBy::R ? result.r_scores : result.fused.scores;

        PredictionRecord record;
        record.scene_id = scene->id;
        record.predicted_index = ranking.front();
        record.predicted_score = scores[ranking.front()];
        record.gt_index = *gt;
        record.category = scene->category;
        model_records.push_back(record);

        ScoreVector sv;
        sv.scene_id = scene->id;
        sv.channel = ChannelId::fused;
        sv.scores = scores;
        sv.ranking = ranking;
        model_rankings.push_back(std::move(sv));

        if (cfg.with_baselines) {
            const double diag =
                std::sqrt(scene->image_w * scene->image_w + scene->image_h * scene->image_h);
            // Confidence orderings for AP: proximity for Most-Center, relative
            // area for Max-Scale.
            std::vector<double> center_scores(scene->person_count());
            std::vector<double> scale_scores(scene->person_count());
            for (int i = 0; i < scene->person_count(); ++i) {
                const double dx = scene->persons[i].box.center_x() - 0.5 * scene->image_w;
                const double dy = scene->persons[i].box.center_y() - 0.5 * scene->image_h;
                center_scores[i] = 1.0 - std::sqrt(dx * dx + dy * dy) / diag;
                scale_scores[i] =
                    scene->persons[i].box.area() / (scene->image_w * scene->image_h);
            }
            auto push = [&](std::vector<PredictionRecord>& records,
                            std::vector<ScoreVector>& rankings, const std::vector<double>& scores,
                            int predicted) {
                PredictionRecord r;
                r.scene_id = scene->id;
                r.predicted_index = predicted;
                r.predicted_score = scores[predicted];
                r.gt_index = *gt;
                r.category = scene->category;
                records.push_back(r);
                ScoreVector sv2;
                sv2.scene_id = scene->id;
                sv2.scores = scores;
                sv2.ranking = ranking_from_scores(scores);
                rankings.push_back(std::move(sv2));
            };
            push(center_records, center_rankings, center_scores, baseline_most_center(*scene));
            push(scale_records, scale_rankings, scale_scores, baseline_max_scale(*scene));
        }
    }

    EvalReport report;
    report.num_scenes = static_cast<int>(ordered.size());
    report.model = compute_metrics(model_records, model_rankings, gts, k_max);
    if (cfg.with_baselines) {
        report.most_center = compute_metrics(center_records, center_rankings, gts, k_max);
        report.max_scale = compute_metrics(scale_records, scale_rankings, gts, k_max);
    }
    return report;
}

} // namespace personrank
