#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "personrank/errors.hpp"
#include "personrank/eval.hpp"
#include "personrank/rank.hpp"
#include "personrank/scene_io.hpp"
#include "personrank/synth.hpp"
#include "personrank/trainer.hpp"

namespace pr = personrank;
using nlohmann::json;

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw pr::Error(pr::ErrorCode::ParseError, "cannot write '" + path + "'");
    out << text;
}

json matrix_to_json(const pr::InteractionMatrix& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m.data(r, c));
        rows.push_back(row);
    }
    return json{{"kind", m.kind == pr::MatrixKind::pairwise
                             ? "pairwise"
                             : (m.kind == pr::MatrixKind::hyper ? "hyper" : "hybrid")},
                {"channel", pr::channel_name(m.channel)},
                {"rows", m.rows()},
                {"cols", m.cols()},
                {"data", rows}};
}

int run_synth(int n, int count, double hub_strength, std::uint64_t seed, int embedding_dim,
              const std::string& out_path) {
    pr::SynthSpec spec;
    spec.n_persons = n;
    spec.hub_strength = hub_strength;
    spec.seed = seed;
    spec.embedding_dim = embedding_dim;
    pr::save_scenes(pr::generate_scenes(spec, count), out_path);
    std::cout << "wrote " << count << " scenes to " << out_path << "\n";
    return 0;
}

int run_train(const std::string& train_path, const std::string& val_path,
              const std::string& out_path, const std::string& report_path, pr::TrainConfig tcfg,
              const pr::FeatureConfig& fcfg) {
    const auto train_scenes = pr::prepare_scenes(pr::load_scenes(train_path), fcfg);
    const auto val_scenes = pr::prepare_scenes(pr::load_scenes(val_path), fcfg);

    pr::SolveConfig solve_cfg;
    pr::TuneReport tune;
    const pr::WeightSet weights =
        pr::tune_validation(train_scenes, val_scenes, tcfg, solve_cfg, &tune);
    pr::save_weights(weights, out_path);

    json report;
    report["train_scenes"] = train_scenes.size();
    report["val_scenes"] = val_scenes.size();
    report["chosen_c_att"] = tune.best_c_att;
    report["chosen_reg_lambda"] = tune.best_reg;
    report["val_top1_accuracy"] = tune.best_val_top1;
    json per_channel = json::object();
    for (std::size_t k = 0; k < tune.channels.size(); ++k)
        per_channel[pr::channel_name(tune.channels[k])] = tune.per_channel_val_top1[k];
    report["per_channel_val_top1"] = per_channel;
    const std::string report_text = report.dump(2) + "\n";
    if (!report_path.empty()) write_text(report_path, report_text);
    std::cout << report_text;
    std::cout << "wrote weights to " << out_path << "\n";
    return 0;
}

int run_rank(const std::string& scenes_path, const std::string& weights_path,
             const std::string& out_path, const pr::SolveConfig& solve_cfg,
             const pr::FeatureConfig& fcfg, pr::SelectBy select_by,
             const std::string& dump_graphs_dir) {
    const auto scenes = pr::load_scenes(scenes_path);
    const pr::WeightSet weights = pr::load_weights(weights_path);

    json out = json::array();
    for (const auto& scene : scenes) {
        const auto bundles = pr::build_bundles(scene, fcfg);
        const pr::RankResult result = pr::rank_scene(scene, bundles, weights, solve_cfg, select_by);

        json record;
        record["scene_id"] = scene.id;
        json channels = json::object();
        for (std::size_t k = 0; k < result.channels.size(); ++k) {
            const auto& sv = result.per_channel[k];
            channels[pr::channel_name(result.channels[k])] = {
                {"scores", sv.scores}, {"ranking", sv.ranking}, {"iterations", sv.iterations}};
        }
        record["channels"] = channels;
        record["fused"] = {{"scores", result.fused.scores},
                           {"ranking", result.fused.ranking},
                           {"iterations", result.fused.iterations}};
        record["r_scores"] = result.r_scores;
        record["r_ranking"] = result.r_ranking;
        record["ranking"] = result.ranking(select_by);
        record["predicted_index"] = result.predicted_index;
        record["predicted_id"] = scene.persons[result.predicted_index].id;
        out.push_back(record);

        if (!dump_graphs_dir.empty()) {
            std::filesystem::create_directories(dump_graphs_dir);
            for (std::size_t k = 0; k < result.channels.size(); ++k) {
                const auto channel = result.channels[k];
                const auto gp = pr::build_pairwise(bundles, channel, weights);
                const auto gr = pr::build_hyper(scene, bundles, channel, weights);
                const auto hybrid = pr::build_hybrid(gp, gr);
                const std::string path = dump_graphs_dir + "/" + scene.id + "." +
                                         pr::channel_name(channel) + ".json";
                write_text(path, matrix_to_json(hybrid).dump(2) + "\n");
            }
        }
    }
    const std::string text = out.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        write_text(out_path, text);
    return 0;
}

int run_eval_cmd(const std::string& scenes_path, const std::string& weights_path,
                 const std::string& report_path, const std::string& cmc_csv_path,
                 bool with_baselines, pr::EvalConfig cfg) {
    const auto scenes = pr::load_scenes(scenes_path);
    const pr::WeightSet weights = pr::load_weights(weights_path);
    cfg.with_baselines = with_baselines;
    const pr::EvalReport report = pr::run_eval(scenes, weights, cfg);
    write_text(report_path, report.to_json());
    if (!cmc_csv_path.empty()) write_text(cmc_csv_path, report.cmc_csv());
    std::cout << "model mAP (category mean) = " << report.model.map_category_mean
              << ", top-1 = " << report.model.top1_accuracy << "\n";
    if (report.most_center)
        std::cout << "most-center mAP = " << report.most_center->map_category_mean << "\n";
    if (report.max_scale)
        std::cout << "max-scale mAP = " << report.max_scale->map_category_mean << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Importance ranking of people in multi-person scenes"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate synthetic scenes with a planted hub");
    int synth_n = 8, synth_count = 100, synth_dim = 16;
    double synth_strength = 0.8;
    std::uint64_t synth_seed = 0;
    std::string synth_out = "scenes.json";
    synth->add_option("--n", synth_n, "persons per scene");
    synth->add_option("--scenes", synth_count, "number of scenes");
    synth->add_option("--hub-strength", synth_strength, "hub signal strength in [0,1]");
    synth->add_option("--seed", synth_seed, "base seed");
    synth->add_option("--embedding-dim", synth_dim, "embedding dimension");
    synth->add_option("--out", synth_out, "output scene file")->required();

    // shared feature flags
    pr::FeatureConfig fcfg;
    auto add_feature_flags = [&fcfg](CLI::App* cmd) {
        cmd->add_option("--density-window-fraction", fcfg.density_window_fraction,
                        "density window as a fraction of image width");
        cmd->add_flag_callback("--no-standardize", [&fcfg] { fcfg.standardize = false; },
                               "skip per-scene feature standardization");
    };

    // train
    auto* train = app.add_subcommand("train", "learn all weights from annotated scenes");
    std::string train_path, val_path, train_out = "weights.json", train_report;
    pr::TrainConfig tcfg;
    train->add_option("--train", train_path, "training scene file")->required();
    train->add_option("--val", val_path, "validation scene file")->required();
    train->add_option("--out", train_out, "output weight file");
    train->add_option("--report", train_report, "training report JSON");
    train->add_option("--seed", tcfg.seed, "shuffling seed");
    train->add_option("--epochs", tcfg.epochs, "SGD epochs");
    train->add_option("--reg", tcfg.reg_lambda, "margin regularizer (overridden by grid)");
    train->add_option("--grid-c", tcfg.val_grid_c, "candidate attention scales");
    train->add_option("--grid-reg", tcfg.val_grid_reg, "candidate regularizers");
    add_feature_flags(train);

    // rank
    auto* rank = app.add_subcommand("rank", "rank persons per scene");
    std::string rank_scenes, rank_weights, rank_out, dump_graphs;
    pr::SolveConfig solve_cfg;
    bool alpha_given = false, select_by_r = false;
    rank->add_option("--scenes", rank_scenes, "scene file")->required();
    rank->add_option("--weights", rank_weights, "weight file")->required();
    rank->add_option("--alpha", solve_cfg.alpha, "damping factor override")
        ->check(CLI::Range(1e-9, 1.0))
        ->each([&alpha_given](const std::string&) { alpha_given = true; });
    rank->add_option("--tol", solve_cfg.tol, "L1 convergence tolerance");
    rank->add_option("--max-iter", solve_cfg.max_iter, "iteration cap");
    rank->add_option("--out", rank_out, "output JSON (stdout when omitted)");
    std::string select_by_name = "fused-solve";
    rank->add_option("--select-by", select_by_name, "fused-solve | R")
        ->check(CLI::IsMember({"fused-solve", "R"}));
    rank->add_option("--dump-graphs", dump_graphs, "directory for per-scene hybrid matrices");
    add_feature_flags(rank);

    // eval
    auto* eval = app.add_subcommand("eval", "score predictions with mAP and CMC");
    std::string eval_scenes, eval_weights, eval_report_path = "report.json", eval_cmc_csv;
    bool eval_baselines = false;
    eval->add_option("--scenes", eval_scenes, "scene file")->required();
    eval->add_option("--weights", eval_weights, "weight file")->required();
    eval->add_option("--report", eval_report_path, "report JSON path")->required();
    eval->add_option("--cmc-csv", eval_cmc_csv, "CMC curve CSV path");
    eval->add_flag("--baselines", eval_baselines, "also score Most-Center and Max-Scale");
    eval->add_option("--alpha", solve_cfg.alpha, "damping factor override")
        ->each([&alpha_given](const std::string&) { alpha_given = true; });
    std::string eval_select_by = "fused-solve";
    eval->add_option("--select-by", eval_select_by, "fused-solve | R")
        ->check(CLI::IsMember({"fused-solve", "R"}));
    add_feature_flags(eval);

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed())
            return run_synth(synth_n, synth_count, synth_strength, synth_seed, synth_dim, synth_out);
        if (train->parsed())
            return run_train(train_path, val_path, train_out, train_report, tcfg, fcfg);
        if (rank->parsed()) {
            select_by_r = select_by_name == "R";
            pr::SolveConfig cfg = solve_cfg;
            if (!alpha_given) cfg.alpha = pr::load_weights(rank_weights).alpha;
            return run_rank(rank_scenes, rank_weights, rank_out, cfg, fcfg,
                            select_by_r ? pr::SelectBy::R : pr::SelectBy::fused_solve, dump_graphs);
        }
        if (eval->parsed()) {
            pr::EvalConfig cfg;
            cfg.features = fcfg;
            cfg.solve = solve_cfg;
            if (!alpha_given) cfg.solve.alpha = pr::load_weights(eval_weights).alpha;
            cfg.select_by =
                eval_select_by == "R" ? pr::SelectBy::R : pr::SelectBy::fused_solve;
            return run_eval_cmd(eval_scenes, eval_weights, eval_report_path, eval_cmc_csv,
                                eval_baselines, cfg);
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
