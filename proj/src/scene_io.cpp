#include "personrank/scene_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "personrank/errors.hpp"

namespace personrank {

using nlohmann::json;

Scene validate_scene(const Scene& scene) {
    if (scene.persons.empty())
        throw Error(ErrorCode::EmptyScene, "scene '" + scene.id + "' has no persons");

    Scene out = scene;
    std::set<std::string> ids;
    int gt_count = 0;
    std::size_t action_dim = 0, appearance_dim = 0;

    for (auto& person : out.persons) {
        if (!ids.insert(person.id).second)
            throw Error(ErrorCode::DuplicatePersonId,
                        "person id '" + person.id + "' appears twice in scene '" + scene.id + "'");
        if (!(person.box.w > 0.0) || !(person.box.h > 0.0))
            throw Error(ErrorCode::NonPositiveBox,
                        "person '" + person.id + "' has box " + std::to_string(person.box.w) + "x" +
                            std::to_string(person.box.h));
        if (person.is_ground_truth_important && ++gt_count > 1)
            throw Error(ErrorCode::MultipleGroundTruth,
                        "scene '" + scene.id + "' flags more than one important person");

        if (!person.action_embedding.empty()) {
            if (action_dim == 0) action_dim = person.action_embedding.size();
            if (person.action_embedding.size() != action_dim)
                throw Error(ErrorCode::DimensionMismatch,
                            "action embedding dims differ within scene '" + scene.id + "'");
        }
        if (!person.appearance_embedding.empty()) {
            if (appearance_dim == 0) appearance_dim = person.appearance_embedding.size();
            if (person.appearance_embedding.size() != appearance_dim)
                throw Error(ErrorCode::DimensionMismatch,
                            "appearance embedding dims differ within scene '" + scene.id + "'");
        }

        // Clamp the box into [0, W] x [0, H]; clamp, don't reject.
        auto& b = person.box;
        b.w = std::min(b.w, out.image_w);
        b.h = std::min(b.h, out.image_h);
        b.x = std::clamp(b.x, 0.0, out.image_w - b.w);
        b.y = std::clamp(b.y, 0.0, out.image_h - b.h);

        if (person.sharpness && *person.sharpness < 0.0) person.sharpness = 0.0;
        // Yaw only makes sense on face boxes; the attention channel is body-blind.
        if (person.box_kind == BoxKind::body) person.yaw_deg.reset();
    }
    return out;
}

namespace {

json box_to_json(const BoundingBox& box) {
    return json{{"x", box.x}, {"y", box.y}, {"w", box.w}, {"h", box.h}};
}

json person_to_json(const PersonObservation& person) {
    json j;
    j["id"] = person.id;
    j["box"] = box_to_json(person.box);
    j["box_kind"] = person.box_kind == BoxKind::face ? "face" : "body";
    if (person.yaw_deg) j["yaw_deg"] = *person.yaw_deg;
    if (person.sharpness) j["sharpness"] = *person.sharpness;
    if (person.detection_confidence) j["detection_confidence"] = *person.detection_confidence;
    if (!person.action_embedding.empty()) j["action_embedding"] = person.action_embedding;
    if (!person.appearance_embedding.empty()) j["appearance_embedding"] = person.appearance_embedding;
    j["gt"] = person.is_ground_truth_important;
    return j;
}

json scene_to_json(const Scene& scene) {
    json j;
    j["id"] = scene.id;
    j["image_w"] = scene.image_w;
    j["image_h"] = scene.image_h;
    if (scene.category) j["category"] = *scene.category;
    j["persons"] = json::array();
    for (const auto& person : scene.persons) j["persons"].push_back(person_to_json(person));
    return j;
}

PersonObservation person_from_json(const json& j) {
    PersonObservation person;
    person.id = j.at("id").get<std::string>();
    const auto& box = j.at("box");
    person.box = {box.at("x").get<double>(), box.at("y").get<double>(), box.at("w").get<double>(),
                  box.at("h").get<double>()};
    const std::string kind = j.value("box_kind", "face");
    if (kind == "face") {
        person.box_kind = BoxKind::face;
    } else if (kind == "body") {
        person.box_kind = BoxKind::body;
    } else {
        throw Error(ErrorCode::ParseError, "box_kind must be 'face' or 'body', got '" + kind + "'");
    }
    if (j.contains("yaw_deg") && !j["yaw_deg"].is_null()) person.yaw_deg = j["yaw_deg"].get<double>();
    if (j.contains("sharpness") && !j["sharpness"].is_null())
        person.sharpness = j["sharpness"].get<double>();
    if (j.contains("detection_confidence") && !j["detection_confidence"].is_null())
        person.detection_confidence = j["detection_confidence"].get<double>();
    if (j.contains("action_embedding") && !j["action_embedding"].is_null())
        person.action_embedding = j["action_embedding"].get<std::vector<double>>();
    if (j.contains("appearance_embedding") && !j["appearance_embedding"].is_null())
        person.appearance_embedding = j["appearance_embedding"].get<std::vector<double>>();
    person.is_ground_truth_important = j.value("gt", false);
    return person;
}

Scene scene_from_json(const json& j) {
    Scene scene;
    scene.id = j.at("id").get<std::string>();
    scene.image_w = j.at("image_w").get<double>();
    scene.image_h = j.at("image_h").get<double>();
    if (j.contains("category") && !j["category"].is_null())
        scene.category = j["category"].get<std::string>();
    for (const auto& pj : j.at("persons")) scene.persons.push_back(person_from_json(pj));
    return scene;
}

json parse_or_throw(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::ParseError, "invalid JSON in " + what);
    return j;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write '" + path + "'");
    out << text;
}

} // namespace

std::string encode_scene(const Scene& scene) { return scene_to_json(scene).dump(2); }

Scene decode_scene(const std::string& json_text) {
    return scene_from_json(parse_or_throw(json_text, "scene"));
}

std::vector<Scene> load_scenes(const std::string& path) {
    json j = parse_or_throw(read_file(path), path);
    std::vector<Scene> scenes;
    if (j.is_array()) {
        for (const auto& sj : j) scenes.push_back(validate_scene(scene_from_json(sj)));
    } else {
        scenes.push_back(validate_scene(scene_from_json(j)));
    }
    return scenes;
}

void save_scenes(const std::vector<Scene>& scenes, const std::string& path) {
    json j = json::array();
    for (const auto& scene : scenes) j.push_back(scene_to_json(scene));
    write_file(path, j.dump(2) + "\n");
}

std::string encode_weights(const WeightSet& weights) {
    json j;
    j["w_s"] = weights.w_s;
    j["w_ac"] = weights.w_ac;
    j["w_ap"] = weights.w_ap;
    if (weights.c_att)
        j["c_att"] = *weights.c_att;
    else
        j["c_att"] = nullptr;
    json deltas = json::object();
    for (const auto& [channel, vec] : weights.delta) deltas[channel_name(channel)] = vec;
    j["delta"] = deltas;
    json q = json::object();
    for (const auto& [channel, value] : weights.q) q[channel_name(channel)] = value;
    j["q"] = q;
    j["alpha"] = weights.alpha;
    return j.dump(2);
}

WeightSet decode_weights(const std::string& json_text) {
    json j = parse_or_throw(json_text, "weights");
    WeightSet weights;
    weights.w_s = j.value("w_s", std::vector<double>{});
    weights.w_ac = j.value("w_ac", std::vector<double>{});
    weights.w_ap = j.value("w_ap", std::vector<double>{});
    if (j.contains("c_att") && !j["c_att"].is_null()) weights.c_att = j["c_att"].get<double>();
    if (j.contains("delta"))
        for (const auto& [name, vec] : j["delta"].items())
            weights.delta[channel_from_name(name)] = vec.get<std::vector<double>>();
    if (j.contains("q"))
        for (const auto& [name, value] : j["q"].items())
            weights.q[channel_from_name(name)] = value.get<double>();
    weights.alpha = j.value("alpha", 0.85);
    if (!(weights.alpha > 0.0) || weights.alpha > 1.0)
        throw Error(ErrorCode::ParseError, "alpha must satisfy 0 < alpha <= 1");
    return weights;
}

WeightSet load_weights(const std::string& path) { return decode_weights(read_file(path)); }

void save_weights(const WeightSet& weights, const std::string& path) {
    write_file(path, encode_weights(weights) + "\n");
}

} // namespace personrank
