// motionguide: offline scoring, simulation, visualization export, quality
// checks, format conversion and the streaming server.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "motionguide/builtin.hpp"
#include "motionguide/bvh.hpp"
#include "motionguide/config.hpp"
#include "motionguide/error.hpp"
#include "motionguide/joint_stream.hpp"
#include "motionguide/json_writer.hpp"
#include "motionguide/protocol.hpp"
#include "motionguide/quality.hpp"
#include "motionguide/server.hpp"
#include "motionguide/session.hpp"
#include "motionguide/viz.hpp"

namespace mg = motionguide;
namespace fs = std::filesystem;

namespace {

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw mg::Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw mg::Error("cannot write '" + path + "'");
    out << text;
}

bool is_stream_path(const std::string& path) {
    const auto ext = fs::path(path).extension();
    return ext == ".jsonl" || ext == ".ndjson";
}

/// A built-in map name or a map file.
mg::JointMapTable load_map(const std::string& which) {
    if (which.empty() || which == "canonical20") return mg::identity_canonical_map();
    if (which == "kinect32") return mg::default_kinect_map();
    try {
        return mg::load_joint_map(read_text(which));
    } catch (const mg::Error& e) {
        throw mg::Error(which + ": " + e.what());
    }
}

mg::Skeleton stream_skeleton(const mg::JointMapTable& map, const std::string& override_id) {
    const std::string id = override_id.empty() ? map.source_skeleton_id : override_id;
    if (auto s = mg::builtin_skeleton(id)) return *s;
    throw mg::Error("no built-in skeleton '" + id + "' for a joint stream (use --skeleton)");
}

mg::MotionClip load_clip(const std::string& path, const mg::JointMapTable& map, double fps,
                         const std::string& skeleton_id = "") {
    if (!is_stream_path(path)) return mg::load_bvh_file(path);
    const std::string text = read_text(path);
    try {
        return mg::parse_joint_stream(text, stream_skeleton(map, skeleton_id), fps);
    } catch (const mg::Error& e) {
        throw mg::Error(path + ": " + e.what());
    }
}

nlohmann::json load_config(const std::string& path) {
    if (path.empty()) return nlohmann::json::object();
    try {
        return mg::parse_config_text(read_text(path));
    } catch (const mg::Error& e) {
        throw mg::Error(path + ": " + e.what());
    }
}

struct ScoreArgs {
    std::string instructor, user, map, instructor_map, config, out;
    double fps = 30.0;
};

int cmd_score(const ScoreArgs& a) {
    const auto user_map = load_map(a.map);
    const auto instr_map = load_map(a.instructor_map);
    mg::SessionConfig cfg;
    cfg.target_fps = a.fps;
    if (!a.config.empty()) cfg.compare = mg::compare_config_from_json(load_config(a.config));
    const auto log = mg::run_session(load_clip(a.instructor, instr_map, a.fps), load_clip(a.user, user_map, a.fps),
                                     user_map, cfg, instr_map);
    mg::JsonWriter w;
    w.begin_object().key("frames").begin_array();
    for (const auto& f : log.frames) {
        w.begin_object()
            .field("tick", f.tick)
            .field("t", f.t)
            .field("total", f.score.total)
            .field("display_total", f.score.display_total)
            .key("per_joint")
            .begin_object();
        for (const auto& [j, pts] : f.score.per_joint) w.field(mg::name_of(j), pts);
        w.end_object().key("indicators").begin_object();
        for (std::size_t i = 0; i < mg::kLimbs.size(); ++i)
            w.field(mg::name_of(mg::kLimbs[i]), mg::name_of((*f.indicators)[i]));
        w.end_object().end_object();
    }
    w.end_array()
        .field("mean", log.summary.mean_score)
        .field("min", log.summary.min_score)
        .field("max", log.summary.max_score)
        .end_object();
    write_text(a.out, w.take() + "\n");
    return 0;
}

struct SimulateArgs {
    std::string instructor, user, map, instructor_map, config, mode, out, csv;
};

int cmd_simulate(const SimulateArgs& a) {
    mg::SessionConfig cfg = mg::session_config_from_json(load_config(a.config));
    if (a.mode == "navigation") cfg.mode = mg::SessionMode::Navigation;
    if (a.mode == "follow_along") cfg.mode = mg::SessionMode::FollowAlong;
    const auto user_map = load_map(a.map);
    const auto instr_map = load_map(a.instructor_map);
    const auto log = mg::run_session(load_clip(a.instructor, instr_map, cfg.target_fps),
                                     load_clip(a.user, user_map, cfg.target_fps), user_map, cfg, instr_map);
    write_text(a.out, mg::write_log(log, mg::LogFormat::Jsonl));
    if (!a.csv.empty()) write_text(a.csv, mg::write_log(log, mg::LogFormat::Csv));
    return 0;
}

struct VizArgs {
    std::string feature, in, joint = "right_wrist", user, anchor_mode = "translation", head = "head", out;
    std::string left_foot = "left_foot", right_foot = "right_foot";
    double t = 0.0, window = 1.5, interval = 2.0, fade = 4.0, length = 2.0;
};

int cmd_viz(const VizArgs& a) {
    const mg::MotionClip clip = mg::load_bvh_file(a.in);
    std::vector<mg::ScenePrimitive> scene;
    if (a.feature == "trajectory") {
        scene.push_back(mg::to_primitive(mg::trajectory(clip, a.joint, a.t, a.window), a.t));
    } else if (a.feature == "footprints") {
        for (const auto& m : mg::footprints(clip, a.t, {a.interval, a.fade, a.left_foot, a.right_foot}))
            scene.push_back(mg::to_primitive(m, a.t));
    } else if (a.feature == "gaze") {
        const auto pose = mg::forward_kinematics(clip.skeleton(), mg::sample_clip(clip, a.t));
        scene.push_back(mg::to_primitive(mg::head_gaze(pose, a.length, a.head), a.t));
    } else {  // anchor
        if (a.user.empty()) throw mg::VizError("--feature anchor needs --user");
        const mg::MotionClip user = mg::load_bvh_file(a.user);
        auto head_at = [&](const mg::MotionClip& c) {
            const auto pose = mg::forward_kinematics(c.skeleton(), mg::sample_clip(c, a.t));
            const mg::JointPose* h = mg::find_joint(pose, a.head);
            if (!h) throw mg::VizError("clip has no joint '" + a.head + "'");
            return mg::HeadPose{h->position, h->rotation};
        };
        const auto mode =
            a.anchor_mode == "yaw" ? mg::AnchorMode::TranslationPlusYaw : mg::AnchorMode::TranslationOnly;
        const auto anchor = mg::first_person_anchor(head_at(user), head_at(clip), mode);
        mg::JsonWriter w;
        w.begin_object()
            .field("type", "first_person_anchor")
            .field("mode", mg::name_of(anchor.mode))
            .field("translation", anchor.transform.translation)
            .field("rotation", anchor.transform.rotation)
            .field("t", a.t)
            .end_object();
        write_text(a.out, w.take() + "\n");
        return 0;
    }
    write_text(a.out, mg::export_scene(scene) + "\n");
    return 0;
}

struct QualityArgs {
    std::string in, config;
    bool json = false;
};

int cmd_quality(const QualityArgs& a) {
    const mg::MotionClip clip = mg::load_bvh_file(a.in);
    const mg::QualityConfig cfg = mg::quality_config_from_json(load_config(a.config));
    const auto report = mg::check_clip(clip, cfg);
    std::cout << (a.json ? mg::to_json(report) + "\n" : mg::summarize(report));
    return 0;
}

struct CheckpointArgs {
    std::string in, config, preset;
    double step = 0.0;
};

int cmd_checkpoints(const CheckpointArgs& a) {
    nlohmann::json j = load_config(a.config);
    if (!a.preset.empty()) j["preset"] = a.preset;
    mg::NavConfig cfg = mg::nav_config_from_json(j);
    if (a.step > 0.0) cfg.step_seconds = a.step;
    const mg::MotionClip clip = mg::load_bvh_file(a.in);
    const auto cps = mg::build_checkpoints(clip, cfg);
    mg::JsonWriter w;
    w.begin_object().field("duration", mg::clip_duration(clip)).field("step_seconds", cfg.step_seconds);
    w.key("checkpoints").begin_array();
    for (double t : cps) w.value(t);
    w.end_array().end_object();
    std::cout << w.str() << "\n";
    return 0;
}

struct ConvertArgs {
    std::string in, out, skeleton = "canonical20";
    double fps = 30.0;
};

int cmd_convert(const ConvertArgs& a) {
    if (is_stream_path(a.in)) {
        const auto skel = mg::builtin_skeleton(a.skeleton);
        if (!skel) throw mg::Error("unknown skeleton '" + a.skeleton + "'");
        mg::MotionClip clip;
        try {
            clip = mg::parse_joint_stream(read_text(a.in), *skel, a.fps);
        } catch (const mg::Error& e) {
            throw mg::Error(a.in + ": " + e.what());
        }
        write_text(a.out, mg::serialize_bvh(clip));
    } else {
        write_text(a.out, mg::write_joint_stream(mg::load_bvh_file(a.in)));
    }
    return 0;
}

struct ServeArgs {
    std::string registry, listen = "127.0.0.1:7878", log_dir;
    std::size_t max_sessions = 64;
    bool stdio = false;
};

int cmd_serve(const ServeArgs& a) {
    std::string dir = a.registry;
    if (dir.empty()) {
        const char* env = std::getenv("MOTIONGUIDE_REGISTRY");
        dir = env && *env ? env : "registry";
    }
    const mg::ClipRegistry registry = mg::ClipRegistry::load(dir);
    mg::ServerContext ctx;
    ctx.registry = &registry;
    ctx.max_sessions = a.max_sessions;
    if (!a.log_dir.empty()) ctx.log_dir = a.log_dir;
    if (a.stdio) {
        mg::serve_stdio(std::cin, std::cout, ctx);
        return 0;
    }
    const auto colon = a.listen.rfind(':');
    if (colon == std::string::npos) throw mg::Error("--listen expects host:port");
    const std::string host = a.listen.substr(0, colon);
    const int port = std::stoi(a.listen.substr(colon + 1));
    if (port < 0 || port > 65535) throw mg::Error("port out of range");
    mg::TcpServer server(ctx);
    const auto bound = server.listen(host, static_cast<std::uint16_t>(port));
    std::cerr << "listening on " << host << ":" << bound << " (" << registry.ids().size() << " clips)\n";
    server.run();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pose-match scoring, navigation and visualization for motion clips", "motionguide"};
    app.require_subcommand(1);

    ScoreArgs score;
    auto* s = app.add_subcommand("score", "Score a user clip against an instructor clip frame by frame");
    s->add_option("--instructor", score.instructor, "Instructor BVH")->required();
    s->add_option("--user", score.user, "User BVH or joint-stream JSONL")->required();
    s->add_option("--map", score.map, "User joint map file, or kinect32 / canonical20");
    s->add_option("--instructor-map", score.instructor_map, "Instructor joint map (default canonical20)");
    s->add_option("--config", score.config, "Compare config JSON");
    s->add_option("--fps", score.fps, "Comparison rate")->check(CLI::PositiveNumber);
    s->add_option("--out", score.out, "Output file (default stdout)");

    SimulateArgs sim;
    auto* m = app.add_subcommand("simulate", "Replay a full session and write its log");
    m->add_option("--instructor", sim.instructor, "Instructor BVH")->required();
    m->add_option("--user", sim.user, "User BVH or joint-stream JSONL")->required();
    m->add_option("--map", sim.map, "User joint map file, or kinect32 / canonical20");
    m->add_option("--instructor-map", sim.instructor_map, "Instructor joint map (default canonical20)");
    m->add_option("--config", sim.config, "Session config JSON");
    m->add_option("--mode", sim.mode, "Override the config's mode")
        ->check(CLI::IsMember({"follow_along", "navigation"}));
    m->add_option("--out", sim.out, "JSONL log (default stdout)");
    m->add_option("--csv", sim.csv, "Also write a CSV log");

    VizArgs viz;
    auto* v = app.add_subcommand("viz", "Export scene geometry for one feature as JSON");
    v->add_option("--feature", viz.feature, "trajectory, footprints, gaze or anchor")
        ->required()
        ->check(CLI::IsMember({"trajectory", "footprints", "gaze", "anchor"}));
    v->add_option("--in", viz.in, "Clip BVH")->required();
    v->add_option("--t", viz.t, "Time in seconds");
    v->add_option("--joint", viz.joint, "Trajectory joint");
    v->add_option("--window", viz.window, "Trajectory window, seconds");
    v->add_option("--interval", viz.interval, "Footprint interval, seconds");
    v->add_option("--fade", viz.fade, "Footprint fade, seconds");
    v->add_option("--left-foot", viz.left_foot, "Left foot joint");
    v->add_option("--right-foot", viz.right_foot, "Right foot joint");
    v->add_option("--length", viz.length, "Gaze ray length, meters");
    v->add_option("--head", viz.head, "Head joint");
    v->add_option("--user", viz.user, "User BVH (anchor)");
    v->add_option("--anchor-mode", viz.anchor_mode, "translation or yaw")
        ->check(CLI::IsMember({"translation", "yaw"}));
    v->add_option("--out", viz.out, "Output file (default stdout)");

    QualityArgs quality;
    auto* q = app.add_subcommand("quality", "Per-frame plausibility checks on a clip");
    q->add_option("clip", quality.in, "Clip BVH")->required();
    q->add_option("--config", quality.config, "Quality config JSON");
    q->add_flag("--json", quality.json, "Print only the JSON report");

    CheckpointArgs cps;
    auto* c = app.add_subcommand("checkpoints", "List navigation checkpoint times");
    c->add_option("--in", cps.in, "Clip BVH")->required();
    c->add_option("--config", cps.config, "Navigation config JSON");
    c->add_option("--preset", cps.preset, "high_accuracy, fine or coarse")
        ->check(CLI::IsMember({"high_accuracy", "fine", "coarse"}));
    c->add_option("--step", cps.step, "Step seconds")->check(CLI::PositiveNumber);

    ConvertArgs conv;
    auto* x = app.add_subcommand("convert", "Convert between joint-stream JSONL and BVH");
    x->add_option("--in", conv.in, "Input (.jsonl or .bvh)")->required();
    x->add_option("--out", conv.out, "Output file (default stdout)");
    x->add_option("--skeleton", conv.skeleton, "Built-in skeleton of a JSONL input");
    x->add_option("--fps", conv.fps, "Frame rate for JSONL input")->check(CLI::PositiveNumber);

    ServeArgs serve;
    auto* sv = app.add_subcommand("serve", "Run the streaming feedback server");
    sv->add_option("--registry", serve.registry, "Clip directory (default $MOTIONGUIDE_REGISTRY or ./registry)");
    sv->add_option("--listen", serve.listen, "host:port");
    sv->add_option("--max-sessions", serve.max_sessions, "Concurrent session limit")->check(CLI::PositiveNumber);
    sv->add_option("--log-dir", serve.log_dir, "Directory for session logs");
    sv->add_flag("--stdio", serve.stdio, "Serve one session over stdin/stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*s) return cmd_score(score);
        if (*m) return cmd_simulate(sim);
        if (*v) return cmd_viz(viz);
        if (*q) return cmd_quality(quality);
        if (*c) return cmd_checkpoints(cps);
        if (*x) return cmd_convert(conv);
        if (*sv) return cmd_serve(serve);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
