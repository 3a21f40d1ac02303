#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "motionguide/bvh.hpp"
#include "motionguide/joint_stream.hpp"
#include "support/synth.hpp"

using namespace motionguide;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

// stderr is folded into the captured text so error messages can be checked.
Run cli(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + "'" MOTIONGUIDE_CLI "' " + args + " 2>&1";
    Run r;
    FILE* p = ::popen(cmd.c_str(), "r");
    REQUIRE(p);
    char buf[4096];
    for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
    const int status = ::pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

PoseFrame kinect_rest() {
    PoseFrame f;
    f.root_position = {0, 0.9, 0};
    f.joint_rotations.assign(kinect32_skeleton().size(), Quat{});
    return f;
}

struct Workspace {
    fs::path dir;
    std::string instructor, user_bvh, user_stream, kinect_stream, kinect_map;

    Workspace() {
        dir = fs::temp_directory_path() / ("motionguide_cli_" + std::to_string(::getpid()));
        fs::remove_all(dir);
        fs::create_directories(dir / "registry");
        const MotionClip clip = synth::exercise_clip(4.0);
        std::vector<PoseFrame> frames = clip.frames();
        for (auto& f : frames) f.root_position.x += 0.6;
        for (std::size_t k = 5; k < frames.size(); k += 17) frames[k] = synth::exercise_pose(40.0 + k);
        const MotionClip user(clip.skeleton(), frames, 30.0);

        instructor = (dir / "instructor.bvh").string();
        user_bvh = (dir / "user.bvh").string();
        user_stream = (dir / "user.jsonl").string();
        kinect_stream = (dir / "kinect.jsonl").string();
        kinect_map = (dir / "kinect32.json").string();
        put(instructor, serialize_bvh(clip));
        put(dir / "registry" / "squat.bvh", serialize_bvh(clip));
        put(user_bvh, serialize_bvh(user));
        put(user_stream, write_joint_stream(user));
        put(kinect_map, std::string(default_kinect_map_json()));
        put(kinect_stream, write_joint_stream(MotionClip(kinect32_skeleton(),
                                                         std::vector<PoseFrame>(31, kinect_rest()),
                                                         30.0)));
    }
    ~Workspace() { fs::remove_all(dir); }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

const Workspace& ws() {
    static const Workspace w;
    return w;
}

}  // namespace

TEST_CASE("bad flags print usage and exit 2") {
    for (const char* args : {"", "frobnicate", "score", "score --instructor a.bvh", "viz --feature sparkles --in a.bvh",
                             "quality --bogus x.bvh", "checkpoints --in a.bvh --step -1",
                             "simulate --instructor a --user b --mode dance"}) {
        CAPTURE(args);
        const Run r = cli(args);
        CHECK(r.code == 2);
        CHECK_FALSE(r.out.empty());
    }
    CHECK(cli("--help").code == 0);
}

TEST_CASE("processing errors name the file and exit 1") {
    const Run r = cli("quality missing.bvh");
    CHECK(r.code == 1);
    CHECK(r.out.find("missing.bvh") != std::string::npos);

    const std::string broken = ws().path("broken.bvh");
    put(broken, "HIERARCHY\nROOT a\n{\n");
    CHECK(cli("quality " + broken).code == 1);
    CHECK(cli("score --instructor " + ws().instructor + " --user " + ws().user_stream + " --map nope.json").code == 1);
    CHECK(cli("viz --feature trajectory --joint tail --t 1 --in " + ws().instructor).code == 1);
}

TEST_CASE("score writes a timeline report") {
    const std::string out = ws().path("report.json");
    const Run r = cli("score --instructor " + ws().instructor + " --user " + ws().user_stream + " --out " + out);
    REQUIRE(r.code == 0);
    const json report = json::parse(slurp(out));
    REQUIRE(report["frames"].size() == 121);
    CHECK(report["frames"][0]["per_joint"].size() == 10);
    CHECK(report["frames"][0]["total"].get<double>() == doctest::Approx(100.0));
    CHECK(report["min"].get<double>() < 100.0);

    // same report from the BVH copy of the user motion
    const std::string again = ws().path("report_bvh.json");
    REQUIRE(cli("score --instructor " + ws().instructor + " --user " + ws().user_bvh + " --out " + again).code == 0);
    CHECK(json::parse(slurp(again))["frames"].size() == 121);

    // a kinect32 stream through a map file
    const Run k = cli("score --instructor " + ws().instructor + " --user " + ws().kinect_stream + " --map " +
                      ws().kinect_map);
    REQUIRE(k.code == 0);
    CHECK(json::parse(k.out)["frames"].size() == 31);
}

TEST_CASE("viz trajectory prints scene JSON on stdout") {
    const Run r = cli("viz --feature trajectory --joint right_wrist --t 3 --window 1.5 --in " + ws().instructor);
    REQUIRE(r.code == 0);
    const json scene = json::parse(r.out);
    REQUIRE(scene.size() == 1);
    CHECK(scene[0]["points"].size() == 46);
    for (const char* f : {"footprints", "gaze"})
        CHECK(json::parse(cli(std::string("viz --feature ") + f + " --t 3 --in " + ws().instructor).out).is_array());
    const Run a = cli("viz --feature anchor --t 1 --in " + ws().instructor + " --user " + ws().user_bvh);
    REQUIRE(a.code == 0);
    CHECK(json::parse(a.out)["type"] == "first_person_anchor");
}

TEST_CASE("quality, checkpoints and convert") {
    const Run q = cli("quality --json " + ws().instructor);
    REQUIRE(q.code == 0);
    CHECK(json::parse(q.out)["clean_fraction"].get<double>() == 1.0);
    CHECK(cli("quality " + ws().instructor).out.find("clean_fraction: 1.000") != std::string::npos);

    const Run c = cli("checkpoints --in " + ws().instructor);
    REQUIRE(c.code == 0);
    CHECK(json::parse(c.out)["checkpoints"] == json::array({0.0, 2.0, 4.0}));
    CHECK(json::parse(cli("checkpoints --preset fine --in " + ws().instructor).out)["checkpoints"].size() == 9);

    const std::string bvh = ws().path("converted.bvh");
    REQUIRE(cli("convert --in " + ws().user_stream + " --out " + bvh).code == 0);
    const MotionClip back = load_bvh_file(bvh);
    const MotionClip orig = load_bvh_file(ws().user_bvh);
    REQUIRE(back.frame_count() == orig.frame_count());
    const auto a = forward_kinematics(back.skeleton(), back.frames()[30]);
    const auto b = forward_kinematics(orig.skeleton(), orig.frames()[30]);
    for (std::size_t j = 0; j < a.size(); ++j) CHECK(distance(a[j].position, b[j].position) < 1e-5);
    CHECK(cli("convert --in " + ws().user_bvh).out == write_joint_stream(orig));
}

TEST_CASE("simulate writes JSONL and CSV logs") {
    const std::string log = ws().path("sim.jsonl"), csv = ws().path("sim.csv");
    REQUIRE(cli("simulate --mode navigation --instructor " + ws().instructor + " --user " + ws().user_stream +
                " --out " + log + " --csv " + csv)
                .code == 0);
    std::istringstream in(slurp(log));
    std::size_t rows = 0;
    json last;
    for (std::string l; std::getline(in, l); ++rows) last = json::parse(l);
    CHECK(rows == 122);
    CHECK(last["config"]["mode"] == "navigation");
    CHECK(slurp(csv).rfind("tick,", 0) == 0);
}

TEST_CASE("serve --stdio uses the registry from the environment") {
    const std::string session = ws().path("session.in");
    put(session, "{\"type\":\"hello\",\"protocol_version\":1,\"instructor_clip_id\":\"squat\"}\n{\"type\":\"bye\"}\n");
    const std::string env = "MOTIONGUIDE_REGISTRY='" + (ws().dir / "registry").string() + "'";
    const Run r = cli("serve --stdio < " + session, env);
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["type"] == "ready");
    // an explicit flag wins over the environment
    const Run missing = cli("serve --stdio --registry " + ws().path("nowhere") + " < " + session, env);
    CHECK(missing.code == 1);
}

TEST_CASE("every command is byte-identical across runs") {
    const std::string i = " --instructor " + ws().instructor + " --user " + ws().user_stream;
    for (const std::string& args :
         {"score" + i, "simulate --mode navigation" + i, "simulate" + i,
          "viz --feature footprints --t 3.5 --in " + ws().instructor,
          "viz --feature anchor --anchor-mode yaw --t 2 --in " + ws().instructor + " --user " + ws().user_bvh,
          "quality --json " + ws().user_bvh, "checkpoints --in " + ws().instructor,
          "convert --in " + ws().user_stream}) {
        CAPTURE(args);
        const Run a = cli(args), b = cli(args);
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
    }
}
