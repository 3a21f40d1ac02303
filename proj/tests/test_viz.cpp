#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "motionguide/error.hpp"
#include "motionguide/viz.hpp"
#include "support/oracle.hpp"
#include "support/synth.hpp"

using namespace motionguide;
namespace fs = std::filesystem;

namespace {

const fs::path kGolden = fs::path(MOTIONGUIDE_DATA_DIR) / "scene";

// Set MOTIONGUIDE_UPDATE_GOLDEN=1 to rewrite the files after an intended change.
void check_golden(const std::string& name, const std::string& text) {
    const fs::path path = kGolden / (name + ".json");
    if (std::getenv("MOTIONGUIDE_UPDATE_GOLDEN")) {
        fs::create_directories(kGolden);
        std::ofstream(path, std::ios::binary) << text;
    }
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in, "missing golden file " << path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == text);
}

MotionClip still_clip(double seconds) {
    return synth::constant_clip(synth::rest_pose(), static_cast<std::size_t>(std::llround(seconds * 30)) + 1);
}

// The whole body spins about the vertical, so each wrist traces a circle.
MotionClip spinning_clip(double seconds) {
    std::vector<PoseFrame> frames;
    for (std::size_t k = 0; k <= static_cast<std::size_t>(seconds * 30); ++k) {
        PoseFrame f = synth::rest_pose();
        f.joint_rotations[0] = Quat::from_yaw(0.2 * static_cast<double>(k));
        frames.push_back(f);
    }
    return MotionClip(canonical_skeleton(), frames, 30.0);
}

}  // namespace

TEST_CASE("trajectory of a still joint") {
    const MotionClip clip = still_clip(6.0);
    const TrajectoryPolyline path = trajectory(clip, "right_wrist", 5.0, 1.5);
    REQUIRE(path.points.size() == 46);
    CHECK(path.joint == "right_wrist");
    for (std::size_t k = 0; k < path.points.size(); ++k) {
        CHECK(path.points[k].position == path.points[0].position);
        CHECK(path.points[k].alpha == doctest::Approx(static_cast<double>(k) / 45.0));
        CHECK(path.points[k].t == doctest::Approx(3.5 + static_cast<double>(k) / 30.0));
    }
    CHECK(path.points.front().alpha == 0.0);
    CHECK(path.points.back().alpha == 1.0);

    CHECK(trajectory(clip, "right_wrist", 0.5, 1.5).points.size() == 16);
    const auto first = trajectory(clip, "left_wrist", 0.0);
    REQUIRE(first.points.size() == 1);
    CHECK(first.points[0].alpha == 1.0);
}

TEST_CASE("trajectory points are the joint's FK positions") {
    const MotionClip clip = spinning_clip(4.0);
    const std::size_t wrist = clip.skeleton().index_of("left_wrist");
    for (double t : {0.0, 0.7, 1.5, 2.0, 3.1, 4.0}) {
        const auto path = trajectory(clip, "left_wrist", t, 1.5);
        for (const auto& p : path.points) {
            const auto k = static_cast<std::size_t>(std::llround(p.t * 30.0));
            CHECK(p.position == forward_kinematics(clip.skeleton(), clip.frames()[k])[wrist].position);
            CHECK(distance(p.position, oracle::forward_kinematics(clip.skeleton(), clip.frames()[k])[wrist].position) <
                  1e-12);
        }
        // length rule: min(window, t) * fps + 1
        CHECK(path.points.size() == static_cast<std::size_t>(std::llround(std::min(1.5, t) * 30.0)) + 1);
        for (std::size_t k = 1; k < path.points.size(); ++k) {
            CHECK(path.points[k].t > path.points[k - 1].t);
            CHECK(path.points[k].alpha >= path.points[k - 1].alpha);
        }
    }
}

TEST_CASE("trajectory errors") {
    const MotionClip clip = still_clip(1.0);
    CHECK_THROWS_WITH_AS(trajectory(clip, "tail", 0.5), doctest::Contains("tail"), VizError);
    CHECK_THROWS_AS(trajectory(clip, "head", 1.5), VizError);
    CHECK_THROWS_AS(trajectory(clip, "head", -0.1), VizError);
}

TEST_CASE("footprint schedule") {
    const MotionClip clip = spinning_clip(12.0);
    const auto marks = footprints(clip, 10.0, {2.0, 4.0});
    REQUIRE(marks.size() == 4);
    CHECK(marks[0].born_t == 8.0);
    CHECK(marks[0].alpha == doctest::Approx(0.5));
    CHECK(marks[2].born_t == 10.0);
    CHECK(marks[2].alpha == 1.0);
    CHECK(marks[0].foot == Foot::Left);
    CHECK(marks[1].foot == Foot::Right);
    for (const auto& m : marks) {
        CHECK(m.position.y == 0.0);
        CHECK(m.color == kFootprintBlue);
        const auto k = static_cast<std::size_t>(std::llround(m.born_t * 30.0));
        const auto pose = forward_kinematics(clip.skeleton(), clip.frames()[k]);
        const Vec3 foot = pose[clip.skeleton().index_of(m.foot == Foot::Left ? "left_foot" : "right_foot")].position;
        CHECK(distance(m.position, Vec3{foot.x, 0, foot.z}) < 1e-12);
        CHECK(std::abs(Quat::from_yaw(m.yaw).yaw() - pose[0].rotation.yaw()) < 1e-9);
    }

    // age 0 is fully opaque; age >= fade is never emitted
    const auto at_birth = footprints(clip, 4.0, {2.0, 4.0});
    CHECK(at_birth.back().alpha == 1.0);
    for (const auto& m : at_birth) CHECK(m.born_t > 0.0);
}

TEST_CASE("footprint alpha follows the linear fade") {
    const MotionClip clip = still_clip(20.0);
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> t(0.0, 20.0), iv(0.3, 3.0), fade(0.5, 6.0);
    for (int i = 0; i < 200; ++i) {
        const FootprintOptions o{iv(rng), fade(rng)};
        const double now = t(rng);
        const auto marks = footprints(clip, now, o);
        // expected count: births m*interval <= now with age < fade, two feet each
        std::size_t expect = 0;
        for (std::size_t m = 0; static_cast<double>(m) * o.interval <= now + 1e-9; ++m)
            expect += now - static_cast<double>(m) * o.interval < o.fade ? 2 : 0;
        CHECK(marks.size() == expect);
        for (std::size_t k = 0; k < marks.size(); ++k) {
            const double age = now - marks[k].born_t;
            CHECK(marks[k].alpha == doctest::Approx(std::clamp(1.0 - age / o.fade, 0.0, 1.0)));
            CHECK(marks[k].alpha > 0.0);
            if (k >= 2) CHECK(marks[k].alpha >= marks[k - 2].alpha);
        }
    }
}

TEST_CASE("head gaze") {
    const Skeleton& s = canonical_skeleton();
    PoseFrame f = synth::rest_pose();
    GazeRay ray = head_gaze(forward_kinematics(s, f));
    CHECK(distance(ray.direction, Vec3{0, 0, 1}) < 1e-12);
    CHECK(ray.length == 2.0);
    CHECK(distance(ray.origin, forward_kinematics(s, f)[s.index_of("head")].position) == 0.0);
    CHECK(distance(ray.endpoint(), ray.origin + Vec3{0, 0, 2}) < 1e-12);

    // turning the head toward -X (a -90 degree yaw) looks down -X
    f.joint_rotations[s.index_of("head")] = Quat::from_yaw(-kPi / 2);
    ray = head_gaze(forward_kinematics(s, f));
    CHECK(distance(ray.direction, oracle::apply_mat(oracle::rot_y(-kPi / 2), {0, 0, 1})) < 1e-6);
    CHECK(distance(ray.direction, Vec3{-1, 0, 0}) < 1e-6);
    // +90 degrees turns toward the performer's left, +X
    f.joint_rotations[s.index_of("head")] = Quat::from_yaw(kPi / 2);
    CHECK(distance(head_gaze(forward_kinematics(s, f)).direction, Vec3{1, 0, 0}) < 1e-6);

    std::mt19937 rng(2);
    for (int i = 0; i < 500; ++i) CHECK(std::abs(head_gaze(forward_kinematics(s, synth::random_pose(rng))).direction.norm() - 1.0) < 1e-6);

    WorldPose headless = forward_kinematics(s, synth::rest_pose());
    headless.erase(headless.begin() + static_cast<long>(s.index_of("head")));
    CHECK_THROWS_WITH_AS(head_gaze(headless), doctest::Contains("head"), VizError);
}

TEST_CASE("first-person anchor examples") {
    const HeadPose a{{0, 1.6, 0}, Quat{}};
    const auto same = first_person_anchor(a, a);
    CHECK(same.transform.rotation == Quat{});
    CHECK(same.transform.translation.norm() < 1e-12);

    const auto shift = first_person_anchor({{1, 1.7, 2}, Quat{}}, a);
    CHECK(distance(shift.transform.translation, Vec3{1, 0.1, 2}) < 1e-12);
    CHECK(shift.mode == AnchorMode::TranslationOnly);

    const HeadPose user{{3, 1.7, -1}, Quat::from_yaw(kPi / 2)};
    const auto yawed = first_person_anchor(user, a, AnchorMode::TranslationPlusYaw);
    const Vec3 avatar_fwd = yawed.transform.rotation.rotate(a.rotation.rotate(kForward));
    CHECK(distance(avatar_fwd, user.rotation.rotate(kForward)) < 1e-6);
    CHECK(distance(yawed.transform.apply(a.position), user.position) < 1e-6);
}

TEST_CASE("first-person anchor lands the head on 1000 random pairs") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> p(-5, 5);
    for (int i = 0; i < 1000; ++i) {
        const HeadPose user{{p(rng), p(rng), p(rng)}, synth::random_rotation(rng, kPi)};
        const HeadPose avatar{{p(rng), p(rng), p(rng)}, synth::random_rotation(rng, kPi)};
        const auto t = first_person_anchor(user, avatar, AnchorMode::TranslationOnly);
        CHECK(t.transform.rotation == Quat{});
        CHECK(distance(t.transform.apply(avatar.position), user.position) < 1e-6);
        const auto y = first_person_anchor(user, avatar, AnchorMode::TranslationPlusYaw);
        CHECK(distance(y.transform.apply(avatar.position), user.position) < 1e-6);
        CHECK(y.transform.rotation.is_unit(1e-6));
        // rotation is about the vertical only
        CHECK(distance(y.transform.rotation.rotate(kUp), kUp) < 1e-9);
    }
}

TEST_CASE("scene export") {
    CHECK(export_scene({}) == "[]");

    const GazeRay ray{{0.1, 1.6, -0.25}, {0, 0, 1}, 2.0};
    const std::string one = export_scene({to_primitive(ray, 1.5)});
    check_golden("ray", one);
    CHECK(export_scene({to_primitive(ray, 1.5)}) == one);
    CHECK(nlohmann::json::parse(one).is_array());

    const MotionClip clip = spinning_clip(2.0);
    check_golden("polyline", export_scene({to_primitive(trajectory(clip, "right_wrist", 0.2, 0.1), 0.2)}));
    check_golden("ground_disc", export_scene({to_primitive(footprints(clip, 2.0, {2.0, 4.0}).front(), 2.0)}));
    check_golden("indicator_sphere",
                 export_scene({indicator_sphere("left_elbow", IndicatorColor::Yellow, {0.4, 1.3, 0.05}, 0.5)}));

    // reals carry six decimals
    const auto doc = nlohmann::json::parse(one);
    CHECK(one.find("1.600000") != std::string::npos);
    CHECK(doc[0]["t"].get<double>() == 1.5);
}
