#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "motionguide/builtin.hpp"
#include "motionguide/error.hpp"
#include "motionguide/joint_map.hpp"
#include "motionguide/normalize.hpp"
#include "support/synth.hpp"

using namespace motionguide;

namespace {

WorldPose world(const PoseFrame& f) { return forward_kinematics(canonical_skeleton(), f); }

WorldPose kinect_rest() {
    PoseFrame f;
    f.root_position = {0, 0.9, 0};
    f.joint_rotations.assign(kinect32_skeleton().size(), Quat{});
    return forward_kinematics(kinect32_skeleton(), f);
}

double max_diff(const NormalizedPose& a, const NormalizedPose& b) {
    double m = 0;
    for (std::size_t i = 0; i < kCanonicalJointCount; ++i) {
        REQUIRE(a.positions[i].has_value() == b.positions[i].has_value());
        if (a.positions[i]) m = std::max(m, distance(*a.positions[i], *b.positions[i]));
    }
    return m;
}

CanonicalPose as_canonical(const NormalizedPose& n) {
    CanonicalPose c;
    for (std::size_t i = 0; i < kCanonicalJointCount; ++i)
        if (n.positions[i]) c.joints[i] = JointPose{std::string(kCanonicalJointNames[i]), *n.positions[i], Quat{}};
    return c;
}

NormalizedPose norm(const WorldPose& w) { return normalize(retarget(w, identity_canonical_map())); }

}  // namespace

TEST_CASE("identity retarget reproduces canonical input") {
    std::mt19937 rng(1);
    const WorldPose w = world(synth::random_pose(rng));
    const CanonicalPose c = retarget(w, identity_canonical_map());
    for (const auto& jp : w) {
        const auto j = canonical_joint(jp.name);
        REQUIRE(j);
        REQUIRE(c[*j]);
        CHECK(c[*j]->position == jp.position);
        CHECK(c[*j]->rotation == jp.rotation);
    }
}

TEST_CASE("kinect rest pose fills all twenty canonical joints") {
    const WorldPose w = kinect_rest();
    const CanonicalPose c = retarget(w, default_kinect_map());
    for (std::size_t i = 0; i < kCanonicalJointCount; ++i) {
        CAPTURE(kCanonicalJointNames[i]);
        REQUIRE(c.joints[i]);
        // position comes from the mapped source joint
        const auto src = default_kinect_map().source_for(kCanonicalJointNames[i]);
        REQUIRE(src);
        CHECK(c.joints[i]->position == find_joint(w, *src)->position);
    }
}

TEST_CASE("retarget names a missing required source joint") {
    std::mt19937 rng(2);
    WorldPose w = world(synth::random_pose(rng));
    w.erase(std::remove_if(w.begin(), w.end(), [](const JointPose& j) { return j.name == "pelvis"; }), w.end());
    try {
        retarget(w, identity_canonical_map());
        FAIL("expected RetargetError");
    } catch (const RetargetError& e) {
        CHECK(std::string(e.what()).find("pelvis") != std::string::npos);
    }

    // optional joints may be absent
    WorldPose no_nose = world(synth::rest_pose());
    no_nose.erase(std::remove_if(no_nose.begin(), no_nose.end(), [](const JointPose& j) { return j.name == "nose"; }),
                  no_nose.end());
    const CanonicalPose c = retarget(no_nose, identity_canonical_map());
    CHECK_FALSE(c[CanonicalJoint::Nose]);
    CHECK(normalize(c)[CanonicalJoint::Head]);
}

TEST_CASE("normalize leaves an already normalized pose unchanged") {
    const NormalizedPose once = norm(world(synth::rest_pose()));
    const CanonicalPose c = as_canonical(once);
    const NormalizedPose twice = normalize(c);
    CHECK(max_diff(once, twice) < 1e-6);
    for (std::size_t i = 0; i < kCanonicalJointCount; ++i)
        CHECK(distance(*twice.positions[i], c.joints[i]->position) < 1e-6);
    CHECK(twice.height_scale == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("normalized pose invariants") {
    std::mt19937 rng(3);
    for (int i = 0; i < 200; ++i) {
        const NormalizedPose n = norm(world(synth::random_pose(rng)));
        CHECK((*n[CanonicalJoint::Pelvis]).norm() < 1e-12);
        const Vec3 head = *n[CanonicalJoint::Head];
        const double ankles = 0.5 * (n[CanonicalJoint::LeftAnkle]->y + n[CanonicalJoint::RightAnkle]->y);
        CHECK(std::abs(head.y - ankles - 1.0) < 1e-3);
        // hip line runs along -X so its ground normal is +Z
        const Vec3 hips = *n[CanonicalJoint::RightHip] - *n[CanonicalJoint::LeftHip];
        Vec3 facing = kUp.cross(hips);
        facing.y = 0;
        CHECK(distance(facing.normalized(), Vec3{0, 0, 1}) < 1e-3);
        CHECK(n.facing.is_unit(1e-6));
    }
}

TEST_CASE("translation and yaw examples") {
    const WorldPose w = world(synth::rest_pose());
    const NormalizedPose base = norm(w);
    CHECK(max_diff(base, norm(synth::transform_pose(w, 1.0, 0.0, {5, 0, 3}))) < 1e-12);

    const NormalizedPose turned = norm(synth::transform_pose(w, 1.0, kPi / 2, {}));
    CHECK(max_diff(base, turned) < 1e-6);
    CHECK(turned.facing.yaw() == doctest::Approx(kPi / 2).epsilon(1e-9));
    CHECK(base.facing.yaw() == doctest::Approx(0.0));
}

TEST_CASE("normalize is invariant to translation, uniform scale and yaw") {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> scale(0.5, 2.0), yaw(-kPi, kPi), off(-10, 10);
    for (int i = 0; i < 500; ++i) {
        const WorldPose w = world(synth::random_pose(rng));
        const WorldPose t = synth::transform_pose(w, scale(rng), yaw(rng), {off(rng), off(rng), off(rng)});
        CHECK(max_diff(norm(w), norm(t)) < 1e-6);
    }
}

TEST_CASE("normalize is idempotent on its own output") {
    std::mt19937 rng(5);
    for (int i = 0; i < 200; ++i) {
        const NormalizedPose n = norm(world(synth::random_pose(rng)));
        CHECK(max_diff(n, normalize(as_canonical(n))) < 1e-9);
    }
}

TEST_CASE("degenerate bodies are rejected") {
    CanonicalPose c = retarget(world(synth::rest_pose()), identity_canonical_map());
    for (auto& j : c.joints)
        if (j) j->position.y = 0.95;
    CHECK_THROWS_AS(normalize(c), NormalizeError);
    CanonicalPose missing = retarget(world(synth::rest_pose()), identity_canonical_map());
    missing[CanonicalJoint::LeftAnkle].reset();
    CHECK_THROWS_WITH_AS(normalize(missing), doctest::Contains("left_ankle"), NormalizeError);
}

TEST_CASE("per-frame normalization is independent of frame order") {
    const MotionClip clip = synth::exercise_clip(3.0);
    std::vector<NormalizedPose> forward;
    for (const auto& f : clip.frames()) forward.push_back(norm(world(f)));
    std::vector<std::size_t> order(clip.frame_count());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), std::mt19937(6));
    for (std::size_t k : order) CHECK(max_diff(norm(world(clip.frames()[k])), forward[k]) == 0.0);
}

TEST_CASE("span reference is the causal 95th percentile") {
    SpanTracker tracker;
    CHECK(tracker.reference() == 0.0);
    std::vector<double> seen;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    for (int i = 0; i < 100; ++i) {
        const double s = u(rng);
        seen.push_back(s);
        std::vector<double> sorted = seen;
        std::sort(sorted.begin(), sorted.end());
        // nearest rank: ceil(0.95 n)
        const std::size_t rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(sorted.size())));
        CHECK(tracker.observe(s) == sorted[rank - 1]);
    }
}

TEST_CASE("pipeline keeps the standing scale through a crouch") {
    // Standing frames then a crouch: knees bent lower the head.
    std::vector<PoseFrame> frames(40, synth::rest_pose());
    PoseFrame crouch = synth::rest_pose();
    const auto& s = canonical_skeleton();
    crouch.root_position.y = 0.7;
    crouch.joint_rotations[s.index_of("left_hip")] = Quat::from_axis_angle({1, 0, 0}, -1.0);
    crouch.joint_rotations[s.index_of("right_hip")] = Quat::from_axis_angle({1, 0, 0}, -1.0);
    crouch.joint_rotations[s.index_of("left_knee")] = Quat::from_axis_angle({1, 0, 0}, 2.0);
    crouch.joint_rotations[s.index_of("right_knee")] = Quat::from_axis_angle({1, 0, 0}, 2.0);
    frames.push_back(crouch);
    const MotionClip clip(s, frames, 30.0);
    const auto out = normalize_clip(clip, identity_canonical_map());
    const double standing = vertical_span(retarget(world(frames[0]), identity_canonical_map()));
    CHECK(out.front().height_scale == doctest::Approx(standing));
    CHECK(out.back().height_scale == doctest::Approx(standing));
    CHECK(vertical_span(retarget(world(crouch), identity_canonical_map())) < standing);

    // causal: a prefix normalizes exactly like the head of the full clip
    const MotionClip prefix(s, std::vector<PoseFrame>(frames.begin(), frames.begin() + 10), 30.0);
    const auto head = normalize_clip(prefix, identity_canonical_map());
    for (std::size_t k = 0; k < head.size(); ++k) CHECK(max_diff(head[k], out[k]) == 0.0);
}

TEST_CASE("resample examples") {
    const MotionClip clip = synth::exercise_clip(2.0);
    CHECK(resample(clip, 30.0) == clip);

    std::vector<PoseFrame> two = {synth::rest_pose(), synth::rest_pose()};
    two[1].root_position = {1, 0.95, 2};
    two[1].joint_rotations[7] = Quat::from_axis_angle({0, 1, 0}, 1.2);
    const MotionClip slow(canonical_skeleton(), two, 1.0);
    const MotionClip fast = resample(slow, 60.0);
    CHECK(fast.frame_count() == 61);
    CHECK(fast.fps() == 60.0);
    const PoseFrame& mid = fast.frames()[30];
    CHECK(distance(mid.root_position, Vec3{0.5, 0.95, 1.0}) < 1e-12);
    CHECK(angular_distance(mid.joint_rotations[7], Quat::from_axis_angle({0, 1, 0}, 0.6)) < 1e-9);
    CHECK(fast.frames().back() == two[1]);

    const MotionClip single = synth::constant_clip(synth::rest_pose(), 1, 24.0);
    for (double fps : {1.0, 30.0, 120.0}) CHECK(resample(single, fps).frame_count() == 1);
    CHECK_THROWS_AS(resample(single, 0.0), DomainError);
}

TEST_CASE("resample frame count is round(duration * fps) + 1") {
    std::mt19937 rng(8);
    std::uniform_int_distribution<int> frames(1, 90);
    std::uniform_real_distribution<double> fps(5, 120);
    for (int i = 0; i < 50; ++i) {
        const MotionClip c = synth::constant_clip(synth::rest_pose(), static_cast<std::size_t>(frames(rng)), fps(rng));
        const double target = fps(rng);
        CHECK(resample(c, target).frame_count() ==
              static_cast<std::size_t>(std::llround(clip_duration(c) * target)) + 1);
    }
}
