import json
import math
from pathlib import Path

import pytest

import motionguide as mg

DATA = Path(__file__).resolve().parents[2] / "data"

# Two-joint clip in centimeters: a root rolling an arm up about Z, 31 frames at 30 fps.
ARM = """HIERARCHY
ROOT hips
{
  OFFSET 0 0 0
  CHANNELS 6 Xposition Yposition Zposition Zrotation Xrotation Yrotation
  JOINT arm
  {
    OFFSET 50 0 0
    CHANNELS 3 Zrotation Xrotation Yrotation
    End Site
    {
      OFFSET 50 0 0
    }
  }
}
MOTION
Frames: 31
Frame Time: 0.0333333
"""
ARM += "".join(f"0 100 0 {3 * k} 0 0 0 0 0\n" for k in range(31))


@pytest.fixture(scope="module")
def instructor():
    return mg.load_bvh(str(DATA / "registry" / "warmup.bvh"))


def test_bvh_parse_and_round_trip():
    clip = mg.parse_bvh(ARM)
    assert clip.frame_count == 31 and len(clip) == 31
    assert clip.joint_names == ["hips", "arm"]
    assert abs(clip.fps - 30.0) < 0.01
    assert clip.duration == pytest.approx(1.0, abs=1e-4)
    # root yawed about Z by 90 degrees at frame 30 puts the arm joint straight up
    x, y, z = clip.positions(30)["arm"]
    assert (x, y, z) == pytest.approx((0.0, 1.5, 0.0), abs=1e-6)
    back = mg.parse_bvh(clip.to_bvh())
    for k in (0, 15, 30):
        for name, p in clip.positions(k).items():
            assert back.positions(k)[name] == pytest.approx(p, abs=1e-5)
    with pytest.raises(IndexError):
        clip.positions(31)


def test_parse_errors_carry_the_line():
    with pytest.raises(mg.ParseError) as info:
        mg.parse_bvh(ARM.replace("CHANNELS 3", "CHANNELS 4"))
    assert info.value.line == 9
    assert isinstance(info.value, mg.MotionGuideError)
    assert isinstance(info.value, ValueError)
    with pytest.raises(mg.MotionGuideError, match="nowhere.bvh"):
        mg.load_bvh("nowhere.bvh")


def test_self_match_scores_100(instructor):
    totals = mg.scores(instructor, instructor)
    assert len(totals) == instructor.frame_count
    assert all(t == pytest.approx(100.0, abs=1e-9) for t in totals)


def test_stream_replay_and_server(instructor):
    stream = instructor.to_joint_stream()
    user = mg.parse_joint_stream(stream)
    assert user.frame_count == instructor.frame_count

    lines = [mg.hello_message("warmup")]
    lines += [mg.frame_message(r) for r in stream.splitlines()]
    lines.append(mg.bye_message())
    replies = [json.loads(r) for r in mg.serve_lines({"warmup": instructor}, lines)]
    assert replies[0]["type"] == "ready"
    assert len(replies) == instructor.frame_count + 1

    offline = [json.loads(l) for l in mg.simulate(instructor, user).splitlines()]
    assert [r["frame"] for r in replies[1:]] == offline[:-1]
    assert offline[-1]["summary"]["ticks"] == instructor.frame_count

    bad = mg.serve_lines({"warmup": instructor}, [mg.hello_message("nope")])
    assert json.loads(bad[0])["code"] == "UnknownClip"


def test_navigation_and_checkpoints(instructor):
    cps = mg.checkpoints(instructor, 2.0)
    assert cps[0] == 0.0 and cps[-1] == pytest.approx(instructor.duration)
    log = mg.simulate(instructor, instructor, config=json.dumps({"mode": "navigation"}))
    rows = [json.loads(l) for l in log.splitlines()]
    assert rows[-1]["summary"]["completed"] is True
    playheads = [r["nav"]["playhead"] for r in rows[:-1]]
    assert playheads == sorted(playheads)
    csv = mg.simulate(instructor, instructor, format="csv")
    assert csv.startswith("tick,")


def test_quality_and_viz(instructor):
    report = mg.quality(instructor)
    assert report["clean_fraction"] == 1.0
    scene = mg.trajectory(instructor, "right_wrist", 2.0)
    assert scene[0]["type"] == "polyline"
    assert len(scene[0]["points"]) == 46
    marks = mg.footprints(instructor, 2.0)
    assert len(marks) == 4
    assert all(m["type"] == "ground_disc" and 0.0 < m["rgba"][3] <= 1.0 for m in marks)
    with pytest.raises(mg.MotionGuideError, match="tail"):
        mg.trajectory(instructor, "tail", 1.0)


def test_deterministic(instructor):
    user = mg.parse_joint_stream(instructor.to_joint_stream())
    assert mg.simulate(instructor, user) == mg.simulate(instructor, user)
    assert math.isclose(sum(mg.scores(instructor, user)), 100.0 * instructor.frame_count)
