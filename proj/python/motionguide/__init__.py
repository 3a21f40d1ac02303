"""Pose-match scoring, navigation, visualization geometry and quality checks
for motion clips. Thin wrapper over the C++ core; JSON outputs are decoded."""

import json as _json

from ._core import (
    MotionClip,
    MotionGuideError,
    ParseError,
    bye_message,
    checkpoints,
    frame_message,
    hello_message,
    load_bvh,
    parse_bvh,
    parse_joint_stream,
    scores,
    serve_lines,
    simulate,
)
from . import _core

__all__ = [
    "MotionClip",
    "MotionGuideError",
    "ParseError",
    "bye_message",
    "checkpoints",
    "footprints",
    "frame_message",
    "hello_message",
    "load_bvh",
    "parse_bvh",
    "parse_joint_stream",
    "quality",
    "scores",
    "serve_lines",
    "simulate",
    "trajectory",
]


def quality(clip, config=None):
    """Quality report as a dict."""
    return _json.loads(_core.quality_report(clip, _json.dumps(config) if config else ""))


def trajectory(clip, joint, t, window=1.5):
    """Trajectory polyline scene (list of primitives)."""
    return _json.loads(_core.trajectory_scene(clip, joint, t, window))


def footprints(clip, t, interval=2.0, fade=4.0):
    return _json.loads(_core.footprints_scene(clip, t, interval, fade))
