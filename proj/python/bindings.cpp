#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "motionguide/builtin.hpp"
#include "motionguide/bvh.hpp"
#include "motionguide/config.hpp"
#include "motionguide/error.hpp"
#include "motionguide/joint_stream.hpp"
#include "motionguide/json_writer.hpp"
#include "motionguide/navigate.hpp"
#include "motionguide/protocol.hpp"
#include "motionguide/quality.hpp"
#include "motionguide/session.hpp"
#include "motionguide/viz.hpp"

namespace py = pybind11;
namespace mg = motionguide;

namespace {

mg::JointMapTable map_from(const std::string& which) {
    if (which.empty() || which == "canonical20") return mg::identity_canonical_map();
    if (which == "kinect32") return mg::default_kinect_map();
    return mg::load_joint_map(which);  // JSON text
}

mg::Skeleton skeleton_from(const std::string& id) {
    if (auto s = mg::builtin_skeleton(id)) return *s;
    throw mg::ValidationError("unknown skeleton '" + id + "'");
}

nlohmann::json config_from(const std::string& text) {
    return text.empty() ? nlohmann::json::object() : mg::parse_config_text(text);
}

py::tuple vec(const mg::Vec3& v) { return py::make_tuple(v.x, v.y, v.z); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Pose-match scoring, navigation, visualization geometry and quality checks for motion clips.";

    PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type, parse_error_type;
    error_type.call_once_and_store_result(
        [&] { return py::exception<mg::Error>(m, "MotionGuideError", PyExc_ValueError); });
    parse_error_type.call_once_and_store_result(
        [&] { return py::exception<mg::ParseError>(m, "ParseError", error_type.get_stored()); });
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const mg::ParseError& e) {
            // carry the line number as an attribute
            py::object exc = parse_error_type.get_stored()(e.what());
            exc.attr("line") = e.line();
            PyErr_SetObject(parse_error_type.get_stored().ptr(), exc.ptr());
        } catch (const mg::Error& e) {
            PyErr_SetString(error_type.get_stored().ptr(), e.what());
        }
    });

    py::class_<mg::MotionClip>(m, "MotionClip")
        .def_property_readonly("fps", &mg::MotionClip::fps)
        .def_property_readonly("frame_count", &mg::MotionClip::frame_count)
        .def_property_readonly("duration", [](const mg::MotionClip& c) { return mg::clip_duration(c); })
        .def_property_readonly("joint_names",
                               [](const mg::MotionClip& c) {
                                   std::vector<std::string> names;
                                   for (std::size_t j = 0; j < c.skeleton().size(); ++j)
                                       names.push_back(c.skeleton()[j].name);
                                   return names;
                               })
        .def(
            "positions",
            [](const mg::MotionClip& c, std::size_t frame) {
                if (frame >= c.frame_count()) throw py::index_error("frame out of range");
                py::dict out;
                for (const auto& j : mg::forward_kinematics(c.skeleton(), c.frames()[frame]))
                    out[py::str(j.name)] = vec(j.position);
                return out;
            },
            py::arg("frame"), "World joint positions of one frame, keyed by joint name.")
        .def("to_bvh", [](const mg::MotionClip& c) { return mg::serialize_bvh(c); })
        .def("to_joint_stream", [](const mg::MotionClip& c) { return mg::write_joint_stream(c); })
        .def("__len__", &mg::MotionClip::frame_count)
        .def("__repr__", [](const mg::MotionClip& c) {
            return "<MotionClip " + std::to_string(c.skeleton().size()) + " joints, " +
                   std::to_string(c.frame_count()) + " frames @ " + mg::format_fixed(c.fps(), 3) + " fps>";
        });

    m.def("parse_bvh", [](const std::string& text) { return mg::parse_bvh(text); }, py::arg("text"));
    m.def("load_bvh", [](const std::string& path) { return mg::load_bvh_file(path); }, py::arg("path"));
    m.def(
        "parse_joint_stream",
        [](const std::string& text, const std::string& skeleton, double fps) {
            return mg::parse_joint_stream(text, skeleton_from(skeleton), fps);
        },
        py::arg("text"), py::arg("skeleton") = "canonical20", py::arg("fps") = 30.0);

    m.def(
        "simulate",
        [](const mg::MotionClip& instructor, const mg::MotionClip& user, const std::string& config,
           const std::string& map, const std::string& format) {
            const auto log = mg::run_session(instructor, user, map_from(map),
                                             mg::session_config_from_json(config_from(config)));
            return mg::write_log(log, format == "csv" ? mg::LogFormat::Csv : mg::LogFormat::Jsonl);
        },
        py::arg("instructor"), py::arg("user"), py::arg("config") = "", py::arg("map") = "canonical20",
        py::arg("format") = "jsonl", "Replay a session; returns the log text.");

    m.def(
        "scores",
        [](const mg::MotionClip& instructor, const mg::MotionClip& user, const std::string& map) {
            std::vector<double> out;
            for (const auto& f : mg::run_session(instructor, user, map_from(map), {}).frames)
                out.push_back(f.score.total);
            return out;
        },
        py::arg("instructor"), py::arg("user"), py::arg("map") = "canonical20",
        "Per-frame follow-along totals.");

    m.def(
        "checkpoints",
        [](const mg::MotionClip& clip, double step) {
            mg::NavConfig cfg;
            cfg.step_seconds = step;
            return mg::build_checkpoints(clip, cfg);
        },
        py::arg("clip"), py::arg("step") = 2.0);

    m.def(
        "quality_report",
        [](const mg::MotionClip& clip, const std::string& config) {
            return mg::to_json(mg::check_clip(clip, mg::quality_config_from_json(config_from(config))));
        },
        py::arg("clip"), py::arg("config") = "", "Quality report as JSON text.");

    m.def(
        "trajectory_scene",
        [](const mg::MotionClip& clip, const std::string& joint, double t, double window) {
            return mg::export_scene({mg::to_primitive(mg::trajectory(clip, joint, t, window), t)});
        },
        py::arg("clip"), py::arg("joint"), py::arg("t"), py::arg("window") = 1.5);

    m.def(
        "footprints_scene",
        [](const mg::MotionClip& clip, double t, double interval, double fade) {
            std::vector<mg::ScenePrimitive> scene;
            for (const auto& f : mg::footprints(clip, t, {interval, fade})) scene.push_back(mg::to_primitive(f, t));
            return mg::export_scene(scene);
        },
        py::arg("clip"), py::arg("t"), py::arg("interval") = 2.0, py::arg("fade") = 4.0);

    m.def(
        "serve_lines",
        [](const std::map<std::string, const mg::MotionClip*>& clips, const std::vector<std::string>& lines) {
            mg::ClipRegistry registry;
            for (const auto& [id, clip] : clips) registry.add(id, *clip);
            mg::ServerContext ctx;
            ctx.registry = &registry;
            mg::Connection conn(ctx);
            std::vector<std::string> replies;
            for (const auto& line : lines) {
                if (conn.closed()) break;
                if (auto r = conn.handle(line)) replies.push_back(*r);
            }
            return replies;
        },
        py::arg("clips"), py::arg("lines"),
        "Feed protocol lines to one in-process server connection; returns its replies.");

    m.def("hello_message", [](const std::string& clip_id, const std::string& config) {
        return mg::hello_message(clip_id, mg::session_config_from_json(config_from(config)));
    }, py::arg("clip_id"), py::arg("config") = "");
    m.def("frame_message", [](const std::string& record) { return mg::frame_message(mg::parse_stream_record(record, 0)); },
          py::arg("record"));
    m.def("bye_message", &mg::bye_message);
}
