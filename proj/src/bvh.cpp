#include "motionguide/bvh.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "motionguide/error.hpp"
#include "motionguide/json_writer.hpp"

namespace motionguide {

namespace {

enum class Channel { Xpos, Ypos, Zpos, Xrot, Yrot, Zrot };

struct Token {
    std::string_view text;
    std::size_t line;
};

struct ParsedJoint {
    Joint joint;
    std::vector<Channel> channels;
    std::size_t line = 0;
};

double to_number(std::string_view s, std::size_t line) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    if (!s.empty() && *begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        throw ParseError(line, "expected a number, found '" + std::string(s) + "'");
    return v;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < text.size()) lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

Channel parse_channel(std::string_view s, std::size_t line) {
    static const std::pair<std::string_view, Channel> table[] = {
        {"Xposition", Channel::Xpos}, {"Yposition", Channel::Ypos}, {"Zposition", Channel::Zpos},
        {"Xrotation", Channel::Xrot}, {"Yrotation", Channel::Yrot}, {"Zrotation", Channel::Zrot}};
    for (const auto& [name, ch] : table)
        if (name == s) return ch;
    throw ParseError(line, "unknown channel '" + std::string(s) + "'");
}

class HierarchyParser {
public:
    HierarchyParser(std::vector<Token> tokens, double scale) : tokens_(std::move(tokens)), scale_(scale) {}

    std::vector<ParsedJoint> parse() {
        expect("HIERARCHY");
        expect("ROOT");
        parse_joint(std::nullopt);
        if (pos_ != tokens_.size()) fail("unexpected '" + std::string(tokens_[pos_].text) + "' after ROOT block");
        return std::move(joints_);
    }

private:
    const Token& next() {
        if (pos_ >= tokens_.size())
            throw ParseError(tokens_.empty() ? 1 : tokens_.back().line, "unexpected end of HIERARCHY");
        return tokens_[pos_++];
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(pos_ < tokens_.size() ? tokens_[pos_].line : tokens_.back().line, what);
    }
    void expect(std::string_view word) {
        const Token& t = next();
        if (t.text != word)
            throw ParseError(t.line, "expected '" + std::string(word) + "', found '" + std::string(t.text) + "'");
    }
    Vec3 parse_offset() {
        expect("OFFSET");
        Vec3 v;
        for (double* c : {&v.x, &v.y, &v.z}) {
            const Token& t = next();
            *c = to_number(t.text, t.line) * scale_;
        }
        return v;
    }

    void parse_joint(std::optional<std::size_t> parent) {
        const Token& name = next();
        if (name.text == "{") throw ParseError(name.line, "joint is missing a name");
        if (!names_.insert(std::string(name.text)).second)
            throw ParseError(name.line, "duplicate joint name '" + std::string(name.text) +
                                            "' (cyclic or ambiguous hierarchy)");
        const std::size_t self = joints_.size();
        joints_.push_back({});
        joints_[self].joint.name = std::string(name.text);
        joints_[self].joint.parent = parent;
        joints_[self].line = name.line;
        expect("{");
        joints_[self].joint.offset = parse_offset();

        const Token& kw = next();
        if (kw.text != "CHANNELS") throw ParseError(kw.line, "expected CHANNELS for joint '" + std::string(name.text) + "'");
        const Token& count_tok = next();
        const double count_d = to_number(count_tok.text, count_tok.line);
        if (count_d != 0 && count_d != 3 && count_d != 6)
            throw ParseError(count_tok.line, "channel count must be 0, 3 or 6");
        const auto count = static_cast<std::size_t>(count_d);
        for (std::size_t c = 0; c < count; ++c) {
            const Token& ch = next();
            joints_[self].channels.push_back(parse_channel(ch.text, ch.line));
        }

        for (;;) {
            const Token& t = next();
            if (t.text == "}") return;
            if (t.text == "JOINT") {
                parse_joint(self);
            } else if (t.text == "End") {
                expect("Site");
                expect("{");
                if (joints_[self].joint.end_site) throw ParseError(t.line, "joint has more than one End Site");
                joints_[self].joint.end_site = parse_offset();
                expect("}");
            } else {
                throw ParseError(t.line, "unexpected '" + std::string(t.text) + "' in joint '" +
                                             joints_[self].joint.name + "'");
            }
        }
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    double scale_;
    std::vector<ParsedJoint> joints_;
    std::unordered_set<std::string> names_;
};

std::vector<std::string_view> expect_header(std::string_view line, std::size_t line_no,
                                            std::initializer_list<std::string_view> words) {
    auto toks = split_ws(line);
    std::size_t i = 0;
    for (auto w : words) {
        if (i >= toks.size() || toks[i] != w)
            throw ParseError(line_no, "expected '" + std::string(w) + "'");
        ++i;
    }
    return {toks.begin() + static_cast<std::ptrdiff_t>(i), toks.end()};
}

double snap_fps(double fps) {
    const double r = std::round(fps);
    if (r > 0 && std::abs(fps - r) <= 1e-4 * fps) return r;
    return fps;
}

}  // namespace

MotionClip parse_bvh(std::string_view text, const BvhOptions& options) {
    if (!(options.scale > 0.0) || !std::isfinite(options.scale)) throw DomainError("BVH scale must be positive");
    const auto lines = split_lines(text);

    std::vector<Token> tokens;
    std::size_t motion_line = 0;
    for (std::size_t i = 0; i < lines.size() && !motion_line; ++i) {
        for (auto tok : split_ws(lines[i])) {
            if (tok == "MOTION") {
                motion_line = i + 1;
                break;
            }
            tokens.push_back({tok, i + 1});
        }
    }
    if (tokens.empty()) throw ParseError(1, "missing HIERARCHY section");
    if (!motion_line) throw ParseError(lines.size(), "missing MOTION section");

    std::vector<ParsedJoint> parsed = HierarchyParser(std::move(tokens), options.scale).parse();

    // MOTION header: next two non-blank lines.
    std::size_t li = motion_line;  // index of the line after MOTION
    auto next_content = [&]() -> std::size_t {
        while (li < lines.size() && split_ws(lines[li]).empty()) ++li;
        if (li >= lines.size()) throw ParseError(lines.size(), "unexpected end of MOTION section");
        return li++;
    };
    std::size_t frames_idx = next_content();
    auto frames_rest = expect_header(lines[frames_idx], frames_idx + 1, {"Frames:"});
    if (frames_rest.size() != 1) throw ParseError(frames_idx + 1, "expected 'Frames: <count>'");
    const double frames_d = to_number(frames_rest[0], frames_idx + 1);
    if (frames_d < 1 || frames_d != std::floor(frames_d))
        throw ParseError(frames_idx + 1, "frame count must be a positive integer");
    const auto frame_count = static_cast<std::size_t>(frames_d);

    std::size_t time_idx = next_content();
    auto time_rest = expect_header(lines[time_idx], time_idx + 1, {"Frame", "Time:"});
    if (time_rest.size() != 1) throw ParseError(time_idx + 1, "expected 'Frame Time: <seconds>'");
    const double frame_time = to_number(time_rest[0], time_idx + 1);
    if (!(frame_time > 0.0)) throw ParseError(time_idx + 1, "Frame Time must be positive");

    std::vector<Joint> joints;
    std::size_t channel_total = 0;
    for (auto& p : parsed) {
        joints.push_back(p.joint);
        channel_total += p.channels.size();
    }
    Skeleton skeleton;
    try {
        skeleton = Skeleton(std::move(joints));
    } catch (const StructuralError& e) {
        throw ParseError(parsed.front().line, e.what());
    }
    bool any_offset_channels = false;
    for (std::size_t j = 1; j < parsed.size(); ++j)
        for (Channel c : parsed[j].channels)
            if (c == Channel::Xpos || c == Channel::Ypos || c == Channel::Zpos) any_offset_channels = true;

    std::vector<PoseFrame> frames;
    frames.reserve(frame_count);
    while (frames.size() < frame_count) {
        while (li < lines.size() && split_ws(lines[li]).empty()) ++li;
        if (li >= lines.size())
            throw ParseError(lines.size(), "expected " + std::to_string(frame_count) + " frames, found " +
                                               std::to_string(frames.size()));
        const std::size_t line_no = li + 1;
        const auto values = split_ws(lines[li++]);
        if (values.size() != channel_total)
            throw ParseError(line_no, "frame has " + std::to_string(values.size()) + " values, expected " +
                                          std::to_string(channel_total));
        PoseFrame f;
        f.joint_rotations.resize(skeleton.size());
        if (any_offset_channels) f.joint_offsets.resize(skeleton.size());
        std::size_t v = 0;
        for (std::size_t j = 0; j < parsed.size(); ++j) {
            Vec3 pos = skeleton[j].offset;
            Quat rot;
            for (Channel c : parsed[j].channels) {
                const double x = to_number(values[v++], line_no);
                switch (c) {
                    case Channel::Xpos: pos.x = x * options.scale; break;
                    case Channel::Ypos: pos.y = x * options.scale; break;
                    case Channel::Zpos: pos.z = x * options.scale; break;
                    case Channel::Xrot: rot = rot * Quat::from_axis_angle({1, 0, 0}, deg_to_rad(x)); break;
                    case Channel::Yrot: rot = rot * Quat::from_axis_angle({0, 1, 0}, deg_to_rad(x)); break;
                    case Channel::Zrot: rot = rot * Quat::from_axis_angle({0, 0, 1}, deg_to_rad(x)); break;
                }
            }
            f.joint_rotations[j] = rot.normalized().canonical();
            if (j == 0)
                f.root_position = pos;
            else if (any_offset_channels)
                f.joint_offsets[j] = pos;
        }
        frames.push_back(std::move(f));
    }
    while (li < lines.size()) {
        if (!split_ws(lines[li]).empty())
            throw ParseError(li + 1, "more frame lines than the declared " + std::to_string(frame_count));
        ++li;
    }
    return MotionClip(std::move(skeleton), std::move(frames), snap_fps(1.0 / frame_time));
}

namespace {

void write_vec(std::string& out, const Vec3& v, double inv_scale) {
    out += format_fixed(v.x * inv_scale);
    out += ' ';
    out += format_fixed(v.y * inv_scale);
    out += ' ';
    out += format_fixed(v.z * inv_scale);
}

void write_joint(std::string& out, const Skeleton& skel, std::size_t j,
                 const std::vector<std::vector<std::size_t>>& children, bool offset_channels,
                 double inv_scale, int depth) {
    const std::string indent(static_cast<std::size_t>(depth), '\t');
    out += indent + (j == 0 ? "ROOT " : "JOINT ") + skel[j].name + "\n";
    out += indent + "{\n";
    out += indent + "\tOFFSET ";
    write_vec(out, skel[j].offset, inv_scale);
    out += "\n";
    if (j == 0 || offset_channels)
        out += indent + "\tCHANNELS 6 Xposition Yposition Zposition Zrotation Xrotation Yrotation\n";
    else
        out += indent + "\tCHANNELS 3 Zrotation Xrotation Yrotation\n";
    for (std::size_t c : children[j]) write_joint(out, skel, c, children, offset_channels, inv_scale, depth + 1);
    if (skel[j].end_site) {
        out += indent + "\tEnd Site\n" + indent + "\t{\n" + indent + "\t\tOFFSET ";
        write_vec(out, *skel[j].end_site, inv_scale);
        out += "\n" + indent + "\t}\n";
    }
    out += indent + "}\n";
}

}  // namespace

std::string serialize_bvh(const MotionClip& clip, const BvhOptions& options) {
    const Skeleton& skel = clip.skeleton();
    const double inv_scale = 1.0 / options.scale;
    bool offset_channels = false;
    for (const auto& f : clip.frames()) offset_channels = offset_channels || !f.joint_offsets.empty();

    // Hierarchy must be emitted depth-first; preorder of the parent links
    // can differ from storage order, so the parser may renumber joints.
    std::vector<std::vector<std::size_t>> children(skel.size());
    for (std::size_t j = 1; j < skel.size(); ++j) children[*skel[j].parent].push_back(j);

    std::vector<std::size_t> order;
    std::vector<std::size_t> stack{0};
    while (!stack.empty()) {
        std::size_t j = stack.back();
        stack.pop_back();
        order.push_back(j);
        for (auto it = children[j].rbegin(); it != children[j].rend(); ++it) stack.push_back(*it);
    }

    std::string out = "HIERARCHY\n";
    write_joint(out, skel, 0, children, offset_channels, inv_scale, 0);
    out += "MOTION\n";
    out += "Frames: " + std::to_string(clip.frame_count()) + "\n";
    out += "Frame Time: " + format_fixed(1.0 / clip.fps(), 7) + "\n";
    static constexpr char kOrder[3] = {'Z', 'X', 'Y'};
    for (const PoseFrame& f : clip.frames()) {
        std::string line;
        for (std::size_t j : order) {
            if (j == 0) {
                write_vec(line, f.root_position, inv_scale);
                line += ' ';
            } else if (offset_channels) {
                write_vec(line, effective_offset(skel, f, j), inv_scale);
                line += ' ';
            }
            double angles[3];
            to_euler(f.joint_rotations[j], kOrder, angles);
            for (double a : angles) {
                line += format_fixed(rad_to_deg(a));
                line += ' ';
            }
        }
        line.back() = '\n';
        out += line;
    }
    return out;
}

MotionClip load_bvh_file(const std::string& path, const BvhOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open BVH file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_bvh(ss.str(), options);
    } catch (const ParseError& e) {
        throw Error(path + ": " + e.what());
    }
}

}  // namespace motionguide
