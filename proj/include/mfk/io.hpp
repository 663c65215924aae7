#ifndef MFK_IO_HPP
#define MFK_IO_HPP

// Scenario documents in, CSV / SVG / text artifacts out.
//
// Scenario files are JSON. Every length key ends in `_cm` and every angle
// key in `_deg`; unknown keys are rejected. Output CSVs have a fixed header
// row, RFC 4180 quoting, and numbers printed with 12 significant digits.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mfk/error.hpp"
#include "mfk/geometry.hpp"
#include "mfk/kmeans.hpp"
#include "mfk/model.hpp"
#include "mfk/planner.hpp"
#include "mfk/sampler.hpp"
#include "mfk/scenario.hpp"

namespace mfk::io {

using json = nlohmann::json;

inline constexpr const char* kGeneratorVersion = "mfk 1.0.0";

// ---------------------------------------------------------------------------
// Scenario parsing

namespace detail {

inline std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

[[noreturn]] inline void invalid(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::ValidationError, "field '" + field + "': " + why);
}

inline void only_keys(const json& obj, const std::string& where, std::set<std::string> allowed) {
  if (!obj.is_object()) invalid(where, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) {
      invalid(where.empty() ? key : where + "." + key, "unknown field");
    }
  }
}

inline const json& require(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key)) invalid(where.empty() ? key : where + "." + key, "missing");
  return obj.at(key);
}

inline double number(const json& obj, const std::string& where, const std::string& key) {
  const json& v = require(obj, where, key);
  const std::string field = where.empty() ? key : where + "." + key;
  if (!v.is_number()) invalid(field, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) invalid(field, "must be finite");
  return d;
}

inline double positive(const json& obj, const std::string& where, const std::string& key) {
  const double d = number(obj, where, key);
  if (!(d > 0.0)) invalid(where + "." + key, "must be positive");
  return d;
}

inline Vec2 vec2(const json& obj, const std::string& where, const std::string& key) {
  const json& v = require(obj, where, key);
  const std::string field = where + "." + key;
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    invalid(field, "expected [x, y]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

inline std::string string(const json& obj, const std::string& where, const std::string& key) {
  const json& v = require(obj, where, key);
  if (!v.is_string()) invalid(where.empty() ? key : where + "." + key, "expected a string");
  return v.get<std::string>();
}

inline Pose6 pose(const json& obj, const std::string& where) {
  only_keys(obj, where, {"x_cm", "y_cm", "z_cm", "rho_deg", "beta_deg", "gamma_deg"});
  return {number(obj, where, "x_cm"),     number(obj, where, "y_cm"),
          number(obj, where, "z_cm"),     number(obj, where, "rho_deg"),
          number(obj, where, "beta_deg"), number(obj, where, "gamma_deg")};
}

inline ObjectShape shape(const json& obj) {
  const std::string w = "shape";
  if (!obj.is_object()) invalid(w, "expected an object");
  const std::string kind = string(obj, w, "kind");
  if (kind == "ellipse") {
    only_keys(obj, w, {"kind", "semi_axis_a_cm", "semi_axis_b_cm"});
    return ObjectShape::ellipse(positive(obj, w, "semi_axis_a_cm"), positive(obj, w, "semi_axis_b_cm"));
  }
  if (kind == "sphere" || kind == "cylinder") {
    only_keys(obj, w, {"kind", "radius_cm"});
    const double r = positive(obj, w, "radius_cm");
    return kind == "sphere" ? ObjectShape::sphere(r) : ObjectShape::cylinder(r);
  }
  if (kind == "cone") {
    only_keys(obj, w, {"kind", "base_cm", "height_cm"});
    return ObjectShape::cone(positive(obj, w, "base_cm"), positive(obj, w, "height_cm"));
  }
  if (kind == "cube") {
    only_keys(obj, w, {"kind", "side_cm"});
    return ObjectShape::cube(positive(obj, w, "side_cm"));
  }
  invalid("shape.kind", "unknown shape '" + kind + "'");
}

inline CaseLabel case_label(const std::string& s, const std::string& field) {
  if (s == "2F") return CaseLabel::TwoFinger;
  if (s == "3F") return CaseLabel::ThreeFinger;
  if (s == "B2F") return CaseLabel::BimanualTwoFinger;
  invalid(field, "expected 2F, 3F or B2F");
}

}  // namespace detail

inline CaseLabel parse_case_label(const std::string& s) { return detail::case_label(s, "case"); }

/// Parses a scenario document. `source` names the document in diagnostics.
inline ScenarioSpec parse_scenario_text(const std::string& text, const std::string& source = "<scenario>") {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError,
                source + ": " + detail::line_col(text, e.byte) + ": malformed JSON");
  }
  using namespace detail;
  only_keys(doc, "", {"name", "case", "shape", "initial_pose", "desired_pose", "projection", "hand",
                      "fingers"});
  ScenarioSpec spec;
  spec.name = doc.contains("name") ? string(doc, "", "name") : source;
  spec.case_label = case_label(string(doc, "", "case"), "case");
  spec.shape = shape(require(doc, "", "shape"));
  spec.initial = pose(require(doc, "", "initial_pose"), "initial_pose");
  spec.desired = pose(require(doc, "", "desired_pose"), "desired_pose");

  if (doc.contains("projection")) {
    const json& p = doc["projection"];
    only_keys(p, "projection", {"position", "orientation"});
    if (p.contains("position")) {
      const std::string s = string(p, "projection", "position");
      if (s == "xy") spec.projection.position = PlaneAxes::XY;
      else if (s == "xz") spec.projection.position = PlaneAxes::XZ;
      else if (s == "yz") spec.projection.position = PlaneAxes::YZ;
      else invalid("projection.position", "expected xy, xz or yz");
    }
    if (p.contains("orientation")) {
      const std::string s = string(p, "projection", "orientation");
      if (s == "rho") spec.projection.orientation = OrientationAxis::Rho;
      else if (s == "beta") spec.projection.orientation = OrientationAxis::Beta;
      else if (s == "gamma") spec.projection.orientation = OrientationAxis::Gamma;
      else invalid("projection.orientation", "expected rho, beta or gamma");
    }
  }

  if (doc.contains("hand")) {
    const json& h = doc["hand"];
    only_keys(h, "hand", {"link_lengths_cm", "bend_deg", "spread_deg"});
    if (h.contains("link_lengths_cm")) {
      const json& l = h["link_lengths_cm"];
      if (!l.is_array() || l.size() != 3) invalid("hand.link_lengths_cm", "expected three lengths");
      for (std::size_t i = 0; i < 3; ++i) {
        const std::string f = "hand.link_lengths_cm[" + std::to_string(i) + "]";
        if (!l[i].is_number()) invalid(f, "expected a number");
        const double v = l[i].get<double>();
        if (!(v > 0.0) || !std::isfinite(v)) invalid(f, "link length must be positive");
        spec.hand.link_lengths[i] = v;
      }
    }
    if (h.contains("bend_deg")) spec.hand.bend_deg = number(h, "hand", "bend_deg");
    if (h.contains("spread_deg")) spec.hand.spread_deg = number(h, "hand", "spread_deg");
  }

  if (doc.contains("fingers")) {
    const json& fs = doc["fingers"];
    if (!fs.is_array() || fs.empty() || fs.size() > 4) invalid("fingers", "expected 1 to 4 fingers");
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const std::string w = "fingers[" + std::to_string(i) + "]";
      only_keys(fs[i], w, {"id", "base_cm", "q2_cm", "q3_cm", "contact_cm"});
      ExplicitFinger f;
      f.id = fs[i].contains("id") ? static_cast<int>(number(fs[i], w, "id")) : static_cast<int>(i);
      f.base = vec2(fs[i], w, "base_cm");
      f.q2 = vec2(fs[i], w, "q2_cm");
      f.q3 = vec2(fs[i], w, "q3_cm");
      f.contact = vec2(fs[i], w, "contact_cm");
      const std::array<double, 3> lengths = {distance(f.base, f.q2), distance(f.q2, f.q3),
                                             distance(f.q3, f.contact)};
      for (std::size_t k = 0; k < 3; ++k) {
        if (!(lengths[k] > 0.0)) invalid(w, "link " + std::to_string(k + 1) + " has zero length");
      }
      spec.fingers.push_back(f);
    }
  }
  return spec;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ScenarioSpec parse_scenario(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) {
    throw Error(ErrorCode::UsageError, "scenario file not found: " + path.string());
  }
  ScenarioSpec spec = parse_scenario_text(read_file(path), path.string());
  if (spec.name == path.string()) spec.name = path.stem().string();
  return spec;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv_field(fields[i]);
  }
  return line + "\r\n";
}

/// RFC 4180 reader; returns rows of fields, header included.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw Error(ErrorCode::ParseError, "unterminated quoted CSV field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline const std::vector<std::string> kConfigurationHeader = {
    "task_index", "finger_id", "q1_x", "q1_y", "q2_x", "q2_y", "q3_x", "q3_y",
    "contact_x", "contact_y", "e2", "e3", "cost",
    "paper_theta1_rad", "paper_theta2_rad", "paper_theta3_rad",
    "direct_theta1_rad", "direct_theta2_rad", "direct_theta3_rad", "selected"};

inline const std::vector<std::string> kWeightsHeader = {"source", "finger_id", "gamma", "gamma_i",
                                                        "cost", "motion_norm"};

inline const std::vector<std::string> kClustersHeader = {"row_type", "index", "cluster", "dimension",
                                                         "value"};

inline const std::vector<std::string> kTraceHeader = {
    "time_s", "finger_id", "object_x", "object_y", "object_orientation_deg",
    "contact_x", "contact_y", "contact_displacement", "tip_x", "tip_y"};

struct ConfigRow {
  std::size_t task_index = 0;
  FingerSolution solution;
  bool selected = false;
};

inline std::string configurations_csv(const std::vector<ConfigRow>& rows) {
  std::string out = csv_row(kConfigurationHeader);
  for (const auto& r : rows) {
    const auto& s = r.solution;
    std::vector<std::string> f = {std::to_string(r.task_index), std::to_string(s.finger_id),
                                  fmt(s.q1.x), fmt(s.q1.y), fmt(s.q2.x), fmt(s.q2.y),
                                  fmt(s.q3.x), fmt(s.q3.y), fmt(s.contact.x), fmt(s.contact.y),
                                  fmt(s.e2), fmt(s.e3), fmt(s.cost)};
    for (const auto& a : {s.paper_angles, s.direct_angles}) {
      if (a) {
        f.push_back(fmt(a->theta1.rad()));
        f.push_back(fmt(a->theta2.rad()));
        f.push_back(fmt(a->theta3.rad()));
      } else {
        f.insert(f.end(), {"", "", ""});
      }
    }
    f.push_back(r.selected ? "1" : "0");
    out += csv_row(f);
  }
  return out;
}

inline double parse_double(const std::string& s, const std::string& field) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "CSV field '" + field + "': not a number: '" + s + "'");
  }
}

/// Reads configurations.csv back into rows.
inline std::vector<ConfigRow> parse_configurations_csv(const std::string& text) {
  const auto rows = parse_csv(text);
  if (rows.empty() || rows.front() != kConfigurationHeader) {
    throw Error(ErrorCode::ParseError, "configurations.csv: unexpected header");
  }
  std::vector<ConfigRow> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != kConfigurationHeader.size()) {
      throw Error(ErrorCode::ParseError, "configurations.csv: row " + std::to_string(i + 1) +
                                             " has " + std::to_string(r.size()) + " fields");
    }
    auto num = [&](std::size_t c) { return parse_double(r[c], kConfigurationHeader[c]); };
    ConfigRow row;
    row.task_index = static_cast<std::size_t>(num(0));
    auto& s = row.solution;
    s.finger_id = static_cast<int>(num(1));
    s.q1 = {num(2), num(3)};
    s.q2 = {num(4), num(5)};
    s.q3 = {num(6), num(7)};
    s.contact = {num(8), num(9)};
    s.e2 = num(10);
    s.e3 = num(11);
    s.cost = num(12);
    auto angles = [&](std::size_t c, AngleMethod m) -> std::optional<JointAngles> {
      if (r[c].empty()) return std::nullopt;
      return JointAngles{Angle::radians(num(c)), Angle::radians(num(c + 1)),
                         Angle::radians(num(c + 2)), m};
    };
    s.paper_angles = angles(13, AngleMethod::PaperLawOfCosines);
    s.direct_angles = angles(16, AngleMethod::DirectFromPositions);
    row.selected = r[19] == "1";
    out.push_back(row);
  }
  return out;
}

inline std::string weights_csv(const std::optional<WeightAllocation>& min_cost,
                               const std::optional<WeightAllocation>& selected,
                               const std::vector<int>& finger_ids) {
  std::string out = csv_row(kWeightsHeader);
  auto emit = [&](const char* source, const WeightAllocation& w) {
    for (std::size_t i = 0; i < w.gammas.size(); ++i) {
      const int id = i < finger_ids.size() ? finger_ids[i] : static_cast<int>(i);
      out += csv_row({source, std::to_string(id), fmt(w.gamma), fmt(w.gammas[i]), fmt(w.costs[i]),
                      fmt(w.delta_norm)});
    }
  };
  if (min_cost) emit("min_cost", *min_cost);
  if (selected) emit("selected", *selected);
  return out;
}

inline std::string clusters_csv(const std::optional<ClusterModel>& model,
                                const std::vector<Point>& samples) {
  std::string out = csv_row(kClustersHeader);
  if (!model) return out;
  for (std::size_t c = 0; c < model->centroids.size(); ++c) {
    for (std::size_t d = 0; d < model->centroids[c].size(); ++d) {
      out += csv_row({"centroid", std::to_string(c), std::to_string(c), std::to_string(d),
                      fmt(model->centroids[c][d])});
    }
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t d = 0; d < samples[i].size(); ++d) {
      out += csv_row({"sample", std::to_string(i), std::to_string(model->assignments[i]),
                      std::to_string(d), fmt(samples[i][d])});
    }
  }
  for (std::size_t it = 0; it < model->inertia_history.size(); ++it) {
    out += csv_row({"inertia", std::to_string(it), "", "", fmt(model->inertia_history[it])});
  }
  return out;
}

/// Object pose and contact at fraction `s` of the motion.
inline ObjectPose pose_at(const ObjectPose& start, const MotionTask& task, double s) {
  if (const auto* t = std::get_if<Translate>(&task)) return object_target(start, Translate{s * t->delta});
  return object_target(start, Roll{Angle::radians(s * std::get<Roll>(task).phi.rad())});
}

/// Planned displacement time series: the object motion and every finger's
/// joint deltas are interpolated linearly over `duration_s`.
inline std::string trace_csv(const std::optional<ManipulationPlan>& plan, double duration_s = 12.0,
                             std::size_t steps = 24) {
  std::string out = csv_row(kTraceHeader);
  if (!plan) return out;
  const auto& fingers = plan->scene.fingers();
  for (std::size_t k = 0; k <= steps; ++k) {
    const double s = static_cast<double>(k) / static_cast<double>(steps);
    const ObjectPose pose = pose_at(plan->scene.object0(), plan->task, s);
    for (std::size_t i = 0; i < fingers.size(); ++i) {
      const auto& sol = plan->selected_solution(i);
      JointAngles d = sol.direct_angles ? *sol.direct_angles
                                        : recover_all(fingers[i], sol, AngleMethod::DirectFromPositions);
      d.theta1 = Angle::radians(s * d.theta1.rad());
      d.theta2 = Angle::radians(s * d.theta2.rad());
      d.theta3 = Angle::radians(s * d.theta3.rad());
      const Vec2 tip = apply_joint_deltas(fingers[i], d).contact;
      const Vec2 contact =
          contact_target(fingers[i], plan->scene.object0(),
                         is_translate(plan->task)
                             ? MotionTask{Translate{s * std::get<Translate>(plan->task).delta}}
                             : MotionTask{Roll{Angle::radians(s * std::get<Roll>(plan->task).phi.rad())}},
                         plan->mode);
      out += csv_row({fmt(s * duration_s), std::to_string(fingers[i].id()), fmt(pose.position.x),
                      fmt(pose.position.y), fmt(pose.orientation.deg()), fmt(contact.x), fmt(contact.y),
                      fmt(distance(contact, fingers[i].contact0())), fmt(tip.x), fmt(tip.y)});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// SVG

struct SvgInput {
  std::optional<GraspScene> scene;
  std::optional<ObjectShape> shape;
  std::vector<ConfigRow> cloud;
  std::optional<ManipulationPlan> plan;
};

inline std::vector<Vec2> object_outline(const ObjectShape& shape, const ObjectPose& pose) {
  std::vector<Vec2> pts;
  if (!shape.polygon().empty()) {
    for (Vec2 v : shape.polygon()) pts.push_back(pose.position + rotate(v, pose.orientation.rad()));
    return pts;
  }
  for (int i = 0; i < 72; ++i) {
    const double t = 2.0 * kPi * i / 72.0;
    pts.push_back(pose.position + rotate(shape.boundary_point(t), pose.orientation.rad()));
  }
  return pts;
}

inline std::string workspace_svg(const SvgInput& in) {
  std::vector<Vec2> all;
  auto chain = [](const FingerChain& f) {
    return std::vector<Vec2>{f.base(), f.q2(), f.q3(), f.contact0()};
  };
  std::vector<Vec2> outline;
  if (in.scene) {
    for (const auto& f : in.scene->fingers()) {
      for (Vec2 p : chain(f)) all.push_back(p);
    }
    if (in.shape) outline = object_outline(*in.shape, in.scene->object0());
  }
  for (Vec2 p : outline) all.push_back(p);
  for (const auto& r : in.cloud) {
    all.push_back(r.solution.q2);
    all.push_back(r.solution.q3);
    all.push_back(r.solution.contact);
  }

  double minx = -1, miny = -1, maxx = 1, maxy = 1;
  if (!all.empty()) {
    minx = maxx = all[0].x;
    miny = maxy = all[0].y;
    for (Vec2 p : all) {
      minx = std::min(minx, p.x);
      maxx = std::max(maxx, p.x);
      miny = std::min(miny, p.y);
      maxy = std::max(maxy, p.y);
    }
  }
  const double pad = 0.05 * std::max({maxx - minx, maxy - miny, 1.0});
  minx -= pad;
  miny -= pad;
  maxx += pad;
  maxy += pad;
  const double w = maxx - minx, h = maxy - miny;
  const double stroke = 0.004 * std::max(w, h);
  // Flip y so the plot reads with +y up.
  auto X = [&](double x) { return fmt(x); };
  auto Y = [&](double y) { return fmt(miny + maxy - y); };
  auto polyline = [&](const std::vector<Vec2>& pts, const char* color, double width, bool closed) {
    std::string s = closed ? "<polygon points=\"" : "<polyline points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) s += ' ';
      s += X(pts[i].x) + "," + Y(pts[i].y);
    }
    return s + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" + fmt(width) + "\"/>\n";
  };

  std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += std::string("<!-- generator: ") + kGeneratorVersion + " -->\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" + fmt(minx) + " " +
         fmt(miny) + " " + fmt(w) + " " + fmt(h) + "\" width=\"800\" height=\"" +
         fmt(800.0 * h / w) + "\">\n";
  if (!outline.empty()) svg += polyline(outline, "#555555", stroke, true);
  for (const auto& r : in.cloud) {
    svg += "<circle cx=\"" + X(r.solution.q3.x) + "\" cy=\"" + Y(r.solution.q3.y) + "\" r=\"" +
           fmt(1.5 * stroke) + "\" fill=\"#999999\" fill-opacity=\"0.5\"/>\n";
    svg += "<circle cx=\"" + X(r.solution.q2.x) + "\" cy=\"" + Y(r.solution.q2.y) + "\" r=\"" +
           fmt(1.5 * stroke) + "\" fill=\"#6a9fd4\" fill-opacity=\"0.5\"/>\n";
  }
  if (in.scene) {
    for (const auto& f : in.scene->fingers()) svg += polyline(chain(f), "#d62728", 2 * stroke, false);
  }
  if (in.plan) {
    for (std::size_t i = 0; i < in.plan->scene.fingers().size(); ++i) {
      const auto& s = in.plan->selected_solution(i);
      svg += polyline({s.q1, s.q2, s.q3, s.contact}, "#1f4fd6", 2 * stroke, false);
    }
  }
  svg += "</svg>\n";
  return svg;
}

// ---------------------------------------------------------------------------
// Text report

inline std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * v);
  return buf;
}

/// Error / kinematic-success table: one column per object, two rows per
/// hand case.
inline std::string suite_table(const SuiteReport& report) {
  std::vector<ShapeKind> shapes;
  for (ShapeKind k : kAllShapes) {
    for (const auto& c : report.cells) {
      if (c.shape == k) {
        shapes.push_back(k);
        break;
      }
    }
  }
  std::vector<CaseLabel> cases;
  for (CaseLabel c : {CaseLabel::TwoFinger, CaseLabel::ThreeFinger, CaseLabel::BimanualTwoFinger}) {
    for (const auto& cell : report.cells) {
      if (cell.case_label == c) {
        cases.push_back(c);
        break;
      }
    }
  }
  auto find = [&](CaseLabel c, ShapeKind k) -> const SuiteCell* {
    for (const auto& cell : report.cells) {
      if (cell.case_label == c && cell.shape == k) return &cell;
    }
    return nullptr;
  };
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  std::string out = "Kinematic error and success rate\n";
  out += "repetitions per cell: " + std::to_string(report.repetitions) +
         ", base seed: " + std::to_string(report.base_seed) + "\n";
  out += "e = mean relative error of the achieved object motion; kinematic SR = share of runs\n";
  out += "with a complete plan and e <= 15%. No dynamics: physical falls are not simulated.\n\n";
  std::string header = pad("case", 6) + pad("metric", 14);
  for (ShapeKind k : shapes) header += pad(to_string(k), 11);
  out += header + "\n";
  for (CaseLabel c : cases) {
    std::string e = pad(to_string(c), 6) + pad("e", 14);
    std::string sr = pad(to_string(c), 6) + pad("kinematic SR", 14);
    for (ShapeKind k : shapes) {
      const SuiteCell* cell = find(c, k);
      e += pad(cell ? percent(cell->mean_relative_error) : "-", 11);
      sr += pad(cell ? percent(cell->success_rate()) : "-", 11);
    }
    out += e + "\n" + sr + "\n";
  }
  out += "\nPer scenario:\n";
  for (const auto& cell : report.cells) {
    out += "  " + cell.scenario + " (" + to_string(cell.shape) + ", " + to_string(cell.case_label) +
           "): n=" + std::to_string(cell.runs) + ", e=" + percent(cell.mean_relative_error) +
           ", max e=" + percent(cell.max_relative_error) + ", kinematic SR=" +
           percent(cell.success_rate()) + ", failed plans=" + std::to_string(cell.failures) +
           ", mean attempts=" + fmt(cell.mean_attempts) + "\n";
    for (const auto& d : cell.diagnostics) out += "    " + d + "\n";
  }
  return out;
}

inline std::string stats_line(const std::string& label, const SamplerStats& s) {
  return label + ": attempts=" + std::to_string(s.attempts) + " accepted=" + std::to_string(s.accepted) +
         " rejected_cost=" + std::to_string(s.rejected_cost) +
         " rejected_length=" + std::to_string(s.rejected_length) +
         " rejected_singular=" + std::to_string(s.rejected_singular) +
         " acceptance_rate=" + fmt(s.acceptance_rate()) + "\n";
}

// ---------------------------------------------------------------------------
// Bundle

struct BundleInput {
  std::vector<ConfigRow> configurations;
  std::optional<WeightAllocation> weights;
  std::optional<WeightAllocation> selected_weights;
  std::optional<ClusterModel> clusters;
  std::vector<Point> cluster_samples;
  std::optional<ManipulationPlan> plan;
  std::optional<GraspScene> scene;
  std::optional<ObjectShape> shape;
  std::string report;
};

struct ManifestEntry {
  std::filesystem::path path;
  std::uintmax_t size = 0;
};

inline const std::vector<std::string> kBundleFiles = {"configurations.csv", "weights.csv",
                                                      "clusters.csv",       "workspace.svg",
                                                      "report.txt",         "trace.csv"};

/// Writes `content` to `path` through a temporary file and a rename.
inline ManifestEntry write_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot rename " + tmp.string() + " to " + path.string() +
                                              ": " + ec.message());
  return {path, static_cast<std::uintmax_t>(content.size())};
}

inline std::vector<ManifestEntry> emit_bundle(const BundleInput& in, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::IoError, "cannot create output directory " + dir.string());
  }
  std::vector<int> ids;
  if (in.scene) {
    for (const auto& f : in.scene->fingers()) ids.push_back(f.id());
  }
  SvgInput svg{in.scene, in.shape, in.configurations, in.plan};
  std::vector<ManifestEntry> manifest;
  manifest.push_back(write_atomic(dir / "configurations.csv", configurations_csv(in.configurations)));
  manifest.push_back(write_atomic(dir / "weights.csv", weights_csv(in.weights, in.selected_weights, ids)));
  manifest.push_back(write_atomic(dir / "clusters.csv", clusters_csv(in.clusters, in.cluster_samples)));
  manifest.push_back(write_atomic(dir / "workspace.svg", workspace_svg(svg)));
  manifest.push_back(write_atomic(dir / "report.txt", in.report));
  manifest.push_back(write_atomic(dir / "trace.csv", trace_csv(in.plan)));
  return manifest;
}

}  // namespace mfk::io

#endif  // MFK_IO_HPP
