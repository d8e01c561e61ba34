#include "gcsplan/scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gcsplan/lp.hpp"
#include "gcsplan/program.hpp"
#include "gcsplan/verify.hpp"

namespace gcsplan {

using json = nlohmann::ordered_json;

void Limits::validate() const {
  if (v_min < 0.0 || v_min >= v_max) throw ScenarioError("limits need 0 <= v_min < v_max");
  if (h_rate_min <= 0.0) throw ScenarioError("h_rate_min must be positive");
  if (t_max <= 0.0) throw ScenarioError("t_max must be positive");
  if (v_floor <= 0.0) throw ScenarioError("v_floor must be positive");
}

void CostWeights::validate() const {
  if (alpha1 < 0 || alpha2 < 0 || alpha3 < 0 || alpha4 < 0)
    throw ScenarioError("cost weights must be nonnegative");
  if (alpha1 + alpha2 + alpha3 + alpha4 <= 0.0)
    throw ScenarioError("at least one cost weight must be positive");
}

namespace {

[[noreturn]] void missing(const std::string& path) {
  throw ScenarioError("missing field '" + path + "'");
}

const json& field(const json& j, const std::string& ctx, const std::string& key) {
  if (!j.contains(key)) missing(ctx.empty() ? key : ctx + "." + key);
  return j.at(key);
}

void expect_keys(const json& j, const std::string& ctx,
                 std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ScenarioError("'" + ctx + "' must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed)
      if (it.key() == a) {
        ok = true;
        break;
      }
    if (!ok)
      throw ScenarioError("unknown field '" + (ctx.empty() ? it.key() : ctx + "." + it.key()) +
                          "' (strict schema)");
  }
}

double num(const json& j, const std::string& ctx, const std::string& key) {
  const json& v = field(j, ctx, key);
  if (!v.is_number()) throw ScenarioError("field '" + ctx + "." + key + "' must be a number");
  return v.get<double>();
}

double num_or(const json& j, const std::string& ctx, const std::string& key, double dflt,
              std::vector<std::string>* log) {
  if (!j.contains(key)) {
    if (log) {
      std::ostringstream os;
      os << "default applied: " << (ctx.empty() ? key : ctx + "." + key) << " = " << dflt;
      log->push_back(os.str());
    }
    return dflt;
  }
  return num(j, ctx, key);
}

std::string str(const json& j, const std::string& ctx, const std::string& key) {
  const json& v = field(j, ctx, key);
  if (!v.is_string()) throw ScenarioError("field '" + ctx + "." + key + "' must be a string");
  return v.get<std::string>();
}

Vec2 vec2(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ScenarioError("field '" + path + "' must be [x, y]");
  return Vec2(v[0].get<double>(), v[1].get<double>());
}

Polytope parse_polytope(const json& j, const std::string& ctx) {
  expect_keys(j, ctx, {"box", "halfspaces"});
  if (j.contains("box")) {
    const json& b = j.at("box");
    if (!b.is_array() || b.size() != 4)
      throw ScenarioError("field '" + ctx + ".box' must be [xmin, xmax, ymin, ymax]");
    return Polytope::axis_box(b[0].get<double>(), b[1].get<double>(), b[2].get<double>(),
                              b[3].get<double>());
  }
  if (!j.contains("halfspaces")) missing(ctx + ".halfspaces");
  std::vector<Vec2> normals;
  std::vector<double> offsets;
  for (std::size_t i = 0; i < j.at("halfspaces").size(); ++i) {
    const json& h = j.at("halfspaces")[i];
    const std::string hctx = ctx + ".halfspaces[" + std::to_string(i) + "]";
    expect_keys(h, hctx, {"normal", "offset"});
    normals.push_back(vec2(field(h, hctx, "normal"), hctx + ".normal"));
    offsets.push_back(num(h, hctx, "offset"));
  }
  return Polytope(std::move(normals), std::move(offsets));
}

// Boundedness via four support LPs, full-dimensionality via one
// strict-interior (Chebyshev radius) LP.
void check_region_geometry(const Polytope& p, const std::string& label) {
  for (const Vec2 dir : {Vec2(1, 0), Vec2(-1, 0), Vec2(0, 1), Vec2(0, -1)}) {
    LinearProgram lp;
    const int x = lp.add_var(-dir.x());
    const int y = lp.add_var(-dir.y());
    for (std::size_t i = 0; i < p.normals.size(); ++i)
      lp.add_leq({{x, p.normals[i].x()}, {y, p.normals[i].y()}}, p.offsets[i]);
    const LpSolution sol = solve_lp(lp);
    if (sol.status == LpStatus::Unbounded)
      throw ScenarioError("region '" + label + "' is unbounded");
    if (sol.status == LpStatus::Infeasible)
      throw ScenarioError("region '" + label + "' is empty");
  }
  LinearProgram lp;
  const int x = lp.add_var(0.0);
  const int y = lp.add_var(0.0);
  const int r = lp.add_var(-1.0, 0.0);  // maximize the inscribed radius
  for (std::size_t i = 0; i < p.normals.size(); ++i)
    lp.add_leq({{x, p.normals[i].x()}, {y, p.normals[i].y()}, {r, p.normals[i].norm()}},
               p.offsets[i]);
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal || sol.x[r] < 1e-9)
    throw ScenarioError("region '" + label + "' has empty interior");
}

}  // namespace

Scenario parse_scenario(const std::string& text, std::vector<std::string>* log) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario parse error: ") + e.what());
  }
  expect_keys(doc, "",
              {"name", "description", "lanes", "vehicle", "limits", "weights", "planner",
               "regions", "edges", "source", "target", "start", "goal",
               "static_obstacles", "dynamic_obstacles", "windows"});

  Scenario sc;
  sc.name = str(doc, "", "name");

  if (doc.contains("lanes")) {
    for (std::size_t i = 0; i < doc.at("lanes").size(); ++i) {
      const json& l = doc.at("lanes")[i];
      const std::string ctx = "lanes[" + std::to_string(i) + "]";
      expect_keys(l, ctx, {"centerline", "width"});
      LaneSpec lane;
      for (std::size_t k = 0; k < field(l, ctx, "centerline").size(); ++k)
        lane.centerline.push_back(
            vec2(l.at("centerline")[k], ctx + ".centerline[" + std::to_string(k) + "]"));
      if (lane.centerline.size() < 2)
        throw ScenarioError("lane centerline needs at least 2 points");
      lane.width = num(l, ctx, "width");
      if (lane.width <= 0) throw ScenarioError("lane width must be positive");
      sc.lanes.push_back(std::move(lane));
    }
  }

  {
    const json& v = field(doc, "", "vehicle");
    expect_keys(v, "vehicle",
                {"length", "width", "mass", "inertia_z", "lf", "lr", "cf", "cr"});
    sc.ego_length = num(v, "vehicle", "length");
    sc.ego_width = num(v, "vehicle", "width");
    if (sc.ego_length <= 0 || sc.ego_width <= 0)
      throw ScenarioError("vehicle footprint must be positive");
    sc.vehicle.mass = num_or(v, "vehicle", "mass", 1500.0, log);
    sc.vehicle.inertia_z = num_or(v, "vehicle", "inertia_z", 2500.0, log);
    sc.vehicle.lf = num_or(v, "vehicle", "lf", 1.35, log);
    sc.vehicle.lr = num_or(v, "vehicle", "lr", 1.35, log);
    sc.vehicle.cf = num_or(v, "vehicle", "cf", 8.0e4, log);
    sc.vehicle.cr = num_or(v, "vehicle", "cr", 8.0e4, log);
    sc.vehicle.validate();
  }

  {
    const json& l = field(doc, "", "limits");
    expect_keys(l, "limits", {"v_min", "v_max", "h_rate_min", "t_max", "v_floor"});
    sc.limits.v_max = num(l, "limits", "v_max");
    sc.limits.v_min = num_or(l, "limits", "v_min", 0.0, log);
    sc.limits.h_rate_min = num_or(l, "limits", "h_rate_min", 0.05, log);
    sc.limits.t_max = num_or(l, "limits", "t_max", 10.0, log);
    sc.limits.v_floor = num_or(l, "limits", "v_floor", 0.5, log);
    sc.limits.validate();
  }

  if (doc.contains("weights")) {
    const json& w = doc.at("weights");
    expect_keys(w, "weights", {"alpha1", "alpha2", "alpha3", "alpha4"});
    sc.weights.alpha1 = num_or(w, "weights", "alpha1", 1.0, log);
    sc.weights.alpha2 = num_or(w, "weights", "alpha2", 1.0, log);
    sc.weights.alpha3 = num_or(w, "weights", "alpha3", 1.0, log);
    sc.weights.alpha4 = num_or(w, "weights", "alpha4", 1.0, log);
  } else if (log) {
    log->push_back("default applied: weights = (1, 1, 1, 1)");
  }
  sc.weights.validate();

  {
    json p = doc.contains("planner") ? doc.at("planner") : json::object();
    expect_keys(p, "planner", {"degree", "facets", "audit_dt"});
    sc.degree = static_cast<int>(num_or(p, "planner", "degree", 6, log));
    sc.facets = static_cast<int>(num_or(p, "planner", "facets", 16, log));
    sc.audit_dt = num_or(p, "planner", "audit_dt", 0.01, log);
    if (sc.degree < 4 || sc.degree > 10)
      throw ScenarioError("planner.degree must lie in [4, 10]");
    if (sc.facets < 4 || sc.facets > 128)
      throw ScenarioError("planner.facets must lie in [4, 128]");
    if (sc.audit_dt <= 0.0 || sc.audit_dt > 0.1)
      throw ScenarioError("planner.audit_dt must lie in (0, 0.1]");
  }

  {
    const json& regions = field(doc, "", "regions");
    if (!regions.is_array() || regions.empty())
      throw ScenarioError("'regions' must be a non-empty array");
    for (std::size_t i = 0; i < regions.size(); ++i) {
      const json& r = regions[i];
      const std::string ctx = "regions[" + std::to_string(i) + "]";
      expect_keys(r, ctx, {"id", "box", "halfspaces", "direction"});
      GraphVertex v;
      v.id = str(r, ctx, "id");
      if (sc.graph.index_of(v.id) >= 0)
        throw ScenarioError("duplicate region id '" + v.id + "'");
      json shape = json::object();
      if (r.contains("box")) shape["box"] = r.at("box");
      if (r.contains("halfspaces")) shape["halfspaces"] = r.at("halfspaces");
      v.region = parse_polytope(shape, ctx);
      check_region_geometry(v.region, v.id);
      if (r.contains("direction")) {
        v.direction = vec2(r.at("direction"), ctx + ".direction");
        const double n = v.direction.norm();
        if (n < 1e-9) throw ScenarioError("region direction must be nonzero");
        v.direction /= n;
      }
      sc.graph.vertices.push_back(std::move(v));
    }
    for (std::size_t i = 0; i < field(doc, "", "edges").size(); ++i) {
      const json& e = doc.at("edges")[i];
      if (!e.is_array() || e.size() != 2)
        throw ScenarioError("edges[" + std::to_string(i) + "] must be [from, to]");
      const int u = sc.graph.index_of(e[0].get<std::string>());
      const int v = sc.graph.index_of(e[1].get<std::string>());
      if (u < 0 || v < 0)
        throw ScenarioError("edges[" + std::to_string(i) + "] references unknown region");
      sc.graph.edges.emplace_back(u, v);
    }
    sc.graph.source = sc.graph.index_of(str(doc, "", "source"));
    sc.graph.target = sc.graph.index_of(str(doc, "", "target"));
    if (sc.graph.source < 0) throw ScenarioError("source region not found");
    if (sc.graph.target < 0) throw ScenarioError("target region not found");
    for (const std::string& w : sc.graph.validate_and_prune())
      if (log) log->push_back("warning: " + w);
  }

  {
    const json& s = field(doc, "", "start");
    expect_keys(s, "start", {"position", "velocity", "yaw"});
    sc.start = vec2(field(s, "start", "position"), "start.position");
    sc.start_velocity = vec2(field(s, "start", "velocity"), "start.velocity");
    if (s.contains("yaw")) sc.start_yaw = num(s, "start", "yaw");
    const json& g = field(doc, "", "goal");
    expect_keys(g, "goal", {"region", "velocity"});
    sc.goal_region = parse_polytope(field(g, "goal", "region"), "goal.region");
    check_region_geometry(sc.goal_region, "goal");
    sc.goal_velocity = vec2(field(g, "goal", "velocity"), "goal.velocity");
  }

  if (doc.contains("static_obstacles")) {
    for (std::size_t i = 0; i < doc.at("static_obstacles").size(); ++i) {
      const json& o = doc.at("static_obstacles")[i];
      const std::string ctx = "static_obstacles[" + std::to_string(i) + "]";
      expect_keys(o, ctx, {"center", "yaw", "length", "width"});
      OrientedBoxSpec box;
      box.center = vec2(field(o, ctx, "center"), ctx + ".center");
      box.yaw = num_or(o, ctx, "yaw", 0.0, nullptr);
      box.length = num(o, ctx, "length");
      box.width = num(o, ctx, "width");
      if (box.length <= 0 || box.width <= 0)
        throw ScenarioError("static obstacle footprint must be positive");
      sc.static_obstacles.push_back(box);
    }
  }

  if (doc.contains("dynamic_obstacles")) {
    for (std::size_t i = 0; i < doc.at("dynamic_obstacles").size(); ++i) {
      const json& o = doc.at("dynamic_obstacles")[i];
      const std::string ctx = "dynamic_obstacles[" + std::to_string(i) + "]";
      expect_keys(o, ctx,
                  {"start", "heading", "path", "profile", "length", "width", "avoidance"});
      DynamicObstacleSpec dyn;
      if (o.contains("path")) {
        if (o.contains("heading") || o.contains("start"))
          throw ScenarioError(ctx + ": give either 'path' or 'start'+'heading'");
        for (std::size_t k = 0; k < o.at("path").size(); ++k)
          dyn.prediction.path.push_back(
              vec2(o.at("path")[k], ctx + ".path[" + std::to_string(k) + "]"));
      } else {
        const Vec2 start = vec2(field(o, ctx, "start"), ctx + ".start");
        const double heading = num_or(o, ctx, "heading", 0.0, nullptr);
        dyn.prediction.path = {start,
                               start + Vec2(std::cos(heading), std::sin(heading))};
      }
      for (std::size_t k = 0; k < field(o, ctx, "profile").size(); ++k) {
        const json& p = o.at("profile")[k];
        const std::string pctx = ctx + ".profile[" + std::to_string(k) + "]";
        expect_keys(p, pctx, {"duration", "speed", "accel"});
        ProfilePiece piece;
        piece.duration = num(p, pctx, "duration");
        piece.speed = num(p, pctx, "speed");
        piece.accel = num_or(p, pctx, "accel", 0.0, nullptr);
        dyn.prediction.profile.push_back(piece);
      }
      dyn.prediction.length = num(o, ctx, "length");
      dyn.prediction.width = num(o, ctx, "width");
      dyn.prediction.validate();
      if (o.contains("avoidance")) {
        for (std::size_t k = 0; k < o.at("avoidance").size(); ++k) {
          const json& a = o.at("avoidance")[k];
          const std::string actx = ctx + ".avoidance[" + std::to_string(k) + "]";
          expect_keys(a, actx, {"region", "mode"});
          AvoidanceRule rule;
          rule.region_id = str(a, actx, "region");
          const std::string mode = str(a, actx, "mode");
          if (mode == "exit_before")
            rule.mode = AvoidMode::ExitBefore;
          else if (mode == "enter_after")
            rule.mode = AvoidMode::EnterAfter;
          else
            throw ScenarioError(actx + ".mode must be 'exit_before' or 'enter_after'");
          if (sc.graph.index_of(rule.region_id) < 0)
            throw ScenarioError(actx + " references unknown region '" + rule.region_id + "'");
          dyn.avoidance.push_back(rule);
        }
      }
      sc.dynamic_obstacles.push_back(std::move(dyn));
    }
  }

  if (doc.contains("windows")) {
    for (std::size_t i = 0; i < doc.at("windows").size(); ++i) {
      const json& w = doc.at("windows")[i];
      const std::string ctx = "windows[" + std::to_string(i) + "]";
      expect_keys(w, ctx,
                  {"region", "entry_min", "entry_max", "exit_min", "exit_max", "max_dwell"});
      TimingWindow win;
      win.vertex = str(w, ctx, "region");
      if (sc.graph.index_of(win.vertex) < 0)
        throw ScenarioError(ctx + " references unknown region '" + win.vertex + "'");
      if (w.contains("entry_min")) win.entry_min = num(w, ctx, "entry_min");
      if (w.contains("entry_max")) win.entry_max = num(w, ctx, "entry_max");
      if (w.contains("exit_min")) win.exit_min = num(w, ctx, "exit_min");
      if (w.contains("exit_max")) win.exit_max = num(w, ctx, "exit_max");
      if (w.contains("max_dwell")) win.max_dwell = num(w, ctx, "max_dwell");
      win.note = "pinned";
      sc.pinned_windows.push_back(std::move(win));
    }
  }

  // cross-cutting invariants
  if (!contains(sc.graph.vertices[sc.graph.source].region, sc.start, 1e-9))
    throw ScenarioError("start position lies outside the source region");
  {
    const ConvexPolygon goal_poly{sc.goal_region.vertices()};
    const ConvexPolygon target_poly{sc.graph.vertices[sc.graph.target].region.vertices()};
    if (polygon_distance(goal_poly, target_poly) > 1e-9)
      throw ScenarioError("goal region does not intersect the target region");
  }
  timing_windows(sc);  // surfaces contradictory windows at load time
  return sc;
}

Scenario load_scenario_file(const std::string& path, std::vector<std::string>* log) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), log);
}

namespace {

json vec2_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

json polytope_json(const Polytope& p) {
  json hs = json::array();
  for (std::size_t i = 0; i < p.normals.size(); ++i)
    hs.push_back(json{{"normal", vec2_json(p.normals[i])}, {"offset", p.offsets[i]}});
  return json{{"halfspaces", hs}};
}

}  // namespace

std::string serialize_scenario(const Scenario& sc) {
  json doc;
  doc["name"] = sc.name;
  doc["lanes"] = json::array();
  for (const LaneSpec& lane : sc.lanes) {
    json cl = json::array();
    for (const Vec2& p : lane.centerline) cl.push_back(vec2_json(p));
    doc["lanes"].push_back(json{{"centerline", cl}, {"width", lane.width}});
  }
  doc["vehicle"] = json{{"length", sc.ego_length},   {"width", sc.ego_width},
                        {"mass", sc.vehicle.mass},   {"inertia_z", sc.vehicle.inertia_z},
                        {"lf", sc.vehicle.lf},       {"lr", sc.vehicle.lr},
                        {"cf", sc.vehicle.cf},       {"cr", sc.vehicle.cr}};
  doc["limits"] = json{{"v_min", sc.limits.v_min},
                       {"v_max", sc.limits.v_max},
                       {"h_rate_min", sc.limits.h_rate_min},
                       {"t_max", sc.limits.t_max},
                       {"v_floor", sc.limits.v_floor}};
  doc["weights"] = json{{"alpha1", sc.weights.alpha1},
                        {"alpha2", sc.weights.alpha2},
                        {"alpha3", sc.weights.alpha3},
                        {"alpha4", sc.weights.alpha4}};
  doc["planner"] =
      json{{"degree", sc.degree}, {"facets", sc.facets}, {"audit_dt", sc.audit_dt}};
  doc["regions"] = json::array();
  for (const GraphVertex& v : sc.graph.vertices) {
    json r = polytope_json(v.region);
    json region = json::object();
    region["id"] = v.id;
    region["halfspaces"] = r["halfspaces"];
    region["direction"] = vec2_json(v.direction);
    doc["regions"].push_back(region);
  }
  doc["edges"] = json::array();
  for (const auto& [u, v] : sc.graph.edges)
    doc["edges"].push_back(
        json::array({sc.graph.vertices[u].id, sc.graph.vertices[v].id}));
  doc["source"] = sc.graph.vertices[sc.graph.source].id;
  doc["target"] = sc.graph.vertices[sc.graph.target].id;
  doc["start"] = json{{"position", vec2_json(sc.start)},
                      {"velocity", vec2_json(sc.start_velocity)}};
  if (sc.start_yaw) doc["start"]["yaw"] = *sc.start_yaw;
  doc["goal"] = json{{"region", polytope_json(sc.goal_region)},
                     {"velocity", vec2_json(sc.goal_velocity)}};
  doc["static_obstacles"] = json::array();
  for (const OrientedBoxSpec& o : sc.static_obstacles)
    doc["static_obstacles"].push_back(json{{"center", vec2_json(o.center)},
                                           {"yaw", o.yaw},
                                           {"length", o.length},
                                           {"width", o.width}});
  doc["dynamic_obstacles"] = json::array();
  for (const DynamicObstacleSpec& d : sc.dynamic_obstacles) {
    json o;
    json path = json::array();
    for (const Vec2& p : d.prediction.path) path.push_back(vec2_json(p));
    o["path"] = path;
    o["profile"] = json::array();
    for (const ProfilePiece& p : d.prediction.profile)
      o["profile"].push_back(
          json{{"duration", p.duration}, {"speed", p.speed}, {"accel", p.accel}});
    o["length"] = d.prediction.length;
    o["width"] = d.prediction.width;
    o["avoidance"] = json::array();
    for (const AvoidanceRule& r : d.avoidance)
      o["avoidance"].push_back(
          json{{"region", r.region_id},
               {"mode", r.mode == AvoidMode::ExitBefore ? "exit_before" : "enter_after"}});
    doc["dynamic_obstacles"].push_back(o);
  }
  doc["windows"] = json::array();
  for (const TimingWindow& w : sc.pinned_windows) {
    json j;
    j["region"] = w.vertex;
    if (w.entry_min) j["entry_min"] = *w.entry_min;
    if (w.entry_max) j["entry_max"] = *w.entry_max;
    if (w.exit_min) j["exit_min"] = *w.exit_min;
    if (w.exit_max) j["exit_max"] = *w.exit_max;
    if (w.max_dwell) j["max_dwell"] = *w.max_dwell;
    doc["windows"].push_back(j);
  }
  return doc.dump(2) + "\n";
}

std::string result_json(const PlanResult& plan, const Scenario& scenario) {
  json doc;
  doc["scenario"] = scenario.name;
  doc["strategy"] = strategy_name(plan.strategy_used);
  doc["degree"] = plan.segments.empty() ? 0 : plan.segments.front().spatial.degree();
  doc["path"] = plan.path_ids;
  doc["objective"] = plan.objective;
  doc["lower_bound"] = plan.lower_bound ? json(*plan.lower_bound) : json(nullptr);
  doc["segments"] = json::array();
  for (std::size_t k = 0; k < plan.segments.size(); ++k) {
    json seg;
    seg["region"] = plan.path_ids[k];
    json sp = json::array();
    for (const auto& p : plan.segments[k].spatial.control_points)
      sp.push_back(json::array({p.x(), p.y()}));
    seg["spatial"] = sp;
    json tk = json::array();
    for (const auto& t : plan.segments[k].temporal.curve.control_points)
      tk.push_back(t(0));
    seg["time"] = tk;
    doc["segments"].push_back(seg);
  }
  return doc.dump(2) + "\n";
}

PlanResult read_result_file(const std::string& path, const Scenario& scenario) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open result file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("result parse error: ") + e.what());
  }
  PlanResult plan;
  plan.objective = doc.at("objective").get<double>();
  if (!doc.at("lower_bound").is_null())
    plan.lower_bound = doc.at("lower_bound").get<double>();
  for (const auto& id : doc.at("path")) {
    const int v = scenario.graph.index_of(id.get<std::string>());
    if (v < 0)
      throw ScenarioError("result path references unknown region '" +
                          id.get<std::string>() + "'");
    plan.path.push_back(v);
    plan.path_ids.push_back(id.get<std::string>());
  }
  for (const auto& seg : doc.at("segments")) {
    std::vector<Bezier2d::Point> pts;
    for (const auto& p : seg.at("spatial"))
      pts.push_back(Vec2(p[0].get<double>(), p[1].get<double>()));
    std::vector<double> knots;
    for (const auto& t : seg.at("time")) knots.push_back(t.get<double>());
    plan.segments.emplace_back(Bezier2d(std::move(pts)), TimeScaling(std::move(knots)));
  }
  if (plan.segments.size() != plan.path.size())
    throw ScenarioError("result segments do not match the stored path");
  return plan;
}

namespace {

struct SvgMapper {
  double xmin, xmax, ymin, ymax, scale;
  double width() const { return (xmax - xmin) * scale; }
  double height() const { return (ymax - ymin) * scale; }
  double X(double x) const { return (x - xmin) * scale; }
  double Y(double y) const { return (ymax - y) * scale; }
};

std::string svg_poly(const SvgMapper& mp, const std::vector<Vec2>& pts,
                     const std::string& style) {
  std::ostringstream os;
  os << "<polygon points=\"";
  for (const Vec2& p : pts) os << mp.X(p.x()) << "," << mp.Y(p.y()) << " ";
  os << "\" " << style << "/>\n";
  return os.str();
}

}  // namespace

std::string trajectory_svg(const PlanResult& plan, const Scenario& scenario,
                           double snapshot_interval) {
  double xmin = 1e30, xmax = -1e30, ymin = 1e30, ymax = -1e30;
  auto grow = [&](const Vec2& p) {
    xmin = std::min(xmin, p.x());
    xmax = std::max(xmax, p.x());
    ymin = std::min(ymin, p.y());
    ymax = std::max(ymax, p.y());
  };
  for (const GraphVertex& v : scenario.graph.vertices)
    for (const Vec2& p : v.region.vertices()) grow(p);
  for (const LaneSpec& l : scenario.lanes)
    for (const Vec2& p : l.centerline) {
      grow(p + Vec2(0, l.width / 2));
      grow(p - Vec2(0, l.width / 2));
    }
  xmin -= 2;
  xmax += 2;
  ymin -= 2;
  ymax += 2;
  const SvgMapper mp{xmin, xmax, ymin, ymax, 12.0};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << mp.width()
     << "\" height=\"" << mp.height() << "\" viewBox=\"0 0 " << mp.width() << " "
     << mp.height() << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"#fafafa\"/>\n";

  for (const LaneSpec& lane : scenario.lanes) {
    for (std::size_t i = 0; i + 1 < lane.centerline.size(); ++i) {
      const Vec2 a = lane.centerline[i], b = lane.centerline[i + 1];
      const Vec2 d = (b - a).normalized();
      const Vec2 n(-d.y() * lane.width / 2, d.x() * lane.width / 2);
      os << svg_poly(mp, {a + n, b + n, b - n, a - n},
                     "fill=\"#e0e0e0\" stroke=\"#b0b0b0\" stroke-width=\"1\"");
    }
  }
  for (const GraphVertex& v : scenario.graph.vertices)
    os << svg_poly(mp, v.region.vertices(),
                   "fill=\"#3070b020\" stroke=\"#3070b0\" stroke-width=\"1\" "
                   "fill-opacity=\"0.12\"");
  os << svg_poly(mp, scenario.goal_region.vertices(),
                 "fill=\"#e8c020\" fill-opacity=\"0.5\" stroke=\"#a08010\" "
                 "stroke-width=\"1\"");
  for (const OrientedBoxSpec& o : scenario.static_obstacles)
    os << svg_poly(mp, o.polygon().vertices,
                   "fill=\"#c03030\" fill-opacity=\"0.8\" stroke=\"#801010\" "
                   "stroke-width=\"1\"");

  const double t0 = plan.start_time(), t1 = plan.end_time();
  for (double t = t0; t <= t1 + 1e-9; t += snapshot_interval) {
    for (const DynamicObstacleSpec& d : scenario.dynamic_obstacles) {
      const Pose pose = predict_pose(d.prediction, std::min(t, t1));
      os << svg_poly(mp,
                     oriented_rectangle(pose.position, pose.yaw, d.prediction.length,
                                        d.prediction.width)
                         .vertices,
                     "fill=\"#3050c0\" fill-opacity=\"0.35\" stroke=\"#203080\" "
                     "stroke-width=\"1\"");
    }
    const TrajectorySegment& seg = segment_at_time(plan.segments, std::min(t, t1));
    const Kinematics kin = kinematics_at(seg, std::min(t, t1));
    double yaw = std::atan2(kin.velocity.y(), kin.velocity.x());
    if (kin.velocity.norm() >= scenario.limits.v_floor) {
      const FlatState fs =
          flat_reconstruct(kin.velocity, kin.acceleration, jerk_at(seg, std::min(t, t1)),
                           scenario.vehicle, scenario.limits.v_floor);
      yaw = fs.psi;
    }
    os << svg_poly(mp,
                   oriented_rectangle(kin.position, yaw, scenario.ego_length,
                                      scenario.ego_width)
                       .vertices,
                   "fill=\"#f09020\" fill-opacity=\"0.5\" stroke=\"#a05a00\" "
                   "stroke-width=\"1\"");
  }

  os << "<polyline fill=\"none\" stroke=\"#202020\" stroke-width=\"1.5\" points=\"";
  for (const TrajectorySegment& seg : plan.segments)
    for (int i = 0; i <= 40; ++i) {
      const Vec2 p = evaluate(seg.spatial, i / 40.0);
      os << mp.X(p.x()) << "," << mp.Y(p.y()) << " ";
    }
  os << "\"/>\n</svg>\n";
  return os.str();
}

ResultFiles write_result(const PlanResult& plan, const FeasibilityReport& report,
                         const Scenario& scenario, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw ScenarioError("cannot create output directory '" + out_dir + "'");

  ResultFiles files;
  auto write = [&out_dir](const std::string& name, const std::string& content) {
    const std::string path = out_dir + "/" + name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ScenarioError("cannot write '" + path + "'");
    out << content;
    if (!out) throw ScenarioError("write failed for '" + path + "'");
    return path;
  };
  files.result_path = write("result.json", result_json(plan, scenario));
  files.profile_path = write("profile.csv", profile_csv(report));
  files.svg_path = write("trajectory.svg", trajectory_svg(plan, scenario));

  json stats;
  stats["strategy"] = strategy_name(plan.strategy_used);
  stats["paths_considered"] = plan.paths_considered;
  stats["times_ms"] = json{{"enumeration", plan.times.enumeration_ms},
                           {"assembly", plan.times.assembly_ms},
                           {"solve", plan.times.solve_ms},
                           {"rounding", plan.times.rounding_ms},
                           {"total", plan.times.total_ms}};
  files.stats_path = write("run_stats.json", stats.dump(2) + "\n");
  return files;
}

}  // namespace gcsplan
