#include "msp/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace msp {

namespace {

const char* kInstanceFormat = "msp-instance/1";
const char* kScheduleFormat = "msp-schedule/1";
const char* kGraphFormat = "msp-roadgraph/1";

void expect_format(const Json& doc, const char* format) {
  if (!doc.is_object()) throw FormatError(std::string("expected a JSON object in ") + format + " format");
  if (!doc.contains("format") || doc["format"] != format) {
    throw FormatError(std::string("missing or wrong \"format\" field, expected \"") + format + "\"");
  }
}

const Json& field(const Json& obj, const char* name) {
  if (!obj.is_object() || !obj.contains(name)) throw FormatError(std::string("missing field \"") + name + "\"");
  return obj[name];
}

template <typename T>
T get(const Json& obj, const char* name) {
  const Json& v = field(obj, name);
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw FormatError(std::string("field \"") + name + "\" has the wrong type");
  }
}

std::int64_t get_int(const Json& obj, const char* name) {
  const Json& v = field(obj, name);
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::abs(d) < 9.0e18) return static_cast<std::int64_t>(d);
  }
  throw FormatError(std::string("field \"") + name + "\" must be an integer");
}

Json rational_json(const Rational& r) {
  if (r.is_integer()) return r.num();
  return r.str();
}

Rational get_rational(const Json& obj, const char* name) {
  const Json& v = field(obj, name);
  try {
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_number_float()) return Rational::parse(v.dump());
    if (v.is_string()) return Rational::parse(v.get<std::string>());
  } catch (const std::exception& e) {
    throw FormatError(std::string("field \"") + name + "\": " + e.what());
  }
  throw FormatError(std::string("field \"") + name + "\" must be a number or \"n/d\" string");
}

Json point_json(const Point3& p) { return Json::array({p.x, p.y, p.z}); }

Point3 get_point(const Json& obj, const char* name) {
  const Json& v = field(obj, name);
  if (v.is_array() && v.size() == 3 && v[0].is_number() && v[1].is_number() && v[2].is_number()) {
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
  }
  throw FormatError(std::string("field \"") + name + "\" must be [x, y, z]");
}

}  // namespace

Json instance_to_json(const ProblemInstance& inst) {
  Json doc;
  doc["format"] = kInstanceFormat;
  doc["depot"] = {{"location", point_json(inst.depot.location)},
                  {"mission_horizon", inst.depot.mission_horizon},
                  {"max_trips", inst.depot.max_trips_per_drone}};
  doc["fleet"] = {{"count", inst.fleet.count},
                  {"speed", inst.fleet.speed},
                  {"fly_power", inst.fleet.fly_power},
                  {"hover_power", inst.fleet.hover_power},
                  {"compute_power", inst.fleet.compute_power},
                  {"battery", inst.fleet.battery},
                  {"proc_speed", inst.fleet.proc_speed}};
  doc["beta"] = inst.beta;
  Json acts = Json::array();
  for (const Activity& a : inst.activities) {
    acts.push_back({{"id", a.id},
                    {"waypoint", point_json(a.waypoint)},
                    {"t_start", a.t_start},
                    {"t_end", a.t_end},
                    {"kappa", a.kappa},
                    {"deadline", a.deadline},
                    {"gamma_capture", rational_json(a.gamma_capture)},
                    {"gamma_onboard", rational_json(a.gamma_onboard)},
                    {"gamma_ontime", rational_json(a.gamma_ontime)}});
  }
  doc["activities"] = std::move(acts);
  return doc;
}

ProblemInstance instance_from_json(const Json& doc) {
  expect_format(doc, kInstanceFormat);
  ProblemInstance inst;
  const Json& depot = field(doc, "depot");
  inst.depot.location = get_point(depot, "location");
  inst.depot.mission_horizon = get_int(depot, "mission_horizon");
  inst.depot.max_trips_per_drone = static_cast<int>(get_int(depot, "max_trips"));
  const Json& fleet = field(doc, "fleet");
  inst.fleet.count = static_cast<int>(get_int(fleet, "count"));
  inst.fleet.speed = get<double>(fleet, "speed");
  inst.fleet.fly_power = get_int(fleet, "fly_power");
  inst.fleet.hover_power = get_int(fleet, "hover_power");
  inst.fleet.compute_power = get_int(fleet, "compute_power");
  inst.fleet.battery = get_int(fleet, "battery");
  inst.fleet.proc_speed = get_int(fleet, "proc_speed");
  inst.beta = get_int(doc, "beta");
  const Json& acts = field(doc, "activities");
  if (!acts.is_array()) throw FormatError("field \"activities\" must be an array");
  for (const Json& j : acts) {
    Activity a;
    a.id = get_int(j, "id");
    a.waypoint = get_point(j, "waypoint");
    a.t_start = get_int(j, "t_start");
    a.t_end = get_int(j, "t_end");
    a.kappa = get_int(j, "kappa");
    a.deadline = get_int(j, "deadline");
    a.gamma_capture = get_rational(j, "gamma_capture");
    a.gamma_onboard = get_rational(j, "gamma_onboard");
    a.gamma_ontime = get_rational(j, "gamma_ontime");
    inst.activities.push_back(a);
  }
  return inst;
}

Json schedule_to_json(const MissionSchedule& sched) {
  Json doc;
  doc["format"] = kScheduleFormat;
  Json drones = Json::array();
  for (std::size_t d = 0; d < sched.drones.size(); ++d) {
    const DroneMission& mission = sched.drones[d];
    Json trips = Json::array();
    for (const Trip& t : mission.trips) {
      Json stops = Json::array();
      for (std::size_t i = 0; i < t.activities.size(); ++i) {
        stops.push_back({{"activity", t.activities[i]}, {"arrival", t.arrivals[i]}, {"departure", t.departures[i]}});
      }
      trips.push_back({{"index", t.index}, {"takeoff", t.takeoff}, {"landing", t.landing}, {"stops", stops}});
    }
    Json slots = Json::array();
    for (const ComputeSlot& s : mission.slots) {
      slots.push_back({{"activity", s.activity}, {"batch", s.batch}, {"start", s.start}, {"end", s.end}});
    }
    drones.push_back({{"drone", d}, {"trips", trips}, {"slots", slots}});
  }
  doc["drones"] = std::move(drones);
  doc["dropped"] = sched.dropped;
  return doc;
}

MissionSchedule schedule_from_json(const Json& doc) {
  expect_format(doc, kScheduleFormat);
  MissionSchedule sched;
  const Json& drones = field(doc, "drones");
  if (!drones.is_array()) throw FormatError("field \"drones\" must be an array");
  for (std::size_t d = 0; d < drones.size(); ++d) {
    const Json& jd = drones[d];
    DroneMission mission;
    for (const Json& jt : field(jd, "trips")) {
      Trip t;
      t.drone = static_cast<int>(d);
      t.index = static_cast<int>(get_int(jt, "index"));
      t.takeoff = get_int(jt, "takeoff");
      t.landing = get_int(jt, "landing");
      for (const Json& js : field(jt, "stops")) {
        t.activities.push_back(get_int(js, "activity"));
        t.arrivals.push_back(get_int(js, "arrival"));
        t.departures.push_back(get_int(js, "departure"));
      }
      mission.trips.push_back(std::move(t));
    }
    for (const Json& js : field(jd, "slots")) {
      mission.slots.push_back({get_int(js, "activity"), static_cast<int>(get_int(js, "batch")), get_int(js, "start"),
                               get_int(js, "end")});
    }
    sched.drones.push_back(std::move(mission));
  }
  const Json& dropped = field(doc, "dropped");
  if (!dropped.is_array()) throw FormatError("field \"dropped\" must be an array");
  for (const Json& j : dropped) {
    if (!j.is_number_integer()) throw FormatError("dropped ids must be integers");
    sched.dropped.push_back(j.get<ActivityId>());
  }
  return sched;
}

Json roadgraph_to_json(const RoadGraph& graph) {
  Json doc;
  doc["format"] = kGraphFormat;
  Json vs = Json::array();
  for (const Point3& p : graph.vertices) vs.push_back(point_json(p));
  Json es = Json::array();
  for (const RoadEdge& e : graph.edges) es.push_back({{"u", e.u}, {"v", e.v}, {"length", e.length}});
  doc["vertices"] = std::move(vs);
  doc["edges"] = std::move(es);
  return doc;
}

RoadGraph roadgraph_from_json(const Json& doc) {
  expect_format(doc, kGraphFormat);
  RoadGraph g;
  const Json& vs = field(doc, "vertices");
  if (!vs.is_array()) throw FormatError("field \"vertices\" must be an array");
  for (const Json& v : vs) {
    Json wrap = {{"p", v}};
    g.vertices.push_back(get_point(wrap, "p"));
  }
  for (const Json& e : field(doc, "edges")) {
    const std::int64_t u = get_int(e, "u");
    const std::int64_t v = get_int(e, "v");
    const auto n = static_cast<std::int64_t>(g.vertices.size());
    if (u < 0 || v < 0 || u >= n || v >= n) throw FormatError("edge endpoint out of range");
    RoadEdge edge{static_cast<std::size_t>(u), static_cast<std::size_t>(v), 0.0};
    edge.length = e.contains("length") ? get<double>(e, "length") : distance(g.vertices[edge.u], g.vertices[edge.v]);
    if (edge.length < 0.0) throw FormatError("edge length must be non-negative");
    g.edges.push_back(edge);
  }
  return g;
}

std::string decimal(const Rational& r, int digits) {
  if (r.is_integer()) return std::to_string(r.num());
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << r.to_double();
  std::string s = out.str();
  s.erase(s.find_last_not_of('0') + 1);
  if (s.back() == '.') s.pop_back();
  return s == "-0" ? "0" : s;
}

std::string report_csv(const UtilityReport& report) {
  std::ostringstream out;
  out << "activity_id,u,u_bar,u_bbar,U\n";
  for (const ActivityUtility& a : report.activities) {
    out << a.id << ',' << a.captured << ',' << decimal(a.onboard) << ',' << decimal(a.ontime) << ','
        << decimal(a.total) << '\n';
  }
  return out.str();
}

EnergyTrace trace_from_csv(std::istream& in, const MissionSchedule& sched) {
  EnergyTrace trace = EnergyTrace::identity(sched);
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (row == 1 && line.rfind("trip_id", 0) == 0) continue;
    std::istringstream cells(line);
    std::string cell[5];
    for (auto& c : cell) {
      if (!std::getline(cells, c, ',')) throw FormatError("trace row " + std::to_string(row) + ": expected 5 columns");
    }
    std::size_t trip = 0;
    std::size_t leg = 0;
    LegFactors f;
    try {
      trip = std::stoul(cell[0]);
      leg = std::stoul(cell[1]);
      f = {std::stod(cell[2]), std::stod(cell[3]), std::stod(cell[4])};
    } catch (const std::exception&) {
      throw FormatError("trace row " + std::to_string(row) + ": bad number");
    }
    if (trip >= trace.trips.size() || leg >= trace.trips[trip].size()) {
      throw FormatError("trace row " + std::to_string(row) + ": trip " + std::to_string(trip) + " leg " +
                        std::to_string(leg) + " is not in the schedule");
    }
    trace.trips[trip][leg] = f;
  }
  return trace;
}

std::string trace_to_csv(const EnergyTrace& trace) {
  std::ostringstream out;
  out << "trip_id,leg_index,fly_factor,hover_factor,compute_factor\n";
  out << std::setprecision(17);
  for (std::size_t t = 0; t < trace.trips.size(); ++t) {
    for (std::size_t l = 0; l < trace.trips[t].size(); ++l) {
      const LegFactors& f = trace.trips[t][l];
      out << t << ',' << l << ',' << f.fly << ',' << f.hover << ',' << f.compute << '\n';
    }
  }
  return out.str();
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MspError("cannot write " + path);
  out << text;
  if (!out) throw MspError("failed writing " + path);
}

}  // namespace msp
