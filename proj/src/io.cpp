#include "cgramap/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cgramap/errors.hpp"

namespace cgramap {

using Json = nlohmann::ordered_json;

namespace {

// Turns a parse error's byte offset into "line L, column C".
[[noreturn]] void rethrow_parse_error(const std::string& text, const nlohmann::json::parse_error& e,
                                      const char* what) {
  const std::size_t byte = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  throw InputError(fmt::format("malformed {} JSON at line {}, column {}", what, line, col));
}

Json parse_json(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    rethrow_parse_error(text, e, what);
  }
}

void require_object(const Json& j, const std::string& where) {
  if (!j.is_object()) throw InputError(fmt::format("{}: expected a JSON object", where.empty() ? "/" : where));
}

void reject_unknown(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  require_object(j, where);
  for (const auto& [key, value] : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
    if (!known) throw InputError(fmt::format("unknown field \"{}\" at {}/{}", key, where, key));
  }
}

const Json& required(const Json& j, const std::string& where, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw InputError(fmt::format("missing field \"{}\" at {}", key, where.empty() ? "/" : where));
  return *it;
}

int as_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw InputError(fmt::format("{}: expected an integer", where));
  const auto v = j.get<long long>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw InputError(fmt::format("{}: integer out of range", where));
  }
  return static_cast<int>(v);
}

double as_number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(fmt::format("{}: expected a number", where));
  return j.get<double>();
}

std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw InputError(fmt::format("{}: expected a string", where));
  return j.get<std::string>();
}

const Json& as_array(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(fmt::format("{}: expected an array", where));
  return j;
}

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

}  // namespace

// ---------------------------------------------------------------------------

Dfg parse_dfg(const std::string& text) {
  const Json root = parse_json(text, "DFG");
  reject_unknown(root, "", {"nodes", "edges"});
  std::vector<DfgNode> nodes;
  const auto& jn = as_array(required(root, "", "nodes"), "/nodes");
  for (std::size_t i = 0; i < jn.size(); ++i) {
    const std::string at = fmt::format("/nodes/{}", i);
    reject_unknown(jn[i], at, {"id", "op", "latency"});
    DfgNode node;
    node.id = as_int(required(jn[i], at, "id"), at + "/id");
    if (jn[i].contains("op")) node.op = as_string(jn[i]["op"], at + "/op");
    if (jn[i].contains("latency") && as_int(jn[i]["latency"], at + "/latency") != 1) {
      throw InputError(fmt::format("{}/latency: unsupported latency, only 1 is supported", at));
    }
    nodes.push_back(std::move(node));
  }
  std::vector<DepEdge> edges;
  if (root.contains("edges")) {
    const auto& je = as_array(root["edges"], "/edges");
    for (std::size_t i = 0; i < je.size(); ++i) {
      const std::string at = fmt::format("/edges/{}", i);
      reject_unknown(je[i], at, {"src", "dst", "kind", "distance"});
      DepEdge e;
      e.src = as_int(required(je[i], at, "src"), at + "/src");
      e.dst = as_int(required(je[i], at, "dst"), at + "/dst");
      const std::string kind = je[i].contains("kind") ? as_string(je[i]["kind"], at + "/kind") : "data";
      if (kind == "data") {
        e.kind = DepKind::Data;
      } else if (kind == "loop") {
        e.kind = DepKind::LoopCarried;
      } else {
        throw InputError(fmt::format("{}/kind: expected \"data\" or \"loop\", got \"{}\"", at, kind));
      }
      if (je[i].contains("distance")) e.distance = as_int(je[i]["distance"], at + "/distance");
      if (e.kind == DepKind::LoopCarried && e.distance != 1) {
        throw InputError(fmt::format("{}: unsupported loop-carried distance {} (only 1 is supported)", at, e.distance));
      }
      edges.push_back(e);
    }
  }
  try {
    return Dfg(std::move(nodes), std::move(edges));
  } catch (const StructuralError& e) {
    throw InputError(e.what());
  }
}

std::string dfg_to_json(const Dfg& dfg) {
  Json root;
  root["nodes"] = Json::array();
  for (const auto& n : dfg.nodes()) root["nodes"].push_back({{"id", n.id}, {"op", n.op}});
  root["edges"] = Json::array();
  for (const auto& e : dfg.edges()) {
    root["edges"].push_back({{"src", e.src}, {"dst", e.dst}, {"kind", to_string(e.kind)}, {"distance", e.distance}});
  }
  return root.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

TimePolicy parse_time_policy(const std::string& name) {
  if (name == "persistent_modular") return TimePolicy::PersistentModular;
  if (name == "consecutive_only") return TimePolicy::ConsecutiveOnly;
  throw InputError(fmt::format("unknown time policy \"{}\" (persistent_modular | consecutive_only)", name));
}

DegreePolicy parse_degree_policy(const std::string& name) {
  if (name == "paper_max") return DegreePolicy::PaperMax;
  if (name == "conservative_min") return DegreePolicy::ConservativeMin;
  throw InputError(fmt::format("unknown degree policy \"{}\" (paper_max | conservative_min)", name));
}

MapOptions RunConfig::map_options() const {
  MapOptions o;
  o.ii_max = ii_max;
  o.time_budget = Seconds(time_budget);
  o.space_budget = Seconds(space_budget);
  o.retry_cap = retry_cap;
  o.time_policy = time_policy;
  return o;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.cgra.rows == b.cgra.rows && a.cgra.cols == b.cgra.cols && a.cgra.topology == b.cgra.topology &&
         a.cgra.neighbor_read == b.cgra.neighbor_read && a.cgra.degree_policy == b.cgra.degree_policy &&
         a.time_policy == b.time_policy && a.time_budget == b.time_budget && a.space_budget == b.space_budget &&
         a.retry_cap == b.retry_cap && a.seed == b.seed && a.ii_max == b.ii_max && a.grids == b.grids;
}

RunConfig parse_config(const std::string& text) {
  const Json root = parse_json(text, "config");
  reject_unknown(root, "", {"rows", "cols", "topology", "neighbor_read", "degree_policy", "time_policy", "budgets",
                            "retry_cap", "seed", "ii_max", "grids"});
  RunConfig c;
  if (root.contains("rows")) c.cgra.rows = as_int(root["rows"], "/rows");
  if (root.contains("cols")) c.cgra.cols = as_int(root["cols"], "/cols");
  if (root.contains("topology") && as_string(root["topology"], "/topology") != "mesh") {
    throw InputError("/topology: only \"mesh\" is supported");
  }
  if (root.contains("neighbor_read")) {
    if (!root["neighbor_read"].is_boolean()) throw InputError("/neighbor_read: expected a boolean");
    c.cgra.neighbor_read = root["neighbor_read"].get<bool>();
  }
  if (root.contains("degree_policy")) c.cgra.degree_policy = parse_degree_policy(as_string(root["degree_policy"], "/degree_policy"));
  if (root.contains("time_policy")) c.time_policy = parse_time_policy(as_string(root["time_policy"], "/time_policy"));
  if (root.contains("budgets")) {
    const auto& b = root["budgets"];
    reject_unknown(b, "/budgets", {"time", "space"});
    if (b.contains("time")) c.time_budget = as_number(b["time"], "/budgets/time");
    if (b.contains("space")) c.space_budget = as_number(b["space"], "/budgets/space");
    if (c.time_budget <= 0 || c.space_budget <= 0) throw InputError("/budgets: budgets must be positive");
  }
  if (root.contains("retry_cap")) c.retry_cap = as_int(root["retry_cap"], "/retry_cap");
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned()) throw InputError("/seed: expected a non-negative integer");
    c.seed = root["seed"].get<std::uint64_t>();
  }
  if (root.contains("ii_max") && !root["ii_max"].is_null()) {
    c.ii_max = as_int(root["ii_max"], "/ii_max");
    if (*c.ii_max < 1) throw InputError("/ii_max: must be positive");
  }
  if (root.contains("grids")) {
    c.grids.clear();
    const auto& g = as_array(root["grids"], "/grids");
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::string at = fmt::format("/grids/{}", i);
      if (!g[i].is_array() || g[i].size() != 2) throw InputError(fmt::format("{}: expected [rows, cols]", at));
      c.grids.emplace_back(as_int(g[i][0], at + "/0"), as_int(g[i][1], at + "/1"));
      if (c.grids.back().first < 1 || c.grids.back().second < 1) {
        throw InputError(fmt::format("{}: grid dimensions must be positive", at));
      }
    }
  }
  c.cgra.validate();
  return c;
}

std::string config_to_json(const RunConfig& c) {
  Json root;
  root["rows"] = c.cgra.rows;
  root["cols"] = c.cgra.cols;
  root["topology"] = "mesh";
  root["neighbor_read"] = c.cgra.neighbor_read;
  root["degree_policy"] = to_string(c.cgra.degree_policy);
  root["time_policy"] = to_string(c.time_policy);
  root["budgets"] = {{"time", c.time_budget}, {"space", c.space_budget}};
  root["retry_cap"] = c.retry_cap;
  root["seed"] = c.seed;
  root["ii_max"] = c.ii_max ? Json(*c.ii_max) : Json(nullptr);
  root["grids"] = Json::array();
  for (auto [r, k] : c.grids) root["grids"].push_back({r, k});
  return root.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

namespace {

Json report_json(const ValidationReport& report) {
  Json j;
  j["verdict"] = report.valid() ? "valid" : "invalid";
  j["violations"] = Json::array();
  for (const auto& v : report.violations) {
    j["violations"].push_back({{"rule", to_string(v.rule)}, {"elements", v.elements}, {"detail", v.detail}});
  }
  return j;
}

}  // namespace

std::string report_to_json(const ValidationReport& report) { return report_json(report).dump(2) + "\n"; }

std::string mapping_to_json(const MapOutcome& outcome, const Dfg& dfg, const RunConfig& config,
                            bool include_timings) {
  Json root;
  root["status"] = outcome.ok() ? "mapped" : "failed";
  root["grid"] = {{"rows", config.cgra.rows}, {"cols", config.cgra.cols}};
  root["time_policy"] = to_string(config.time_policy);
  root["degree_policy"] = to_string(config.cgra.degree_policy);
  root["seed"] = config.seed;
  root["mii"] = outcome.mii;
  root["ii_max"] = outcome.ii_max;
  const auto& st = outcome.stats;
  Json stats;
  stats["iis_tried"] = st.iis_tried;
  stats["time_solutions_tried"] = st.time_solutions_tried;
  stats["space_attempts"] = st.space_attempts;
  stats["time_timeout"] = st.time_timeout;
  stats["space_timeout"] = st.space_timeout;
  stats["time_steps"] = st.time_steps;
  stats["space_nodes"] = st.space_nodes;
  if (include_timings) {
    stats["time_seconds"] = round3(st.time_seconds);
    stats["space_seconds"] = round3(st.space_seconds);
    stats["total_seconds"] = round3(st.total_seconds);
  }
  if (!outcome.ok()) {
    root["failure"] = to_string(outcome.failure);
    root["stats"] = stats;
    return root.dump(2) + "\n";
  }
  const auto& r = *outcome.result;
  root["ii"] = r.ii;
  root["stage_count"] = r.stage_count;
  root["mobs_length"] = r.mobs_length;
  root["mapping"] = Json::array();
  for (NodeId v = 0; v < static_cast<NodeId>(dfg.size()); ++v) {
    const auto& p = r.mapping[v];
    root["mapping"].push_back({{"node", v},
                               {"op", dfg.nodes()[v].op},
                               {"pe", p.pe},
                               {"row", config.cgra.row_of(p.pe)},
                               {"col", config.cgra.col_of(p.pe)},
                               {"slot", p.slot},
                               {"fold", p.fold}});
  }
  root["kernel"] = Json::array();
  for (const auto& row : r.kernel) {
    Json jr = Json::array();
    for (const auto& e : row) jr.push_back({{"pe", e.pe}, {"node", e.node}});
    root["kernel"].push_back(jr);
  }
  root["stats"] = stats;
  root["validation"] = report_json(r.report);
  return root.dump(2) + "\n";
}

MappingFile parse_mapping(const std::string& text, const CgraConfig& grid) {
  const Json root = parse_json(text, "mapping");
  require_object(root, "");
  MappingFile m;
  m.ii = as_int(required(root, "", "ii"), "/ii");
  if (m.ii < 1) throw InputError("/ii: must be positive");
  m.time.ii = m.ii;
  const auto& jm = as_array(required(root, "", "mapping"), "/mapping");
  m.time.assignment.assign(jm.size(), {});
  m.image.assign(jm.size(), -1);
  std::vector<char> seen(jm.size(), 0);
  for (std::size_t i = 0; i < jm.size(); ++i) {
    const std::string at = fmt::format("/mapping/{}", i);
    require_object(jm[i], at);
    const int node = as_int(required(jm[i], at, "node"), at + "/node");
    if (node < 0 || static_cast<std::size_t>(node) >= jm.size() || seen[node]) {
      throw InputError(fmt::format("{}/node: ids must be a permutation of 0..{}", at, jm.size() - 1));
    }
    seen[node] = 1;
    const int pe = as_int(required(jm[i], at, "pe"), at + "/pe");
    const int slot = as_int(required(jm[i], at, "slot"), at + "/slot");
    const int fold = as_int(required(jm[i], at, "fold"), at + "/fold");
    if (pe < 0 || pe >= grid.pe_count()) throw InputError(fmt::format("{}/pe: out of range", at));
    m.time.assignment[node] = {slot, fold};
    // Slots outside 0..II-1 are left for the validator to report.
    m.image[node] = slot >= 0 && slot < m.ii ? slot * grid.pe_count() + pe : -1;
  }
  return m;
}

// ---------------------------------------------------------------------------

const char* const kReportCsvHeader =
    "name,rows,cols,dfg_nodes,mII,II,time_s,space_s,total_s,verdict,time_solutions,seed";

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line, int line_no) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw InputError(fmt::format("report CSV line {}: unterminated quote", line_no));
  return fields;
}

}  // namespace

std::string report_rows_to_csv(const std::vector<BenchRow>& rows) {
  std::string out = std::string(kReportCsvHeader) + "\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{:.3f},{:.3f},{:.3f},{},{},{}\n", csv_field(r.name), r.rows, r.cols, r.dfg_nodes, r.mii,
                       r.ii ? std::to_string(*r.ii) : std::string("-"), round3(r.time_seconds), round3(r.space_seconds),
                       round3(r.total_seconds), r.verdict, r.time_solutions, r.seed);
  }
  return out;
}

std::vector<BenchRow> parse_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kReportCsvHeader) throw InputError("report CSV: unexpected header");
  std::vector<BenchRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv_line(line, line_no);
    if (f.size() != 12) throw InputError(fmt::format("report CSV line {}: expected 12 fields", line_no));
    try {
      BenchRow r;
      r.name = f[0];
      r.rows = std::stoi(f[1]);
      r.cols = std::stoi(f[2]);
      r.dfg_nodes = std::stoi(f[3]);
      r.mii = std::stoi(f[4]);
      if (f[5] != "-") r.ii = std::stoi(f[5]);
      r.time_seconds = round3(std::stod(f[6]));
      r.space_seconds = round3(std::stod(f[7]));
      r.total_seconds = round3(std::stod(f[8]));
      r.verdict = f[9];
      r.time_solutions = std::stoi(f[10]);
      r.seed = std::stoull(f[11]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw InputError(fmt::format("report CSV line {}: malformed number", line_no));
    }
  }
  return rows;
}

std::string report_rows_to_json(const std::vector<BenchRow>& rows) {
  Json root = Json::array();
  for (const auto& r : rows) {
    root.push_back({{"name", r.name},
                    {"rows", r.rows},
                    {"cols", r.cols},
                    {"dfg_nodes", r.dfg_nodes},
                    {"mII", r.mii},
                    {"II", r.ii ? Json(*r.ii) : Json(nullptr)},
                    {"time_s", round3(r.time_seconds)},
                    {"space_s", round3(r.space_seconds)},
                    {"total_s", round3(r.total_seconds)},
                    {"verdict", r.verdict},
                    {"time_solutions", r.time_solutions},
                    {"seed", r.seed}});
  }
  return root.dump(2) + "\n";
}

std::vector<BenchRow> parse_report_json(const std::string& text) {
  const Json root = parse_json(text, "report");
  const auto& arr = as_array(root, "/");
  std::vector<BenchRow> rows;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string at = fmt::format("/{}", i);
    reject_unknown(arr[i], at, {"name", "rows", "cols", "dfg_nodes", "mII", "II", "time_s", "space_s", "total_s",
                                "verdict", "time_solutions", "seed"});
    BenchRow r;
    r.name = as_string(required(arr[i], at, "name"), at + "/name");
    r.rows = as_int(required(arr[i], at, "rows"), at + "/rows");
    r.cols = as_int(required(arr[i], at, "cols"), at + "/cols");
    r.dfg_nodes = as_int(required(arr[i], at, "dfg_nodes"), at + "/dfg_nodes");
    r.mii = as_int(required(arr[i], at, "mII"), at + "/mII");
    const auto& ii = required(arr[i], at, "II");
    if (!ii.is_null()) r.ii = as_int(ii, at + "/II");
    r.time_seconds = round3(as_number(required(arr[i], at, "time_s"), at + "/time_s"));
    r.space_seconds = round3(as_number(required(arr[i], at, "space_s"), at + "/space_s"));
    r.total_seconds = round3(as_number(required(arr[i], at, "total_s"), at + "/total_s"));
    r.verdict = as_string(required(arr[i], at, "verdict"), at + "/verdict");
    r.time_solutions = as_int(required(arr[i], at, "time_solutions"), at + "/time_solutions");
    const auto& seed = required(arr[i], at, "seed");
    if (!seed.is_number_unsigned()) throw InputError(fmt::format("{}/seed: expected a non-negative integer", at));
    r.seed = seed.get<std::uint64_t>();
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---------------------------------------------------------------------------

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot read {}", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(fmt::format("cannot write {}", path));
  out << contents;
}

}  // namespace cgramap
