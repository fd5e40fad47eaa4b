#include "netpower/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <utility>

#include "netpower/centrality.hpp"
#include "netpower/flow.hpp"
#include "netpower/optimize.hpp"
#include "netpower/voting.hpp"

namespace netpower {
namespace {

constexpr const char* kVersion = "0.1.0";

std::string format_real(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void escape_into(const std::string& text, std::string& out) {
  for (const char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buffer[8];
          std::snprintf(buffer, sizeof(buffer), "\\u%04x",
                        static_cast<unsigned>(static_cast<unsigned char>(c)));
          out += buffer;
        } else {
          out += c;
        }
    }
  }
}

}  // namespace

JsonValue JsonValue::null() { return JsonValue{}; }

JsonValue JsonValue::of(bool value) {
  JsonValue v;
  v.kind = Kind::Bool;
  v.boolean = value;
  return v;
}

JsonValue JsonValue::of(int value) { return of(static_cast<long long>(value)); }

JsonValue JsonValue::of(long long value) {
  JsonValue v;
  v.kind = Kind::Int;
  v.integer = value;
  return v;
}

JsonValue JsonValue::of(std::uint64_t value) {
  JsonValue v;
  v.kind = Kind::Int;
  v.integer = static_cast<long long>(value);
  v.text = std::to_string(value);  // keeps the full unsigned range in dump()
  return v;
}

JsonValue JsonValue::of(double value) {
  JsonValue v;
  v.kind = Kind::Real;
  v.real = value;
  return v;
}

JsonValue JsonValue::of(const char* value) { return of(std::string(value)); }

JsonValue JsonValue::of(std::string value) {
  JsonValue v;
  v.kind = Kind::Str;
  v.text = std::move(value);
  return v;
}

JsonValue JsonValue::array() {
  JsonValue v;
  v.kind = Kind::Arr;
  return v;
}

JsonValue JsonValue::object() {
  JsonValue v;
  v.kind = Kind::Obj;
  return v;
}

JsonValue& JsonValue::push(JsonValue value) {
  items.push_back(std::move(value));
  return items.back();
}

JsonValue& JsonValue::set(std::string key, JsonValue value) {
  fields.emplace_back(std::move(key), std::move(value));
  return fields.back().second;
}

namespace {

void dump_into(const JsonValue& v, int indent, int depth, std::string& out) {
  const std::string pad(static_cast<size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<size_t>(indent * depth), ' ');
  switch (v.kind) {
    case JsonValue::Kind::Null: out += "null"; break;
    case JsonValue::Kind::Bool: out += v.boolean ? "true" : "false"; break;
    case JsonValue::Kind::Int:
      out += v.text.empty() ? std::to_string(v.integer) : v.text;
      break;
    case JsonValue::Kind::Real: out += format_real(v.real); break;
    case JsonValue::Kind::Str:
      out += '"';
      escape_into(v.text, out);
      out += '"';
      break;
    case JsonValue::Kind::Arr:
      if (v.items.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (size_t i = 0; i < v.items.size(); ++i) {
        out += pad;
        dump_into(v.items[i], indent, depth + 1, out);
        if (i + 1 < v.items.size()) out += ',';
        out += '\n';
      }
      out += close_pad;
      out += ']';
      break;
    case JsonValue::Kind::Obj:
      if (v.fields.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      for (size_t i = 0; i < v.fields.size(); ++i) {
        out += pad;
        out += '"';
        escape_into(v.fields[i].first, out);
        out += "\": ";
        dump_into(v.fields[i].second, indent, depth + 1, out);
        if (i + 1 < v.fields.size()) out += ',';
        out += '\n';
      }
      out += close_pad;
      out += '}';
      break;
  }
}

}  // namespace

std::string JsonValue::dump(int indent) const {
  std::string out;
  dump_into(*this, indent, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// CSV input

namespace {

std::string trimmed(const std::string& raw) {
  size_t begin = 0;
  size_t end = raw.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(raw[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(raw[end - 1]))) --end;
  return raw.substr(begin, end - begin);
}

std::string lowered(std::string text) {
  for (char& c : text) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return text;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(trimmed(line.substr(start)));
      break;
    }
    fields.push_back(trimmed(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

[[noreturn]] void parse_fail(const std::string& path, size_t line, const std::string& what) {
  fail(ErrorCode::ParseError, "'" + path + "' line " + std::to_string(line) + ": " + what);
}

double parse_real(const std::string& field, const std::string& path, size_t line) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  double value = 0.0;
  const auto [rest, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || rest != end || field.empty()) {
    parse_fail(path, line, "expected a number, got '" + field + "'");
  }
  return value;
}

struct CsvRow {
  size_t line = 0;
  std::vector<std::string> fields;
};

/// All data rows of a CSV file. A first line equal to `header` (case
/// insensitive) is skipped; blank lines are ignored everywhere.
std::vector<CsvRow> read_rows(const std::string& path, const std::vector<std::string>& header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::vector<CsvRow> rows;
  std::string line;
  size_t number = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++number;
    if (trimmed(line).empty()) continue;
    std::vector<std::string> fields = split_fields(line);
    if (first_content) {
      first_content = false;
      bool is_header = fields.size() == header.size();
      for (size_t i = 0; is_header && i < fields.size(); ++i) {
        is_header = lowered(fields[i]) == header[i];
      }
      if (is_header) continue;
    }
    if (fields.size() != header.size()) {
      parse_fail(path, number,
                 "expected " + std::to_string(header.size()) + " fields, got " +
                     std::to_string(fields.size()));
    }
    rows.push_back({number, std::move(fields)});
  }
  return rows;
}

}  // namespace

Network load_network(const std::string& nodes_path, const std::string& edges_path,
                     NetworkOptions options) {
  std::vector<NodeRecord> nodes;
  for (const CsvRow& row : read_rows(nodes_path, {"id", "kind", "value"})) {
    NodeRecord node;
    node.id = row.fields[0];
    if (node.id.empty()) parse_fail(nodes_path, row.line, "empty node id");
    const std::string kind = lowered(row.fields[1]);
    if (kind == "firm") {
      node.kind = NodeKind::Firm;
    } else if (kind == "person") {
      node.kind = NodeKind::Person;
    } else {
      parse_fail(nodes_path, row.line, "kind must be 'firm' or 'person', got '" + row.fields[1] + "'");
    }
    node.value = parse_real(row.fields[2], nodes_path, row.line);
    nodes.push_back(std::move(node));
  }
  if (nodes.empty()) fail(ErrorCode::EmptyNetwork, "'" + nodes_path + "' has no data rows");

  std::vector<Edge> edges;
  for (const CsvRow& row : read_rows(edges_path, {"source", "target", "weight"})) {
    if (row.fields[0].empty() || row.fields[1].empty()) {
      parse_fail(edges_path, row.line, "empty endpoint id");
    }
    edges.push_back({row.fields[0], row.fields[1], parse_real(row.fields[2], edges_path, row.line)});
  }
  return Network::build(std::move(nodes), std::move(edges), options);
}

ShareDistribution load_distribution(const std::string& path) {
  std::vector<std::string> ids;
  std::vector<double> amounts;
  for (const CsvRow& row : read_rows(path, {"id", "share"})) {
    if (row.fields[0].empty()) parse_fail(path, row.line, "empty actor id");
    ids.push_back(row.fields[0]);
    amounts.push_back(parse_real(row.fields[1], path, row.line));
  }
  Vector shares(static_cast<Index>(amounts.size()));
  for (size_t i = 0; i < amounts.size(); ++i) shares(static_cast<Index>(i)) = amounts[i];
  return ShareDistribution::from_amounts(std::move(ids), std::move(shares));
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char buffer[1 << 14];
  while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buffer[i]);
      hash *= 0x100000001b3ULL;
    }
    if (got < static_cast<std::streamsize>(sizeof(buffer))) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
  return hex;
}

// ---------------------------------------------------------------------------
// Documents

namespace {

JsonValue string_map_json(const std::map<std::string, std::string>& map) {
  JsonValue obj = JsonValue::object();
  for (const auto& [key, value] : map) obj.set(key, JsonValue::of(value));
  return obj;
}

JsonValue manifest_json(const RunManifest& manifest) {
  JsonValue obj = JsonValue::object();
  JsonValue command = JsonValue::array();
  for (const std::string& arg : manifest.command) command.push(JsonValue::of(arg));
  obj.set("command", std::move(command));
  obj.set("inputs", string_map_json(manifest.inputs));
  obj.set("parameters", string_map_json(manifest.parameters));
  obj.set("seed", JsonValue::of(manifest.seed));
  obj.set("version", JsonValue::of(manifest.version));
  return obj;
}

JsonValue document_shell(const RunManifest& manifest, const std::string& measure,
                         const std::map<std::string, std::string>& parameters) {
  JsonValue doc = JsonValue::object();
  doc.set("manifest", manifest_json(manifest));
  doc.set("measure", JsonValue::of(measure));
  doc.set("parameters", string_map_json(parameters));
  return doc;
}

JsonValue score_rows(const ScoreVector& sv) {
  JsonValue rows = JsonValue::array();
  for (size_t i = 0; i < sv.ids.size(); ++i) {
    JsonValue& row = rows.push(JsonValue::object());
    row.set("id", JsonValue::of(sv.ids[i]));
    row.set("score", JsonValue::of(sv.scores(static_cast<Index>(i))));
  }
  return rows;
}

JsonValue profile_rows(const PowerProfile& profile) {
  JsonValue rows = JsonValue::array();
  for (size_t i = 0; i < profile.players.size(); ++i) {
    JsonValue& row = rows.push(JsonValue::object());
    row.set("player", JsonValue::of(profile.players[i]));
    row.set("value", JsonValue::of(profile.values(static_cast<Index>(i))));
    if (profile.raw.size() == profile.values.size()) {
      row.set("raw", JsonValue::of(profile.raw(static_cast<Index>(i))));
    }
  }
  return rows;
}

JsonValue matrix_rows(const Matrix& m) {
  JsonValue rows = JsonValue::array();
  for (Index i = 0; i < m.rows(); ++i) {
    JsonValue& row = rows.push(JsonValue::array());
    for (Index j = 0; j < m.cols(); ++j) row.push(JsonValue::of(m(i, j)));
  }
  return rows;
}

}  // namespace

std::string result_document(const RunManifest& manifest, const std::string& measure,
                            const std::map<std::string, std::string>& parameters,
                            JsonValue scores) {
  JsonValue doc = document_shell(manifest, measure, parameters);
  doc.set("scores", std::move(scores));
  return doc.dump() + "\n";
}

std::string error_document(const RunManifest& manifest, const std::string& measure,
                           const Error& error) {
  JsonValue doc = document_shell(manifest, measure, {});
  doc.set("scores", JsonValue::null());
  JsonValue& detail = doc.set("error", JsonValue::object());
  detail.set("code", JsonValue::of(name_of(error.code())));
  detail.set("kind",
             JsonValue::of(error.kind() == ErrorKind::Validation ? "validation" : "numerical"));
  detail.set("message", JsonValue::of(error.what()));
  return doc.dump() + "\n";
}

// ---------------------------------------------------------------------------
// Taxonomy report

namespace {

struct RatingRow {
  const char* family;
  const char* measure;
  const char* ultimate_control;
  const char* intermediary_power;
};

constexpr RatingRow kRatings[] = {
    {"centrality", "degree", "poor", "poor"},
    {"centrality", "eigenvector", "poor", "poor"},
    {"centrality", "closeness", "poor", "poor"},
    {"centrality", "betweenness", "fair", "good"},
    {"centrality", "flow-betweenness", "fair", "good"},
    {"flow", "pagerank", "fair", "good"},
    {"flow", "katz", "excellent", "fair"},
    {"flow", "alpha-icon", "excellent", "fair"},
    {"flow", "ncv", "good", "fair"},
    {"flow", "nncv", "good", "fair"},
    {"voting", "shapley-shubik", "fair (single firm)", "poor"},
    {"voting", "banzhaf", "fair (single firm)", "poor"},
    {"voting", "johnston", "fair (single firm)", "poor"},
    {"voting", "phi", "good", "fair"},
    {"voting", "pi", "good", "fair"},
    {"voting", "pi-prime", "good", "fair"},
    {"concentration", "hhi", "good", "poor"},
    {"concentration", "top-k", "good", "poor"},
    {"hybrid", "npi", "excellent", "fair"},
    {"hybrid", "npf", "good", "excellent"},
    {"optimize", "ic", "good", "good"},
    {"optimize", "ccp", "good", "good"},
};

JsonValue ratings_json() {
  JsonValue rows = JsonValue::array();
  for (const RatingRow& r : kRatings) {
    JsonValue& row = rows.push(JsonValue::object());
    row.set("family", JsonValue::of(r.family));
    row.set("measure", JsonValue::of(r.measure));
    row.set("ultimate_control", JsonValue::of(r.ultimate_control));
    row.set("intermediary_power", JsonValue::of(r.intermediary_power));
  }
  return rows;
}

/// 1-based positions after sorting by score descending, ids ascending.
std::vector<int> position_ranks(const ScoreVector& sv) {
  const size_t n = sv.ids.size();
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t lhs, size_t rhs) {
    const double a = sv.scores(static_cast<Index>(lhs));
    const double b = sv.scores(static_cast<Index>(rhs));
    if (a != b) return a > b;
    return sv.ids[lhs] < sv.ids[rhs];
  });
  std::vector<int> ranks(n, 0);
  for (size_t i = 0; i < n; ++i) ranks[order[i]] = static_cast<int>(i) + 1;
  return ranks;
}

ScoreVector profile_as_scores(const Network& net, const std::string& name,
                              const PowerProfile& profile) {
  ScoreVector sv = make_score_vector(net, name, profile.values, false);
  return sv;
}

}  // namespace

JsonValue taxonomy_report(const Network& net, const ReportOptions& opts) {
  if (!net.ownership()) {
    fail(ErrorCode::BadParameter, "the taxonomy report needs an ownership network");
  }

  std::vector<std::pair<std::string, ScoreVector>> profiles;
  JsonValue notes = JsonValue::array();
  JsonValue families = JsonValue::object();

  families.set("centrality", JsonValue::of("betweenness"));
  profiles.emplace_back("betweenness", betweenness_centrality(net));

  families.set("voting", JsonValue::of("phi"));
  if (net.size() <= 16) {
    ControlRule rule;
    rule.fraction = opts.quota;
    profiles.emplace_back(
        "phi", profile_as_scores(net, "phi", karos_peters_phi(ControlStructure::build(net, rule))));
  } else {
    notes.push(JsonValue::of("phi skipped: more than 16 nodes"));
  }

  families.set("flow", JsonValue::of("ncv"));
  try {
    profiles.emplace_back("ncv", ncv(net));
  } catch (const Error& e) {
    notes.push(JsonValue::of(std::string("ncv skipped: ") + e.what()));
  }

  families.set("hybrid", JsonValue::of("npi"));
  profiles.emplace_back("npi", npi(net, opts.simulation));

  families.set("concentration", JsonValue::of("hhi"));

  JsonValue doc = JsonValue::object();
  doc.set("families", std::move(families));

  JsonValue profile_section = JsonValue::object();
  for (const auto& [name, sv] : profiles) profile_section.set(name, score_rows(sv));
  doc.set("profiles", std::move(profile_section));

  JsonValue rankings = JsonValue::array();
  std::vector<std::vector<int>> ranks;
  ranks.reserve(profiles.size());
  for (const auto& [name, sv] : profiles) ranks.push_back(position_ranks(sv));
  for (Index i = 0; i < net.size(); ++i) {
    JsonValue& row = rankings.push(JsonValue::object());
    row.set("id", JsonValue::of(net.id_of(i)));
    for (size_t m = 0; m < profiles.size(); ++m) {
      row.set(profiles[m].first, JsonValue::of(ranks[m][static_cast<size_t>(i)]));
    }
  }
  doc.set("rankings", std::move(rankings));

  JsonValue correlations = JsonValue::object();
  JsonValue measure_names = JsonValue::array();
  for (const auto& [name, sv] : profiles) measure_names.push(JsonValue::of(name));
  correlations.set("measures", std::move(measure_names));
  JsonValue spearman = JsonValue::array();
  for (size_t a = 0; a < profiles.size(); ++a) {
    JsonValue& row = spearman.push(JsonValue::array());
    for (size_t b = 0; b < profiles.size(); ++b) {
      row.push(JsonValue::of(
          compare_profiles(profiles[a].second, profiles[b].second, opts.top).spearman));
    }
  }
  correlations.set("spearman", std::move(spearman));
  doc.set("correlations", std::move(correlations));

  // Concentration of direct control: value-weighted mean holder HHI across
  // held firms, plus where ultimate-control walks terminate.
  JsonValue concentration = JsonValue::object();
  double weighted_hhi = 0.0;
  double weight_total = 0.0;
  double plain_hhi = 0.0;
  int held = 0;
  for (Index j = 0; j < net.size(); ++j) {
    const std::vector<Shareholding>& holders = net.in_edges(j);
    if (holders.empty()) continue;
    std::vector<std::string> ids;
    Vector amounts(static_cast<Index>(holders.size()));
    for (size_t k = 0; k < holders.size(); ++k) {
      ids.push_back(net.id_of(holders[k].owner));
      amounts(static_cast<Index>(k)) = holders[k].weight;
    }
    const double h = hhi(ShareDistribution::from_amounts(std::move(ids), std::move(amounts)));
    const double value = net.node(j).value;
    weighted_hhi += value * h;
    weight_total += value;
    plain_hhi += h;
    ++held;
  }
  if (held == 0) {
    concentration.set("holder_hhi", JsonValue::null());
  } else if (weight_total > 0.0) {
    concentration.set("holder_hhi", JsonValue::of(weighted_hhi / weight_total));
  } else {
    concentration.set("holder_hhi", JsonValue::of(plain_hhi / held));
  }
  try {
    const std::map<std::string, UltimateOwner> owners = ultimate_control(net, opts.uc_threshold);
    std::map<std::string, std::pair<int, double>> tally;  // owner -> (count, value)
    for (const auto& [id, uo] : owners) {
      auto& entry = tally[uo.owner];
      entry.first += 1;
      entry.second += net.node(net.index_of(id)).value;
    }
    JsonValue rows = JsonValue::array();
    for (const auto& [owner, entry] : tally) {
      JsonValue& row = rows.push(JsonValue::object());
      row.set("owner", JsonValue::of(owner));
      row.set("controls", JsonValue::of(entry.first));
      row.set("value", JsonValue::of(entry.second));
    }
    concentration.set("ultimate_owners", std::move(rows));
  } catch (const Error& e) {
    concentration.set("ultimate_owners", JsonValue::null());
    notes.push(JsonValue::of(std::string("ultimate control skipped: ") + e.what()));
  }
  doc.set("concentration", std::move(concentration));

  doc.set("ratings", ratings_json());
  doc.set("notes", std::move(notes));
  return doc;
}

// ---------------------------------------------------------------------------
// Command dispatch

namespace {

struct CliFlags {
  std::string measure;
  std::string graph;
  std::string nodes;
  std::string shares;
  std::string out;
  std::string firm;
  std::string targets;
  std::string rule = "weakest-link";
  std::string pivot = "shapley";
  std::string variant = "ic";
  std::string direction = "total";
  bool ownership = false;
  bool undirected = false;
  bool weighted = false;
  bool normalized = false;
  bool per_component = false;
  bool exclude_own = false;
  bool non_strict = false;
  double quota = 0.5;
  double threshold = 0.0;  // default depends on the measure
  double damping = 0.85;
  double attenuation = 0.0;
  double d = 0.5;
  double H = 0.8;
  double price = 1.0;
  int top_k = 3;
  int iterations = 1000;
  std::uint64_t seed = 0;
};

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  for (const std::string& field : split_fields(csv)) {
    if (!field.empty()) out.push_back(field);
  }
  return out;
}

[[noreturn]] void usage_fail(const std::string& what) { fail(ErrorCode::ParseError, what); }

void require_path(const std::string& value, const char* flag) {
  if (value.empty()) usage_fail(std::string("missing required flag ") + flag);
}

/// The result of one family handler: what to call the run and what it scored.
struct Dispatch {
  std::string measure;
  std::map<std::string, std::string> parameters;
  JsonValue scores;
};

Dispatch from_score_vector(const ScoreVector& sv) {
  Dispatch d;
  d.measure = sv.measure;
  d.parameters = sv.params;
  d.parameters["normalized"] = sv.normalized ? "true" : "false";
  d.scores = score_rows(sv);
  return d;
}

Network load_for(const CliFlags& f, bool force_ownership) {
  require_path(f.nodes, "--nodes");
  require_path(f.graph, "--graph");
  NetworkOptions options;
  options.directed = !f.undirected;
  options.ownership = force_ownership || f.ownership;
  if (options.ownership) options.directed = true;
  return load_network(f.nodes, f.graph, options);
}

Dispatch run_centrality(const CliFlags& f) {
  Network net = load_for(f, false);
  CentralityOptions opts;
  opts.normalized = f.normalized;
  opts.weighted = f.weighted;
  opts.per_component = f.per_component;
  if (f.direction == "in") {
    opts.direction = DegreeDirection::In;
  } else if (f.direction == "out") {
    opts.direction = DegreeDirection::Out;
  } else if (f.direction == "total") {
    opts.direction = DegreeDirection::Total;
  } else {
    usage_fail("unknown --direction '" + f.direction + "'");
  }

  if (f.measure == "degree") return from_score_vector(degree_centrality(net, opts));
  if (f.measure == "eigenvector") return from_score_vector(eigenvector_centrality(net, opts));
  if (f.measure == "closeness") return from_score_vector(closeness_centrality(net, opts));
  if (f.measure == "betweenness") return from_score_vector(betweenness_centrality(net, opts));
  if (f.measure == "flow-betweenness") return from_score_vector(flow_betweenness(net, opts));
  if (f.measure == "walk-betweenness") return from_score_vector(walk_betweenness(net, opts));
  if (f.measure == "information") return from_score_vector(information_centrality(net, opts));
  if (f.measure == "eccentricity") return from_score_vector(eccentricity_centrality(net, opts));
  usage_fail("unknown centrality measure '" + f.measure + "'");
}

Dispatch run_voting(const CliFlags& f) {
  Network net = load_for(f, true);
  Dispatch out;
  out.measure = f.measure;
  out.parameters["quota"] = format_real(f.quota);

  if (f.measure == "shapley-shubik" || f.measure == "banzhaf" || f.measure == "johnston") {
    if (f.firm.empty()) usage_fail("missing required flag --firm");
    const Index firm = net.index_of(f.firm);
    const std::vector<Shareholding>& holders = net.in_edges(firm);
    if (holders.empty()) {
      fail(ErrorCode::BadParameter, "firm '" + f.firm + "' has no shareholders");
    }
    std::vector<std::string> players;
    std::vector<double> weights;
    for (const Shareholding& h : holders) {
      players.push_back(net.id_of(h.owner));
      weights.push_back(h.weight);
    }
    WeightedVotingGame game = WeightedVotingGame::from_weights(players, weights, f.quota);
    PowerProfile profile;
    if (f.measure == "shapley-shubik") {
      profile = shapley_shubik(game);
    } else if (f.measure == "banzhaf") {
      profile = banzhaf(game, f.normalized);
    } else {
      profile = johnston(game);
    }
    out.parameters["firm"] = f.firm;
    out.scores = profile_rows(profile);
    return out;
  }

  ControlRule rule;
  rule.fraction = f.quota;
  rule.strict = !f.non_strict;
  out.parameters["strict"] = rule.strict ? "true" : "false";
  const ControlStructure structure = ControlStructure::build(net, rule);
  PowerProfile profile;
  if (f.measure == "phi") {
    profile = karos_peters_phi(structure);
  } else if (f.measure == "pi") {
    profile = mercik_lobos_pi(structure, PiVariant::Pi);
  } else if (f.measure == "pi-prime") {
    profile = mercik_lobos_pi(structure, PiVariant::PiPrime);
  } else {
    usage_fail("unknown voting measure '" + f.measure + "'");
  }
  out.scores = profile_rows(profile);
  return out;
}

Dispatch run_concentration(const CliFlags& f, bool threshold_given) {
  Dispatch out;
  out.measure = f.measure;

  if (f.measure == "hhi" || f.measure == "top-k" || f.measure == "nci") {
    require_path(f.shares, "--shares");
    const ShareDistribution dist = load_distribution(f.shares);
    if (f.measure == "hhi") {
      out.scores = JsonValue::object();
      out.scores.set("value", JsonValue::of(hhi(dist)));
    } else if (f.measure == "top-k") {
      out.parameters["k"] = std::to_string(f.top_k);
      out.scores = JsonValue::object();
      out.scores.set("value", JsonValue::of(top_k(dist, f.top_k)));
    } else {
      out.parameters["H"] = format_real(f.H);
      const ConcentrationGroup group = nci(dist, f.H);
      out.scores = JsonValue::object();
      out.scores.set("g", JsonValue::of(group.g));
      JsonValue members = JsonValue::array();
      for (const std::string& id : group.members) members.push(JsonValue::of(id));
      out.scores.set("members", std::move(members));
    }
    return out;
  }

  if (f.measure == "ultimate-control") {
    Network net = load_for(f, true);
    const double threshold = threshold_given ? f.threshold : 0.2;
    ControlChainRule rule;
    if (f.rule == "weakest-link") {
      rule = ControlChainRule::WeakestLink;
    } else if (f.rule == "product") {
      rule = ControlChainRule::Product;
    } else {
      usage_fail("unknown --rule '" + f.rule + "'");
    }
    out.parameters["threshold"] = format_real(threshold);
    out.parameters["rule"] = f.rule;
    const std::map<std::string, UltimateOwner> owners = ultimate_control(net, threshold, rule);
    out.scores = JsonValue::array();
    for (const auto& [id, uo] : owners) {
      JsonValue& row = out.scores.push(JsonValue::object());
      row.set("id", JsonValue::of(id));
      row.set("owner", JsonValue::of(uo.owner));
      JsonValue chain = JsonValue::array();
      for (const std::string& step : uo.chain) chain.push(JsonValue::of(step));
      row.set("chain", std::move(chain));
      row.set("tie_break", JsonValue::of(uo.tie_break));
    }
    return out;
  }

  usage_fail("unknown concentration measure '" + f.measure + "'");
}

Dispatch run_flow(const CliFlags& f, bool attenuation_given, bool threshold_given) {
  PropagationOptions opts;
  opts.damping = f.damping;
  if (attenuation_given) opts.attenuation = f.attenuation;

  if (f.measure == "ncv" || f.measure == "nncv") {
    Network net = load_for(f, true);
    return from_score_vector(f.measure == "ncv" ? ncv(net, opts) : nncv(net, opts));
  }
  if (f.measure == "pagerank") {
    Network net = load_for(f, false);
    return from_score_vector(pagerank(net, opts));
  }
  if (f.measure == "katz") {
    Network net = load_for(f, false);
    return from_score_vector(katz_influence(net, opts).scores);
  }
  if (f.measure == "alpha-icon") {
    Network net = load_for(f, true);
    const double threshold = threshold_given ? f.threshold : 0.5;
    Dispatch out;
    out.measure = f.measure;
    out.parameters["threshold"] = format_real(threshold);
    if (attenuation_given) out.parameters["attenuation"] = format_real(f.attenuation);
    const std::map<std::string, FirmController> controllers =
        alpha_icon_controllers(net, opts, threshold);
    out.scores = JsonValue::array();
    for (const auto& [firm, fc] : controllers) {
      JsonValue& row = out.scores.push(JsonValue::object());
      row.set("firm", JsonValue::of(firm));
      row.set("controller", JsonValue::of(fc.controller));
      row.set("stake", JsonValue::of(fc.stake));
    }
    return out;
  }
  usage_fail("unknown flow measure '" + f.measure + "'");
}

Dispatch run_optimize(const CliFlags& f, bool threshold_given) {
  if (f.measure != "min-cost") usage_fail("unknown optimize measure '" + f.measure + "'");
  Network net = load_for(f, true);
  const std::vector<std::string> targets = split_list(f.targets);
  if (targets.empty()) usage_fail("missing required flag --targets");

  AcquisitionVariant variant = AcquisitionVariant::IC;
  if (f.variant == "ic") {
    variant = AcquisitionVariant::IC;
  } else if (f.variant == "ic2") {
    variant = AcquisitionVariant::IC2;
  } else if (f.variant == "ic3") {
    variant = AcquisitionVariant::IC3;
  } else if (f.variant == "ccp") {
    variant = AcquisitionVariant::CCP;
  } else {
    usage_fail("unknown --variant '" + f.variant + "'");
  }

  const double threshold = threshold_given ? f.threshold : 0.5;
  Dispatch out;
  out.measure = "min-cost";
  out.parameters["variant"] = f.variant;
  out.parameters["threshold"] = format_real(threshold);
  out.parameters["price"] = format_real(f.price);
  out.parameters["targets"] = f.targets;

  const AcquisitionProblem problem =
      AcquisitionProblem::uniform(std::move(net), targets, threshold, f.price, variant);
  const AcquisitionPlan plan = solve_min_cost_control(problem);

  out.scores = JsonValue::object();
  out.scores.set("total_cost", JsonValue::of(plan.total_cost));
  JsonValue purchases = JsonValue::array();
  for (size_t i = 0; i < plan.ids.size(); ++i) {
    if (plan.purchases(static_cast<Index>(i)) == 0.0) continue;
    JsonValue& row = purchases.push(JsonValue::object());
    row.set("id", JsonValue::of(plan.ids[i]));
    row.set("amount", JsonValue::of(plan.purchases(static_cast<Index>(i))));
  }
  out.scores.set("purchases", std::move(purchases));
  JsonValue controlled = JsonValue::array();
  for (size_t i = 0; i < plan.ids.size(); ++i) {
    if (plan.controlled[i]) controlled.push(JsonValue::of(plan.ids[i]));
  }
  out.scores.set("controlled", std::move(controlled));
  return out;
}

SimulationConfig simulation_from(const CliFlags& f) {
  SimulationConfig cfg;
  cfg.iterations = f.iterations;
  cfg.damping = f.d;
  cfg.quota = f.quota;
  cfg.seed = f.seed;
  if (f.pivot == "shapley") {
    cfg.pivot_rule = PivotRule::ShapleyOrder;
  } else if (f.pivot == "johnston") {
    cfg.pivot_rule = PivotRule::JohnstonSplit;
  } else {
    usage_fail("unknown --pivot-rule '" + f.pivot + "'");
  }
  cfg.include_own_endowments = !f.exclude_own;
  return cfg;
}

Dispatch run_hybrid(const CliFlags& f) {
  Network net = load_for(f, true);
  const SimulationConfig cfg = simulation_from(f);
  if (f.measure == "npi") return from_score_vector(npi(net, cfg));
  if (f.measure == "npf") {
    const FlowEstimate estimate = npf(net, cfg);
    Dispatch out;
    out.measure = "npf";
    out.parameters = estimate.aggregate.params;
    out.scores = JsonValue::object();
    JsonValue ids = JsonValue::array();
    for (const std::string& id : estimate.ids) ids.push(JsonValue::of(id));
    out.scores.set("ids", std::move(ids));
    out.scores.set("aggregate", score_rows(estimate.aggregate));
    out.scores.set("transmitted", matrix_rows(estimate.transmitted));
    return out;
  }
  usage_fail("unknown hybrid measure '" + f.measure + "'");
}

JsonValue empty_report() {
  JsonValue doc = JsonValue::object();
  doc.set("families", JsonValue::object());
  doc.set("profiles", JsonValue::object());
  doc.set("rankings", JsonValue::array());
  JsonValue correlations = JsonValue::object();
  correlations.set("measures", JsonValue::array());
  correlations.set("spearman", JsonValue::array());
  doc.set("correlations", std::move(correlations));
  JsonValue concentration = JsonValue::object();
  concentration.set("holder_hhi", JsonValue::null());
  concentration.set("ultimate_owners", JsonValue::array());
  doc.set("concentration", std::move(concentration));
  doc.set("ratings", ratings_json());
  doc.set("notes", JsonValue::array());
  doc.set("warning", JsonValue::of("the network is empty; nothing to compare"));
  return doc;
}

Dispatch run_report(const CliFlags& f, bool threshold_given) {
  if (f.measure != "taxonomy") usage_fail("unknown report measure '" + f.measure + "'");
  Dispatch out;
  out.measure = "taxonomy";
  out.parameters["quota"] = format_real(f.quota);
  out.parameters["top"] = std::to_string(f.top_k);
  try {
    Network net = load_for(f, true);
    ReportOptions opts;
    opts.top = f.top_k;
    opts.quota = f.quota;
    opts.uc_threshold = threshold_given ? f.threshold : 0.2;
    opts.simulation = simulation_from(f);
    out.parameters["threshold"] = format_real(opts.uc_threshold);
    out.scores = taxonomy_report(net, opts);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::EmptyNetwork) throw;
    out.scores = empty_report();
  }
  return out;
}

}  // namespace

RunOutcome run_cli(const std::vector<std::string>& args) {
  RunOutcome outcome;
  RunManifest manifest;
  manifest.version = kVersion;

  // Everything but the output destination is part of the reproducible
  // command; --out only decides where the identical bytes land.
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out") {
      ++i;
      continue;
    }
    if (args[i].rfind("--out=", 0) == 0) continue;
    manifest.command.push_back(args[i]);
  }

  std::string family;
  std::string measure = "?";
  try {
    CLI::App app{"structural power measures over ownership networks", "netpower"};
    app.require_subcommand(1);
    CliFlags f;
    for (const char* name : {"centrality", "voting", "concentration", "flow", "optimize",
                             "hybrid", "report"}) {
      CLI::App* sub = app.add_subcommand(name);
      sub->add_option("measure", f.measure)->required();
      sub->add_option("--graph", f.graph);
      sub->add_option("--nodes", f.nodes);
      sub->add_option("--shares", f.shares);
      sub->add_option("--out", f.out);
      sub->add_option("--firm", f.firm);
      sub->add_option("--targets", f.targets);
      sub->add_option("--rule", f.rule);
      sub->add_option("--pivot-rule", f.pivot);
      sub->add_option("--variant", f.variant);
      sub->add_option("--direction", f.direction);
      sub->add_flag("--ownership", f.ownership);
      sub->add_flag("--undirected", f.undirected);
      sub->add_flag("--weighted", f.weighted);
      sub->add_flag("--normalized", f.normalized);
      sub->add_flag("--per-component", f.per_component);
      sub->add_flag("--exclude-own", f.exclude_own);
      sub->add_flag("--non-strict", f.non_strict);
      sub->add_option("--quota", f.quota);
      sub->add_option("--threshold", f.threshold);
      sub->add_option("--damping", f.damping);
      sub->add_option("--attenuation", f.attenuation);
      sub->add_option("--d", f.d);
      sub->add_option("--H", f.H);
      sub->add_option("--price", f.price);
      sub->add_option("--top-k", f.top_k);
      sub->add_option("--iterations", f.iterations);
      sub->add_option("--seed", f.seed);
    }

    std::vector<const char*> argv;
    argv.push_back("netpower");
    for (const std::string& arg : args) argv.push_back(arg.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      fail(ErrorCode::ParseError, e.what());
    }

    CLI::App* sub = app.get_subcommands().front();
    family = sub->get_name();
    measure = f.measure;
    outcome.out_path = f.out;
    manifest.seed = f.seed;
    for (const std::string& path : {f.graph, f.nodes, f.shares}) {
      if (!path.empty()) manifest.inputs[path] = file_digest(path);
    }
    manifest.parameters["family"] = family;
    manifest.parameters["measure"] = f.measure;
    const bool threshold_given = sub->count("--threshold") > 0;
    const bool attenuation_given = sub->count("--attenuation") > 0;

    Dispatch result;
    if (family == "centrality") {
      result = run_centrality(f);
    } else if (family == "voting") {
      result = run_voting(f);
    } else if (family == "concentration") {
      result = run_concentration(f, threshold_given);
    } else if (family == "flow") {
      result = run_flow(f, attenuation_given, threshold_given);
    } else if (family == "optimize") {
      result = run_optimize(f, threshold_given);
    } else if (family == "hybrid") {
      result = run_hybrid(f);
    } else {
      result = run_report(f, threshold_given);
    }

    measure = result.measure;
    outcome.exit_code = 0;
    outcome.document = result_document(manifest, result.measure, result.parameters,
                                       std::move(result.scores));
  } catch (const Error& e) {
    outcome.exit_code = e.kind() == ErrorKind::Validation ? 1 : 2;
    outcome.document = error_document(manifest, measure, e);
  }
  return outcome;
}

}  // namespace netpower
