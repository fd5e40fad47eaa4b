#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "netpower/concentration.hpp"
#include "netpower/graph.hpp"
#include "netpower/hybrid.hpp"

namespace netpower {

/// Ordered JSON tree used for all result documents. Keys keep insertion
/// order and reals are written with 17 significant digits, so equal inputs
/// always dump to equal bytes.
struct JsonValue {
  enum class Kind { Null, Bool, Int, Real, Str, Arr, Obj };

  Kind kind = Kind::Null;
  bool boolean = false;
  long long integer = 0;
  double real = 0.0;
  std::string text;
  std::vector<JsonValue> items;
  std::vector<std::pair<std::string, JsonValue>> fields;

  static JsonValue null();
  static JsonValue of(bool value);
  static JsonValue of(int value);
  static JsonValue of(long long value);
  static JsonValue of(std::uint64_t value);
  static JsonValue of(double value);
  static JsonValue of(const char* value);
  static JsonValue of(std::string value);
  static JsonValue array();
  static JsonValue object();

  JsonValue& push(JsonValue value);                  ///< append to an array, returns the element
  JsonValue& set(std::string key, JsonValue value);  ///< append to an object, returns the value

  std::string dump(int indent = 2) const;
};

/// Loads a network from two CSV files: nodes `id,kind,value` with kind in
/// {firm, person}, edges `source,target,weight`. A leading line matching the
/// canonical header is skipped; anything else is parsed as data, and parse
/// failures report the 1-based line number. A nodes file without data rows
/// raises EmptyNetwork.
Network load_network(const std::string& nodes_path, const std::string& edges_path,
                     NetworkOptions options = {.directed = true, .ownership = false});

/// Loads a share distribution from a CSV file with columns `id,share`;
/// amounts are normalized to fractions.
ShareDistribution load_distribution(const std::string& path);

/// FNV-1a 64-bit digest of the file's bytes as 16 hex characters.
std::string file_digest(const std::string& path);

/// Everything needed to reproduce a run. Serialized inside each document;
/// replaying the command yields byte-identical output.
struct RunManifest {
  std::vector<std::string> command;               ///< argv minus program name and --out
  std::map<std::string, std::string> inputs;      ///< input path -> digest
  std::map<std::string, std::string> parameters;  ///< resolved configuration
  std::uint64_t seed = 0;
  std::string version;
};

/// Assembles the standard document: manifest, measure, parameters, scores.
std::string result_document(const RunManifest& manifest, const std::string& measure,
                            const std::map<std::string, std::string>& parameters,
                            JsonValue scores);

/// Error variant: scores is null and an `error` object carries the stable
/// code name, its kind, and the message.
std::string error_document(const RunManifest& manifest, const std::string& measure,
                           const Error& error);

struct ReportOptions {
  int top = 3;                    ///< leaders listed per measure
  double quota = 0.5;             ///< control fraction for the game-family measure
  double uc_threshold = 0.2;      ///< ultimate-control walk threshold
  SimulationConfig simulation;    ///< settings for the sampled power profile
};

/// Cross-family comparison over one ownership network: a representative
/// per-node measure per family, their rankings side by side, pairwise rank
/// correlations, a control-concentration summary, and the static suitability
/// ratings of every measure for ultimate-control and intermediary-power
/// questions.
JsonValue taxonomy_report(const Network& net, const ReportOptions& opts = {});

/// One CLI invocation, parsed and executed. `document` still has to be
/// written to `out_path` (stdout when empty) by the caller.
struct RunOutcome {
  int exit_code = 0;
  std::string document;
  std::string out_path;
};

/// Full command dispatch: `<family> <measure> [flags]`. Never throws; every
/// failure becomes an error document with exit code 1 (rejected input) or 2
/// (numerical failure).
RunOutcome run_cli(const std::vector<std::string>& args);

}  // namespace netpower
