#include "repliscope/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace repliscope {

namespace {

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> splitList(std::string_view s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in{std::string(s)};
  while (std::getline(in, item, ',')) {
    auto t = trim(item);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

double toDouble(const Entry& e, std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    fail("line " + std::to_string(e.line) + ": '" + e.key + "' expects a number, got '" + std::string(text) + "'");
  }
  return v;
}

double toDouble(const Entry& e) { return toDouble(e, e.value); }

template <typename Int>
Int toInt(const Entry& e, std::string_view text) {
  Int v{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    fail("line " + std::to_string(e.line) + ": '" + e.key + "' expects an integer, got '" + std::string(text) + "'");
  }
  return v;
}

bool toBool(const Entry& e) {
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  fail("line " + std::to_string(e.line) + ": '" + e.key + "' expects true/false");
}

const std::set<std::string, std::less<>> kModelKeys = {
    "baseRate",     "power",        "falsePositiveRate", "replicationPower", "replicationFalsePositiveRate",
    "correctKinds", "replicationRate", "activityRate",   "cNewNegative",     "cRepNegative",
    "cRepPositive", "targetFraction",  "targetTallies",  "tallyBound",       "boundaryMode",
};
const std::set<std::string, std::less<>> kOtherKeys = {
    "seed",       "events",      "tol",        "maxIter",         "window",       "figure",     "dataset",
    "description", "unverified-parameter", "sweep.axis", "sweep.from", "sweep.to", "sweep.points", "sweep.log",
};

bool isModelKey(std::string_view key) {
  return kModelKeys.count(key) > 0 || key.rfind("kind.", 0) == 0;
}

struct BuiltModel {
  ModelParams params;
  KindSelection correct;
};

BuiltModel buildModel(const std::vector<Entry>& entries) {
  std::map<std::string, const Entry*, std::less<>> byKey;
  std::vector<const Entry*> kindEntries;
  for (const auto& e : entries) {
    byKey[e.key] = &e;
    if (e.key.rfind("kind.", 0) == 0) kindEntries.push_back(&e);
  }
  auto get = [&](std::string_view key) -> const Entry* {
    auto it = byKey.find(key);
    return it == byKey.end() ? nullptr : it->second;
  };
  auto number = [&](std::string_view key, double fallback) {
    const Entry* e = get(key);
    return e ? toDouble(*e) : fallback;
  };

  BuiltModel out;
  ModelParams& p = out.params;
  const bool twoKind = get("baseRate") != nullptr;
  if (twoKind && !kindEntries.empty()) fail("use either baseRate/power keys or kind.<label> keys, not both");

  const double replicationRate = number("replicationRate", 0.2);
  if (twoKind) {
    if (get("correctKinds")) fail("'correctKinds' only applies to kind.<label> configurations");
    StudyProfile initial{number("power", StudyProfile{}.power), number("falsePositiveRate", StudyProfile{}.falsePositiveRate)};
    StudyProfile replication{number("replicationPower", initial.power),
                             number("replicationFalsePositiveRate", initial.falsePositiveRate)};
    try {
      p = ModelParams::twoKind(number("baseRate", 0.0), initial, replication, replicationRate);
    } catch (const Error& e) {
      fail(e.what());
    }
  } else {
    for (const char* k : {"power", "falsePositiveRate", "replicationPower", "replicationFalsePositiveRate"}) {
      if (get(k)) fail(std::string("'") + k + "' needs baseRate (two-kind configuration)");
    }
    if (kindEntries.empty()) fail("config defines no hypothesis kinds (set baseRate or kind.<label>)");
    for (const Entry* e : kindEntries) {
      const auto fields = splitList(e->value);
      if (fields.size() != 3) {
        fail("line " + std::to_string(e->line) + ": kind.<label> = share, initialPositiveRate, replicationPositiveRate");
      }
      p.kinds.push_back(HypothesisKind{e->key.substr(5), toDouble(*e, fields[0]), toDouble(*e, fields[1]),
                                       toDouble(*e, fields[2])});
    }
    p.replicationRate = replicationRate;
    if (const Entry* e = get("correctKinds")) {
      out.correct.correct.clear();
      for (const auto& label : splitList(e->value)) {
        auto it = std::find_if(p.kinds.begin(), p.kinds.end(), [&](const auto& k) { return k.label == label; });
        if (it == p.kinds.end()) fail("correctKinds names unknown kind '" + label + "'");
        out.correct.correct.push_back(static_cast<std::size_t>(it - p.kinds.begin()));
      }
    }
  }

  p.activityRate = number("activityRate", 1.0);
  p.comm.cNewNegative = number("cNewNegative", 1.0);
  p.comm.cRepNegative = number("cRepNegative", 1.0);
  p.comm.cRepPositive = number("cRepPositive", 1.0);
  p.targeting.targetFraction = number("targetFraction", 0.0);
  if (const Entry* e = get("targetTallies")) {
    for (const auto& t : splitList(e->value)) p.targeting.targetTallies.push_back(toInt<int>(*e, t));
  }
  if (const Entry* e = get("tallyBound")) p.tallyBound = toInt<int>(*e, e->value);
  if (const Entry* e = get("boundaryMode")) {
    if (e->value == "reflecting") {
      p.boundaryMode = BoundaryMode::reflecting;
    } else if (e->value == "absorbing") {
      p.boundaryMode = BoundaryMode::absorbing;
    } else {
      fail("boundaryMode must be 'reflecting' or 'absorbing'");
    }
  }
  try {
    p = validate_params(p);
  } catch (const Error& e) {
    fail(e.what());
  }
  return out;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  std::vector<Entry> base;
  std::map<std::string, std::vector<Entry>> compares;
  std::set<std::string> seen;

  std::istringstream in{std::string(text)};
  std::string raw;
  int lineNo = 0;
  while (std::getline(in, raw)) {
    ++lineNo;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("line " + std::to_string(lineNo) + ": expected 'key = value'");
    Entry e{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineNo};
    if (e.key.empty()) fail("line " + std::to_string(lineNo) + ": empty key");
    if (!seen.insert(e.key).second) fail("line " + std::to_string(lineNo) + ": duplicate key '" + e.key + "'");

    if (e.key.rfind("compare.", 0) == 0) {
      const auto dot = e.key.find('.', 8);
      if (dot == std::string::npos) fail("line " + std::to_string(lineNo) + ": expected compare.<name>.<key>");
      const std::string name = e.key.substr(8, dot - 8);
      Entry inner{e.key.substr(dot + 1), e.value, lineNo};
      if (!isModelKey(inner.key)) fail("line " + std::to_string(lineNo) + ": unknown model key '" + inner.key + "'");
      compares[name].push_back(std::move(inner));
      continue;
    }
    if (!isModelKey(e.key) && kOtherKeys.count(e.key) == 0) {
      fail("line " + std::to_string(lineNo) + ": unknown key '" + e.key + "'");
    }
    base.push_back(std::move(e));
  }

  RunConfig cfg;
  std::vector<Entry> modelEntries;
  for (const auto& e : base) {
    if (isModelKey(e.key)) {
      modelEntries.push_back(e);
    } else if (e.key == "seed") {
      cfg.seed = toInt<std::uint64_t>(e, e.value);
    } else if (e.key == "events") {
      cfg.events = toInt<std::uint64_t>(e, e.value);
    } else if (e.key == "tol") {
      cfg.tol = toDouble(e);
    } else if (e.key == "maxIter") {
      cfg.maxIter = toInt<std::uint64_t>(e, e.value);
    } else if (e.key == "window") {
      const auto parts = splitList(e.value);
      if (parts.size() != 2) fail("line " + std::to_string(e.line) + ": window = low, high");
      cfg.window = std::make_pair(toInt<int>(e, parts[0]), toInt<int>(e, parts[1]));
    } else if (e.key == "figure") {
      cfg.figure = e.value;
    } else if (e.key == "dataset") {
      cfg.dataset = e.value;
    } else if (e.key == "description") {
      cfg.description = e.value;
    } else if (e.key == "unverified-parameter") {
      cfg.unverified = splitList(e.value);
    } else {
      if (!cfg.sweep) cfg.sweep = SweepSpec{};
      if (e.key == "sweep.axis") cfg.sweep->axis = e.value;
      if (e.key == "sweep.from") cfg.sweep->from = toDouble(e);
      if (e.key == "sweep.to") cfg.sweep->to = toDouble(e);
      if (e.key == "sweep.points") cfg.sweep->points = toInt<int>(e, e.value);
      if (e.key == "sweep.log") cfg.sweep->logSpaced = toBool(e);
    }
  }
  if (cfg.sweep && cfg.sweep->axis.empty()) fail("sweep.* keys need sweep.axis");

  auto built = buildModel(modelEntries);
  cfg.params = std::move(built.params);
  cfg.correct = std::move(built.correct);

  for (const auto& [name, overrides] : compares) {
    std::vector<Entry> merged;
    for (const auto& e : modelEntries) {
      const bool replaced = std::any_of(overrides.begin(), overrides.end(), [&](const Entry& o) { return o.key == e.key; });
      if (!replaced) merged.push_back(e);
    }
    merged.insert(merged.end(), overrides.begin(), overrides.end());
    cfg.comparisons.push_back(Comparison{name, buildModel(merged).params});
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace repliscope
