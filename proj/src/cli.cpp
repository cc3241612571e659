#include "repliscope/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <locale>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "repliscope/comms.hpp"
#include "repliscope/config.hpp"
#include "repliscope/recursion.hpp"
#include "repliscope/series.hpp"
#include "repliscope/simulation.hpp"
#include "repliscope/table_io.hpp"

namespace repliscope {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config;
  std::string out = "-";
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> events;
  std::optional<double> tol;
  std::string vary;
  std::optional<double> from;
  std::optional<double> to;
  std::optional<int> points;
  bool logSpaced = false;
  std::string id;
};

std::ostringstream classicStream() {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  return s;
}

void writeOutput(const std::string& path, const std::string& content, std::ostream& out) {
  if (path == "-") {
    out << content;
    return;
  }
  write_text_file(path, content);
}

RunConfig requireConfig(const Options& opt, std::ostream& err) {
  if (opt.config.empty()) throw Error(ErrorCode::ConfigError, "--config is required");
  RunConfig cfg = load_config(opt.config);
  for (const auto& w : params_warnings(cfg.params)) err << "warning: " << w << '\n';
  if (!cfg.unverified.empty()) {
    err << "warning: unverified-parameter values in use:";
    for (const auto& k : cfg.unverified) err << ' ' << k;
    err << '\n';
  }
  return cfg;
}

MetricsTable windowed(const MetricsTable& table, const RunConfig& cfg) {
  if (!cfg.window) return table;
  return tail_aggregate(table, cfg.window->first, cfg.window->second);
}

std::string renderTable(const MetricsTable& table, TableFormat format, const std::vector<std::string>& comments = {}) {
  auto s = classicStream();
  if (format == TableFormat::csv) {
    for (const auto& c : comments) s << "# " << c << '\n';
    write_metrics_csv(s, table);
  } else {
    write_metrics_json(s, table);
  }
  return s.str();
}

std::string renderSweep(const std::string& axis, const std::vector<SweepPoint>& points, TableFormat format,
                        const std::vector<std::string>& comments = {}) {
  auto s = classicStream();
  if (format == TableFormat::csv) {
    for (const auto& c : comments) s << "# " << c << '\n';
    write_sweep_csv(s, axis, points);
    return s.str();
  }
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& pt : points) {
    auto t = classicStream();
    write_metrics_json(t, pt.table);
    j.push_back({{"axis_name", axis},
                 {"axis_value", pt.axisValue},
                 {"method", to_string(pt.method)},
                 {"table", nlohmann::ordered_json::parse(t.str())}});
  }
  s << j.dump(2) << '\n';
  return s.str();
}

int cmdSolve(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto cfg = requireConfig(opt, err);
  FixedPointOptions fpo;
  fpo.tol = opt.tol.value_or(cfg.tol.value_or(fpo.tol));
  if (cfg.maxIter) fpo.maxIter = static_cast<std::size_t>(*cfg.maxIter);
  const auto result = fixed_point(cfg.params, fpo);
  if (result.emptyTargetMass) err << "diagnostic: target tallies were empty during iteration\n";
  if (result.targetSaturated) err << "diagnostic: targeted effort exceeded the target tallies' capacity\n";
  const auto table = windowed(metrics_table(result.distribution, cfg.correct), cfg);
  writeOutput(opt.out, renderTable(table, table_format_from_string(opt.format)), out);
  return kExitOk;
}

int cmdSeries(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto cfg = requireConfig(opt, err);
  auto dist = series_distribution(cfg.params);
  dist.normalize();
  const auto table = windowed(metrics_table(dist, cfg.correct), cfg);
  writeOutput(opt.out, renderTable(table, table_format_from_string(opt.format)), out);
  return kExitOk;
}

int cmdSimulate(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto cfg = requireConfig(opt, err);
  const std::uint64_t seed = opt.seed.value_or(cfg.seed.value_or(1));
  const std::uint64_t events = opt.events.value_or(cfg.events.value_or(1'000'000));
  const auto outcome = run(cfg.params, seed, events);
  if (outcome.liveRecords == 0) throw Error(ErrorCode::MassBlowup, "no hypothesis was published");
  const auto table = windowed(metrics_table(outcome.histogram, cfg.correct), cfg);
  auto s = classicStream();
  if (table_format_from_string(opt.format) == TableFormat::csv) {
    write_metrics_csv(s, table);
    write_sim_diagnostics_csv(s, outcome);
  } else {
    write_sim_json(s, table, outcome);
  }
  writeOutput(opt.out, s.str(), out);
  return kExitOk;
}

int cmdSweep(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto cfg = requireConfig(opt, err);
  SweepSpec spec = cfg.sweep.value_or(SweepSpec{});
  if (!opt.vary.empty()) spec.axis = opt.vary;
  if (opt.from) spec.from = *opt.from;
  if (opt.to) spec.to = *opt.to;
  if (opt.points) spec.points = *opt.points;
  if (opt.logSpaced) spec.logSpaced = true;
  if (spec.axis.empty()) throw Error(ErrorCode::ConfigError, "sweep needs --vary KEY (or sweep.axis in the config)");

  const std::string axis = canonical_axis(spec.axis);
  auto points = sweep(cfg.params, SweepAxis{axis, axis_values(spec.from, spec.to, spec.points, spec.logSpaced)},
                      {}, cfg.correct);
  for (auto& pt : points) pt.table = windowed(pt.table, cfg);
  writeOutput(opt.out, renderSweep(axis, points, table_format_from_string(opt.format)), out);
  return kExitOk;
}

int cmdCheckComms(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto cfg = requireConfig(opt, err);
  const auto report = approx_conditions(cfg.params);
  if (!report.regimeValid) err << "warning: b or r outside the small-b, small-r regime of the approximations\n";
  auto s = classicStream();
  if (table_format_from_string(opt.format) == TableFormat::csv) {
    write_suppression_csv(s, report);
  } else {
    write_suppression_json(s, report);
  }
  writeOutput(opt.out, s.str(), out);
  return kExitOk;
}

std::vector<std::string> figureComments(const RunConfig& cfg, const std::string& variant, SolveMethod method) {
  std::vector<std::string> c;
  c.push_back("figure " + cfg.figure);
  c.push_back("dataset " + (cfg.dataset.empty() ? std::string("main") : cfg.dataset) +
              (variant.empty() ? "" : " / " + variant));
  if (!cfg.description.empty()) c.push_back("description " + cfg.description);
  if (!cfg.unverified.empty()) {
    std::string keys;
    for (const auto& k : cfg.unverified) keys += (keys.empty() ? "" : " ") + k;
    c.push_back("unverified-parameter " + keys);
  }
  c.push_back("method " + std::string(to_string(method)));
  return c;
}

int cmdFigure(const Options& opt, std::ostream& out, std::ostream& err) {
  if (opt.id.empty()) throw Error(ErrorCode::ConfigError, "figure needs --id");
  const TableFormat format = table_format_from_string(opt.format);
  const std::string ext = format == TableFormat::csv ? ".csv" : ".json";
  const fs::path dir = opt.out == "-" ? fs::path(".") : fs::path(opt.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create output directory " + dir.string());

  std::string wanted = opt.id;
  if (wanted.rfind("fig", 0) == 0) wanted = wanted.substr(3);
  bool any = false;
  for (const auto& [stem, text] : bundled_configs()) {
    const RunConfig cfg = parse_config(text);
    if (cfg.figure != wanted) continue;
    any = true;
    if (!cfg.unverified.empty()) err << "warning: " << stem << " uses unverified-parameter values\n";

    std::vector<std::pair<std::string, ModelParams>> variants{{"", cfg.params}};
    for (const auto& c : cfg.comparisons) variants.emplace_back(c.name, c.params);
    for (const auto& [variant, params] : variants) {
      const fs::path file = dir / (stem + (variant.empty() ? "" : "_" + variant) + ext);
      std::string content;
      if (cfg.sweep) {
        const std::string axis = canonical_axis(cfg.sweep->axis);
        auto points = sweep(params, SweepAxis{axis, axis_values(cfg.sweep->from, cfg.sweep->to, cfg.sweep->points,
                                                                 cfg.sweep->logSpaced)},
                            {}, cfg.correct);
        for (auto& pt : points) pt.table = windowed(pt.table, cfg);
        const SolveMethod method = points.empty() ? SolveMethod::analytic : points.front().method;
        content = renderSweep(axis, points, format, figureComments(cfg, variant, method));
      } else {
        const auto solved = solve_steady_state(params);
        const auto table = windowed(metrics_table(solved.distribution, cfg.correct), cfg);
        content = renderTable(table, format, figureComments(cfg, variant, solved.method));
      }
      write_text_file(file, content);
      out << file.generic_string() << '\n';
    }
  }
  if (!any) throw Error(ErrorCode::ConfigError, "no bundled figure configuration with id '" + opt.id + "'");
  return kExitOk;
}

int exitFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoConvergence: return kExitNoConvergence;
    case ErrorCode::IoFailure: return kExitIo;
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidProbability:
    case ErrorCode::SharesDontSum:
    case ErrorCode::EmptyTarget:
    case ErrorCode::InvalidParameter:
    case ErrorCode::NotFullComm:
    case ErrorCode::DifferentialPower:
    case ErrorCode::AllSuppressed:
    case ErrorCode::WindowEmpty:
    case ErrorCode::BoundsMismatch:
    case ErrorCode::StepTooLarge:
      return kExitConfig;
    default: return kExitFailure;
  }
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Steady-state tallies of replication and publication dynamics", "repliscope"};
  app.require_subcommand(1);
  Options opt;

  auto addConfig = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "key = value parameter file")->required();
  };
  auto addOut = [&](CLI::App* sub, const char* help) {
    sub->add_option("--out", opt.out, help);
    sub->add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* solve = app.add_subcommand("solve", "fixed-point steady state");
  addConfig(solve);
  addOut(solve, "output file (default stdout)");
  solve->add_option("--tol", opt.tol, "L-infinity convergence tolerance");

  auto* series = app.add_subcommand("series", "analytic series steady state");
  addConfig(series);
  addOut(series, "output file (default stdout)");

  auto* simulate = app.add_subcommand("simulate", "seeded Monte-Carlo simulation");
  addConfig(simulate);
  addOut(simulate, "output file (default stdout)");
  simulate->add_option("--seed", opt.seed, "random seed");
  simulate->add_option("--events", opt.events, "number of research events");

  auto* sweepCmd = app.add_subcommand("sweep", "vary one parameter");
  addConfig(sweepCmd);
  addOut(sweepCmd, "output file (default stdout)");
  sweepCmd->add_option("--vary", opt.vary, "parameter to vary");
  sweepCmd->add_option("--from", opt.from, "first value");
  sweepCmd->add_option("--to", opt.to, "last value");
  sweepCmd->add_option("--points", opt.points, "number of values");
  sweepCmd->add_flag("--log", opt.logSpaced, "log-spaced values");

  auto* figure = app.add_subcommand("figure", "emit the datasets of a figure panel");
  figure->add_option("--id", opt.id, "panel id, e.g. 3c")->required();
  addOut(figure, "output directory (default .)");

  auto* check = app.add_subcommand("check-comms", "communication-suppression derivatives at full communication");
  addConfig(check);
  addOut(check, "output file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (solve->parsed()) return cmdSolve(opt, out, err);
    if (series->parsed()) return cmdSeries(opt, out, err);
    if (simulate->parsed()) return cmdSimulate(opt, out, err);
    if (sweepCmd->parsed()) return cmdSweep(opt, out, err);
    if (figure->parsed()) return cmdFigure(opt, out, err);
    if (check->parsed()) return cmdCheckComms(opt, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exitFor(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitConfig;
}

}  // namespace repliscope
