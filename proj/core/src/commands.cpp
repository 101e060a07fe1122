#include "ttp/commands.hpp"

#include <fstream>

#include "ttp/config.hpp"
#include "ttp/dataset.hpp"
#include "ttp/serialize.hpp"

namespace ttp {

using nlohmann::json;

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ConfigError:
    case ErrorKind::InvalidArgument: return exit_code::kConfig;
    case ErrorKind::ParseError:
    case ErrorKind::DimensionMismatch: return exit_code::kData;
    case ErrorKind::DegenerateSample:
    case ErrorKind::SampleTooSmall:
    case ErrorKind::NonVStatEstimator: return exit_code::kStatistical;
    case ErrorKind::IndexOutOfRange: return exit_code::kInternal;
  }
  return exit_code::kInternal;
}

std::string error_hint(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateSample:
      return "all pooled observations coincide, so the median heuristic has no scale; "
             "set kernel.bandwidth to a positive value or check the data";
    case ErrorKind::SampleTooSmall:
      return "each arm needs at least two observations";
    case ErrorKind::ConfigError:
      return "run `ttp keys` for the list of configuration keys and defaults";
    case ErrorKind::ParseError:
      return "rows must be `arm,v1,...,vd` with arm in {current, historical, treatment}";
    default: return {};
  }
}

namespace {

Config load_config(const RunManifest& mf) {
  Config cfg = mf.config_path.empty() ? Config() : Config::load(mf.config_path);
  for (const std::string& o : mf.overrides) cfg.set(o);
  if (mf.seed) cfg.set("seed", std::to_string(*mf.seed));
  return cfg;
}

void emit(const RunManifest& mf, const json& doc, const std::string& table, std::ostream& out) {
  if (mf.output_path.empty()) {
    out << doc.dump(2) << '\n';
    return;
  }
  std::ofstream f(mf.output_path);
  if (!f) fail(ErrorKind::ConfigError, "cannot write output file " + mf.output_path);
  f << doc.dump(2) << '\n';
  std::ofstream t(mf.output_path + ".tsv");
  if (!t) fail(ErrorKind::ConfigError, "cannot write table file " + mf.output_path + ".tsv");
  t << table;
}

}  // namespace

json cmd_test(const RunManifest& mf, std::ostream& out) {
  const Config cfg = load_config(mf);
  if (cfg.is_grid()) fail(ErrorKind::ConfigError, "`test` does not accept sweep lists");
  const std::string path = cfg.get_string("data.path");
  if (path.empty()) fail(ErrorKind::ConfigError, "`test` needs data.path");
  const TTPConfig ttp = ttp_config_from(cfg);
  const Dataset data = load_dataset(path);
  const GramCache gram = build_gram(ttp.kernel, data.current, data.historical, data.treatment);
  const TTPReport report = run_ttp(gram, ttp);

  json doc = {{"command", "test"},
              {"effective_config", cfg.effective()},
              {"dataset",
               {{"path", path},
                {"m", data.current.size()},
                {"l", data.historical.size()},
                {"n", data.treatment.size()},
                {"dim", data.current.dim()},
                {"header", data.had_header}}},
              {"report", report}};
  emit(mf, doc, report_table(report), out);
  return doc;
}

json cmd_simulate(const RunManifest& mf, std::ostream& out) {
  const Config cfg = load_config(mf);
  std::vector<CampaignResult> results;
  json cells = json::array();
  for (const Config& cell : cfg.expand()) {
    const Scenario scn = scenario_from(cell);
    results.push_back(run_campaign(scn, mf.workers));
    cells.push_back({{"effective_config", cell.effective()}, {"result", results.back()}});
  }
  json doc = {{"command", "simulate"}, {"effective_config", cfg.effective()}, {"cells", cells}};
  emit(mf, doc, campaign_table(results), out);
  return doc;
}

json cmd_null_study(const RunManifest& mf, std::ostream& out) {
  const Config cfg = load_config(mf);
  const std::vector<double> levels = null_levels_from(cfg);
  std::vector<NullStudyResult> results;
  json cells = json::array();
  for (const Config& cell : cfg.expand()) {
    const Scenario scn = scenario_from(cell);
    results.push_back(null_distribution_study(scn, levels, mf.workers));
    cells.push_back({{"effective_config", cell.effective()}, {"result", results.back()}});
  }
  json doc = {{"command", "null-study"}, {"effective_config", cfg.effective()}, {"cells", cells}};
  emit(mf, doc, null_study_table(results), out);
  return doc;
}

int run_command(const RunManifest& mf, std::ostream& out, std::ostream& err) {
  try {
    switch (mf.command) {
      case Command::Test: cmd_test(mf, out); break;
      case Command::Simulate: cmd_simulate(mf, out); break;
      case Command::NullStudy: cmd_null_study(mf, out); break;
    }
    return exit_code::kSuccess;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.message() << '\n';
    if (const std::string hint = error_hint(e.kind()); !hint.empty()) err << "hint: " << hint << '\n';
    return exit_code_for(e.kind());
  } catch (const nlohmann::json::exception& e) {
    err << "error (internal): " << e.what() << '\n';
    return exit_code::kInternal;
  } catch (const std::exception& e) {
    err << "error (internal): " << e.what() << '\n';
    return exit_code::kInternal;
  }
}

}  // namespace ttp
