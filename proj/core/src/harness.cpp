#include "avkg/harness.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace avkg {

namespace {

constexpr std::array<ScenarioKind, kReportColumns> kColumnScenario = {
    ScenarioKind::LaneChangeRestricted, ScenarioKind::LaneChangeRestricted,
    ScenarioKind::LaneChangeUnrestricted, ScenarioKind::LaneChangeUnrestricted};

constexpr std::array<ControllerKind, kReportColumns> kColumnController = {
    ControllerKind::Baseline, ControllerKind::KG, ControllerKind::Baseline, ControllerKind::KG};

// Golden qualitative results, embedded verbatim. Column order: restricted
// control, restricted experimental, unrestricted control, unrestricted
// experimental.
struct GoldenRow {
  const char* id;
  std::array<const char*, kReportColumns> cells;
};

constexpr const char* kLaneChange = "Lane Change";
constexpr const char* kSuddenBraking = "Sudden Braking";
constexpr const char* kCollideStop = "Collide/Stop";

constexpr GoldenRow kGoldenTable[15] = {
    {"construction_cone", {kCollideStop, kCollideStop, kLaneChange, kLaneChange}},
    {"box_01", {kCollideStop, kCollideStop, kLaneChange, kLaneChange}},
    {"creased_box_02", {kCollideStop, kCollideStop, kCollideStop, kCollideStop}},
    {"cola_can", {kCollideStop, kCollideStop, kCollideStop, kCollideStop}},
    {"garbage_01", {kCollideStop, kCollideStop, kCollideStop, kCollideStop}},
    {"garbage_05", {kCollideStop, kCollideStop, kCollideStop, kCollideStop}},
    {"garbage_06", {kCollideStop, kCollideStop, kCollideStop, kCollideStop}},
    {"trash_can_03", {kCollideStop, kCollideStop, kCollideStop, kLaneChange}},
    {"plastic_chair", {kCollideStop, kSuddenBraking, kLaneChange, kLaneChange}},
    {"gnome", {kCollideStop, kCollideStop, kCollideStop, kCollideStop}},
    {"watering_can", {kCollideStop, kCollideStop, kCollideStop, kLaneChange}},
    {"plastic_bag", {kCollideStop, kCollideStop, kLaneChange, kCollideStop}},
    {"shopping_bag", {kCollideStop, kCollideStop, kLaneChange, kLaneChange}},
    {"shopping_cart", {kCollideStop, kSuddenBraking, kLaneChange, kLaneChange}},
    {"shopping_trolley", {kCollideStop, kCollideStop, kLaneChange, kLaneChange}},
};

void tally(ColumnTotals& totals, const std::string& category) {
  if (category == kLaneChange) {
    totals.lane_changes += 1;
  } else if (category == kSuddenBraking) {
    totals.sudden_brakes += 1;
  } else {
    totals.collide_or_stop += 1;
  }
}

std::string mismatch_text(std::string_view obstacle, ScenarioKind scenario,
                          std::string_view controller, std::string_view expected,
                          std::string_view actual) {
  std::string out = "obstacle=";
  out += obstacle;
  out += " scenario=";
  out += scenario_token(scenario);
  out += " controller=";
  out += controller;
  out += " expected=";
  out += expected;
  out += " actual=";
  out += actual;
  return out;
}

std::string format_pp(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", value);
  return buf;
}

}  // namespace

MatrixReport run_matrix(const Catalog& catalog, const TrialConfig& defaults) {
  MatrixReport report;
  for (const auto& obstacle : catalog.items()) {
    report.row_ids.push_back(obstacle.id);
    std::array<std::string, kReportColumns> row;
    for (std::size_t col = 0; col < kReportColumns; ++col) {
      TrialConfig cfg = defaults;
      cfg.obstacle_id = obstacle.id;
      cfg.scenario = kColumnScenario[col];
      cfg.controller = kColumnController[col];
      TrialResult trial = run_trial(catalog, cfg);
      row[col] = trial.reported_category;
      tally(report.totals[col], trial.reported_category);
    }
    report.cells.push_back(std::move(row));
  }
  return report;
}

double round1(double x) { return std::floor(x * 10.0 + 0.5) / 10.0; }

double rounded_percent(int count, int total) {
  if (total == 0) return 0.0;
  return round1(count * 100.0 / total);
}

std::string format_percent(int count, int total) {
  const double p = rounded_percent(count, total);
  char buf[32];
  if (p == std::floor(p)) {
    std::snprintf(buf, sizeof(buf), "%d%%", static_cast<int>(p));
  } else {
    std::snprintf(buf, sizeof(buf), "%.1f%%", p);
  }
  return buf;
}

std::string format_count_percent(int count, int total) {
  return std::to_string(count) + " (" + format_percent(count, total) + ")";
}

HeadlineDeltas headline_deltas(const MatrixReport& report) {
  auto pct = [&report](ReportColumn col, int ColumnTotals::*field) {
    const auto& totals = report.totals[static_cast<std::size_t>(col)];
    return rounded_percent(totals.*field, totals.sum());
  };
  HeadlineDeltas deltas;
  deltas.sudden_brake_pp =
      round1(pct(ReportColumn::RestrictedExperimental, &ColumnTotals::sudden_brakes) -
             pct(ReportColumn::RestrictedControl, &ColumnTotals::sudden_brakes));
  deltas.lane_change_pp =
      round1(pct(ReportColumn::UnrestrictedExperimental, &ColumnTotals::lane_changes) -
             pct(ReportColumn::UnrestrictedControl, &ColumnTotals::lane_changes));
  return deltas;
}

OracleResult calibration_oracle(const Catalog& catalog, double baseline_area_threshold) {
  // (a) reasoner decisions against the experimental columns.
  for (const GoldenRow& row : kGoldenTable) {
    const ObstacleClass* obstacle = catalog.find(row.id);
    if (!obstacle) {
      return {false, mismatch_text(row.id, ScenarioKind::LaneChangeRestricted, "kg",
                                   "catalog entry", "missing")};
    }
    for (ScenarioKind scenario :
         {ScenarioKind::LaneChangeRestricted, ScenarioKind::LaneChangeUnrestricted}) {
      const bool feasible = scenario == ScenarioKind::LaneChangeUnrestricted;
      const std::string_view actual = decision_category(decide(*obstacle, feasible).decision);
      const char* expected = scenario == ScenarioKind::LaneChangeRestricted
                                 ? row.cells[1]
                                 : row.cells[3];
      if (actual != expected) {
        return {false, mismatch_text(row.id, scenario, "kg", expected, actual)};
      }
    }
  }

  // (b) baseline controller against the control columns.
  for (const GoldenRow& row : kGoldenTable) {
    const ObstacleClass* obstacle = catalog.find(row.id);
    if (!obstacle) {
      return {false, mismatch_text(row.id, ScenarioKind::LaneChangeRestricted, "baseline",
                                   "catalog entry", "missing")};
    }
    for (ScenarioKind scenario :
         {ScenarioKind::LaneChangeRestricted, ScenarioKind::LaneChangeUnrestricted}) {
      const BaselineAction action =
          baseline_controller(*obstacle, scenario, baseline_area_threshold);
      const std::string_view actual =
          action == BaselineAction::LaneChange ? kLaneChange : kCollideStop;
      const char* expected = scenario == ScenarioKind::LaneChangeRestricted
                                 ? row.cells[0]
                                 : row.cells[2];
      if (actual != expected) {
        return {false, mismatch_text(row.id, scenario, "baseline", expected, actual)};
      }
    }
  }

  return {true, ""};
}

std::string render_tables(const MatrixReport& report, TableFormat format) {
  const HeadlineDeltas deltas = headline_deltas(report);
  const char* metric_names[3] = {"Total Lane Changes", "Total Sudden Braking Incidents",
                                 "Total Collide or Stop"};
  auto metric_value = [&report](std::size_t metric, std::size_t col) {
    const ColumnTotals& totals = report.totals[col];
    const int count = metric == 0   ? totals.lane_changes
                      : metric == 1 ? totals.sudden_brakes
                                    : totals.collide_or_stop;
    return format_count_percent(count, totals.sum());
  };

  std::ostringstream out;
  if (format == TableFormat::Csv) {
    out << "object,restricted_control,restricted_experimental,"
           "unrestricted_control,unrestricted_experimental\n";
    for (std::size_t i = 0; i < report.row_ids.size(); ++i) {
      out << display_name(report.row_ids[i]);
      for (const auto& cell : report.cells[i]) out << ',' << cell;
      out << '\n';
    }
    out << "\nmetric,restricted_control,restricted_experimental,"
           "unrestricted_control,unrestricted_experimental\n";
    for (std::size_t m = 0; m < 3; ++m) {
      out << metric_names[m];
      for (std::size_t col = 0; col < kReportColumns; ++col) out << ',' << metric_value(m, col);
      out << '\n';
    }
    out << "\ndelta,value_pp\n";
    out << "sudden_brake," << format_pp(deltas.sudden_brake_pp) << '\n';
    out << "lane_change," << format_pp(deltas.lane_change_pp) << '\n';
    return out.str();
  }

  out << "Table 1. Vehicle response by obstacle\n";
  out << "Object | Restricted Control | Restricted Experimental | Unrestricted Control | "
         "Unrestricted Experimental\n";
  for (std::size_t i = 0; i < report.row_ids.size(); ++i) {
    out << display_name(report.row_ids[i]);
    for (const auto& cell : report.cells[i]) out << " | " << cell;
    out << '\n';
  }
  out << '\n';
  out << "Table 2. Aggregate response counts\n";
  out << "Metric | Restricted Control | Restricted Experimental | Unrestricted Control | "
         "Unrestricted Experimental\n";
  for (std::size_t m = 0; m < 3; ++m) {
    out << metric_names[m];
    for (std::size_t col = 0; col < kReportColumns; ++col) out << " | " << metric_value(m, col);
    out << '\n';
  }
  out << '\n';
  out << "Headline deltas\n";
  out << "Sudden braking (restricted, experimental - control): "
      << format_pp(deltas.sudden_brake_pp) << " pp\n";
  out << "Lane changes (unrestricted, experimental - control): "
      << format_pp(deltas.lane_change_pp) << " pp\n";
  return out.str();
}

}  // namespace avkg
