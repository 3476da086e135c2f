#pragma once

#include <array>
#include <string>
#include <vector>

#include "avkg/simworld.hpp"

namespace avkg {

/// Column order used throughout the reports: restricted control, restricted
/// experimental, unrestricted control, unrestricted experimental.
enum class ReportColumn {
  RestrictedControl = 0,
  RestrictedExperimental = 1,
  UnrestrictedControl = 2,
  UnrestrictedExperimental = 3,
};

inline constexpr std::size_t kReportColumns = 4;

struct ColumnTotals {
  int lane_changes = 0;
  int sudden_brakes = 0;
  int collide_or_stop = 0;

  int sum() const { return lane_changes + sudden_brakes + collide_or_stop; }
};

/// 15 x 4 grid of reported categories plus per-column aggregate counts.
struct MatrixReport {
  std::vector<std::string> row_ids;  // catalog order
  std::vector<std::array<std::string, kReportColumns>> cells;
  std::array<ColumnTotals, kReportColumns> totals{};
};

/// Runs all 60 trials (15 obstacles x 2 scenarios x 2 controllers) with the
/// given per-trial defaults and tallies the report.
MatrixReport run_matrix(const Catalog& catalog = avkg::catalog(),
                        const TrialConfig& defaults = {});

struct HeadlineDeltas {
  double sudden_brake_pp = 0.0;  // restricted: experimental - control, percentage points
  double lane_change_pp = 0.0;   // unrestricted: experimental - control
};

/// Deltas are computed on the rounded percentages, so 8/15 - 7/15 yields
/// 53.3 - 46.7 = 6.6, not the unrounded 6.67.
HeadlineDeltas headline_deltas(const MatrixReport& report);

/// Round half up to one decimal place.
double round1(double x);

/// count/total as a percentage rounded half up to one decimal.
double rounded_percent(int count, int total);

/// "46.7%"; integral values drop the decimal: "0%", "100%".
std::string format_percent(int count, int total);

/// "7 (46.7%)".
std::string format_count_percent(int count, int total);

struct OracleResult {
  bool passed = true;
  std::string mismatch;  // "obstacle=<id> scenario=<s> controller=<c> expected=<e> actual=<a>"
};

/// Anti-drift guard for the calibrated data: compares decide() over all 30
/// (obstacle, scenario) pairs against the embedded golden experimental
/// cells, then baseline_controller against the golden control cells.
/// Reports the first mismatch in table row order, restricted first.
OracleResult calibration_oracle(const Catalog& catalog = avkg::catalog(),
                                double baseline_area_threshold = kBaselineAreaThreshold);

enum class TableFormat { Text, Csv };

/// Renders the qualitative table, the aggregate table, and the headline
/// deltas. Output is byte-stable for equal reports.
std::string render_tables(const MatrixReport& report, TableFormat format);

}  // namespace avkg
