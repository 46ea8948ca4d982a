#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace gibbscert {

// All numeric report output goes through one formatter: 12 significant
// digits, locale independent.
std::string format_g12(double v);

// FNV-1a over the canonical parameter string; echoed in every report so runs
// can be matched to their inputs.
std::uint64_t fnv1a(const std::string& s);
std::string hash_hex(std::uint64_t h);

// Joint table for TV curves and bound curves, one row per ell.  Absent
// columns stay disengaged and serialize as empty CSV fields / absent JSON
// keys.  Column order is fixed.
struct CompareTable {
  std::vector<int> ell;
  std::optional<std::vector<double>> tv_lower;
  std::optional<std::vector<double>> tv_upper;
  std::optional<std::vector<double>> bound_uniform;
  std::optional<std::vector<double>> bound_rosenthal;
  std::optional<std::vector<double>> bound_dks_lower;
  std::optional<std::vector<double>> bound_dks_upper;
  std::optional<std::vector<double>> bound_spectral;
};

struct ReportMeta {
  std::string command;       // canonical parameter string
  std::uint64_t seed;
  std::uint64_t params_hash; // fnv1a(command)
};

void write_compare_csv(const CompareTable& table, std::ostream& out);
void write_compare_json(const CompareTable& table, const ReportMeta& meta,
                        std::ostream& out);

// One curve exported alone: CSV rows (ell, value, kind, params-hash) plus a
// JSON envelope with the full parameter record.
struct CurveExport {
  std::string kind;
  std::vector<int> ell;
  std::vector<double> value;
  std::vector<std::pair<std::string, double>> params;
};
void write_curve_csv(const CurveExport& c, const ReportMeta& meta,
                     std::ostream& out);
void write_curve_json(const CurveExport& c, const ReportMeta& meta,
                      std::ostream& out);

}  // namespace gibbscert
