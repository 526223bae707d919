#pragma once

#include <span>
#include <string>
#include <vector>

#include "sheathlab/diagnostics.hpp"
#include "sheathlab/stationary.hpp"

namespace sheathlab {

// Shortest round-trip decimal form (printf %.17g), used for all numeric
// output so that identical runs produce byte-identical files.
std::string format_g17(double x);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Profile CSV: header x,n,u,T,phi,phi_x then one row per node. LF endings.
std::string profile_to_csv(const StationaryProfile& prof);

// Diagnostics CSV columns, fixed order:
//   t,E_weighted,norm_phi_psi_zeta_h2,norm_sigma,sigma0,sigmax0,E0_boundary
extern const char* const kDiagnosticsCsvHeader;
std::string record_to_csv_row(const DiagnosticRecord& rec);
std::string records_to_csv(std::span<const DiagnosticRecord> records);

// JSON-lines mirror of the CSV with the same keys, one object per record.
std::string records_to_jsonl(std::span<const DiagnosticRecord> records);

// Incremental CSV sink so a failed run still leaves the records emitted so
// far on disk; comment() writes a '#'-prefixed marker line.
class DiagnosticCsvWriter {
 public:
  explicit DiagnosticCsvWriter(const std::string& path);
  void append(const DiagnosticRecord& rec);
  void comment(const std::string& text);

 private:
  std::string path_;
};

// Minimal static line plot. One polyline per series, linear or log-10
// vertical axis (nonpositive values are skipped in log mode).
struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
};

std::string svg_line_plot(const std::string& title, const std::string& xlabel,
                          const std::string& ylabel,
                          const std::vector<PlotSeries>& series, bool log_y);

}  // namespace sheathlab
