#pragma once

#include "rzlab/counterexamples.hpp"
#include "rzlab/verify.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace rzlab {

/// %.17g: round-trips every double and is byte-stable across runs.
std::string format_double(double v);

/// Columns: check_id,d,n,R,potential,p,measured,bound,tolerance,verdict,seed,runtime_s.
/// One row per report showing its headline measurement; multiple exponents are joined with ';'.
std::string csv_header();
std::string csv_row(const CheckReport& r);
std::string reports_csv(const std::vector<CheckReport>& reports);

/// Full reports (every measurement and note) plus the config that produced them.
std::string reports_json(const std::vector<CheckReport>& reports, const RunConfig& config);

/// Tidy CSV of a scan: which,x,value.
std::string scan_csv(const ScanReport& scan);
std::string scan_json(const ScanReport& scan);

/// Flat JSON schema; keys mirror RunConfig field names. Unknown keys are rejected.
RunConfig config_from_json(const std::string& text);
RunConfig config_from_file(const std::filesystem::path& path);
std::string config_to_json(const RunConfig& config);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace rzlab
