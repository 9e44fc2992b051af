#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "metacache/status.hpp"

namespace metacache {

// Per-operation-kind accounting in the classic strace -c column layout.
// SECONDS is cost_units scaled by 1e-6 and USECS/CALL is cost per call;
// both are deterministic simulated costs, never wall clock.
struct ReportRow {
  std::string syscall;
  double pct_time = 0.0;  // rounded to 2 decimals; rows sum to 100 on non-empty reports
  uint64_t cost_units = 0;
  uint64_t usecs_per_call = 0;
  uint64_t calls = 0;
  uint64_t errors = 0;

  bool operator==(const ReportRow&) const = default;
};

struct ReportCounters {
  uint64_t icache_hits = 0;
  uint64_t metacache_hits = 0;
  uint64_t disk_fallbacks = 0;
  uint64_t block_reads = 0;
  uint64_t block_writes = 0;
  uint64_t seeks = 0;
  uint64_t sstable_blocks_read = 0;  // store-level reads during the bench phase
  uint64_t warm_loaded_entries = 0;

  bool operator==(const ReportCounters&) const = default;
};

struct Report {
  std::string trace_header;  // canonical header line of the replayed trace
  std::string config_echo;   // one-line JSON echo of the simulator config
  std::vector<ReportRow> rows;
  ReportRow total;
  ReportCounters counters;

  bool operator==(const Report&) const = default;
};

enum class ReportFormat {
  kTable,
  kCsv,
  kJson,
};

Result<ReportFormat> ReportFormatFromName(const std::string& name);

// Recomputes pct_time, usecs_per_call, and the TOTAL row from the raw
// cost/call/error fields. pct values are rounded to two decimals.
void FinalizeReport(Report* report);

std::string RenderReport(const Report& report, ReportFormat format);

std::string ReportToJson(const Report& report);
Result<Report> ReportFromJson(const std::string& text);

// Side-by-side deltas and ratios per row; both reports must come from the
// same trace. Errors: kTraceMismatch.
Result<std::string> CompareRuns(const Report& a, const Report& b, ReportFormat format);

}  // namespace metacache
