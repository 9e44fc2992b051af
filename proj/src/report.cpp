#include "metacache/report.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

namespace metacache {

namespace {

using nlohmann::json;

constexpr const char* kTableHeader = "% TIME  SECONDS  USECS/CALL  CALLS  ERRORS  SYSCALL";

std::string FormatRow(const ReportRow& row) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%6.2f  %8.6f  %10" PRIu64 "  %5" PRIu64 "  %6" PRIu64 "  %s",
                row.pct_time, static_cast<double>(row.cost_units) * 1e-6, row.usecs_per_call,
                row.calls, row.errors, row.syscall.c_str());
  return buf;
}

std::string FormatCsvRow(const ReportRow& row) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s,%.2f,%.6f,%" PRIu64 ",%" PRIu64 ",%" PRIu64,
                row.syscall.c_str(), row.pct_time, static_cast<double>(row.cost_units) * 1e-6,
                row.usecs_per_call, row.calls, row.errors);
  return buf;
}

json RowToJson(const ReportRow& row) {
  return json{{"syscall", row.syscall},     {"pct_time", row.pct_time},
              {"cost_units", row.cost_units}, {"usecs_per_call", row.usecs_per_call},
              {"calls", row.calls},         {"errors", row.errors}};
}

Result<ReportRow> RowFromJson(const json& j) {
  ReportRow row;
  try {
    row.syscall = j.at("syscall").get<std::string>();
    row.pct_time = j.at("pct_time").get<double>();
    row.cost_units = j.at("cost_units").get<uint64_t>();
    row.usecs_per_call = j.at("usecs_per_call").get<uint64_t>();
    row.calls = j.at("calls").get<uint64_t>();
    row.errors = j.at("errors").get<uint64_t>();
  } catch (const json::exception& e) {
    return Status::MalformedTrace(std::string("bad report row: ") + e.what());
  }
  return row;
}

double Round2(double v) { return std::round(v * 100.0) / 100.0; }

}  // namespace

Result<ReportFormat> ReportFormatFromName(const std::string& name) {
  if (name == "table") return ReportFormat::kTable;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  return Status::InvalidSpec("unknown format: " + name + " (want table, csv, or json)");
}

void FinalizeReport(Report* report) {
  uint64_t total_cost = 0, total_calls = 0, total_errors = 0;
  for (const auto& row : report->rows) {
    total_cost += row.cost_units;
    total_calls += row.calls;
    total_errors += row.errors;
  }
  for (auto& row : report->rows) {
    row.pct_time = total_cost == 0
                       ? 0.0
                       : Round2(100.0 * static_cast<double>(row.cost_units) /
                                static_cast<double>(total_cost));
    row.usecs_per_call =
        row.calls == 0
            ? 0
            : static_cast<uint64_t>(std::llround(static_cast<double>(row.cost_units) /
                                                 static_cast<double>(row.calls)));
  }
  report->total.syscall = "TOTAL";
  report->total.pct_time = total_cost == 0 ? 0.0 : 100.0;
  report->total.cost_units = total_cost;
  report->total.calls = total_calls;
  report->total.errors = total_errors;
  report->total.usecs_per_call =
      total_calls == 0
          ? 0
          : static_cast<uint64_t>(std::llround(static_cast<double>(total_cost) /
                                               static_cast<double>(total_calls)));
}

std::string RenderReport(const Report& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::kTable: {
      std::string out;
      out += "# trace: " + report.trace_header + "\n";
      out += "# config: " + report.config_echo + "\n";
      out += kTableHeader;
      out.push_back('\n');
      for (const auto& row : report.rows) {
        out += FormatRow(row);
        out.push_back('\n');
      }
      out += FormatRow(report.total);
      out.push_back('\n');
      char buf[256];
      std::snprintf(buf, sizeof(buf),
                    "# counters: block_reads=%" PRIu64 " block_writes=%" PRIu64
                    " seeks=%" PRIu64 " sstable_blocks_read=%" PRIu64 " icache_hits=%" PRIu64
                    " metacache_hits=%" PRIu64 " disk_fallbacks=%" PRIu64
                    " warm_loaded_entries=%" PRIu64 "\n",
                    report.counters.block_reads, report.counters.block_writes,
                    report.counters.seeks, report.counters.sstable_blocks_read,
                    report.counters.icache_hits, report.counters.metacache_hits,
                    report.counters.disk_fallbacks, report.counters.warm_loaded_entries);
      out += buf;
      return out;
    }
    case ReportFormat::kCsv: {
      std::string out = "syscall,pct_time,seconds,usecs_per_call,calls,errors\n";
      for (const auto& row : report.rows) {
        out += FormatCsvRow(row);
        out.push_back('\n');
      }
      out += FormatCsvRow(report.total);
      out.push_back('\n');
      return out;
    }
    case ReportFormat::kJson:
      return ReportToJson(report);
  }
  return {};
}

std::string ReportToJson(const Report& report) {
  json rows = json::array();
  for (const auto& row : report.rows) rows.push_back(RowToJson(row));
  json j{{"kind", "report"},
         {"trace_header", report.trace_header},
         {"config", report.config_echo},
         {"rows", rows},
         {"total", RowToJson(report.total)},
         {"counters",
          {{"icache_hits", report.counters.icache_hits},
           {"metacache_hits", report.counters.metacache_hits},
           {"disk_fallbacks", report.counters.disk_fallbacks},
           {"block_reads", report.counters.block_reads},
           {"block_writes", report.counters.block_writes},
           {"seeks", report.counters.seeks},
           {"sstable_blocks_read", report.counters.sstable_blocks_read},
           {"warm_loaded_entries", report.counters.warm_loaded_entries}}}};
  return j.dump() + "\n";
}

Result<Report> ReportFromJson(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || j.value("kind", "") != "report") {
    return Status::MalformedTrace("not a report JSON document");
  }
  Report report;
  try {
    report.trace_header = j.at("trace_header").get<std::string>();
    report.config_echo = j.at("config").get<std::string>();
    for (const json& row : j.at("rows")) {
      auto r = RowFromJson(row);
      if (!r.ok()) return r.status();
      report.rows.push_back(*r);
    }
    auto total = RowFromJson(j.at("total"));
    if (!total.ok()) return total.status();
    report.total = *total;
    const json& c = j.at("counters");
    report.counters.icache_hits = c.at("icache_hits").get<uint64_t>();
    report.counters.metacache_hits = c.at("metacache_hits").get<uint64_t>();
    report.counters.disk_fallbacks = c.at("disk_fallbacks").get<uint64_t>();
    report.counters.block_reads = c.at("block_reads").get<uint64_t>();
    report.counters.block_writes = c.at("block_writes").get<uint64_t>();
    report.counters.seeks = c.at("seeks").get<uint64_t>();
    report.counters.sstable_blocks_read = c.at("sstable_blocks_read").get<uint64_t>();
    report.counters.warm_loaded_entries = c.at("warm_loaded_entries").get<uint64_t>();
  } catch (const json::exception& e) {
    return Status::MalformedTrace(std::string("bad report document: ") + e.what());
  }
  return report;
}

Result<std::string> CompareRuns(const Report& a, const Report& b, ReportFormat format) {
  if (a.trace_header != b.trace_header) {
    return Status::TraceMismatch("reports come from different traces");
  }

  struct CompareRow {
    std::string name;
    uint64_t cost_a, cost_b;
    int64_t delta;
    double ratio;
    const char* winner;
  };
  auto make_row = [](const std::string& name, const ReportRow& ra, const ReportRow& rb) {
    CompareRow row;
    row.name = name;
    row.cost_a = ra.cost_units;
    row.cost_b = rb.cost_units;
    row.delta = static_cast<int64_t>(rb.cost_units) - static_cast<int64_t>(ra.cost_units);
    row.ratio = ra.cost_units == 0
                    ? (rb.cost_units == 0 ? 1.0 : std::numeric_limits<double>::infinity())
                    : static_cast<double>(rb.cost_units) / static_cast<double>(ra.cost_units);
    row.winner = rb.cost_units < ra.cost_units ? "B" : (ra.cost_units < rb.cost_units ? "A" : "tie");
    return row;
  };

  std::vector<CompareRow> rows;
  for (const auto& ra : a.rows) {
    const ReportRow* rb = nullptr;
    for (const auto& candidate : b.rows) {
      if (candidate.syscall == ra.syscall) {
        rb = &candidate;
        break;
      }
    }
    if (rb == nullptr) return Status::TraceMismatch("row sets differ: " + ra.syscall);
    rows.push_back(make_row(ra.syscall, ra, *rb));
  }
  rows.push_back(make_row("TOTAL", a.total, b.total));

  int64_t blocks_delta = static_cast<int64_t>(b.counters.block_reads) -
                         static_cast<int64_t>(a.counters.block_reads);

  if (format == ReportFormat::kCsv) {
    std::string out = "syscall,cost_a,cost_b,delta,ratio,winner\n";
    for (const auto& row : rows) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%s,%" PRIu64 ",%" PRIu64 ",%" PRId64 ",%.3f,%s\n",
                    row.name.c_str(), row.cost_a, row.cost_b, row.delta, row.ratio, row.winner);
      out += buf;
    }
    return out;
  }

  std::string out;
  out += "# comparison of two runs over one trace (cost units; lower wins)\n";
  out += "# A: " + a.config_echo + "\n";
  out += "# B: " + b.config_echo + "\n";
  out += "SYSCALL        COST_A      COST_B       DELTA   RATIO  WINNER\n";
  for (const auto& row : rows) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-10s %10" PRIu64 "  %10" PRIu64 "  %10" PRId64 "  %6.3f  %s\n",
                  row.name.c_str(), row.cost_a, row.cost_b, row.delta, row.ratio, row.winner);
    out += buf;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "# block_reads: A=%" PRIu64 " B=%" PRIu64 " delta=%" PRId64 "\n",
                a.counters.block_reads, b.counters.block_reads, blocks_delta);
  out += buf;
  return out;
}

}  // namespace metacache
