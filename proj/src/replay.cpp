#include "metacache/replay.hpp"

#include <json.hpp>

namespace metacache {

namespace {

using nlohmann::json;

// Deterministic synthetic records for replayed creates. Inode numbers and
// fake data-block ids are assigned in op order; payload contents are filler.
class RecordFactory {
 public:
  explicit RecordFactory(uint64_t block_size, uint64_t inline_threshold)
      : block_size_(block_size), inline_threshold_(inline_threshold) {}

  InodeRecord Directory() {
    InodeRecord inode;
    inode.inode_number = next_inode_++;
    inode.file_type = FileType::kDirectory;
    inode.permissions = 0755;
    inode.link_count = 2;
    inode.generation = 1;
    return inode;
  }

  InodeRecord File(uint64_t size) {
    InodeRecord inode;
    inode.inode_number = next_inode_++;
    inode.file_type = FileType::kRegular;
    inode.size_bytes = size;
    inode.permissions = 0644;
    inode.link_count = 1;
    inode.generation = 1;
    inode.owner_uid = 1000;
    inode.group_gid = 1000;
    if (size > inline_threshold_) {
      uint64_t blocks = (size + block_size_ - 1) / block_size_;
      for (uint64_t i = 0; i < blocks; i++) inode.block_refs.push_back(next_block_++);
    }
    return inode;
  }

  static std::string Payload(uint64_t size) {
    return std::string(size, static_cast<char>('a' + size % 23));
  }

 private:
  uint64_t block_size_;
  uint64_t inline_threshold_;
  uint64_t next_inode_ = 2;  // 1 is the root directory
  uint64_t next_block_ = 1;
};

Status PrepareDataDir(const std::filesystem::path& dir) {
  std::error_code ec;
  if (std::filesystem::exists(dir, ec)) {
    if (!std::filesystem::is_directory(dir, ec)) {
      return Status::IoError(dir.string() + " exists and is not a directory");
    }
    if (!std::filesystem::is_empty(dir, ec)) {
      return Status::IoError(dir.string() + " is not empty; refusing to replay into it");
    }
    return Status::Ok();
  }
  std::filesystem::create_directories(dir, ec);
  if (ec) return Status::IoError("create " + dir.string() + ": " + ec.message());
  return Status::Ok();
}

Status ApplyOp(Simulator& sim, RecordFactory& factory, const TraceOp& op) {
  switch (op.kind) {
    case OpKind::kMkdir:
      return sim.Create(op.path, factory.Directory(), std::nullopt);
    case OpKind::kCreate:
      return sim.Create(op.path, factory.File(op.size), RecordFactory::Payload(op.size));
    case OpKind::kStat:
      return sim.Stat(op.path).status();
    case OpKind::kOpenRead:
      return sim.OpenRead(op.path).status();
    case OpKind::kUnlink:
      return sim.Unlink(op.path);
  }
  return Status::MalformedTrace("unknown op kind");
}

// Row index per bench op kind; MKDIR never appears in the bench phase.
int RowIndexOf(OpKind kind) {
  switch (kind) {
    case OpKind::kStat: return 0;
    case OpKind::kOpenRead: return 1;
    case OpKind::kCreate: return 2;
    case OpKind::kUnlink: return 3;
    case OpKind::kMkdir: return -1;
  }
  return -1;
}

bool IsCountedError(const Status& st) {
  return st.code() == ErrorCode::kNotFound || st.code() == ErrorCode::kIsDirectory;
}

}  // namespace

std::string SimConfigEcho(const SimConfig& config) {
  json j{{"icache_capacity", config.icache_capacity},
         {"metacache_enabled", config.metacache_enabled},
         {"warm_on_boot", config.warm_on_boot},
         {"inline_threshold", config.inline_threshold},
         {"block_size", config.block_size},
         {"costs",
          {{"ram_hit", config.costs.ram_hit},
           {"block_io", config.costs.block_io},
           {"seek", config.costs.seek}}}};
  return j.dump();
}

Result<Report> Replay(const Trace& trace, const ReplayOptions& options) {
  if (Status st = PrepareDataDir(options.data_dir); !st.ok()) return st;

  StoreConfig store_config;
  store_config.data_dir = options.data_dir;
  store_config.memtable_threshold_bytes = options.memtable_threshold_bytes;
  store_config.max_tables_before_compact = options.max_tables_before_compact;
  store_config.sync_every_write = options.sync_every_write;
  store_config.inline_threshold = options.sim.inline_threshold;
  store_config.block_size = options.sim.block_size;

  auto store = Store::Open(store_config);
  if (!store.ok()) return store.status();

  RecordFactory factory(options.sim.block_size, options.sim.inline_threshold);

  // Setup phase: populate through a throwaway simulator, then flush so the
  // measured phase starts from an on-disk store.
  {
    SimConfig setup_config = options.sim;
    setup_config.warm_on_boot = false;
    auto setup_sim = Simulator::Boot(setup_config, **store);
    if (!setup_sim.ok()) return setup_sim.status();
    for (const TraceOp& op : trace.ops) {
      if (!op.setup) continue;
      if (Status st = ApplyOp(**setup_sim, factory, op); !st.ok()) {
        if (!IsCountedError(st)) return st;
      }
    }
  }
  if (Status st = (*store)->Flush(); !st.ok()) return st;

  auto sim = Simulator::Boot(options.sim, **store);
  if (!sim.ok()) return sim.status();

  StoreCounters store_before = (*store)->counters();

  Report report;
  report.trace_header = TraceHeaderJson(trace.spec);
  report.config_echo = SimConfigEcho(options.sim);
  report.rows = {ReportRow{"STAT"}, ReportRow{"OPEN_READ"}, ReportRow{"CREATE"},
                 ReportRow{"UNLINK"}};

  for (const TraceOp& op : trace.ops) {
    if (op.setup) continue;
    int row = RowIndexOf(op.kind);
    if (row < 0) return Status::MalformedTrace("MKDIR op in bench phase");
    uint64_t cost_before = (*sim)->counters().cost_units;
    Status st = ApplyOp(**sim, factory, op);
    if (!st.ok() && !IsCountedError(st)) return st;
    report.rows[row].calls++;
    report.rows[row].cost_units += (*sim)->counters().cost_units - cost_before;
    if (!st.ok()) report.rows[row].errors++;
  }

  const SimCounters& sc = (*sim)->counters();
  StoreCounters store_after = (*store)->counters();
  report.counters.icache_hits = sc.icache_hits;
  report.counters.metacache_hits = sc.metacache_hits;
  report.counters.disk_fallbacks = sc.disk_fallbacks;
  report.counters.block_reads = sc.block_reads;
  report.counters.block_writes = sc.block_writes;
  report.counters.seeks = sc.seeks;
  report.counters.sstable_blocks_read =
      store_after.sstable_blocks_read - store_before.sstable_blocks_read;
  report.counters.warm_loaded_entries = (*sim)->warm_loaded_entries();

  FinalizeReport(&report);
  return report;
}

}  // namespace metacache
