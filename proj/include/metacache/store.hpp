#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "metacache/memtable.hpp"
#include "metacache/sstable.hpp"
#include "metacache/status.hpp"
#include "metacache/types.hpp"
#include "metacache/wal.hpp"

namespace metacache {

struct StoreConfig {
  std::filesystem::path data_dir;
  uint64_t memtable_threshold_bytes = 1 << 20;
  uint32_t bloom_bits_per_key = 10;
  uint32_t bloom_hashes = 7;
  uint64_t block_size = 4096;
  uint32_t max_tables_before_compact = 4;
  uint64_t inline_threshold = 4096;
  bool sync_every_write = true;

  Status Validate() const;
};

// Which tier served a get, for the disk-cost model.
enum class ServeTier {
  kMemtable,
  kWarm,
  kSstable,
};

struct GetCost {
  ServeTier tier = ServeTier::kMemtable;
  uint64_t blocks_read = 0;
};

struct FoundRecord {
  InodeRecord inode;
  std::optional<std::string> inline_data;
  uint64_t version = 0;
};

struct GetResult {
  std::optional<FoundRecord> record;  // nullopt = absent
  GetCost cost;
};

struct StoreCounters {
  uint64_t puts = 0;
  uint64_t deletes = 0;
  uint64_t gets = 0;
  uint64_t flushes = 0;
  uint64_t compactions = 0;
  uint64_t sstable_blocks_read = 0;
};

// The metadata store: an in-RAM MemTable in front of a list of SSTables,
// with a WAL covering everything not yet flushed, an optional boot-time warm
// cache, and full-merge compaction.
//
// Data directory layout: `wal.log`, `<file_id>.sst` (10-digit zero-padded),
// and `MANIFEST` listing live sst file_ids one per line. The MANIFEST is
// rewritten via temp+rename on every flush/compact and is authoritative for
// which tables are live.
//
// Concurrency: single writer, shared readers. Mutations take the exclusive
// lock; Get/ScanDir take the shared lock and never observe a partially
// applied mutation.
class Store {
 public:
  static Result<std::unique_ptr<Store>> Open(const StoreConfig& config);

  ~Store();
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  // Writes through the WAL into the MemTable. Reaching the MemTable
  // threshold triggers a synchronous flush; reaching
  // max_tables_before_compact triggers a synchronous full compaction.
  // Errors: kInlineTooLarge, kIoError.
  Status Put(const PathKey& key, const InodeRecord& inode,
             std::optional<std::string> inline_data = std::nullopt);

  // Tombstone write; deleting an absent key succeeds.
  Status Delete(const PathKey& key);

  // Lookup order: MemTable, warm cache (if loaded and the key was not
  // written after the load), then SSTables newest to oldest with the bloom
  // filter short-circuiting tables that cannot hold the key. A tombstone at
  // any tier makes the key absent.
  Result<GetResult> Get(const PathKey& key);

  // All live children of parent_path in name order, merged newest-wins
  // across MemTable and SSTables; tombstoned names are excluded.
  Result<std::vector<std::pair<std::string, InodeRecord>>> ScanDir(const std::string& parent_path);

  // MemTable -> new SSTable, WAL deleted, fresh MemTable and WAL. No-op on
  // an empty MemTable. Never changes any Get/ScanDir result.
  Status Flush();

  // Flushes, then merges every SSTable into one, dropping tombstones.
  // Never changes any Get/ScanDir result.
  Status Compact();

  // Loads every SSTable entry into a read-only consolidated map so later
  // gets of unwritten keys cost zero block reads. Returns the number of live
  // entries loaded. Keys written after the load bypass the warm cache.
  Result<uint64_t> WarmLoad();

  StoreCounters counters() const;

  size_t sstable_count() const;
  bool warm_loaded() const;
  const StoreConfig& config() const { return config_; }

  // Test hook: drops the WAL buffer without syncing, as a crash would.
  void SimulateCrash();

 private:
  explicit Store(StoreConfig config) : config_(std::move(config)) {}

  Status PutLocked(const PathKey& key, ValueRecord value);
  Status FlushLocked();
  Status CompactLocked();
  Status WriteManifestLocked() const;
  Status OpenFreshWalLocked();
  Result<GetResult> GetLocked(const PathKey& key);

  StoreConfig config_;
  mutable std::shared_mutex mutex_;

  std::unique_ptr<MemTable> memtable_;
  std::optional<WalWriter> wal_;
  std::vector<std::shared_ptr<SstableReader>> tables_;  // sorted by file_id, oldest first
  uint64_t next_version_ = 1;
  uint64_t next_file_id_ = 1;
  bool crashed_ = false;

  std::optional<std::map<PathKey, ValueRecord>> warm_cache_;
  std::unordered_set<std::string> warm_dirty_;  // encoded keys written after load

  mutable std::atomic<uint64_t> puts_{0};
  mutable std::atomic<uint64_t> deletes_{0};
  mutable std::atomic<uint64_t> gets_{0};
  mutable std::atomic<uint64_t> flushes_{0};
  mutable std::atomic<uint64_t> compactions_{0};
  mutable std::atomic<uint64_t> sstable_blocks_read_{0};
};

}  // namespace metacache
