#include "metacache/store.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>

#include "metacache/codec.hpp"

namespace metacache {

namespace {

constexpr const char* kWalFileName = "wal.log";
constexpr const char* kManifestFileName = "MANIFEST";

}  // namespace

Status StoreConfig::Validate() const {
  if (data_dir.empty()) return Status::InvalidConfig("data_dir must be set");
  if (memtable_threshold_bytes == 0 || bloom_bits_per_key == 0 || bloom_hashes == 0 ||
      block_size == 0 || max_tables_before_compact == 0 || inline_threshold == 0) {
    return Status::InvalidConfig("all numeric config fields must be > 0");
  }
  return Status::Ok();
}

Result<std::unique_ptr<Store>> Store::Open(const StoreConfig& config) {
  if (Status st = config.Validate(); !st.ok()) return st;

  std::error_code ec;
  std::filesystem::create_directories(config.data_dir, ec);
  if (ec) return Status::IoError("create " + config.data_dir.string() + ": " + ec.message());

  auto store = std::unique_ptr<Store>(new Store(config));
  store->memtable_ = std::make_unique<MemTable>(config.memtable_threshold_bytes);

  // Every .sst present bounds next_file_id, even files the MANIFEST does not
  // list (strays from a crash between table publish and MANIFEST rewrite).
  uint64_t max_seen_id = 0;
  std::vector<uint64_t> present_ids;
  for (const auto& entry : std::filesystem::directory_iterator(config.data_dir)) {
    if (entry.path().extension() != ".sst") continue;
    uint64_t id = std::strtoull(entry.path().stem().string().c_str(), nullptr, 10);
    present_ids.push_back(id);
    max_seen_id = std::max(max_seen_id, id);
  }

  // MANIFEST is authoritative for liveness when present; without one (a
  // hand-assembled directory) every table found is live.
  std::vector<uint64_t> live_ids;
  std::filesystem::path manifest = config.data_dir / kManifestFileName;
  if (std::filesystem::exists(manifest)) {
    std::ifstream in(manifest);
    if (!in) return Status::IoError("cannot read " + manifest.string());
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      live_ids.push_back(std::strtoull(line.c_str(), nullptr, 10));
    }
  } else {
    live_ids = present_ids;
  }
  std::sort(live_ids.begin(), live_ids.end());

  for (uint64_t id : live_ids) {
    auto table = SstableReader::Open(config.data_dir / SstableFileName(id), id);
    if (!table.ok()) return table.status();
    store->tables_.push_back(std::move(*table));
    max_seen_id = std::max(max_seen_id, id);
  }
  store->next_file_id_ = max_seen_id + 1;

  // The newest table always holds the globally newest persisted version:
  // each MemTable fills strictly after every earlier flush, and a full merge
  // folds all inputs into the highest file_id.
  if (!store->tables_.empty()) {
    uint64_t max_version = 0;
    Status st = store->tables_.back()->ForEach([&](const PathKey&, const ValueRecord& v) {
      max_version = std::max(max_version, v.version);
    });
    if (!st.ok()) return st;
    store->next_version_ = max_version + 1;
  }

  std::filesystem::path wal_path = config.data_dir / kWalFileName;
  uint64_t last_seq = 0;
  if (std::filesystem::exists(wal_path)) {
    auto replay = WalReplay(wal_path);
    if (!replay.ok()) return replay.status();
    // Drop any torn tail so new appends land on a clean frame boundary.
    if (std::filesystem::file_size(wal_path) > replay->valid_bytes) {
      std::filesystem::resize_file(wal_path, replay->valid_bytes, ec);
      if (ec) return Status::IoError("truncate " + wal_path.string() + ": " + ec.message());
    }
    for (const WalRecord& rec : replay->records) {
      auto key = DecodePathKey(rec.key);
      if (!key.ok()) return key.status();
      auto value = DecodeValue(rec.value);
      if (!value.ok()) return value.status();
      store->next_version_ = std::max(store->next_version_, value->version + 1);
      store->memtable_->Insert(*key, std::move(*value));
    }
    if (!replay->records.empty()) last_seq = replay->records.back().seq;
  }
  auto wal = WalWriter::Open(wal_path, last_seq);
  if (!wal.ok()) return wal.status();
  store->wal_ = std::move(*wal);

  if (store->memtable_->approx_bytes() > config.memtable_threshold_bytes) {
    if (Status st = store->FlushLocked(); !st.ok()) return st;
  }
  return store;
}

Store::~Store() {
  if (!crashed_ && wal_.has_value()) wal_->Sync();  // best effort
}

Status Store::Put(const PathKey& key, const InodeRecord& inode,
                  std::optional<std::string> inline_data) {
  if (inline_data && inline_data->size() > config_.inline_threshold) {
    return Status::InlineTooLarge("inline data of " + std::to_string(inline_data->size()) +
                                  " bytes exceeds threshold " +
                                  std::to_string(config_.inline_threshold));
  }
  std::unique_lock lock(mutex_);
  puts_.fetch_add(1, std::memory_order_relaxed);
  ValueRecord value =
      inline_data ? ValueRecord::OfInlineData(inode, std::move(*inline_data), 0)
                  : ValueRecord::OfInode(inode, 0);
  return PutLocked(key, std::move(value));
}

Status Store::Delete(const PathKey& key) {
  std::unique_lock lock(mutex_);
  deletes_.fetch_add(1, std::memory_order_relaxed);
  return PutLocked(key, ValueRecord::Tombstone(0));
}

Status Store::PutLocked(const PathKey& key, ValueRecord value) {
  value.version = next_version_++;

  WalRecord rec;
  rec.seq = wal_->last_seq() + 1;
  rec.key = key.Encode();
  rec.value = EncodeValue(value);
  if (auto appended = wal_->Append(rec); !appended.ok()) return appended.status();
  if (config_.sync_every_write) {
    if (Status st = wal_->Sync(); !st.ok()) return st;
  }

  if (warm_cache_.has_value()) warm_dirty_.insert(rec.key);
  auto outcome = memtable_->Insert(key, std::move(value));

  if (outcome == MemTable::InsertOutcome::kOkThresholdReached) {
    if (Status st = FlushLocked(); !st.ok()) return st;
    if (tables_.size() >= config_.max_tables_before_compact) {
      if (Status st = CompactLocked(); !st.ok()) return st;
    }
  }
  return Status::Ok();
}

Result<GetResult> Store::Get(const PathKey& key) {
  std::shared_lock lock(mutex_);
  gets_.fetch_add(1, std::memory_order_relaxed);
  return GetLocked(key);
}

Result<GetResult> Store::GetLocked(const PathKey& key) {
  GetResult result;

  if (const ValueRecord* v = memtable_->Get(key); v != nullptr) {
    result.cost = GetCost{ServeTier::kMemtable, 0};
    if (!v->is_tombstone()) result.record = FoundRecord{*v->inode, v->inline_data, v->version};
    return result;
  }

  // The warm cache answers authoritatively for any key not written (or
  // flushed) after the load; absence from it means absence from every
  // SSTable.
  if (warm_cache_.has_value() && !warm_dirty_.contains(key.Encode())) {
    result.cost = GetCost{ServeTier::kWarm, 0};
    auto it = warm_cache_->find(key);
    if (it != warm_cache_->end() && !it->second.is_tombstone()) {
      result.record = FoundRecord{*it->second.inode, it->second.inline_data, it->second.version};
    }
    return result;
  }

  uint64_t blocks = 0;
  for (auto it = tables_.rbegin(); it != tables_.rend(); ++it) {
    auto outcome = (*it)->Get(key);
    if (!outcome.ok()) return outcome.status();
    blocks += outcome->blocks_read;
    if (outcome->value.has_value()) {
      sstable_blocks_read_.fetch_add(blocks, std::memory_order_relaxed);
      result.cost = GetCost{ServeTier::kSstable, blocks};
      if (!outcome->value->is_tombstone()) {
        result.record =
            FoundRecord{*outcome->value->inode, outcome->value->inline_data, outcome->value->version};
      }
      return result;
    }
  }
  sstable_blocks_read_.fetch_add(blocks, std::memory_order_relaxed);
  result.cost = GetCost{ServeTier::kSstable, blocks};
  return result;
}

Result<std::vector<std::pair<std::string, InodeRecord>>> Store::ScanDir(
    const std::string& parent_path) {
  std::shared_lock lock(mutex_);

  // First writer wins per name, walking components newest to oldest.
  std::map<std::string, std::optional<InodeRecord>> decided;
  for (auto it = memtable_->LowerBoundParent(parent_path); it != memtable_->end(); ++it) {
    if (it->first.parent_path != parent_path) break;
    decided.try_emplace(it->first.name,
                        it->second.is_tombstone() ? std::nullopt
                                                  : std::optional<InodeRecord>(*it->second.inode));
  }
  for (auto t = tables_.rbegin(); t != tables_.rend(); ++t) {
    auto scan = (*t)->ScanParent(parent_path);
    if (!scan.ok()) return scan.status();
    sstable_blocks_read_.fetch_add(scan->blocks_read, std::memory_order_relaxed);
    for (const auto& [key, value] : scan->entries) {
      decided.try_emplace(key.name, value.is_tombstone()
                                        ? std::nullopt
                                        : std::optional<InodeRecord>(*value.inode));
    }
  }

  std::vector<std::pair<std::string, InodeRecord>> out;
  for (auto& [name, inode] : decided) {
    if (inode.has_value()) out.emplace_back(name, std::move(*inode));
  }
  return out;
}

Status Store::Flush() {
  std::unique_lock lock(mutex_);
  return FlushLocked();
}

Status Store::FlushLocked() {
  if (memtable_->empty()) return Status::Ok();

  if (Status st = wal_->Sync(); !st.ok()) return st;

  auto entries = memtable_->Freeze();
  uint64_t file_id = next_file_id_++;
  SstableConfig table_config{config_.block_size, config_.bloom_bits_per_key,
                             config_.bloom_hashes};
  std::filesystem::path path = config_.data_dir / SstableFileName(file_id);
  if (Status st = BuildSstable(path, entries, table_config); !st.ok()) return st;
  auto table = SstableReader::Open(path, file_id);
  if (!table.ok()) return table.status();
  tables_.push_back(std::move(*table));
  if (Status st = WriteManifestLocked(); !st.ok()) return st;

  // Flushed keys leave the MemTable for a table the warm cache has never
  // seen, so they must bypass it from now on.
  if (warm_cache_.has_value()) {
    for (const auto& [key, value] : entries) warm_dirty_.insert(key.Encode());
  }

  std::error_code ec;
  std::filesystem::remove(config_.data_dir / kWalFileName, ec);
  if (ec) return Status::IoError("remove wal: " + ec.message());
  memtable_ = std::make_unique<MemTable>(config_.memtable_threshold_bytes);
  if (Status st = OpenFreshWalLocked(); !st.ok()) return st;

  flushes_.fetch_add(1, std::memory_order_relaxed);
  return Status::Ok();
}

Status Store::Compact() {
  std::unique_lock lock(mutex_);
  return CompactLocked();
}

Status Store::CompactLocked() {
  if (Status st = FlushLocked(); !st.ok()) return st;
  if (tables_.empty()) return Status::Ok();

  uint64_t file_id = next_file_id_++;
  SstableConfig table_config{config_.block_size, config_.bloom_bits_per_key,
                             config_.bloom_hashes};
  std::filesystem::path path = config_.data_dir / SstableFileName(file_id);
  auto written = MergeCompact(tables_, /*drop_tombstones=*/true, path, table_config);
  if (!written.ok()) return written.status();

  std::vector<std::shared_ptr<SstableReader>> old_tables = std::move(tables_);
  tables_.clear();
  if (*written > 0) {
    auto table = SstableReader::Open(path, file_id);
    if (!table.ok()) return table.status();
    tables_.push_back(std::move(*table));
  }
  if (Status st = WriteManifestLocked(); !st.ok()) return st;

  for (const auto& table : old_tables) {
    std::error_code ec;
    std::filesystem::remove(config_.data_dir / SstableFileName(table->file_id()), ec);
  }
  compactions_.fetch_add(1, std::memory_order_relaxed);
  return Status::Ok();
}

Status Store::WriteManifestLocked() const {
  std::filesystem::path manifest = config_.data_dir / kManifestFileName;
  std::filesystem::path tmp = manifest;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) return Status::IoError("cannot create " + tmp.string());
    for (const auto& table : tables_) out << table->file_id() << "\n";
    out.flush();
    if (!out) return Status::IoError("write failed on " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, manifest, ec);
  if (ec) return Status::IoError("rename manifest: " + ec.message());
  return Status::Ok();
}

Status Store::OpenFreshWalLocked() {
  auto wal = WalWriter::Open(config_.data_dir / kWalFileName, 0);
  if (!wal.ok()) return wal.status();
  wal_ = std::move(*wal);
  return Status::Ok();
}

Result<uint64_t> Store::WarmLoad() {
  std::unique_lock lock(mutex_);
  std::map<PathKey, ValueRecord> cache;
  for (const auto& table : tables_) {  // oldest first; later tables overwrite
    Status st = table->ForEach(
        [&](const PathKey& key, const ValueRecord& value) { cache[key] = value; });
    if (!st.ok()) return st;
  }
  uint64_t live = 0;
  for (const auto& [key, value] : cache) {
    if (!value.is_tombstone()) live++;
  }
  warm_cache_ = std::move(cache);
  warm_dirty_.clear();
  return live;
}

StoreCounters Store::counters() const {
  StoreCounters c;
  c.puts = puts_.load(std::memory_order_relaxed);
  c.deletes = deletes_.load(std::memory_order_relaxed);
  c.gets = gets_.load(std::memory_order_relaxed);
  c.flushes = flushes_.load(std::memory_order_relaxed);
  c.compactions = compactions_.load(std::memory_order_relaxed);
  c.sstable_blocks_read = sstable_blocks_read_.load(std::memory_order_relaxed);
  return c;
}

size_t Store::sstable_count() const {
  std::shared_lock lock(mutex_);
  return tables_.size();
}

bool Store::warm_loaded() const {
  std::shared_lock lock(mutex_);
  return warm_cache_.has_value();
}

void Store::SimulateCrash() {
  std::unique_lock lock(mutex_);
  if (wal_.has_value()) wal_->Abandon();
  crashed_ = true;
}

}  // namespace metacache
