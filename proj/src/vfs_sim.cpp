#include "metacache/vfs_sim.hpp"

namespace metacache {

const ICache::Entry* ICache::Get(const PathKey& key) {
  auto it = index_.find(key.Encode());
  if (it == index_.end()) return nullptr;
  items_.splice(items_.begin(), items_, it->second);
  return &items_.front().second;
}

void ICache::Insert(const PathKey& key, Entry entry) {
  if (capacity_ == 0) return;
  std::string encoded = key.Encode();
  auto it = index_.find(encoded);
  if (it != index_.end()) {
    it->second->second = std::move(entry);
    items_.splice(items_.begin(), items_, it->second);
    return;
  }
  items_.emplace_front(encoded, std::move(entry));
  index_[encoded] = items_.begin();
  if (items_.size() > capacity_) {
    index_.erase(items_.back().first);
    items_.pop_back();
  }
}

void ICache::Evict(const PathKey& key) {
  auto it = index_.find(key.Encode());
  if (it == index_.end()) return;
  items_.erase(it->second);
  index_.erase(it);
}

Result<std::unique_ptr<Simulator>> Simulator::Boot(const SimConfig& config, Store& store) {
  auto sim = std::unique_ptr<Simulator>(new Simulator(config, store));

  PathKey root{"/", ""};
  auto existing = store.Get(root);
  if (!existing.ok()) return existing.status();
  if (!existing->record.has_value()) {
    InodeRecord root_inode;
    root_inode.inode_number = 1;
    root_inode.file_type = FileType::kDirectory;
    root_inode.permissions = 0755;
    root_inode.link_count = 2;
    if (Status st = store.Put(root, root_inode); !st.ok()) return st;
  }

  if (config.metacache_enabled && config.warm_on_boot) {
    auto loaded = store.WarmLoad();
    if (!loaded.ok()) return loaded.status();
    sim->warm_loaded_entries_ = *loaded;
  }
  return sim;
}

SimCounters Simulator::counters() const {
  SimCounters c;
  c.icache_hits = icache_hits_;
  c.metacache_hits = metacache_hits_;
  c.disk_fallbacks = disk_fallbacks_;
  c.block_reads = disk_.block_reads();
  c.block_writes = disk_.block_writes();
  c.seeks = disk_.seeks();
  c.cost_units = disk_.cost_units();
  return c;
}

void Simulator::ChargeRam(LookupResult* lr) {
  uint64_t cost = disk_.ChargeRamHit();
  if (lr != nullptr) lr->cost_units += cost;
}

void Simulator::ChargeBlockReads(uint64_t blocks, LookupResult* lr) {
  uint64_t cost = disk_.ChargeBlockReads(blocks);
  if (lr != nullptr) {
    lr->blocks_read += blocks;
    lr->cost_units += cost;
  }
}

void Simulator::ChargeBlockWrites(uint64_t blocks) { disk_.ChargeBlockWrites(blocks); }

void Simulator::ChargeSeek(LookupResult* lr) {
  uint64_t cost = disk_.ChargeSeek();
  if (lr != nullptr) lr->cost_units += cost;
}

Result<Simulator::Resolved> Simulator::Lookup(const std::string& path) {
  auto key = SplitPath(path);
  if (!key.ok()) return key.status();

  if (const ICache::Entry* hit = icache_.Get(*key); hit != nullptr) {
    Resolved r{hit->inode, hit->has_inline, LookupResult{LookupSource::kIcache, 0, 0}};
    icache_hits_++;
    ChargeRam(&r.lookup);
    return r;
  }

  auto got = store_.Get(*key);
  if (!got.ok()) return got.status();

  if (!got->record.has_value()) {
    // Failed lookups still do the work of looking.
    LookupResult lr{LookupSource::kDisk, 0, 0};
    if (!config_.metacache_enabled) {
      ChargeBlockReads(BaselineLookupBlocks(path), &lr);
      ChargeSeek(&lr);
    } else if (got->cost.blocks_read > 0) {
      ChargeBlockReads(got->cost.blocks_read, &lr);
      ChargeSeek(&lr);
    } else {
      ChargeRam(&lr);
    }
    return Status::NotFound(path);
  }

  Resolved r;
  r.inode = got->record->inode;
  r.has_inline = got->record->inline_data.has_value();

  if (!config_.metacache_enabled) {
    // The cache layer is switched off: a miss in the I-cache walks the
    // on-disk directory chain no matter where the record physically lives.
    r.lookup.source = LookupSource::kDisk;
    disk_fallbacks_++;
    ChargeBlockReads(BaselineLookupBlocks(path), &r.lookup);
    ChargeSeek(&r.lookup);
  } else if (got->cost.tier == ServeTier::kMemtable || got->cost.tier == ServeTier::kWarm) {
    r.lookup.source = LookupSource::kMetacache;
    metacache_hits_++;
    ChargeRam(&r.lookup);
  } else {
    r.lookup.source = LookupSource::kDisk;
    disk_fallbacks_++;
    ChargeBlockReads(got->cost.blocks_read, &r.lookup);
    ChargeSeek(&r.lookup);
  }

  icache_.Insert(*key, ICache::Entry{r.inode, r.has_inline});
  return r;
}

Result<Simulator::StatOutcome> Simulator::Stat(const std::string& path) {
  auto resolved = Lookup(path);
  if (!resolved.ok()) return resolved.status();
  return StatOutcome{resolved->inode, resolved->lookup};
}

Status Simulator::Create(const std::string& path, const InodeRecord& inode,
                         const std::optional<std::string>& payload) {
  auto key = SplitPath(path);
  if (!key.ok()) return key.status();

  if (path != "/") {
    auto parent = Lookup(key->parent_path);
    if (!parent.ok()) return parent.status();
    if (parent->inode.file_type != FileType::kDirectory) {
      return Status::NotFound("parent is not a directory: " + key->parent_path);
    }
  }

  bool inline_it = payload.has_value() && payload->size() <= config_.inline_threshold;
  Status st = inline_it ? store_.Put(*key, inode, *payload) : store_.Put(*key, inode);
  if (!st.ok()) return st;
  ChargeRam(nullptr);  // buffered metadata write

  if (payload.has_value() && !inline_it) {
    uint64_t blocks = (payload->size() + config_.block_size - 1) / config_.block_size;
    ChargeBlockWrites(blocks);
    ChargeSeek(nullptr);
  }

  icache_.Insert(*key, ICache::Entry{inode, inline_it});
  return Status::Ok();
}

Result<Simulator::ReadOutcome> Simulator::OpenRead(const std::string& path) {
  auto resolved = Lookup(path);
  if (!resolved.ok()) return resolved.status();
  if (resolved->inode.file_type == FileType::kDirectory) {
    return Status::IsDirectory(path);
  }

  ReadOutcome out;
  out.bytes_len = resolved->inode.size_bytes;
  out.lookup = resolved->lookup;
  if (!resolved->has_inline && out.bytes_len > 0) {
    uint64_t blocks = (out.bytes_len + config_.block_size - 1) / config_.block_size;
    ChargeBlockReads(blocks, &out.lookup);
    ChargeSeek(&out.lookup);
  }
  return out;
}

Result<std::vector<DirEntry>> Simulator::ListDir(const std::string& path) {
  auto resolved = Lookup(path);
  if (!resolved.ok()) return resolved.status();
  if (resolved->inode.file_type != FileType::kDirectory) {
    return Status::NotFound(path + " is not a directory");
  }
  auto children = store_.ScanDir(path);
  if (!children.ok()) return children.status();
  std::vector<DirEntry> out;
  out.reserve(children->size());
  for (const auto& [name, inode] : *children) {
    out.push_back(DirEntry{PathKey{path, name}, inode.inode_number});
  }
  return out;
}

Status Simulator::Unlink(const std::string& path) {
  auto resolved = Lookup(path);
  if (!resolved.ok()) return resolved.status();

  auto key = SplitPath(path);
  if (!key.ok()) return key.status();
  if (Status st = store_.Delete(*key); !st.ok()) return st;
  ChargeRam(nullptr);  // buffered tombstone write
  icache_.Evict(*key);
  return Status::Ok();
}

}  // namespace metacache
