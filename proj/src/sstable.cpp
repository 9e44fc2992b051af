#include "metacache/sstable.hpp"

#include <zlib.h>

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>

#include "metacache/codec.hpp"
#include "metacache/coding.hpp"

namespace metacache {

namespace {

constexpr char kMagic[4] = {'M', 'C', 'S', 'S'};
constexpr uint8_t kFormatVersion = 0x01;
constexpr size_t kHeaderSize = 5;
constexpr size_t kFooterSize = 8 + 8 + 4 + 4;

uint32_t Crc32(std::string_view data) {
  return static_cast<uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size())));
}

}  // namespace

std::string SstableFileName(uint64_t file_id) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%010" PRIu64 ".sst", file_id);
  return buf;
}

Status BuildSstable(const std::filesystem::path& path,
                    std::span<const std::pair<PathKey, ValueRecord>> entries,
                    const SstableConfig& config) {
  if (entries.empty()) return Status::UnsortedInput("entry list must be non-empty");

  std::vector<std::string> encoded_keys;
  encoded_keys.reserve(entries.size());
  for (const auto& [key, value] : entries) encoded_keys.push_back(key.Encode());
  for (size_t i = 1; i < encoded_keys.size(); i++) {
    if (encoded_keys[i - 1] >= encoded_keys[i]) {
      return Status::UnsortedInput("entries must be strictly sorted by key");
    }
  }

  BloomFilter bloom(entries.size(), config.bloom_bits_per_key, config.bloom_hashes);
  for (const auto& k : encoded_keys) bloom.Add(k);

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
  if (!out) return Status::IoError("cannot create " + tmp.string());

  std::string header(kMagic, 4);
  header.push_back(static_cast<char>(kFormatVersion));
  out.write(header.data(), static_cast<std::streamsize>(header.size()));

  // Data blocks: pack pairs until adding one would overflow block_size.
  std::vector<IndexEntry> index;
  std::string block;
  uint64_t file_offset = kHeaderSize;
  std::string first_key_in_block;
  auto flush_block = [&] {
    if (block.empty()) return;
    index.push_back(IndexEntry{first_key_in_block, file_offset});
    out.write(block.data(), static_cast<std::streamsize>(block.size()));
    file_offset += block.size();
    block.clear();
  };
  for (size_t i = 0; i < entries.size(); i++) {
    std::string pair;
    const std::string& ekey = encoded_keys[i];
    std::string evalue = EncodeValue(entries[i].second);
    pair.reserve(8 + ekey.size() + evalue.size());
    PutFixed32(&pair, static_cast<uint32_t>(ekey.size()));
    pair.append(ekey);
    PutFixed32(&pair, static_cast<uint32_t>(evalue.size()));
    pair.append(evalue);
    if (!block.empty() && block.size() + pair.size() > config.block_size) flush_block();
    if (block.empty()) first_key_in_block = ekey;
    block.append(pair);
  }
  flush_block();

  std::string sections;
  PutFixed64(&sections, bloom.m_bits());
  sections.push_back(static_cast<char>(config.bloom_hashes));
  sections.append(bloom.bit_bytes());
  uint64_t bloom_offset = file_offset;
  uint64_t index_offset = file_offset + sections.size();
  PutFixed32(&sections, static_cast<uint32_t>(index.size()));
  for (const auto& e : index) {
    PutFixed32(&sections, static_cast<uint32_t>(e.first_key.size()));
    sections.append(e.first_key);
    PutFixed64(&sections, e.offset);
  }
  out.write(sections.data(), static_cast<std::streamsize>(sections.size()));

  std::string footer;
  PutFixed64(&footer, bloom_offset);
  PutFixed64(&footer, index_offset);
  PutFixed32(&footer, Crc32(sections));
  footer.append(kMagic, 4);
  out.write(footer.data(), static_cast<std::streamsize>(footer.size()));
  out.flush();
  if (!out) return Status::IoError("write failed on " + tmp.string());
  out.close();

  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) return Status::IoError("rename " + tmp.string() + ": " + ec.message());
  return Status::Ok();
}

Result<std::shared_ptr<SstableReader>> SstableReader::Open(const std::filesystem::path& path,
                                                           uint64_t file_id) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return Status::IoError("cannot open " + path.string());
  in.seekg(0, std::ios::end);
  uint64_t file_size = static_cast<uint64_t>(in.tellg());
  if (file_size < kHeaderSize + kFooterSize) {
    return Status::CorruptTable(path.string() + ": too small");
  }

  char header[kHeaderSize];
  in.seekg(0);
  in.read(header, kHeaderSize);
  if (!in || std::memcmp(header, kMagic, 4) != 0 ||
      static_cast<uint8_t>(header[4]) != kFormatVersion) {
    return Status::CorruptTable(path.string() + ": bad header");
  }

  char footer[kFooterSize];
  in.seekg(static_cast<std::streamoff>(file_size - kFooterSize));
  in.read(footer, kFooterSize);
  if (!in || std::memcmp(footer + 20, kMagic, 4) != 0) {
    return Status::CorruptTable(path.string() + ": bad footer");
  }
  uint64_t bloom_offset = DecodeFixed64(footer);
  uint64_t index_offset = DecodeFixed64(footer + 8);
  uint32_t sections_crc = DecodeFixed32(footer + 16);
  if (bloom_offset < kHeaderSize || index_offset < bloom_offset ||
      index_offset > file_size - kFooterSize) {
    return Status::CorruptTable(path.string() + ": bad section offsets");
  }

  std::string sections(file_size - kFooterSize - bloom_offset, '\0');
  in.seekg(static_cast<std::streamoff>(bloom_offset));
  in.read(sections.data(), static_cast<std::streamsize>(sections.size()));
  if (!in) return Status::IoError("read failed on " + path.string());
  if (Crc32(sections) != sections_crc) {
    return Status::CorruptTable(path.string() + ": section checksum mismatch");
  }

  auto table = std::shared_ptr<SstableReader>(new SstableReader());
  table->path_ = path;
  table->file_id_ = file_id;
  table->bloom_offset_ = bloom_offset;

  ByteReader r(sections);
  uint64_t m_bits = 0;
  uint8_t k = 0;
  std::string_view bloom_bytes;
  if (!r.ReadU64(&m_bits) || !r.ReadU8(&k) || !r.ReadBytes((m_bits + 7) / 8, &bloom_bytes)) {
    return Status::CorruptTable(path.string() + ": truncated bloom section");
  }
  // The bloom section must end exactly where the index begins.
  if (bloom_offset + r.position() != index_offset) {
    return Status::CorruptTable(path.string() + ": bloom/index sections misaligned");
  }
  auto bloom = BloomFilter::FromParts(m_bits, k, std::string(bloom_bytes));
  if (!bloom.ok()) return bloom.status();
  table->bloom_ = std::move(*bloom);

  uint32_t block_count = 0;
  if (!r.ReadU32(&block_count)) return Status::CorruptTable(path.string() + ": truncated index");
  table->index_.reserve(block_count);
  uint64_t prev_offset = 0;
  for (uint32_t i = 0; i < block_count; i++) {
    uint32_t key_len = 0;
    std::string_view key;
    uint64_t offset = 0;
    if (!r.ReadU32(&key_len) || !r.ReadBytes(key_len, &key) || !r.ReadU64(&offset)) {
      return Status::CorruptTable(path.string() + ": truncated index entry");
    }
    if (offset < kHeaderSize || offset >= bloom_offset || (i > 0 && offset <= prev_offset)) {
      return Status::CorruptTable(path.string() + ": bad index offset");
    }
    table->index_.push_back(IndexEntry{std::string(key), offset});
    prev_offset = offset;
  }
  if (!r.exhausted()) return Status::CorruptTable(path.string() + ": trailing index bytes");
  if (table->index_.empty()) return Status::CorruptTable(path.string() + ": no data blocks");

  table->min_key_ = table->index_.front().first_key;

  uint64_t max_extent = 0;
  for (size_t i = 0; i + 1 < table->index_.size(); i++) {
    max_extent = std::max(max_extent, table->index_[i + 1].offset - table->index_[i].offset);
  }
  max_extent = std::max(max_extent, bloom_offset - table->index_.back().offset);
  table->block_size_ = max_extent;

  // Last key of the last block gives max_key.
  auto last_block = table->ReadBlock(table->index_.size() - 1);
  if (!last_block.ok()) return last_block.status();
  std::string last_key;
  Status st = table->ParseBlock(*last_block, [&](std::string_view key, std::string_view) {
    last_key.assign(key);
  });
  if (!st.ok()) return st;
  if (last_key.empty()) return Status::CorruptTable(path.string() + ": empty final block");
  table->max_key_ = last_key;

  return table;
}

std::pair<uint64_t, uint64_t> SstableReader::BlockExtent(size_t block_index) const {
  uint64_t begin = index_[block_index].offset;
  uint64_t end =
      block_index + 1 < index_.size() ? index_[block_index + 1].offset : bloom_offset_;
  return {begin, end};
}

Result<std::string> SstableReader::ReadBlock(size_t block_index) const {
  auto [begin, end] = BlockExtent(block_index);
  std::ifstream in(path_, std::ios::binary);
  if (!in) return Status::IoError("cannot open " + path_.string());
  std::string block(end - begin, '\0');
  in.seekg(static_cast<std::streamoff>(begin));
  in.read(block.data(), static_cast<std::streamsize>(block.size()));
  if (!in) return Status::IoError("block read failed on " + path_.string());
  return block;
}

Status SstableReader::ParseBlock(
    const std::string& block,
    const std::function<void(std::string_view, std::string_view)>& fn) const {
  ByteReader r(block);
  while (!r.exhausted()) {
    uint32_t key_len = 0, value_len = 0;
    std::string_view key, value;
    if (!r.ReadU32(&key_len) || !r.ReadBytes(key_len, &key) || !r.ReadU32(&value_len) ||
        !r.ReadBytes(value_len, &value)) {
      return Status::CorruptTable(path_.string() + ": malformed data block");
    }
    fn(key, value);
  }
  return Status::Ok();
}

Result<SstableReader::GetOutcome> SstableReader::Get(const PathKey& key) const {
  GetOutcome out;
  std::string encoded = key.Encode();
  if (encoded < min_key_ || encoded > max_key_) return out;
  if (!bloom_->MayContain(encoded)) return out;

  // Last block whose first key <= encoded.
  auto it = std::upper_bound(index_.begin(), index_.end(), encoded,
                             [](const std::string& k, const IndexEntry& e) { return k < e.first_key; });
  if (it == index_.begin()) return out;
  size_t block_index = static_cast<size_t>(std::distance(index_.begin(), it)) - 1;

  auto block = ReadBlock(block_index);
  if (!block.ok()) return block.status();
  out.blocks_read = 1;

  std::string found;
  bool have = false;
  Status st = ParseBlock(*block, [&](std::string_view k, std::string_view v) {
    if (k == encoded) {
      found.assign(v);
      have = true;
    }
  });
  if (!st.ok()) return st;
  if (have) {
    auto value = DecodeValue(found);
    if (!value.ok()) return Status::CorruptTable(path_.string() + ": undecodable value");
    out.value = std::move(*value);
  }
  return out;
}

Result<SstableReader::ScanOutcome> SstableReader::ScanParent(const std::string& parent) const {
  ScanOutcome out;
  // Sibling range in encoded space: [parent ++ 0x00, parent ++ 0x01).
  std::string low = parent;
  low.push_back('\0');
  std::string high = parent;
  high.push_back('\x01');
  if (high <= min_key_ || low > max_key_) return out;

  auto it = std::upper_bound(index_.begin(), index_.end(), low,
                             [](const std::string& k, const IndexEntry& e) { return k < e.first_key; });
  size_t block_index = it == index_.begin()
                           ? 0
                           : static_cast<size_t>(std::distance(index_.begin(), it)) - 1;

  for (; block_index < index_.size(); block_index++) {
    if (index_[block_index].first_key >= high) break;
    auto block = ReadBlock(block_index);
    if (!block.ok()) return block.status();
    out.blocks_read++;
    Status st = ParseBlock(*block, [&](std::string_view k, std::string_view v) {
      if (k < std::string_view(low) || k >= std::string_view(high)) return;
      auto key = DecodePathKey(k);
      auto value = DecodeValue(v);
      if (key.ok() && value.ok()) out.entries.emplace_back(std::move(*key), std::move(*value));
    });
    if (!st.ok()) return st;
  }
  return out;
}

Status SstableReader::ForEach(
    const std::function<void(const PathKey&, const ValueRecord&)>& fn) const {
  for (size_t i = 0; i < index_.size(); i++) {
    auto block = ReadBlock(i);
    if (!block.ok()) return block.status();
    Status corrupt = Status::Ok();
    Status st = ParseBlock(*block, [&](std::string_view k, std::string_view v) {
      auto key = DecodePathKey(k);
      auto value = DecodeValue(v);
      if (!key.ok() || !value.ok()) {
        corrupt = Status::CorruptTable(path_.string() + ": undecodable pair");
        return;
      }
      fn(*key, *value);
    });
    if (!st.ok()) return st;
    if (!corrupt.ok()) return corrupt;
  }
  return Status::Ok();
}

Result<uint64_t> SstableReader::EntryCount() const {
  std::call_once(count_once_, [&] {
    uint64_t n = 0;
    count_status_ = ForEach([&](const PathKey&, const ValueRecord&) { n++; });
    entry_count_ = n;
  });
  if (!count_status_.ok()) return count_status_;
  return entry_count_;
}

Result<uint64_t> MergeCompact(const std::vector<std::shared_ptr<SstableReader>>& tables,
                              bool drop_tombstones, const std::filesystem::path& out_path,
                              const SstableConfig& config) {
  if (tables.empty()) return Status::UnsortedInput("no input tables");

  // Newest-wins merge: process inputs oldest to newest and let later tables
  // overwrite. The merged set is collected in memory before the write.
  std::vector<const SstableReader*> ordered;
  ordered.reserve(tables.size());
  for (const auto& t : tables) ordered.push_back(t.get());
  std::sort(ordered.begin(), ordered.end(),
            [](const SstableReader* a, const SstableReader* b) { return a->file_id() < b->file_id(); });

  std::map<PathKey, ValueRecord> merged;
  for (const SstableReader* table : ordered) {
    Status st = table->ForEach(
        [&](const PathKey& key, const ValueRecord& value) { merged[key] = value; });
    if (!st.ok()) return st;
  }

  std::vector<std::pair<PathKey, ValueRecord>> entries;
  entries.reserve(merged.size());
  for (auto& [key, value] : merged) {
    if (drop_tombstones && value.is_tombstone()) continue;
    entries.emplace_back(key, std::move(value));
  }
  if (entries.empty()) return uint64_t{0};

  Status st = BuildSstable(out_path, entries, config);
  if (!st.ok()) return st;
  return static_cast<uint64_t>(entries.size());
}

}  // namespace metacache
