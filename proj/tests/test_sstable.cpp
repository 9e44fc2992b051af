#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <map>

#include "metacache/codec.hpp"
#include "metacache/coding.hpp"
#include "metacache/sstable.hpp"
#include "test_util.hpp"

using namespace metacache;
using metacache::test::RandomKeyFrom;
using metacache::test::RandomValueFrom;
using metacache::test::TempDir;

namespace {

std::vector<std::pair<PathKey, ValueRecord>> SortedEntries(Rng& rng, size_t n,
                                                           size_t num_parents = 50) {
  std::map<PathKey, ValueRecord> m;
  while (m.size() < n) {
    m[RandomKeyFrom(rng, num_parents)] = RandomValueFrom(rng, 64);
  }
  return {m.begin(), m.end()};
}

}  // namespace

TEST_CASE("file naming is zero-padded to 10 digits") {
  CHECK(SstableFileName(1) == "0000000001.sst");
  CHECK(SstableFileName(1234567890) == "1234567890.sst");
}

TEST_CASE("a single entry yields a single index block") {
  TempDir dir;
  std::vector<std::pair<PathKey, ValueRecord>> entries = {
      {*MakePathKey("/d", "only"), ValueRecord::Tombstone(1)}};
  auto path = dir.Sub("0000000001.sst");
  REQUIRE(BuildSstable(path, entries, SstableConfig{}).ok());
  auto table = SstableReader::Open(path, 1);
  REQUIRE(table.ok());
  CHECK((*table)->sparse_index().size() == 1);
  CHECK((*table)->min_key() == entries[0].first.Encode());
  CHECK((*table)->max_key() == entries[0].first.Encode());
  auto count = (*table)->EntryCount();
  REQUIRE(count.ok());
  CHECK(*count == 1);
}

TEST_CASE("unsorted or duplicated input is rejected") {
  TempDir dir;
  std::vector<std::pair<PathKey, ValueRecord>> bad = {
      {*MakePathKey("/d", "b"), ValueRecord::Tombstone(1)},
      {*MakePathKey("/d", "a"), ValueRecord::Tombstone(2)}};
  CHECK(BuildSstable(dir.Sub("x.sst"), bad, SstableConfig{}).code() ==
        ErrorCode::kUnsortedInput);

  std::vector<std::pair<PathKey, ValueRecord>> dup = {
      {*MakePathKey("/d", "a"), ValueRecord::Tombstone(1)},
      {*MakePathKey("/d", "a"), ValueRecord::Tombstone(2)}};
  CHECK(BuildSstable(dir.Sub("y.sst"), dup, SstableConfig{}).code() ==
        ErrorCode::kUnsortedInput);

  std::vector<std::pair<PathKey, ValueRecord>> empty;
  CHECK_FALSE(BuildSstable(dir.Sub("z.sst"), empty, SstableConfig{}).ok());
}

TEST_CASE("read-back sweep: every written key returns its value in exactly one block read") {
  Rng rng(20260809);
  TempDir dir;
  auto entries = SortedEntries(rng, 10000);
  auto path = dir.Sub("0000000001.sst");
  REQUIRE(BuildSstable(path, entries, SstableConfig{}).ok());
  auto table = SstableReader::Open(path, 1);
  REQUIRE(table.ok());

  for (const auto& [key, value] : entries) {
    auto got = (*table)->Get(key);
    REQUIRE(got.ok());
    REQUIRE(got->value.has_value());
    CHECK(*got->value == value);
    CHECK(got->blocks_read == 1);
  }
  auto count = (*table)->EntryCount();
  REQUIRE(count.ok());
  CHECK(*count == entries.size());
}

TEST_CASE("key below min or above max costs zero reads") {
  Rng rng(1);
  TempDir dir;
  std::vector<std::pair<PathKey, ValueRecord>> entries = {
      {*MakePathKey("/m", "k"), RandomValueFrom(rng)}};
  auto path = dir.Sub("t.sst");
  REQUIRE(BuildSstable(path, entries, SstableConfig{}).ok());
  auto table = SstableReader::Open(path, 1);
  REQUIRE(table.ok());

  auto below = (*table)->Get(*MakePathKey("/a", "k"));
  REQUIRE(below.ok());
  CHECK_FALSE(below->value.has_value());
  CHECK(below->blocks_read == 0);

  auto above = (*table)->Get(*MakePathKey("/z", "k"));
  REQUIRE(above.ok());
  CHECK_FALSE(above->value.has_value());
  CHECK(above->blocks_read == 0);
}

TEST_CASE("bloom rejection short-circuits with zero reads") {
  Rng rng(2);
  TempDir dir;
  auto entries = SortedEntries(rng, 2000, 10);
  auto path = dir.Sub("t.sst");
  REQUIRE(BuildSstable(path, entries, SstableConfig{}).ok());
  auto table = SstableReader::Open(path, 1);
  REQUIRE(table.ok());

  // Probe keys inside [min, max] that were never stored; bloom rejections
  // must not read, bloom false positives read exactly one block.
  uint64_t rejected = 0, block_reads = 0, probes = 0;
  for (int i = 0; i < 20000; i++) {
    PathKey probe{"/p5", "zz-absent-" + std::to_string(i)};
    std::string enc = probe.Encode();
    if (enc < (*table)->min_key() || enc > (*table)->max_key()) continue;
    probes++;
    auto got = (*table)->Get(probe);
    REQUIRE(got.ok());
    CHECK_FALSE(got->value.has_value());
    CHECK(got->blocks_read <= 1);
    block_reads += got->blocks_read;
    if (got->blocks_read == 0) rejected++;
  }
  REQUIRE(probes > 1000);
  // At 10 bits/key the false-positive rate is under 2%, so the vast
  // majority of absent probes must cost nothing.
  CHECK(rejected > probes * 95 / 100);
  CHECK(block_reads < probes * 5 / 100);
}

TEST_CASE("reopen yields identical metadata") {
  Rng rng(3);
  TempDir dir;
  auto entries = SortedEntries(rng, 3000);
  auto path = dir.Sub("t.sst");
  REQUIRE(BuildSstable(path, entries, SstableConfig{}).ok());

  auto first = SstableReader::Open(path, 7);
  REQUIRE(first.ok());
  auto second = SstableReader::Open(path, 7);
  REQUIRE(second.ok());

  CHECK((*first)->sparse_index() == (*second)->sparse_index());
  CHECK((*first)->bloom().bit_bytes() == (*second)->bloom().bit_bytes());
  CHECK((*first)->bloom().m_bits() == (*second)->bloom().m_bits());
  CHECK((*first)->bloom().num_hashes() == (*second)->bloom().num_hashes());
  CHECK((*first)->min_key() == (*second)->min_key());
  CHECK((*first)->max_key() == (*second)->max_key());
  auto c1 = (*first)->EntryCount();
  auto c2 = (*second)->EntryCount();
  REQUIRE(c1.ok());
  REQUIRE(c2.ok());
  CHECK(*c1 == *c2);
  CHECK(*c1 == entries.size());
}

TEST_CASE("a corrupted byte in the checksummed sections fails open") {
  Rng rng(4);
  TempDir dir;
  auto entries = SortedEntries(rng, 500);
  auto path = dir.Sub("t.sst");
  REQUIRE(BuildSstable(path, entries, SstableConfig{}).ok());

  // Find the bloom section start from the footer and flip a byte inside it.
  std::ifstream in(path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();
  uint64_t bloom_offset = DecodeFixed64(bytes.data() + bytes.size() - 24);
  std::string corrupted = bytes;
  corrupted[bloom_offset + 12] ^= 0x40;
  auto bad_path = dir.Sub("bad.sst");
  std::ofstream out(bad_path, std::ios::binary);
  out.write(corrupted.data(), static_cast<std::streamsize>(corrupted.size()));
  out.close();

  CHECK(SstableReader::Open(bad_path, 1).status().code() == ErrorCode::kCorruptTable);
}

TEST_CASE("truncated file fails open") {
  Rng rng(5);
  TempDir dir;
  auto entries = SortedEntries(rng, 100);
  auto path = dir.Sub("t.sst");
  REQUIRE(BuildSstable(path, entries, SstableConfig{}).ok());
  std::ifstream in(path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();

  auto bad_path = dir.Sub("cut.sst");
  std::ofstream out(bad_path, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
  out.close();
  CHECK_FALSE(SstableReader::Open(bad_path, 1).ok());
}

TEST_CASE("scan parent returns exactly the sibling range in order") {
  Rng rng(6);
  TempDir dir;
  auto entries = SortedEntries(rng, 5000, 20);
  auto path = dir.Sub("t.sst");
  REQUIRE(BuildSstable(path, entries, SstableConfig{}).ok());
  auto table = SstableReader::Open(path, 1);
  REQUIRE(table.ok());

  for (int p = 0; p < 20; p++) {
    std::string parent = "/p" + std::to_string(p);
    std::vector<std::pair<PathKey, ValueRecord>> expect;
    for (const auto& e : entries) {
      if (e.first.parent_path == parent) expect.push_back(e);
    }
    auto scan = (*table)->ScanParent(parent);
    REQUIRE(scan.ok());
    CHECK(scan->entries == expect);
  }
}

TEST_CASE("identity merge preserves the entry set") {
  Rng rng(7);
  TempDir dir;
  auto entries = SortedEntries(rng, 1000);
  auto path = dir.Sub("0000000001.sst");
  REQUIRE(BuildSstable(path, entries, SstableConfig{}).ok());
  auto table = SstableReader::Open(path, 1);
  REQUIRE(table.ok());

  auto merged_path = dir.Sub("0000000002.sst");
  auto written = MergeCompact({*table}, /*drop_tombstones=*/false, merged_path, SstableConfig{});
  REQUIRE(written.ok());
  CHECK(*written == entries.size());

  auto merged = SstableReader::Open(merged_path, 2);
  REQUIRE(merged.ok());
  std::vector<std::pair<PathKey, ValueRecord>> out;
  REQUIRE((*merged)
              ->ForEach([&](const PathKey& k, const ValueRecord& v) { out.emplace_back(k, v); })
              .ok());
  CHECK(out == entries);
}

TEST_CASE("newest file_id wins for duplicate keys") {
  TempDir dir;
  PathKey key = *MakePathKey("/d", "k");
  ValueRecord v_old = ValueRecord::Tombstone(1);
  ValueRecord v_new = ValueRecord::Tombstone(2);
  std::vector<std::pair<PathKey, ValueRecord>> e1 = {{key, v_old}};
  std::vector<std::pair<PathKey, ValueRecord>> e2 = {{key, v_new}};
  REQUIRE(BuildSstable(dir.Sub("0000000001.sst"), e1, SstableConfig{}).ok());
  REQUIRE(BuildSstable(dir.Sub("0000000002.sst"), e2, SstableConfig{}).ok());
  auto t1 = SstableReader::Open(dir.Sub("0000000001.sst"), 1);
  auto t2 = SstableReader::Open(dir.Sub("0000000002.sst"), 2);
  REQUIRE(t1.ok());
  REQUIRE(t2.ok());

  // Input order must not matter.
  auto merged_path = dir.Sub("0000000003.sst");
  auto written = MergeCompact({*t2, *t1}, /*drop_tombstones=*/false, merged_path, SstableConfig{});
  REQUIRE(written.ok());
  auto merged = SstableReader::Open(merged_path, 3);
  REQUIRE(merged.ok());
  auto got = (*merged)->Get(key);
  REQUIRE(got.ok());
  REQUIRE(got->value.has_value());
  CHECK(got->value->version == 2);
}

TEST_CASE("merge with tombstone dropping removes the key entirely") {
  Rng rng(8);
  TempDir dir;
  PathKey dead = *MakePathKey("/d", "dead");
  PathKey live = *MakePathKey("/d", "live");
  ValueRecord live_value = ValueRecord::OfInode(metacache::test::RandomInodeFrom(rng), 1);
  std::vector<std::pair<PathKey, ValueRecord>> e1 = {{dead, live_value}, {live, live_value}};
  std::map<PathKey, ValueRecord> m2 = {{dead, ValueRecord::Tombstone(5)}};
  std::vector<std::pair<PathKey, ValueRecord>> e2 = {m2.begin(), m2.end()};
  REQUIRE(BuildSstable(dir.Sub("0000000001.sst"), e1, SstableConfig{}).ok());
  REQUIRE(BuildSstable(dir.Sub("0000000002.sst"), e2, SstableConfig{}).ok());
  auto t1 = SstableReader::Open(dir.Sub("0000000001.sst"), 1);
  auto t2 = SstableReader::Open(dir.Sub("0000000002.sst"), 2);
  REQUIRE(t1.ok());
  REQUIRE(t2.ok());

  auto merged_path = dir.Sub("0000000003.sst");
  auto written = MergeCompact({*t1, *t2}, /*drop_tombstones=*/true, merged_path, SstableConfig{});
  REQUIRE(written.ok());
  CHECK(*written == 1);
  auto merged = SstableReader::Open(merged_path, 3);
  REQUIRE(merged.ok());
  std::vector<PathKey> keys;
  REQUIRE((*merged)
              ->ForEach([&](const PathKey& k, const ValueRecord&) { keys.push_back(k); })
              .ok());
  REQUIRE(keys.size() == 1);
  CHECK(keys[0] == live);
}

TEST_CASE("differential: merged table serves the same mapping as the layered inputs") {
  Rng rng(20260809);
  TempDir dir;
  for (int trial = 0; trial < 5; trial++) {
    // Build 3 tables with overlapping random contents; the model applies
    // them oldest to newest.
    std::map<PathKey, ValueRecord> model;
    std::vector<std::shared_ptr<SstableReader>> tables;
    for (uint64_t id = 1; id <= 3; id++) {
      auto entries = SortedEntries(rng, 300, 8);
      for (const auto& [k, v] : entries) model[k] = v;
      auto path = dir.Sub("trial" + std::to_string(trial) + "-" + SstableFileName(id));
      REQUIRE(BuildSstable(path, entries, SstableConfig{}).ok());
      auto table = SstableReader::Open(path, id);
      REQUIRE(table.ok());
      tables.push_back(*table);
    }
    auto merged_path = dir.Sub("trial" + std::to_string(trial) + "-merged.sst");
    auto written = MergeCompact(tables, /*drop_tombstones=*/false, merged_path, SstableConfig{});
    REQUIRE(written.ok());
    CHECK(*written == model.size());
    auto merged = SstableReader::Open(merged_path, 4);
    REQUIRE(merged.ok());

    std::map<PathKey, ValueRecord> out;
    REQUIRE(
        (*merged)->ForEach([&](const PathKey& k, const ValueRecord& v) { out[k] = v; }).ok());
    CHECK(out == model);
  }
}

TEST_CASE("merge of nothing but tombstones with dropping produces no file") {
  TempDir dir;
  std::vector<std::pair<PathKey, ValueRecord>> entries = {
      {*MakePathKey("/d", "a"), ValueRecord::Tombstone(1)}};
  REQUIRE(BuildSstable(dir.Sub("0000000001.sst"), entries, SstableConfig{}).ok());
  auto t = SstableReader::Open(dir.Sub("0000000001.sst"), 1);
  REQUIRE(t.ok());
  auto written = MergeCompact({*t}, /*drop_tombstones=*/true, dir.Sub("out.sst"), SstableConfig{});
  REQUIRE(written.ok());
  CHECK(*written == 0);
  CHECK_FALSE(std::filesystem::exists(dir.Sub("out.sst")));
}

TEST_CASE("oversized pairs get blocks of their own") {
  TempDir dir;
  Rng rng(9);
  // Inline payloads far beyond the block size.
  std::map<PathKey, ValueRecord> m;
  for (int i = 0; i < 5; i++) {
    InodeRecord ino = metacache::test::RandomInodeFrom(rng);
    m[*MakePathKey("/big", "f" + std::to_string(i))] =
        ValueRecord::OfInlineData(ino, std::string(10000, 'x'), i + 1);
  }
  std::vector<std::pair<PathKey, ValueRecord>> entries{m.begin(), m.end()};
  auto path = dir.Sub("t.sst");
  SstableConfig config;
  config.block_size = 4096;
  REQUIRE(BuildSstable(path, entries, config).ok());
  auto table = SstableReader::Open(path, 1);
  REQUIRE(table.ok());
  CHECK((*table)->sparse_index().size() == entries.size());
  for (const auto& [key, value] : entries) {
    auto got = (*table)->Get(key);
    REQUIRE(got.ok());
    REQUIRE(got->value.has_value());
    CHECK(*got->value == value);
    CHECK(got->blocks_read == 1);
  }
}
