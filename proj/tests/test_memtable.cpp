#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "metacache/codec.hpp"
#include "metacache/memtable.hpp"
#include "test_util.hpp"

using namespace metacache;
using metacache::test::RandomKeyFrom;
using metacache::test::RandomValueFrom;

namespace {

uint64_t EntryBytes(const PathKey& key, const ValueRecord& value) {
  return key.Encode().size() + EncodedValueSize(value);
}

}  // namespace

TEST_CASE("insert then get returns the inserted value") {
  MemTable mt(1 << 20);
  PathKey k = *MakePathKey("/d", "a");
  ValueRecord v = ValueRecord::Tombstone(1);
  CHECK(mt.Insert(k, v) == MemTable::InsertOutcome::kOk);
  REQUIRE(mt.Get(k) != nullptr);
  CHECK(*mt.Get(k) == v);
}

TEST_CASE("last write wins") {
  Rng rng(1);
  MemTable mt(1 << 20);
  PathKey k = *MakePathKey("/d", "a");
  ValueRecord v1 = RandomValueFrom(rng);
  ValueRecord v2 = RandomValueFrom(rng);
  mt.Insert(k, v1);
  mt.Insert(k, v2);
  REQUIRE(mt.Get(k) != nullptr);
  CHECK(*mt.Get(k) == v2);
}

TEST_CASE("empty table misses") {
  MemTable mt(100);
  CHECK(mt.Get(*MakePathKey("/d", "a")) == nullptr);
}

TEST_CASE("a tombstone is a value, not an absence") {
  Rng rng(2);
  MemTable mt(1 << 20);
  PathKey k = *MakePathKey("/d", "a");
  mt.Insert(k, RandomValueFrom(rng));
  mt.Insert(k, ValueRecord::Tombstone(9));
  REQUIRE(mt.Get(k) != nullptr);
  CHECK(mt.Get(k)->is_tombstone());
}

TEST_CASE("threshold fires on the insert that first exceeds it") {
  // Derive sizes with the codec: three entries, threshold set so exactly
  // the third insert crosses it.
  PathKey k1 = *MakePathKey("/d", "a1");
  PathKey k2 = *MakePathKey("/d", "a2");
  PathKey k3 = *MakePathKey("/d", "a3");
  ValueRecord v = ValueRecord::Tombstone(1);
  uint64_t s1 = EntryBytes(k1, v), s2 = EntryBytes(k2, v), s3 = EntryBytes(k3, v);
  MemTable mt(s1 + s2 + s3 - 1);
  CHECK(mt.Insert(k1, v) == MemTable::InsertOutcome::kOk);
  CHECK(mt.Insert(k2, v) == MemTable::InsertOutcome::kOk);
  CHECK(mt.Insert(k3, v) == MemTable::InsertOutcome::kOkThresholdReached);
  CHECK(mt.approx_bytes() == s1 + s2 + s3);
}

TEST_CASE("overwrites replace the accounted size instead of accumulating") {
  Rng rng(3);
  MemTable mt(1 << 30);
  PathKey k = *MakePathKey("/d", "a");
  for (int i = 0; i < 50; i++) {
    ValueRecord v = RandomValueFrom(rng);
    uint64_t expect = EntryBytes(k, v);
    mt.Insert(k, v);
    CHECK(mt.approx_bytes() == expect);
  }
  CHECK(mt.entry_count() == 1);
}

TEST_CASE("approx_bytes always equals the codec-summed size of current entries") {
  Rng rng(4);
  MemTable mt(1 << 30);
  std::map<PathKey, ValueRecord> model;
  for (int i = 0; i < 2000; i++) {
    PathKey k = RandomKeyFrom(rng, 5);
    ValueRecord v = RandomValueFrom(rng);
    mt.Insert(k, v);
    model[k] = v;
    if (i % 97 == 0) {
      uint64_t expect = 0;
      for (const auto& [mk, mv] : model) expect += EntryBytes(mk, mv);
      CHECK(mt.approx_bytes() == expect);
    }
  }
}

TEST_CASE("threshold signal is exactly approx_bytes > threshold after each insert") {
  Rng rng(5);
  uint64_t threshold = 4000;
  MemTable mt(threshold);
  for (int i = 0; i < 300; i++) {
    auto outcome = mt.Insert(RandomKeyFrom(rng, 5), RandomValueFrom(rng, 64));
    CHECK((outcome == MemTable::InsertOutcome::kOkThresholdReached) ==
          (mt.approx_bytes() > threshold));
  }
}

TEST_CASE("differential: get agrees with a reference ordered map over 10^4 ops") {
  Rng rng(20260809);
  MemTable mt(1 << 30);
  std::map<PathKey, ValueRecord> model;
  for (int i = 0; i < 10000; i++) {
    PathKey k = RandomKeyFrom(rng, 20);
    ValueRecord v = RandomValueFrom(rng, 64);
    mt.Insert(k, v);
    model[k] = v;

    PathKey probe = RandomKeyFrom(rng, 20);
    const ValueRecord* got = mt.Get(probe);
    auto it = model.find(probe);
    if (it == model.end()) {
      CHECK(got == nullptr);
    } else {
      REQUIRE(got != nullptr);
      CHECK(*got == it->second);
    }
  }
  CHECK(mt.entry_count() == model.size());
}

TEST_CASE("freeze of an empty table is an empty list") {
  MemTable mt(100);
  CHECK(mt.Freeze().empty());
}

TEST_CASE("freeze returns inserted keys in sorted order") {
  MemTable mt(1 << 20);
  for (const char* name : {"b", "a", "c"}) {
    mt.Insert(*MakePathKey("/d", name), ValueRecord::Tombstone(1));
  }
  auto frozen = mt.Freeze();
  REQUIRE(frozen.size() == 3);
  CHECK(frozen[0].first.name == "a");
  CHECK(frozen[1].first.name == "b");
  CHECK(frozen[2].first.name == "c");
  CHECK(mt.frozen());
}

TEST_CASE("frozen output is strictly sorted and bijective with the model") {
  Rng rng(6);
  MemTable mt(1 << 30);
  std::map<PathKey, ValueRecord> model;
  for (int i = 0; i < 3000; i++) {
    PathKey k = RandomKeyFrom(rng, 15);
    ValueRecord v = RandomValueFrom(rng, 32);
    mt.Insert(k, v);
    model[k] = v;
  }
  auto frozen = mt.Freeze();
  REQUIRE(frozen.size() == model.size());
  auto it = model.begin();
  for (size_t i = 0; i < frozen.size(); i++, ++it) {
    CHECK(frozen[i].first == it->first);
    CHECK(frozen[i].second == it->second);
    if (i > 0) CHECK(frozen[i - 1].first.Encode() < frozen[i].first.Encode());
  }
}
