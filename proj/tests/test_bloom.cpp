#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "metacache/bloom.hpp"
#include "metacache/hash.hpp"
#include "test_util.hpp"

using namespace metacache;

TEST_CASE("added key always queries true") {
  BloomFilter f(16, 10, 7);
  std::string key = PathKey{"/d", "k1"}.Encode();
  f.Add(key);
  CHECK(f.MayContain(key));
}

TEST_CASE("fresh filter matches nothing") {
  BloomFilter f(16, 10, 7);
  CHECK_FALSE(f.MayContain("anything"));
  CHECK_FALSE(f.MayContain(""));
  CHECK(f.n_added() == 0);
}

TEST_CASE("hash is stable across calls and seeds differ") {
  CHECK(Hash64("key", 0) == Hash64("key", 0));
  CHECK(Hash64("key", 0) != Hash64("key", 1));
  CHECK(Hash64("a", 0) != Hash64("b", 0));
}

TEST_CASE("no false negatives over 10^4 keys; FPR within 1.5x of theory") {
  const uint64_t n = 10000;
  const uint32_t bits_per_key = 10;
  const uint32_t k = 7;
  BloomFilter f(n, bits_per_key, k);

  std::vector<std::string> keys;
  keys.reserve(n);
  for (uint64_t i = 0; i < n; i++) {
    keys.push_back(PathKey{"/dir" + std::to_string(i % 64), "in" + std::to_string(i)}.Encode());
  }
  for (const auto& key : keys) f.Add(key);

  for (const auto& key : keys) CHECK(f.MayContain(key));  // zero exceptions

  // Theoretical rate (1 - e^{-kn/m})^k at m = n * bits_per_key.
  double m = static_cast<double>(f.m_bits());
  double theoretical =
      std::pow(1.0 - std::exp(-static_cast<double>(k) * static_cast<double>(n) / m),
               static_cast<double>(k));
  CHECK(theoretical == doctest::Approx(0.0082).epsilon(0.05));

  const uint64_t probes = 100000;
  uint64_t false_positives = 0;
  for (uint64_t i = 0; i < probes; i++) {
    std::string absent = PathKey{"/other" + std::to_string(i % 64), "out" + std::to_string(i)}.Encode();
    if (f.MayContain(absent)) false_positives++;
  }
  double measured = static_cast<double>(false_positives) / static_cast<double>(probes);
  CHECK(measured <= 1.5 * theoretical);
}

TEST_CASE("deterministic: same bits and key give the same answer") {
  BloomFilter f(100, 10, 7);
  for (int i = 0; i < 100; i++) f.Add("key" + std::to_string(i));
  for (int round = 0; round < 3; round++) {
    CHECK(f.MayContain("key5"));
    CHECK(f.MayContain("key99") == f.MayContain("key99"));
  }
}

TEST_CASE("serialized-then-reloaded filter answers identically on 10^4 probes") {
  Rng rng(20260809);
  BloomFilter f(5000, 10, 7);
  for (int i = 0; i < 5000; i++) f.Add(metacache::test::RandomKeyFrom(rng, 100).Encode());

  auto reloaded = BloomFilter::FromParts(f.m_bits(), f.num_hashes(), f.bit_bytes());
  REQUIRE(reloaded.ok());
  for (int i = 0; i < 10000; i++) {
    std::string probe = metacache::test::RandomKeyFrom(rng, 100).Encode();
    CHECK(f.MayContain(probe) == reloaded->MayContain(probe));
  }
}

TEST_CASE("inconsistent serialized parts are rejected") {
  BloomFilter f(10, 10, 7);
  CHECK_FALSE(BloomFilter::FromParts(f.m_bits() + 8, f.num_hashes(), f.bit_bytes()).ok());
  CHECK_FALSE(BloomFilter::FromParts(0, 7, "").ok());
  CHECK_FALSE(BloomFilter::FromParts(64, 0, std::string(8, '\0')).ok());
}
