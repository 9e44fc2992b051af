#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "metacache/status.hpp"

namespace metacache {

// Per-SSTable membership filter: no false negatives, tunable false-positive
// rate. The k probe positions come from double hashing two Hash64 values of
// the encoded key (seeds 0 and 1): index_i = h1 + i*h2 mod m. The bit bytes
// are serialized into the SSTable file, so probing is stable across
// platforms and runs.
class BloomFilter {
 public:
  // Sizes the bit array as expected_keys * bits_per_key (minimum 8 bits).
  BloomFilter(uint64_t expected_keys, uint32_t bits_per_key, uint32_t num_hashes);

  // Reconstructs a filter from serialized parts. bits.size() must equal
  // (m_bits + 7) / 8.
  static Result<BloomFilter> FromParts(uint64_t m_bits, uint32_t num_hashes, std::string bits);

  void Add(std::string_view encoded_key);
  bool MayContain(std::string_view encoded_key) const;

  uint64_t m_bits() const { return m_bits_; }
  uint32_t num_hashes() const { return num_hashes_; }
  uint64_t n_added() const { return n_added_; }
  const std::string& bit_bytes() const { return bits_; }

 private:
  BloomFilter(uint64_t m_bits, uint32_t num_hashes, std::string bits)
      : m_bits_(m_bits), num_hashes_(num_hashes), bits_(std::move(bits)) {}

  uint64_t m_bits_;
  uint32_t num_hashes_;
  uint64_t n_added_ = 0;
  std::string bits_;
};

}  // namespace metacache
