#include "metacache/bloom.hpp"

#include "metacache/hash.hpp"

namespace metacache {

BloomFilter::BloomFilter(uint64_t expected_keys, uint32_t bits_per_key, uint32_t num_hashes)
    : num_hashes_(num_hashes) {
  m_bits_ = expected_keys * bits_per_key;
  if (m_bits_ < 8) m_bits_ = 8;
  bits_.assign((m_bits_ + 7) / 8, '\0');
}

Result<BloomFilter> BloomFilter::FromParts(uint64_t m_bits, uint32_t num_hashes,
                                           std::string bits) {
  if (m_bits == 0 || num_hashes == 0 || bits.size() != (m_bits + 7) / 8) {
    return Status::CorruptTable("bloom section is inconsistent");
  }
  return BloomFilter(m_bits, num_hashes, std::move(bits));
}

void BloomFilter::Add(std::string_view encoded_key) {
  uint64_t h1 = Hash64(encoded_key, 0);
  uint64_t h2 = Hash64(encoded_key, 1);
  auto bytes = reinterpret_cast<unsigned char*>(bits_.data());
  for (uint32_t i = 0; i < num_hashes_; i++) {
    uint64_t bit = (h1 + i * h2) % m_bits_;
    bytes[bit / 8] |= static_cast<unsigned char>(1u << (bit % 8));
  }
  n_added_++;
}

bool BloomFilter::MayContain(std::string_view encoded_key) const {
  uint64_t h1 = Hash64(encoded_key, 0);
  uint64_t h2 = Hash64(encoded_key, 1);
  auto bytes = reinterpret_cast<const unsigned char*>(bits_.data());
  for (uint32_t i = 0; i < num_hashes_; i++) {
    uint64_t bit = (h1 + i * h2) % m_bits_;
    if ((bytes[bit / 8] & (1u << (bit % 8))) == 0) return false;
  }
  return true;
}

}  // namespace metacache
