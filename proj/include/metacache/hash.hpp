#pragma once

#include <cstdint>
#include <string_view>

namespace metacache {

// 64-bit MurmurHash2 (the MurmurHash64A variant), with explicit little-endian
// chunk loads so the output is identical on any platform. Bloom filter bits
// are part of the SSTable file format, so this function must never change.
uint64_t Hash64(std::string_view data, uint64_t seed);

}  // namespace metacache
