#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace bcreg {

using Engine = std::mt19937_64;

/// Independent substream keyed by (seed, keys...). The key tuple is fed
/// through std::seed_seq, so a stream depends only on its key and never on
/// how many other streams were opened before it.
Engine make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys = {});

/// Uniform on the open interval (0, 1) with 53 bits of resolution.
inline double uniform_open(Engine& eng) {
  return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal variate via std::normal_distribution.
double standard_normal(Engine& eng);

// Stream tags keep substreams for different purposes disjoint.
namespace stream_tag {
inline constexpr std::uint64_t kProjectionRow = 0x50524f4aULL;
inline constexpr std::uint64_t kMemberPsi = 0x50534931ULL;
inline constexpr std::uint64_t kMemberSeed = 0x53454544ULL;
inline constexpr std::uint64_t kTrainDesign = 0x5452444eULL;
inline constexpr std::uint64_t kTrainNoise = 0x54524e5aULL;
inline constexpr std::uint64_t kTestDesign = 0x5453444eULL;
inline constexpr std::uint64_t kTestNoise = 0x54534e5aULL;
inline constexpr std::uint64_t kEnsemble = 0x454e5342ULL;
inline constexpr std::uint64_t kBootstrap = 0x424f4f54ULL;
}  // namespace stream_tag

}  // namespace bcreg
