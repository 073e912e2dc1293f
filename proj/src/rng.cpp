#include "bcreg/rng.hpp"

#include <vector>

namespace bcreg {

Engine make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::vector<std::uint32_t> words;
  words.reserve(2 * (keys.size() + 1));
  auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  for (auto k : keys) push(k);
  std::seed_seq seq(words.begin(), words.end());
  return Engine(seq);
}

double standard_normal(Engine& eng) {
  std::normal_distribution<double> dist;
  return dist(eng);
}

}  // namespace bcreg
