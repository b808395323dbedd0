#include "hpdwav/random.hpp"

namespace hpdwav {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng cell_rng(std::uint64_t seed, std::uint64_t k1, std::uint64_t k2, std::uint64_t stream) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ k1);
  h = mix64(h ^ (k2 + 0x632be59bd9b4e019ULL));
  h = mix64(h ^ (stream * 0x8cb92ba72f3d8dd7ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32),
                    static_cast<std::uint32_t>(k1), static_cast<std::uint32_t>(k2)};
  return Rng(seq);
}

}  // namespace hpdwav
