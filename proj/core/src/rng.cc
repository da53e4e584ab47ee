#include "oti/rng.h"

namespace oti {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index,
                          std::uint64_t tag) {
  std::uint64_t h = mix64(parent);
  h = mix64(h ^ mix64(index + 0x632be59bd9b4e019ULL));
  return mix64(h ^ mix64(tag + 0x85157af5ULL));
}

}  // namespace oti
