#include "netctl/types.hpp"

namespace netctl {
namespace {

// splitmix64 finalizer; cheap, well-mixed, and stable across platforms.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t state = 0x243f6a8885a308d3ULL;  // arbitrary non-zero start
  for (std::uint64_t p : parts) {
    state = mix(state ^ mix(p));
  }
  return state;
}

Rng make_rng(std::initializer_list<std::uint64_t> parts) {
  return Rng(derive_seed(parts));
}

void require_finite(const Eigen::Ref<const Matrix>& m, const char* name) {
  if (!m.allFinite()) {
    throw InvalidInputError(std::string(name) + " contains NaN or Inf entries");
  }
}

}  // namespace netctl
