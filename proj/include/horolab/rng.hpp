#pragma once
#include <cstdint>
#include <random>

namespace horo {

// splitmix64 finaliser; used to derive independent substream seeds
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index);

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : seed_(seed), eng_(seed) {}
  std::uint64_t seed() const { return seed_; }
  std::uint64_t next() { return eng_(); }
  // 53-bit uniform on [0,1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  Stream substream(std::uint64_t index) const { return Stream(mix_seed(seed_, index)); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0;
};

}  // namespace horo
