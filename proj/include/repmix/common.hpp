#ifndef REPMIX_COMMON_HPP
#define REPMIX_COMMON_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace repmix {

// Exit-code mapping used by the CLI: input 2, sampler/numerical 3, calibration 4.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SamplerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CalibrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Pairs (s, j) with j < s, enumerated in row order: (1,0), (2,0), (2,1), ...
inline std::size_t pair_count(std::size_t k) { return k * (k - 1) / 2; }

inline std::size_t pair_index(std::size_t s, std::size_t j) {
  // requires j < s
  return s * (s - 1) / 2 + j;
}

inline std::vector<std::pair<std::size_t, std::size_t>> all_pairs(std::size_t k) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(pair_count(k));
  for (std::size_t s = 1; s < k; ++s)
    for (std::size_t j = 0; j < s; ++j) out.emplace_back(s, j);
  return out;
}

}  // namespace repmix

#endif
