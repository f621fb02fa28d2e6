#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gralasso {

inline constexpr const char* kVersion = "0.1.0";

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// All library failures surface as gralasso::Error with a "<module>: <reason>" message.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] inline void fail(const char* module, const std::string& what) {
  throw Error(std::string(module) + ": " + what);
}

// splitmix64 finalizer; used to derive independent seeds from (seed, stream) pairs.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  return mix64(base ^ mix64(stream + 0x632BE59BD9B4E019ULL));
}

}  // namespace gralasso
