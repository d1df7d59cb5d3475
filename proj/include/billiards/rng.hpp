#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace billiards {

// mt19937_64 with hand-rolled uniform/normal extraction, so that streams are
// byte-identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on (0, 1].
  double uniform01();

  // Standard normal via Box-Muller.
  double normal();

  Eigen::VectorXd gaussian(int dim);

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace billiards
