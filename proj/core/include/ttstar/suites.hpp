#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Randomised property suites shared by the CLI and the acceptance runner.
// Every suite is deterministic given its seed.

namespace ttstar::suites {

struct Check {
  std::string name;
  double value = 0.0;      // largest residual observed
  double threshold = 0.0;  // pass iff value <= threshold
  int samples = 0;
  bool pass() const { return value <= threshold; }
};

// SplitMix64; platform independent, unlike the std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed) {}
  std::uint64_t next();
  double uniform(double a, double b);

 private:
  std::uint64_t s_;
};

// Reduced gamma with |gamma_i| < bound whose periodic gaps stay `slack` away from +-2.
std::vector<double> random_generic_gamma(int n, Rng& rng, double bound = 0.95, double slack = 0.05);

std::vector<Check> specfun_suite(int samples, std::uint64_t seed);
std::vector<Check> genfun_suite(int n, int samples, std::uint64_t seed, double h = 1e-4);
std::vector<Check> symplectic_suite(int n, int samples, std::uint64_t seed, double h = 1e-4);
std::vector<Check> roundtrip_suite(int n, int samples, std::uint64_t seed);
std::vector<Check> dynamics_suite(int n, int samples, std::uint64_t seed);

}  // namespace ttstar::suites
