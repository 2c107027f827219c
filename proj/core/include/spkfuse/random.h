// spkfuse/random.h

// Copyright 2026  The spkfuse Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SPKFUSE_RANDOM_H_
#define SPKFUSE_RANDOM_H_

#include <cstdint>
#include <random>

namespace spkfuse {

/**
   Portable pseudo-random source. Every derived quantity is defined here
   rather than through the <random> distributions, whose algorithms are
   implementation-defined:

     engine   std::mt19937_64 seeded with the 64-bit seed (the engine itself
              is fully specified by the standard).
     uniform  (x >> 11) * 2^-53, giving a double in [0, 1).
     index    uniform integer in [0, n) by rejection: draw x, reject when
              x >= 2^64 - (2^64 mod n), return x mod n.
     normal   Box-Muller: u1 = 1 - uniform() in (0, 1], u2 = uniform();
              z0 = sqrt(-2 ln u1) cos(2 pi u2), z1 = sqrt(-2 ln u1) sin(2 pi u2).
              z0 is returned first, z1 on the next call.
*/
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  std::uint64_t index(std::uint64_t n);
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace spkfuse

#endif  // SPKFUSE_RANDOM_H_
