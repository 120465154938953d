#ifndef SESSIONLINK_RANDOM_H_
#define SESSIONLINK_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace sessionlink {

using Rng = std::mt19937_64;

// Mixes a parent seed with a label into an independent child seed. Used so
// that per-user, per-session and per-trial streams do not depend on the
// order in which they are consumed.
std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view label);
std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view label,
                         std::uint64_t index);

}  // namespace sessionlink

#endif  // SESSIONLINK_RANDOM_H_
