#ifndef HUBLAB_RNG_HPP_
#define HUBLAB_RNG_HPP_

#include <cstdint>
#include <random>

namespace hublab {

inline std::uint64_t splitmix64(std::uint64_t& state) noexcept
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Independent generator for (seed, stream, substream). Streams number the
// randomized stages; substreams number resampling attempts.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0)
{
    std::uint64_t state = seed;
    std::uint64_t mixed = splitmix64(state);
    state = mixed ^ (stream * 0xd1b54a32d192ed03ULL);
    mixed = splitmix64(state);
    state = mixed ^ (substream * 0x8cb92ba72f3d8dd7ULL);
    std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(state)), static_cast<std::uint32_t>(splitmix64(state)),
                      static_cast<std::uint32_t>(splitmix64(state)), static_cast<std::uint32_t>(splitmix64(state))};
    return std::mt19937_64(seq);
}

} // namespace hublab

#endif // HUBLAB_RNG_HPP_
