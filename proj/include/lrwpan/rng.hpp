#ifndef LRWPAN_RNG_HPP
#define LRWPAN_RNG_HPP

#include <cmath>
#include <cstdint>

namespace lrwpan {

inline std::uint64_t splitmix64(std::uint64_t& state)
{
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256** with splitmix64 seeding. Self-contained so that identical
// seeds give identical streams on every platform and standard library.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed)
    {
        for (auto& word : state_)
            word = splitmix64(seed);
    }

    std::uint64_t next()
    {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    double uniform01() { return (next() >> 11) * 0x1.0p-53; }  // [0, 1)

    double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

    // uniform over {0, ..., 2^be - 1}; exact since the range is a power of two
    std::uint32_t uniform_pow2(int be)
    {
        return static_cast<std::uint32_t>(next() & ((1ULL << be) - 1));
    }

    bool bernoulli(double p) { return uniform01() < p; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
};

// Independent stream per (seed, node, purpose) so ablations stay
// variance-coupled across configurations.
inline Rng make_stream(std::uint64_t seed, std::uint64_t node, std::uint64_t purpose)
{
    std::uint64_t mix = seed;
    splitmix64(mix);
    mix ^= 0x632be59bd9b4e019ULL * (node + 1);
    splitmix64(mix);
    mix ^= 0x9e3779b97f4a7c15ULL * (purpose + 1);
    return Rng(splitmix64(mix));
}

}  // namespace lrwpan

#endif
