#pragma once

#include <cstdint>
#include <random>

#include "floqgap/pauli.hpp"

namespace floqgap {

// Counter-based seed derivation: any (master, a, b, c, d) tuple maps to an
// independent 64-bit seed without touching a shared stream.
inline uint64_t derive_seed(uint64_t master, uint64_t a, uint64_t b = 0, uint64_t c = 0, uint64_t d = 0) {
    uint64_t h = mix64(master);
    h = mix64(h ^ mix64(a + 0x1000));
    h = mix64(h ^ mix64(b + 0x2000));
    h = mix64(h ^ mix64(c + 0x3000));
    h = mix64(h ^ mix64(d + 0x4000));
    return h;
}

// mt19937_64 output is fixed by the standard; the distributions below are
// spelled out so samples do not depend on the standard library vendor.
class Rng {
   public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t bits() { return eng_(); }
    double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }
    uint64_t below(uint64_t n) {
        const uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % n);
        uint64_t v;
        do v = eng_();
        while (v >= limit);
        return v % n;
    }

   private:
    std::mt19937_64 eng_;
};

}  // namespace floqgap
