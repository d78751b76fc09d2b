#pragma once

#include <cstdint>
#include <vector>

#include "floqgap/clifford.hpp"
#include "floqgap/pauli.hpp"

namespace floqgap {

struct PauliOrbit {
    std::vector<PauliString> elements;  // elements[i+1] = C(elements[i]), signs kept
    int length = 0;
    int64_t weight_sum = 0;
    double avg_weight = 0.0;
    int closing_sign = 1;  // C^L(elements[0]) = closing_sign * elements[0]
};

// ceiling == 0 means 4^n (capped at 2^62).
PauliOrbit enumerate_orbit(const PauliString& s, const CliffordCircuit& c, uint64_t ceiling = 0);

struct OrbitSummary {
    uint64_t representative = 0;  // smallest interleaved index in the orbit
    int64_t length = 0;
    int64_t weight_sum = 0;
    int n = 0;

    double normalized_weight() const { return double(weight_sum) / double(length * n); }
    // Exact comparison of weight_sum / length.
    bool lighter_than(const OrbitSummary& o) const { return weight_sum * o.length < o.weight_sum * length; }
};

inline constexpr int kOrbitSpectrumMaxN = 10;

// All orbits of the 4^n - 1 nontrivial strings, sorted by increasing w/N
// (ties by representative).
std::vector<OrbitSummary> orbit_weight_spectrum(const CliffordCircuit& c, int max_n = kOrbitSpectrumMaxN);

}  // namespace floqgap
