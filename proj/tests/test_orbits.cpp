#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "floqgap/orbits.hpp"

using namespace floqgap;

namespace {

PauliString alternating(int n, bool y_first) {
    PauliString s = PauliString::identity(n);
    for (int j = y_first ? 0 : 1; j < n; j += 2) s.set(j, 3);
    return s;
}

// Independent orbit walk: repeatedly conjugate and collect unsigned strings.
std::multiset<std::pair<int64_t, int64_t>> brute_force(const CliffordCircuit& c) {
    const int n = c.n;
    std::vector<bool> seen(size_t(1) << (2 * n), false);
    std::multiset<std::pair<int64_t, int64_t>> out;
    for (uint64_t i = 1; i < seen.size(); ++i) {
        if (seen[i]) continue;
        int64_t len = 0, wsum = 0;
        PauliString s = PauliString::from_index(n, i);
        do {
            seen[s.index()] = true;
            ++len;
            wsum += s.weight();
            s = conjugate_through_circuit(s, c).unsigned_copy();
        } while (s.index() != i);
        out.insert({len, wsum});
    }
    return out;
}

}  // namespace

TEST(Orbits, FixedGateFloorIsOneHalf) {
    for (int n : {4, 6, 8}) {
        const auto spec = orbit_weight_spectrum(CliffordCircuit::fixed_brickwork(n));
        ASSERT_FALSE(spec.empty());
        const OrbitSummary& lo = spec.front();
        EXPECT_EQ(2 * lo.weight_sum, lo.length * n) << "n=" << n;
        int64_t total = 0;
        for (const auto& o : spec) {
            EXPECT_GE(2 * o.weight_sum, o.length * n);
            total += o.length;
        }
        EXPECT_EQ(total, (int64_t{1} << (2 * n)) - 1);
        for (bool y_first : {true, false}) {
            const PauliOrbit orb = enumerate_orbit(alternating(n, y_first), CliffordCircuit::fixed_brickwork(n));
            EXPECT_EQ(2 * orb.weight_sum, int64_t(orb.length) * n);
        }
    }
}

TEST(Orbits, SortedAscending) {
    const auto spec = orbit_weight_spectrum(CliffordCircuit::fixed_brickwork(6));
    for (size_t i = 1; i < spec.size(); ++i) EXPECT_FALSE(spec[i].lighter_than(spec[i - 1]));
}

TEST(Orbits, IdentityGateFixesEverything) {
    const auto spec = orbit_weight_spectrum(CliffordCircuit::identity(4));
    EXPECT_EQ(spec.size(), 255u);
    for (const auto& o : spec) EXPECT_EQ(o.length, 1);
}

TEST(Orbits, LengthsDivideEight) {
    for (const auto& o : orbit_weight_spectrum(CliffordCircuit::fixed_brickwork(8)))
        EXPECT_TRUE(o.length == 1 || o.length == 2 || o.length == 4 || o.length == 8) << o.length;
}

TEST(Orbits, ClosingSign) {
    const CliffordCircuit c = CliffordCircuit::fixed_brickwork(4);
    const PauliOrbit orb = enumerate_orbit(PauliString::parse("XIII"), c);
    PauliString s = orb.elements.front();
    for (int i = 0; i < orb.length; ++i) s = conjugate_through_circuit(s, c);
    EXPECT_TRUE(s.same_bits(orb.elements.front()));
    EXPECT_EQ(s.sign, orb.closing_sign);
}

TEST(Orbits, CeilingAndGuard) {
    EXPECT_THROW(orbit_weight_spectrum(CliffordCircuit::fixed_brickwork(12)), std::invalid_argument);
    EXPECT_THROW(enumerate_orbit(PauliString::parse("XIII"), CliffordCircuit::fixed_brickwork(4), 1), std::logic_error);
}

TEST(OrbitsProperty, RandomCircuitsMatchBruteForce) {
    Rng rng(21);
    const LCClass classes[] = {LCClass::CZ, LCClass::ISwap, LCClass::Swap};
    for (int t = 0; t < 6; ++t) {
        const LCClass* cls = t < 3 ? &classes[t] : nullptr;
        const CliffordCircuit c = CliffordCircuit::random(4, rng, cls);
        std::multiset<std::pair<int64_t, int64_t>> got;
        for (const auto& o : orbit_weight_spectrum(c)) got.insert({o.length, o.weight_sum});
        EXPECT_EQ(got, brute_force(c));
    }
}
