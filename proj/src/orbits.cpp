#include "floqgap/orbits.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace floqgap {

PauliOrbit enumerate_orbit(const PauliString& s, const CliffordCircuit& c, uint64_t ceiling) {
    if (s.is_identity()) throw std::invalid_argument("orbit of the identity string requested");
    if (s.n != c.n) throw DimensionError("string and circuit sizes differ");
    if (ceiling == 0) ceiling = s.n >= 31 ? (uint64_t{1} << 62) : (uint64_t{1} << (2 * s.n));
    PauliOrbit orbit;
    PauliString cur = s;
    for (;;) {
        orbit.elements.push_back(cur);
        orbit.weight_sum += cur.weight();
        if (orbit.elements.size() > ceiling) throw std::logic_error("orbit exceeded ceiling");
        cur = conjugate_through_circuit(cur, c);
        if (cur.same_bits(s)) {
            orbit.closing_sign = cur.sign * s.sign;
            break;
        }
    }
    orbit.length = int(orbit.elements.size());
    orbit.avg_weight = double(orbit.weight_sum) / orbit.length;
    return orbit;
}

std::vector<OrbitSummary> orbit_weight_spectrum(const CliffordCircuit& c, int max_n) {
    if (c.n > max_n)
        throw std::invalid_argument("orbit spectrum refused: n=" + std::to_string(c.n) + " exceeds guard " +
                                    std::to_string(max_n));
    const uint64_t dim = uint64_t{1} << (2 * c.n);
    std::vector<bool> seen(dim, false);
    std::vector<OrbitSummary> out;
    for (uint64_t start = 1; start < dim; ++start) {
        if (seen[start]) continue;
        OrbitSummary o{start, 0, 0, c.n};
        uint64_t cur = start;
        do {
            seen[cur] = true;
            ++o.length;
            o.weight_sum += index_weight(cur);
            int sgn;
            for (size_t l = 0; l < c.layers.size(); ++l) cur = c.apply_layer_index(l, cur, sgn);
        } while (cur != start);
        out.push_back(o);
    }
    std::sort(out.begin(), out.end(), [](const OrbitSummary& a, const OrbitSummary& b) {
        if (a.lighter_than(b)) return true;
        if (b.lighter_than(a)) return false;
        return a.representative < b.representative;
    });
    return out;
}

}  // namespace floqgap
