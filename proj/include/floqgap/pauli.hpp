#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace floqgap {

// Site codes: the two symplectic bits packed as x + 2z.
enum class Pauli : uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

char pauli_char(unsigned code);
unsigned pauli_code(char c);

class DimensionError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

class ParseError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr int kMaxQubits = 64;

inline uint64_t site_mask(int n) { return n >= 64 ? ~uint64_t{0} : (uint64_t{1} << n) - 1; }

struct PauliString {
    int n = 0;
    uint64_t x = 0;
    uint64_t z = 0;
    int sign = 1;

    PauliString() = default;
    PauliString(int n_, uint64_t x_, uint64_t z_, int sign_ = 1);

    static PauliString identity(int n);
    static PauliString single(int n, int site, Pauli p);
    static PauliString from_codes(const std::vector<uint8_t>& codes, int sign = 1);
    // Interleaved little-endian index: sum_j code_j 4^j.
    static PauliString from_index(int n, uint64_t index);

    unsigned code(int site) const { return unsigned((x >> site) & 1u) | (unsigned((z >> site) & 1u) << 1); }
    void set(int site, unsigned code);
    uint64_t support() const { return x | z; }
    int weight() const { return std::popcount(support()); }
    bool is_identity() const { return (x | z) == 0; }
    uint64_t index() const;
    PauliString unsigned_copy() const { return PauliString(n, x, z, 1); }
    bool same_bits(const PauliString& o) const { return n == o.n && x == o.x && z == o.z; }
    bool commutes_with(const PauliString& o) const;

    // "-YXZIII" style; the minus is U+2212 unless ascii is requested.
    std::string str(bool ascii = false) const;
    static PauliString parse(std::string_view text);

    friend bool operator==(const PauliString& a, const PauliString& b) {
        return a.n == b.n && a.x == b.x && a.z == b.z && a.sign == b.sign;
    }
};

inline int weight(const PauliString& s) { return s.weight(); }

// Product a*b = i^phase * string, string carries sign +1.
struct PhasedPauli {
    PauliString string;
    int phase = 0;  // power of i, 0..3

    std::string str() const;
};

PhasedPauli multiply(const PauliString& a, const PauliString& b);

// Overall phase as a string of the form "+", "-", "+i", "-i".
std::string phase_prefix(int phase);

inline uint64_t interleave_index(uint64_t x, uint64_t z, int n) {
    uint64_t idx = 0;
    for (int j = 0; j < n; ++j) {
        idx |= ((x >> j) & 1u) << (2 * j);
        idx |= ((z >> j) & 1u) << (2 * j + 1);
    }
    return idx;
}

// Weight of an interleaved basis index.
inline int index_weight(uint64_t idx) {
    return std::popcount((idx | (idx >> 1)) & 0x5555555555555555ULL);
}

inline uint64_t mix64(uint64_t v) {
    v += 0x9E3779B97F4A7C15ULL;
    v = (v ^ (v >> 30)) * 0xBF58476D1CE4E5B9ULL;
    v = (v ^ (v >> 27)) * 0x94D049BB133111EBULL;
    return v ^ (v >> 31);
}

struct PauliHash {
    size_t operator()(const PauliString& s) const noexcept {
        return size_t(mix64(mix64(s.x) ^ s.z) ^ (uint64_t(s.n) << 1) ^ uint64_t(s.sign < 0));
    }
};

}  // namespace floqgap

template <>
struct std::hash<floqgap::PauliString> {
    size_t operator()(const floqgap::PauliString& s) const noexcept { return floqgap::PauliHash{}(s); }
};
