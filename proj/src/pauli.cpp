#include "floqgap/pauli.hpp"

namespace floqgap {

namespace {
constexpr std::string_view kMinusUtf8 = "\xE2\x88\x92";
}

char pauli_char(unsigned code) {
    static constexpr char table[4] = {'I', 'X', 'Z', 'Y'};
    return table[code & 3u];
}

unsigned pauli_code(char c) {
    switch (c) {
        case 'I': return 0;
        case 'X': return 1;
        case 'Z': return 2;
        case 'Y': return 3;
        default: throw ParseError(std::string("bad Pauli letter '") + c + "'");
    }
}

PauliString::PauliString(int n_, uint64_t x_, uint64_t z_, int sign_) : n(n_), x(x_), z(z_), sign(sign_) {
    if (n < 0 || n > kMaxQubits) throw DimensionError("qubit count out of range: " + std::to_string(n));
    if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
    if ((x | z) & ~site_mask(n)) throw DimensionError("bits set beyond n");
}

PauliString PauliString::identity(int n) { return PauliString(n, 0, 0, 1); }

PauliString PauliString::single(int n, int site, Pauli p) {
    PauliString s = identity(n);
    s.set(site, unsigned(p));
    return s;
}

PauliString PauliString::from_codes(const std::vector<uint8_t>& codes, int sign) {
    PauliString s(int(codes.size()), 0, 0, sign);
    for (size_t j = 0; j < codes.size(); ++j) s.set(int(j), codes[j]);
    return s;
}

PauliString PauliString::from_index(int n, uint64_t index) {
    PauliString s = identity(n);
    for (int j = 0; j < n; ++j) s.set(j, unsigned((index >> (2 * j)) & 3u));
    return s;
}

void PauliString::set(int site, unsigned c) {
    if (site < 0 || site >= n) throw DimensionError("site out of range");
    const uint64_t bit = uint64_t{1} << site;
    x = (c & 1u) ? (x | bit) : (x & ~bit);
    z = (c & 2u) ? (z | bit) : (z & ~bit);
}

uint64_t PauliString::index() const {
    if (n > 32) throw DimensionError("index needs n <= 32");
    return interleave_index(x, z, n);
}

bool PauliString::commutes_with(const PauliString& o) const {
    if (n != o.n) throw DimensionError("qubit count mismatch");
    return (std::popcount((x & o.z) ^ (z & o.x)) & 1) == 0;
}

std::string PauliString::str(bool ascii) const {
    std::string out;
    if (sign < 0) out += ascii ? std::string_view("-") : kMinusUtf8;
    for (int j = 0; j < n; ++j) out += pauli_char(code(j));
    return out;
}

PauliString PauliString::parse(std::string_view text) {
    int sign = 1;
    if (text.starts_with(kMinusUtf8)) {
        sign = -1;
        text.remove_prefix(kMinusUtf8.size());
    } else if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        sign = text.front() == '-' ? -1 : 1;
        text.remove_prefix(1);
    }
    if (text.empty()) throw ParseError("empty Pauli string");
    if (text.size() > size_t(kMaxQubits)) throw ParseError("Pauli string longer than 64 sites");
    PauliString s(int(text.size()), 0, 0, sign);
    for (size_t j = 0; j < text.size(); ++j) s.set(int(j), pauli_code(text[j]));
    return s;
}

std::string phase_prefix(int phase) {
    switch (phase & 3) {
        case 0: return "+";
        case 1: return "+i";
        case 2: return "-";
        default: return "-i";
    }
}

std::string PhasedPauli::str() const { return phase_prefix(phase) + string.str(true); }

PhasedPauli multiply(const PauliString& a, const PauliString& b) {
    if (a.n != b.n) throw DimensionError("multiply: qubit count mismatch");
    const uint64_t x1 = a.x, z1 = a.z, x2 = b.x, z2 = b.z;
    // Sitewise i-exponent of P1*P2 relative to the Hermitian label of the product.
    const uint64_t plus = (x1 & z1 & z2 & ~x2) | (x1 & ~z1 & z2 & x2) | (~x1 & z1 & x2 & ~z2);
    const uint64_t minus = (x1 & z1 & x2 & ~z2) | (x1 & ~z1 & z2 & ~x2) | (~x1 & z1 & x2 & z2);
    int phase = std::popcount(plus) - std::popcount(minus);
    if (a.sign < 0) phase += 2;
    if (b.sign < 0) phase += 2;
    PhasedPauli out;
    out.string = PauliString(a.n, x1 ^ x2, z1 ^ z2, 1);
    out.phase = ((phase % 4) + 4) % 4;
    return out;
}

}  // namespace floqgap
