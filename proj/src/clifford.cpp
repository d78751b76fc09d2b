#include "floqgap/clifford.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace floqgap {

namespace {

// Generators in image order: X1, Z1, X2, Z2.
const std::array<PauliString, 4>& generators() {
    static const std::array<PauliString, 4> g = {PauliString(2, 1, 0), PauliString(2, 0, 1),
                                                 PauliString(2, 2, 0), PauliString(2, 0, 2)};
    return g;
}

PauliString pair_string(unsigned pair) {
    PauliString s = PauliString::identity(2);
    s.set(0, pair & 3u);
    s.set(1, (pair >> 2) & 3u);
    return s;
}

unsigned string_pair(const PauliString& s) { return s.code(0) | (s.code(1) << 2); }

bool symplectic_ok(const std::array<PauliString, 4>& im) {
    for (const auto& p : im)
        if (p.n != 2 || p.is_identity()) return false;
    const auto& g = generators();
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
            if (im[a].commutes_with(im[b]) != g[a].commutes_with(g[b])) return false;
    return true;
}

int gf2_rank2(unsigned u, unsigned v) {
    if (u == 0 && v == 0) return 0;
    if (u == 0 || v == 0 || u == v) return 1;
    return 2;
}

}  // namespace

TwoQubitTableau::TwoQubitTableau() {
    images_ = generators();
    build();
}

TwoQubitTableau TwoQubitTableau::from_images(const std::array<PauliString, 4>& images) {
    if (!symplectic_ok(images)) throw std::invalid_argument("tableau images violate the symplectic condition");
    TwoQubitTableau t;
    t.images_ = images;
    t.build();
    return t;
}

TwoQubitTableau TwoQubitTableau::from_images(std::string_view x1, std::string_view z1, std::string_view x2,
                                             std::string_view z2) {
    return from_images({PauliString::parse(x1), PauliString::parse(z1), PauliString::parse(x2),
                        PauliString::parse(z2)});
}

void TwoQubitTableau::build() {
    for (unsigned pair = 0; pair < 16; ++pair) {
        // Hermitian label = i^{x1 z1 + x2 z2} X1^x1 Z1^z1 X2^x2 Z2^z2.
        const unsigned bits[4] = {pair & 1u, (pair >> 1) & 1u, (pair >> 2) & 1u, (pair >> 3) & 1u};
        int phase = int(bits[0] & bits[1]) + int(bits[2] & bits[3]);
        PauliString acc = PauliString::identity(2);
        for (int g = 0; g < 4; ++g) {
            if (!bits[g]) continue;
            PhasedPauli p = multiply(acc, images_[g]);
            acc = p.string;
            phase += p.phase;
        }
        phase &= 3;
        if (phase & 1) throw std::logic_error("non-Hermitian tableau image");
        out_code_[pair] = uint8_t(string_pair(acc));
        out_sign_[pair] = int8_t(phase == 0 ? 1 : -1);
    }
}

PauliString TwoQubitTableau::apply(const PauliString& s) const {
    if (s.n != 2) throw DimensionError("tableau acts on two-site strings");
    const unsigned pair = string_pair(s);
    PauliString out = pair_string(out_code_[pair]);
    out.sign = s.sign * out_sign_[pair];
    return out;
}

TwoQubitTableau TwoQubitTableau::then(const TwoQubitTableau& next) const {
    std::array<PauliString, 4> im;
    for (int g = 0; g < 4; ++g) im[g] = next.apply(images_[g]);
    return from_images(im);
}

namespace gates {
TwoQubitTableau identity() { return TwoQubitTableau(); }
TwoQubitTableau swap() { return TwoQubitTableau::from_images("IX", "IZ", "XI", "ZI"); }
TwoQubitTableau cz() { return TwoQubitTableau::from_images("XZ", "ZI", "ZX", "IZ"); }
TwoQubitTableau cnot() { return TwoQubitTableau::from_images("XX", "ZI", "IX", "ZZ"); }
TwoQubitTableau iswap() { return TwoQubitTableau::from_images("ZY", "IZ", "YZ", "ZI"); }
TwoQubitTableau hh() { return TwoQubitTableau::from_images("ZI", "XI", "IZ", "IX"); }
TwoQubitTableau fixed() { return TwoQubitTableau::from_images("IZ", "ZY", "ZI", "YZ"); }
}  // namespace gates

std::string to_string(LCClass c) {
    switch (c) {
        case LCClass::Identity: return "identity";
        case LCClass::Swap: return "swap";
        case LCClass::CZ: return "cz";
        case LCClass::ISwap: return "iswap";
    }
    return "?";
}

LCClass classify_lc(const TwoQubitTableau& t) {
    const auto& im = t.images();
    // Off-diagonal block rank (qubit-2 parts of qubit-1 generator images) is
    // invariant under local dressing; the diagonal block separates SWAP.
    const int off = gf2_rank2(im[0].code(1), im[1].code(1));
    const int diag = gf2_rank2(im[0].code(0), im[1].code(0));
    if (off == 0) return LCClass::Identity;
    if (off == 1) return LCClass::CZ;
    return diag == 0 ? LCClass::Swap : LCClass::ISwap;
}

bool weight_preserving(const TwoQubitTableau& t) {
    for (unsigned pair = 1; pair < 16; ++pair)
        if (pair_string(pair).weight() != pair_string(t.out_code(pair)).weight()) return false;
    return true;
}

bool support_preserving(const TwoQubitTableau& t) {
    for (unsigned c = 1; c < 4; ++c) {
        if (pair_string(t.out_code(c)).weight() != 1) return false;
        if (pair_string(t.out_code(c << 2)).weight() != 1) return false;
    }
    return true;
}

const std::vector<std::array<uint8_t, 4>>& symplectic_maps() {
    static const std::vector<std::array<uint8_t, 4>> maps = [] {
        std::vector<std::array<uint8_t, 4>> out;
        const auto& g = generators();
        for (unsigned a = 1; a < 16; ++a)
            for (unsigned b = 1; b < 16; ++b)
                for (unsigned c = 1; c < 16; ++c)
                    for (unsigned d = 1; d < 16; ++d) {
                        std::array<PauliString, 4> im = {pair_string(a), pair_string(b), pair_string(c),
                                                         pair_string(d)};
                        bool ok = true;
                        for (int i = 0; i < 4 && ok; ++i)
                            for (int j = i + 1; j < 4 && ok; ++j)
                                ok = im[i].commutes_with(im[j]) == g[i].commutes_with(g[j]);
                        if (ok) out.push_back({uint8_t(a), uint8_t(b), uint8_t(c), uint8_t(d)});
                    }
        return out;
    }();
    return maps;
}

TwoQubitTableau clifford_by_id(int id) {
    if (id < 0 || id >= kCliffordGroupSize) throw std::out_of_range("clifford id out of range");
    const auto& m = symplectic_maps()[size_t(id / 16)];
    std::array<PauliString, 4> im;
    for (int g = 0; g < 4; ++g) {
        im[g] = pair_string(m[g]);
        im[g].sign = ((id >> g) & 1) ? -1 : 1;
    }
    return TwoQubitTableau::from_images(im);
}

int clifford_id(const TwoQubitTableau& t) {
    const auto& im = t.images();
    const std::array<uint8_t, 4> key = {uint8_t(string_pair(im[0])), uint8_t(string_pair(im[1])),
                                        uint8_t(string_pair(im[2])), uint8_t(string_pair(im[3]))};
    const auto& maps = symplectic_maps();
    const auto it = std::find(maps.begin(), maps.end(), key);
    int signs = 0;
    for (int g = 0; g < 4; ++g)
        if (im[g].sign < 0) signs |= 1 << g;
    return int(it - maps.begin()) * 16 + signs;
}

TwoQubitTableau sample_clifford(Rng& rng) { return clifford_by_id(int(rng.below(kCliffordGroupSize))); }

TwoQubitTableau sample_clifford_in_class(Rng& rng, LCClass cls) {
    for (;;) {
        TwoQubitTableau t = sample_clifford(rng);
        if (classify_lc(t) == cls) return t;
    }
}

TwoQubitTableau local_clifford_pair(int a, int b) {
    if (a < 0 || a >= 24 || b < 0 || b >= 24) throw std::out_of_range("single-qubit Clifford index");
    // Ordered pairs (image of X, image of Z) of distinct non-identity codes.
    static constexpr uint8_t kPairs[6][2] = {{1, 2}, {1, 3}, {2, 1}, {2, 3}, {3, 1}, {3, 2}};
    auto site = [](int k, int which) {
        const uint8_t c = kPairs[k / 4][which];
        return std::pair<unsigned, int>{c, ((k >> which) & 1) ? -1 : 1};
    };
    std::array<PauliString, 4> im;
    for (int g = 0; g < 4; ++g) {
        const int q = g / 2;
        const auto [code, sign] = site(q == 0 ? a : b, g % 2);
        im[g] = PauliString::identity(2);
        im[g].set(q, code);
        im[g].sign = sign;
    }
    return TwoQubitTableau::from_images(im);
}

void validate_ring(int n) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("ring size must be even and >= 2, got " + std::to_string(n));
    if (n > kMaxQubits) throw DimensionError("ring size above 64");
}

CliffordCircuit CliffordCircuit::brickwork(int n, const TwoQubitTableau& gate) {
    validate_ring(n);
    CliffordCircuit c;
    c.n = n;
    for (int parity = 0; parity < 2; ++parity) c.layers.push_back({parity, std::vector<TwoQubitTableau>(n / 2, gate)});
    return c;
}

CliffordCircuit CliffordCircuit::random(int n, Rng& rng, const LCClass* cls) {
    validate_ring(n);
    CliffordCircuit c;
    c.n = n;
    for (int parity = 0; parity < 2; ++parity) {
        CliffordLayer layer{parity, {}};
        for (int b = 0; b < n / 2; ++b)
            layer.gates.push_back(cls ? sample_clifford_in_class(rng, *cls) : sample_clifford(rng));
        c.layers.push_back(std::move(layer));
    }
    return c;
}

PauliString CliffordCircuit::apply_layer(size_t layer, const PauliString& s) const {
    if (s.n != n) throw DimensionError("string and circuit sizes differ");
    const CliffordLayer& L = layers.at(layer);
    PauliString out = s;
    for (int b = 0; b < int(L.gates.size()); ++b) {
        const auto [p, q] = bond_sites(n, L.parity, b);
        const unsigned pair = s.code(p) | (s.code(q) << 2);
        const unsigned img = L.gates[size_t(b)].out_code(pair);
        out.set(p, img & 3u);
        out.set(q, img >> 2);
        out.sign *= L.gates[size_t(b)].out_sign(pair);
    }
    return out;
}

uint64_t CliffordCircuit::apply_layer_index(size_t layer, uint64_t index, int& sign) const {
    const CliffordLayer& L = layers[layer];
    uint64_t out = 0;
    sign = 1;
    for (int b = 0; b < int(L.gates.size()); ++b) {
        const auto [p, q] = bond_sites(n, L.parity, b);
        const unsigned pair = unsigned((index >> (2 * p)) & 3u) | (unsigned((index >> (2 * q)) & 3u) << 2);
        const auto& g = L.gates[size_t(b)];
        const unsigned img = g.out_code(pair);
        out |= uint64_t(img & 3u) << (2 * p);
        out |= uint64_t(img >> 2) << (2 * q);
        sign *= g.out_sign(pair);
    }
    return out;
}

PauliString conjugate_through_circuit(const PauliString& s, const CliffordCircuit& c) {
    if (s.n != c.n) throw DimensionError("string and circuit sizes differ");
    PauliString out = s;
    for (size_t l = 0; l < c.layers.size(); ++l) out = c.apply_layer(l, out);
    return out;
}

TwoQubitTableau gate_by_name(std::string_view token) {
    if (token == "I") return gates::identity();
    if (token == "SWAP") return gates::swap();
    if (token == "CZ") return gates::cz();
    if (token == "CNOT") return gates::cnot();
    if (token == "ISWAP") return gates::iswap();
    if (token == "HH") return gates::hh();
    if (token == "fixed") return gates::fixed();
    if (token.size() > 1 && token[0] == 't') {
        int id = 0;
        for (char ch : token.substr(1)) {
            if (ch < '0' || ch > '9') throw ParseError("bad tableau id '" + std::string(token) + "'");
            id = id * 10 + (ch - '0');
            if (id >= kCliffordGroupSize) throw ParseError("tableau id out of range");
        }
        return clifford_by_id(id);
    }
    throw ParseError("unknown gate '" + std::string(token) + "'");
}

std::string gate_name(const TwoQubitTableau& t) {
    static const std::pair<const char*, TwoQubitTableau> named[] = {
        {"fixed", gates::fixed()}, {"I", gates::identity()}, {"SWAP", gates::swap()}, {"CZ", gates::cz()},
        {"CNOT", gates::cnot()},   {"ISWAP", gates::iswap()}, {"HH", gates::hh()}};
    for (const auto& [name, g] : named)
        if (g == t) return name;
    return "t" + std::to_string(clifford_id(t));
}

CliffordCircuit parse_circuit(std::string_view text, int n) {
    validate_ring(n);
    CliffordCircuit c;
    c.n = n;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream toks(line);
        std::vector<std::string> words;
        for (std::string w; toks >> w;) words.push_back(w);
        if (words.empty()) continue;
        if (words.size() != 1 && words.size() != size_t(n / 2))
            throw ParseError("line " + std::to_string(lineno) + ": expected 1 or " + std::to_string(n / 2) + " gates");
        CliffordLayer layer{int(c.layers.size() % 2), {}};
        for (int b = 0; b < n / 2; ++b) layer.gates.push_back(gate_by_name(words[words.size() == 1 ? 0 : size_t(b)]));
        c.layers.push_back(std::move(layer));
    }
    if (c.layers.size() == 1 && c.layers[0].gates.size() == size_t(n / 2)) {
        // A lone line describes both layers.
        CliffordLayer second = c.layers[0];
        second.parity = 1;
        c.layers.push_back(std::move(second));
    }
    if (c.layers.size() != 2) throw ParseError("circuit must describe one Floquet period (2 layers)");
    return c;
}

std::string format_circuit(const CliffordCircuit& c) {
    std::string out;
    for (const auto& layer : c.layers) {
        std::vector<std::string> names;
        for (const auto& g : layer.gates) names.push_back(gate_name(g));
        const bool uniform = std::all_of(names.begin(), names.end(), [&](const auto& s) { return s == names[0]; });
        if (uniform && !names.empty()) {
            out += names[0];
        } else {
            for (size_t i = 0; i < names.size(); ++i) out += (i ? " " : "") + names[i];
        }
        out += '\n';
    }
    return out;
}

double undoped_gap(int n, double gamma) {
    if (n <= 0 || n % 2 != 0) throw std::invalid_argument("undoped gap needs even n");
    if (gamma < 0) throw std::invalid_argument("gamma must be >= 0");
    return 0.5 * n * gamma;
}

}  // namespace floqgap
