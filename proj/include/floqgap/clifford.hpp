#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "floqgap/pauli.hpp"
#include "floqgap/rng.hpp"

namespace floqgap {

// Conjugation action S -> U S U^dag of a two-qubit Clifford. Pair codes are
// c_first | c_second << 2, first = first site of the bond.
class TwoQubitTableau {
   public:
    TwoQubitTableau();  // identity
    // Images of X1, Z1, X2, Z2 as signed two-qubit strings.
    static TwoQubitTableau from_images(const std::array<PauliString, 4>& images);
    static TwoQubitTableau from_images(std::string_view x1, std::string_view z1, std::string_view x2,
                                       std::string_view z2);

    const std::array<PauliString, 4>& images() const { return images_; }
    unsigned out_code(unsigned pair) const { return out_code_[pair]; }
    int out_sign(unsigned pair) const { return out_sign_[pair]; }
    PauliString apply(const PauliString& two_site) const;
    TwoQubitTableau then(const TwoQubitTableau& next) const;  // next after this

    bool operator==(const TwoQubitTableau& o) const { return images_ == o.images_; }

   private:
    void build();

    std::array<PauliString, 4> images_;
    std::array<uint8_t, 16> out_code_{};
    std::array<int8_t, 16> out_sign_{};
};

namespace gates {
TwoQubitTableau identity();
TwoQubitTableau swap();
TwoQubitTableau cz();
TwoQubitTableau cnot();   // control on the first site
TwoQubitTableau iswap();  // exp[i pi/4 (XX + YY)]
TwoQubitTableau hh();     // H on both sites
TwoQubitTableau fixed();  // iSWAP (H x H)
}  // namespace gates

inline TwoQubitTableau fixed_gate_tableau() { return gates::fixed(); }

enum class LCClass { Identity, Swap, CZ, ISwap };
std::string to_string(LCClass c);

LCClass classify_lc(const TwoQubitTableau& t);
bool weight_preserving(const TwoQubitTableau& t);
bool support_preserving(const TwoQubitTableau& t);

// The two-qubit Clifford group modulo phase: 720 symplectic maps times 16
// sign choices. Ids are symplectic_index * 16 + sign bits.
inline constexpr int kCliffordGroupSize = 11520;
const std::vector<std::array<uint8_t, 4>>& symplectic_maps();
TwoQubitTableau clifford_by_id(int id);
int clifford_id(const TwoQubitTableau& t);
TwoQubitTableau sample_clifford(Rng& rng);
TwoQubitTableau sample_clifford_in_class(Rng& rng, LCClass cls);
// Single-qubit Clifford dressing (a x b), a, b in [0, 24).
TwoQubitTableau local_clifford_pair(int a, int b);

struct CliffordLayer {
    int parity = 0;  // 0: bonds (0,1),(2,3),...  1: bonds (1,2),...,(n-1,0)
    std::vector<TwoQubitTableau> gates;
};

inline std::pair<int, int> bond_sites(int n, int parity, int bond) {
    const int a = (2 * bond + parity) % n;
    return {a, (a + 1) % n};
}

struct CliffordCircuit {
    int n = 0;
    std::vector<CliffordLayer> layers;

    static CliffordCircuit brickwork(int n, const TwoQubitTableau& gate);
    static CliffordCircuit fixed_brickwork(int n) { return brickwork(n, gates::fixed()); }
    static CliffordCircuit identity(int n) { return brickwork(n, gates::identity()); }
    // Independent gate per bond and layer, drawn from the class (or the whole
    // group when cls is empty).
    static CliffordCircuit random(int n, Rng& rng, const LCClass* cls);

    PauliString apply_layer(size_t layer, const PauliString& s) const;
    // Signed image of an interleaved basis index under one layer (n <= 32).
    uint64_t apply_layer_index(size_t layer, uint64_t index, int& sign) const;
};

void validate_ring(int n);

PauliString conjugate_through_circuit(const PauliString& s, const CliffordCircuit& c);

// One line per layer; each line holds either one token applied to every bond
// or n/2 tokens. Tokens: I, SWAP, CZ, CNOT, ISWAP, HH, fixed, or t<id>.
CliffordCircuit parse_circuit(std::string_view text, int n);
std::string format_circuit(const CliffordCircuit& c);
TwoQubitTableau gate_by_name(std::string_view token);
std::string gate_name(const TwoQubitTableau& t);

double undoped_gap(int n, double gamma);

}  // namespace floqgap
