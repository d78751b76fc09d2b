#pragma once

#include <Eigen/SparseCore>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "floqgap/floquet.hpp"

namespace floqgap {

struct PKey {
    uint64_t x = 0, z = 0;
    bool operator==(const PKey&) const = default;
};
struct PKeyHash {
    size_t operator()(const PKey& k) const noexcept { return size_t(mix64(mix64(k.x) ^ k.z)); }
};
using SparseOp = std::unordered_map<PKey, double, PKeyHash>;

// One period of the symmetrized channel on sparse Pauli coefficients. In
// generic mode every doped-site mixing entry is 1, so the output support is
// the realization-independent support of the image.
class SparseStepper {
   public:
    SparseStepper(const FloquetSpec& spec, bool generic);
    SparseOp step(const SparseOp& in) const;
    const FloquetSpec& spec() const { return spec_; }

   private:
    SparseOp layer(const SparseOp& in, size_t l) const;
    SparseOp mix(const SparseOp& in, int layer) const;

    FloquetSpec spec_;
    CliffordCircuit circuit_;
    RotationField field_;
    bool generic_;
};

struct TruncatedPropagator {
    FloquetSpec spec;
    int w_t = 0;
    std::vector<PauliString> nodes;
    std::unordered_map<PKey, int, PKeyHash> index;
    std::vector<std::vector<int>> succ;   // support graph
    Eigen::SparseMatrix<double> numeric;  // (out, in) of Pi Phi~ Pi for spec's realization
    bool has_numeric = false;
};

inline constexpr size_t kTruncatedNodeCeiling = 400000;

size_t truncated_node_count(int n, int w_t);
TruncatedPropagator build_truncated(const FloquetSpec& spec, int w_t, bool with_numeric = true,
                                    size_t ceiling = kTruncatedNodeCeiling);

struct EigenmodeFreeCertificate {
    bool eigenmode_free = false;
    std::vector<int> topological_order;  // when free
    std::vector<int> cycle;              // counterexample otherwise
    bool numeric_checked = false;
    int nilpotency_index = -1;  // smallest K with M^K = 0
};

EigenmodeFreeCertificate is_eigenmode_free(const TruncatedPropagator& tp);
// Largest w <= w_max certified eigenmode-free for the pattern (-1 if none).
int max_eigenmode_free_cutoff(const DopingPattern& p, int w_max);

struct FeingoldVargaBound {
    double basic = 0.0;  // rho_D + sqrt(|B| |C|)
    double sharp = 0.0;  // (rho_D + sqrt(rho_D^2 + 4 |B| |C|)) / 2
};
// Rigorous when the diagonal blocks are normal (block Gershgorin with
// distances to their spectra); with non-normal blocks it can fail.
FeingoldVargaBound feingold_varga_bound(double rho_d, double norm_b, double norm_c);

struct TruncationBound {
    double value = 0.0;
    int w = 0;
    bool certified = false;
    bool strong_dissipation = false;  // caller's assertion, carried along
};
// (w/2 + 1) gamma; throws unless the pattern is weight-w eigenmode-free.
TruncationBound gap_lower_bound_from_truncation(const FloquetSpec& spec, int w, bool strong_dissipation);

struct FormulaResult {
    double delta = 0.0;
    double log_sum[2] = {0.0, 0.0};  // even, odd chain (staggered: one chain)
    bool degenerate = false;
};

using RotationSet = std::vector<SingleQubitRotation>;  // indexed by site

// Weight-1 translation cycles X_s -> X_{s+-2} under full doping.
FormulaResult fully_doped_formula(const RotationSet& r1, const RotationSet& r2, int n, double gamma);
FormulaResult fully_doped_formula(const FloquetSpec& spec);
double fully_doped_thermodynamic(double gamma);  // gamma + 2

// Weight-2 cycle XIY -> XIY (two sites right per period) when even sites are
// doped; odd-doped rings are evaluated through the reflection i -> 1 - i.
FormulaResult staggered_formula(const RotationSet& r1, const RotationSet& r2, const DopingPattern& p, double gamma);
FormulaResult staggered_formula(const FloquetSpec& spec);
double staggered_thermodynamic(double gamma);  // 2 gamma + 3

double staggered_like_upper_bound(double gamma);  // 3 gamma + 3
double dense_upper_bound(double gamma);           // 3 gamma + 3
double motif_constant_max();                      // (10 - 2 ln 2) / 3

struct LocalTransitions {
    std::string name;       // (i), (i'), (ii), (ii'), (iii)
    std::string structure;  // four-site literal
    std::vector<std::pair<std::string, std::vector<std::string>>> edges;  // input -> outputs (3-site span)
};
// Generated from the generic truncated step with the structure on sites
// 4..7 of a 12-site ring, the input on its last three sites, undoped context.
std::vector<LocalTransitions> staggered_like_transition_table();

// ---------------------------------------------------------------- cycles

struct LocalKey {
    int offset = 0;     // start site mod the translation period
    std::string local;  // Pauli letters over the support window
    bool operator==(const LocalKey&) const = default;
};
struct LocalKeyHash {
    size_t operator()(const LocalKey& k) const noexcept {
        return std::hash<std::string>{}(k.local) ^ size_t(mix64(uint64_t(k.offset)));
    }
};

struct ReturnCycle {
    std::vector<LocalKey> steps;
    std::vector<int> shifts;  // displacement of the window start per step
    int period = 0;
    int total_shift = 0;
    int min_weight = 0, max_weight = 0;
    std::vector<std::string> amplitude_factors;  // per step, rotation entries on one path
};

// Block-staggered ring (o^k x)^m, truncated step restricted to weight <= w
// and circular span <= smax, quotiented by translations of lcm(2, k+1).
class BlockStaggeredCycles {
   public:
    BlockStaggeredCycles(int k, int w, int smax = 0, int n = 0);

    int k() const { return k_; }
    int w() const { return w_; }
    int smax() const { return smax_; }
    int n() const { return n_; }
    int translation_period() const { return period_; }

    struct Edge {
        LocalKey to;
        int shift;
    };
    const std::vector<Edge>& successors(const LocalKey& key);
    std::optional<ReturnCycle> find_cycle();
    bool on_cycle(const LocalKey& key);
    // True if b (at some offset) is a one-step successor of a at offset.
    std::optional<Edge> edge_to_string(const LocalKey& a, const std::string& b);
    std::string describe_step(const LocalKey& from, const Edge& e);

   private:
    std::vector<uint8_t> embed(const LocalKey& key, int& base) const;
    LocalKey canon(const std::vector<uint8_t>& codes, int& start) const;
    void layer(std::vector<uint8_t>& c, int parity) const;
    ReturnCycle finish(std::vector<LocalKey> keys);

    int k_, w_, smax_, n_, period_;
    std::vector<bool> doped_;
    std::unordered_map<LocalKey, std::vector<Edge>, LocalKeyHash> memo_;
};

struct CycleSearchResult {
    int k = 0;
    int w_star = -1;  // -1: none found up to the ceiling
    int smax_rule = 1;  // smax = w + smax_rule
    int n = 0;
    std::optional<ReturnCycle> representative;
};

std::optional<ReturnCycle> cycle_search(int k, int w, int n = 0, int smax = 0);
CycleSearchResult scan_cycles(int k, int w_max = 12, int n = 0);

std::string format_cycle_report(const CycleSearchResult& r);

}  // namespace floqgap
