#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "floqgap/clifford.hpp"
#include "floqgap/doping.hpp"
#include "floqgap/haar.hpp"

namespace floqgap {

struct FloquetSpec {
    int n = 4;
    double gamma = 1.0;
    DopingPattern pattern;
    uint64_t haar_seed = 0;
    bool resample_each_period = false;
    bool symmetrized = false;

    void validate() const;
};

FloquetSpec make_spec(int n, double gamma, const DopingPattern& pattern, uint64_t seed = 0);

// Doped-site rotations indexed by (period, layer, site). Quenched fields ignore
// the period. Draws are counter-seeded, so access order does not matter.
class RotationField {
   public:
    explicit RotationField(const FloquetSpec& spec);
    SingleQubitRotation at(int64_t period, int layer, int site) const;
    const SingleQubitRotation& quenched(int layer, int site) const { return cache_[size_t(layer)][size_t(site)]; }
    bool resampled() const { return resample_; }

   private:
    uint64_t seed_;
    bool resample_;
    std::vector<SingleQubitRotation> cache_[2];
};

inline constexpr int kMaxStateQubits = 12;

double depolarize_coefficient(int w, double gamma);

// One Floquet period on the 4^n Pauli coefficient vector: layer 1, layer-1
// rotations on doped sites, layer 2, layer-2 rotations, then e^{-gamma w}
// (split in halves around the unitary stage when symmetrized).
class FloquetChannel {
   public:
    explicit FloquetChannel(const FloquetSpec& spec);
    FloquetChannel(const FloquetSpec& spec, const CliffordCircuit& circuit);

    const FloquetSpec& spec() const { return spec_; }
    const CliffordCircuit& circuit() const { return circuit_; }
    const RotationField& rotations() const { return field_; }
    size_t dim() const { return dim_; }
    int weight_of(size_t index) const { return weight_[index]; }

    // Result lands in state; scratch is resized as needed.
    void apply(std::vector<double>& state, std::vector<double>& scratch, int64_t period = 0) const;
    void apply(std::vector<double>& state, int64_t period = 0) const;

   private:
    void scatter(size_t layer, const double* in, double* out, const double* pre) const;
    void rotate(double* v, int64_t period, int layer) const;

    FloquetSpec spec_;
    CliffordCircuit circuit_;
    RotationField field_;
    size_t dim_;
    std::vector<uint32_t> perm_[2];  // image index, sign in bit 31
    std::vector<uint8_t> weight_;
    std::vector<double> full_damp_, half_damp_;
};

std::vector<double> apply_channel(const FloquetSpec& spec, const std::vector<double>& state, int64_t period = 0);

enum class GapMethod { Auto, Dense, Power };
std::string to_string(GapMethod m);
GapMethod parse_gap_method(std::string_view s);
GapMethod resolve_method(GapMethod m, const FloquetSpec& spec);

struct GapEstimate {
    double delta = 0.0;
    GapMethod method = GapMethod::Dense;
    int64_t iterations = 0;
    double residual = 0.0;
    bool converged = true;
    double slope_estimate = 0.0;  // windowed log-norm slope (power only)
    std::vector<double> spectrum_head;
    std::vector<double> weight_histogram;  // index = weight
    bool degenerate = false;
};

inline constexpr size_t kDenseCeiling = 4096;

// Real matrix of the channel on the traceless sector (column j = image of
// basis index j + 1), column-major.
std::vector<double> dense_traceless_matrix(const FloquetChannel& ch);
// All traceless eigenvalues via strongly connected blocks of the sparsity
// pattern (the matrix is block triangular in that order).
std::vector<std::complex<double>> dense_spectrum(const FloquetSpec& spec, size_t ceiling = kDenseCeiling);
GapEstimate dense_gap(const FloquetSpec& spec, size_t ceiling = kDenseCeiling);

struct PowerOptions {
    int64_t max_periods = 200000;
    double tol = 1e-10;  // relative Ritz residual (quenched) or slope drift (resampled)
    int window = 0;      // 0 -> max(50, n)
    int krylov_dim = 40;
    bool want_mode = false;
};

GapEstimate power_gap(const FloquetSpec& spec, const PowerOptions& opt = {});
GapEstimate compute_gap(const FloquetSpec& spec, GapMethod method, const PowerOptions& opt = {});

struct EnsembleResult {
    double mean = 0.0;
    double stderr_ = 0.0;
    int ok = 0;
    int failed = 0;
    std::vector<uint64_t> seeds;
    std::vector<GapEstimate> estimates;
};

uint64_t realization_seed(uint64_t master, int realization);
EnsembleResult ensemble_gap(const FloquetSpec& templ, int realizations, uint64_t master_seed, GapMethod method,
                            const PowerOptions& opt = {});

// p(w) over the slowest nontrivial mode; averaged over the leading cluster
// and flagged when that cluster holds more than one mode.
GapEstimate gap_eigenmode_weights(const FloquetSpec& spec, const PowerOptions& opt = {});
std::vector<double> weight_histogram(const FloquetChannel& ch, const std::vector<std::complex<double>>& mode);

}  // namespace floqgap
