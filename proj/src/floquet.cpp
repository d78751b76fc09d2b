#include "floqgap/floquet.hpp"

#include <lapacke.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace floqgap {

void FloquetSpec::validate() const {
    validate_ring(n);
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be finite and >= 0");
    if (pattern.n() != n) throw std::invalid_argument("pattern size differs from n");
}

FloquetSpec make_spec(int n, double gamma, const DopingPattern& pattern, uint64_t seed) {
    FloquetSpec s;
    s.n = n;
    s.gamma = gamma;
    s.pattern = pattern;
    s.haar_seed = seed;
    s.validate();
    return s;
}

RotationField::RotationField(const FloquetSpec& spec) : seed_(spec.haar_seed), resample_(spec.resample_each_period) {
    for (int layer = 0; layer < 2; ++layer) {
        cache_[layer].resize(size_t(spec.n), SingleQubitRotation::identity());
        for (int site = 0; site < spec.n; ++site)
            if (spec.pattern.doped(site)) cache_[layer][size_t(site)] = at(0, layer, site);
    }
}

SingleQubitRotation RotationField::at(int64_t period, int layer, int site) const {
    const uint64_t p = resample_ ? uint64_t(period) : 0;
    return sample_rotation(derive_seed(seed_, p, uint64_t(layer), uint64_t(site)));
}

double depolarize_coefficient(int w, double gamma) {
    if (w < 0) throw std::invalid_argument("weight must be >= 0");
    return std::exp(-gamma * w);
}

FloquetChannel::FloquetChannel(const FloquetSpec& spec) : FloquetChannel(spec, CliffordCircuit::fixed_brickwork(spec.n)) {}

FloquetChannel::FloquetChannel(const FloquetSpec& spec, const CliffordCircuit& circuit)
    : spec_(spec), circuit_(circuit), field_((spec.validate(), spec)), dim_(0) {
    if (spec.n > kMaxStateQubits)
        throw std::invalid_argument("state vector refused: n=" + std::to_string(spec.n) + " exceeds " +
                                    std::to_string(kMaxStateQubits));
    if (circuit.n != spec.n || circuit.layers.size() != 2) throw std::invalid_argument("circuit must be 2 layers on n sites");
    dim_ = size_t{1} << (2 * spec.n);
    weight_.resize(dim_);
    for (size_t i = 0; i < dim_; ++i) weight_[i] = uint8_t(index_weight(i));
    for (int l = 0; l < 2; ++l) {
        perm_[l].resize(dim_);
        for (size_t i = 0; i < dim_; ++i) {
            int sign;
            const uint64_t img = circuit_.apply_layer_index(size_t(l), i, sign);
            perm_[l][i] = uint32_t(img) | (sign < 0 ? 0x80000000u : 0u);
        }
    }
    full_damp_.resize(size_t(spec.n) + 1);
    half_damp_.resize(size_t(spec.n) + 1);
    for (int w = 0; w <= spec.n; ++w) {
        full_damp_[size_t(w)] = depolarize_coefficient(w, spec.gamma);
        half_damp_[size_t(w)] = depolarize_coefficient(w, 0.5 * spec.gamma);
    }
}

void FloquetChannel::scatter(size_t layer, const double* in, double* out, const double* pre) const {
    const auto& p = perm_[layer];
    for (size_t i = 0; i < dim_; ++i) {
        double v = in[i];
        if (pre) v *= pre[weight_[i]];
        const uint32_t e = p[i];
        out[e & 0x7FFFFFFFu] = (e & 0x80000000u) ? -v : v;
    }
}

void FloquetChannel::rotate(double* v, int64_t period, int layer) const {
    for (int site = 0; site < spec_.n; ++site) {
        if (!spec_.pattern.doped(site)) continue;
        const SingleQubitRotation rot = field_.resampled() ? field_.at(period, layer, site) : field_.quenched(layer, site);
        const auto& r = rot.r;
        const size_t s = size_t{1} << (2 * site);
        for (size_t hi = 0; hi < dim_; hi += 4 * s) {
            for (size_t lo = 0; lo < s; ++lo) {
                const size_t b = hi + lo;
                const double ax = v[b + s], az = v[b + 2 * s], ay = v[b + 3 * s];
                v[b + s] = r[0][0] * ax + r[0][1] * ay + r[0][2] * az;
                v[b + 3 * s] = r[1][0] * ax + r[1][1] * ay + r[1][2] * az;
                v[b + 2 * s] = r[2][0] * ax + r[2][1] * ay + r[2][2] * az;
            }
        }
    }
}

void FloquetChannel::apply(std::vector<double>& state, std::vector<double>& scratch, int64_t period) const {
    if (state.size() != dim_) throw DimensionError("state length is not 4^n");
    scratch.resize(dim_);
    scatter(0, state.data(), scratch.data(), spec_.symmetrized ? half_damp_.data() : nullptr);
    rotate(scratch.data(), period, 0);
    scatter(1, scratch.data(), state.data(), nullptr);
    rotate(state.data(), period, 1);
    const double* d = spec_.symmetrized ? half_damp_.data() : full_damp_.data();
    for (size_t i = 0; i < dim_; ++i) state[i] *= d[weight_[i]];
}

void FloquetChannel::apply(std::vector<double>& state, int64_t period) const {
    std::vector<double> scratch;
    apply(state, scratch, period);
}

std::vector<double> apply_channel(const FloquetSpec& spec, const std::vector<double>& state, int64_t period) {
    FloquetChannel ch(spec);
    std::vector<double> out = state;
    ch.apply(out, period);
    return out;
}

std::string to_string(GapMethod m) {
    switch (m) {
        case GapMethod::Auto: return "auto";
        case GapMethod::Dense: return "dense";
        case GapMethod::Power: return "power";
    }
    return "?";
}

GapMethod parse_gap_method(std::string_view s) {
    if (s == "auto") return GapMethod::Auto;
    if (s == "dense") return GapMethod::Dense;
    if (s == "power") return GapMethod::Power;
    throw std::invalid_argument("method must be auto, dense or power");
}

GapMethod resolve_method(GapMethod m, const FloquetSpec& spec) {
    if (m != GapMethod::Auto) return m;
    return (spec.n <= 4 && !spec.resample_each_period) ? GapMethod::Dense : GapMethod::Power;
}

// ---------------------------------------------------------------- dense

std::vector<double> dense_traceless_matrix(const FloquetChannel& ch) {
    const size_t d = ch.dim() - 1;
    std::vector<double> m(d * d, 0.0);
    std::vector<double> v(ch.dim()), scratch;
    for (size_t j = 0; j < d; ++j) {
        std::fill(v.begin(), v.end(), 0.0);
        v[j + 1] = 1.0;
        ch.apply(v, scratch, 0);
        std::copy(v.begin() + 1, v.end(), m.begin() + std::ptrdiff_t(j * d));
    }
    return m;
}

namespace {

// Iterative Tarjan over the column-major sparsity pattern.
std::vector<std::vector<size_t>> strong_components(const std::vector<double>& m, size_t d) {
    std::vector<std::vector<size_t>> adj(d);
    for (size_t j = 0; j < d; ++j)
        for (size_t i = 0; i < d; ++i)
            if (m[j * d + i] != 0.0) adj[j].push_back(i);
    constexpr size_t kNone = std::numeric_limits<size_t>::max();
    std::vector<size_t> index(d, kNone), low(d, 0), stack;
    std::vector<bool> on_stack(d, false);
    std::vector<std::vector<size_t>> comps;
    size_t counter = 0;
    std::vector<std::pair<size_t, size_t>> call;  // node, next edge
    for (size_t root = 0; root < d; ++root) {
        if (index[root] != kNone) continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& [v, e] = call.back();
            if (e < adj[v].size()) {
                const size_t w = adj[v][e++];
                if (index[w] == kNone) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            const size_t node = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[node]);
            if (low[node] == index[node]) {
                std::vector<size_t> comp;
                size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp.push_back(w);
                } while (w != node);
                comps.push_back(std::move(comp));
            }
        }
    }
    return comps;
}

std::vector<std::complex<double>> block_eigenvalues(const std::vector<double>& m, size_t d,
                                                    const std::vector<size_t>& comp) {
    const size_t k = comp.size();
    if (k == 1) return {std::complex<double>(m[comp[0] * d + comp[0]], 0.0)};
    std::vector<double> a(k * k), wr(k), wi(k);
    for (size_t c = 0; c < k; ++c)
        for (size_t r = 0; r < k; ++r) a[c * k + r] = m[comp[c] * d + comp[r]];
    const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', lapack_int(k), a.data(), lapack_int(k),
                                          wr.data(), wi.data(), nullptr, 1, nullptr, 1);
    if (info != 0) throw std::runtime_error("dgeev failed with info " + std::to_string(info));
    std::vector<std::complex<double>> out(k);
    for (size_t i = 0; i < k; ++i) out[i] = {wr[i], wi[i]};
    return out;
}

double radius_to_gap(double rho) { return rho > 0.0 ? -std::log(rho) : std::numeric_limits<double>::infinity(); }

std::vector<double> head_of(std::vector<double> mags, size_t k) {
    std::sort(mags.begin(), mags.end(), std::greater<>());
    if (mags.size() > k) mags.resize(k);
    return mags;
}

}  // namespace

std::vector<std::complex<double>> dense_spectrum(const FloquetSpec& spec, size_t ceiling) {
    spec.validate();
    if (spec.resample_each_period) throw std::invalid_argument("dense spectrum needs a quenched (period-independent) channel");
    const size_t dim = size_t{1} << (2 * spec.n);
    if (spec.n > 16 || dim > ceiling)
        throw std::invalid_argument("dense refused: 4^n=" + std::to_string(dim) + " exceeds ceiling " +
                                    std::to_string(ceiling) + "; use the power method");
    FloquetChannel ch(spec);
    const size_t d = dim - 1;
    const std::vector<double> m = dense_traceless_matrix(ch);
    std::vector<std::complex<double>> all;
    all.reserve(d);
    for (const auto& comp : strong_components(m, d)) {
        auto ev = block_eigenvalues(m, d, comp);
        all.insert(all.end(), ev.begin(), ev.end());
    }
    return all;
}

GapEstimate dense_gap(const FloquetSpec& spec, size_t ceiling) {
    const auto ev = dense_spectrum(spec, ceiling);
    std::vector<double> mags(ev.size());
    std::transform(ev.begin(), ev.end(), mags.begin(), [](auto z) { return std::abs(z); });
    GapEstimate g;
    g.method = GapMethod::Dense;
    g.spectrum_head = head_of(mags, 8);
    g.delta = radius_to_gap(g.spectrum_head.empty() ? 0.0 : g.spectrum_head[0]);
    g.iterations = 0;
    g.residual = 0.0;
    g.converged = true;
    return g;
}

// ---------------------------------------------------------------- power / Krylov

namespace {

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::vector<double> start_vector(const FloquetChannel& ch) {
    // Uniform traceless vector with a seeded ripple, so that modes orthogonal
    // to the flat vector by symmetry are still excited.
    Rng rng(derive_seed(ch.spec().haar_seed, 0x5eed));
    std::vector<double> v(ch.dim());
    for (size_t i = 1; i < v.size(); ++i) v[i] = 1.0 + 0.5 * (rng.uniform() - 0.5);
    v[0] = 0.0;
    const double nv = norm2(v);
    for (double& x : v) x /= nv;
    return v;
}

struct Ritz {
    std::complex<double> value;
    double residual;  // absolute
    Eigen::VectorXcd coords;
};

struct ArnoldiResult {
    std::vector<Ritz> ritz;  // sorted by decreasing modulus
    std::vector<std::vector<double>> basis;
    int steps = 0;
};

ArnoldiResult arnoldi(const FloquetChannel& ch, const std::vector<double>& x0, int m, std::vector<double>& scratch) {
    ArnoldiResult out;
    auto& V = out.basis;
    V.push_back(x0);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
    int k = 0;
    double tail = 0.0;
    for (; k < m; ++k) {
        std::vector<double> w = V[size_t(k)];
        ch.apply(w, scratch, 0);
        const double wnorm = norm2(w);
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i <= k; ++i) {
                const double h = dot(V[size_t(i)], w);
                H(i, k) += h;
                for (size_t t = 0; t < w.size(); ++t) w[t] -= h * V[size_t(i)][t];
            }
        const double hn = norm2(w);
        H(k + 1, k) = hn;
        if (hn <= 1e-12 * std::max(wnorm, std::numeric_limits<double>::min())) {
            tail = hn;
            ++k;
            break;
        }
        tail = hn;
        for (double& t : w) t /= hn;
        V.push_back(std::move(w));
    }
    out.steps = k;
    const Eigen::MatrixXd Hk = H.topLeftCorner(k, k);
    Eigen::EigenSolver<Eigen::MatrixXd> es(Hk, true);
    for (int i = 0; i < k; ++i) {
        Eigen::VectorXcd s = es.eigenvectors().col(i);
        s /= s.norm();
        out.ritz.push_back({es.eigenvalues()(i), tail * std::abs(s(k - 1)), s});
    }
    std::sort(out.ritz.begin(), out.ritz.end(),
              [](const Ritz& a, const Ritz& b) { return std::abs(a.value) > std::abs(b.value); });
    if (int(V.size()) > k) V.resize(size_t(k));
    return out;
}

std::vector<std::complex<double>> ritz_vector(const ArnoldiResult& a, const Ritz& r) {
    const size_t n = a.basis[0].size();
    std::vector<std::complex<double>> y(n, 0.0);
    for (size_t j = 0; j < a.basis.size(); ++j) {
        const std::complex<double> c = r.coords(Eigen::Index(j));
        for (size_t t = 0; t < n; ++t) y[t] += c * a.basis[j][t];
    }
    return y;
}

GapEstimate resampled_power(const FloquetChannel& ch, const PowerOptions& opt) {
    const int window = opt.window > 0 ? opt.window : std::max(50, ch.spec().n);
    const double tol = std::max(opt.tol, 1e-4);
    std::vector<double> v = start_vector(ch), scratch;
    GapEstimate g;
    g.method = GapMethod::Power;
    int64_t t = 0;
    // Warmup, then consecutive windows of log-norm growth.
    for (int i = 0; i < window; ++i, ++t) {
        ch.apply(v, scratch, t);
        const double nv = norm2(v);
        if (nv == 0.0) {
            g.delta = std::numeric_limits<double>::infinity();
            g.iterations = t + 1;
            return g;
        }
        for (double& x : v) x /= nv;
    }
    double total_log = 0.0, prev = std::numeric_limits<double>::quiet_NaN();
    int64_t counted = 0;
    g.converged = false;
    while (t < opt.max_periods) {
        double wlog = 0.0;
        for (int i = 0; i < window; ++i, ++t) {
            ch.apply(v, scratch, t);
            const double nv = norm2(v);
            wlog += std::log(nv);
            for (double& x : v) x /= nv;
        }
        total_log += wlog;
        counted += window;
        const double running = -total_log / double(counted);
        g.delta = running;
        g.residual = std::isnan(prev) ? std::numeric_limits<double>::infinity() : std::abs(running - prev);
        prev = running;
        if (counted >= 20 * window && g.residual < tol) {
            g.converged = true;
            break;
        }
    }
    g.slope_estimate = g.delta;
    g.iterations = t;
    return g;
}

}  // namespace

GapEstimate power_gap(const FloquetSpec& spec, const PowerOptions& opt) {
    if (spec.resample_each_period) return resampled_power(FloquetChannel(spec), opt);
    // Iterate on sqrt(D) U sqrt(D): same spectrum, but at strong damping the
    // plain D U is a steeply weighted shift whose Ritz values lose digits.
    FloquetSpec sym = spec;
    sym.symmetrized = true;
    const FloquetChannel ch(sym);

    GapEstimate g;
    g.method = GapMethod::Power;
    const int window = opt.window > 0 ? opt.window : std::max(50, spec.n);
    std::vector<double> v = start_vector(ch), scratch;
    int64_t applied = 0;
    double log_growth = 0.0;
    for (int i = 0; i < window; ++i) {
        ch.apply(v, scratch, 0);
        ++applied;
        const double nv = norm2(v);
        if (nv == 0.0) {
            g.delta = std::numeric_limits<double>::infinity();
            g.iterations = applied;
            return g;
        }
        log_growth += std::log(nv);
        for (double& x : v) x /= nv;
    }
    g.slope_estimate = -log_growth / window;

    const int m_cap = int(std::min<size_t>(ch.dim() - 1, std::max<size_t>(size_t(opt.krylov_dim), (size_t{1} << 25) / ch.dim())));
    int m = std::max(2, std::min(opt.krylov_dim, m_cap));
    g.converged = false;
    ArnoldiResult last;
    for (int restart = 1; applied < opt.max_periods; ++restart) {
        // Tightly clustered spectra (weak damping) stall small bases; widen.
        if (restart % 5 == 0) m = std::min(m_cap, m + m / 2);
        last = arnoldi(ch, v, m, scratch);
        applied += last.steps;
        const Ritz& top = last.ritz.front();
        const double mag = std::abs(top.value);
        g.delta = radius_to_gap(mag);
        g.residual = mag > 0.0 ? top.residual / mag : 0.0;
        if (g.residual <= opt.tol || last.steps < m) {
            g.converged = true;
            break;
        }
        // Restart from the leading Ritz vectors (both halves of complex pairs).
        std::vector<double> next(ch.dim(), 0.0);
        const size_t keep = std::min<size_t>(last.ritz.size(), 8);
        for (size_t i = 0; i < keep; ++i) {
            const auto y = ritz_vector(last, last.ritz[i]);
            for (size_t t = 0; t < next.size(); ++t) next[t] += y[t].real() + y[t].imag();
        }
        next[0] = 0.0;
        const double nn = norm2(next);
        if (nn == 0.0) break;
        for (double& x : next) x /= nn;
        v = std::move(next);
    }
    g.iterations = applied;
    std::vector<double> mags;
    for (const auto& r : last.ritz) mags.push_back(std::abs(r.value));
    g.spectrum_head = head_of(mags, 8);

    if (opt.want_mode && !last.ritz.empty()) {
        const double top = std::abs(last.ritz.front().value);
        std::vector<double> hist(size_t(spec.n) + 1, 0.0);
        int members = 0;
        for (const auto& r : last.ritz) {
            if (std::abs(r.value) < top * (1.0 - 1e-6)) break;
            if (r.value.imag() < 0.0) continue;  // conjugate partner has the same histogram
            auto y = ritz_vector(last, r);
            for (size_t i = 0; i < y.size(); ++i) y[i] *= std::exp(-0.5 * spec.gamma * ch.weight_of(i));  // back to D U
            const auto h = weight_histogram(ch, y);
            for (size_t w = 0; w < hist.size(); ++w) hist[w] += h[w];
            ++members;
        }
        for (double& h : hist) h /= std::max(members, 1);
        g.weight_histogram = std::move(hist);
        g.degenerate = members > 1;
    }
    return g;
}

GapEstimate compute_gap(const FloquetSpec& spec, GapMethod method, const PowerOptions& opt) {
    return resolve_method(method, spec) == GapMethod::Dense ? dense_gap(spec) : power_gap(spec, opt);
}

uint64_t realization_seed(uint64_t master, int realization) { return derive_seed(master, uint64_t(realization), 0x7265616c); }

EnsembleResult ensemble_gap(const FloquetSpec& templ, int realizations, uint64_t master_seed, GapMethod method,
                            const PowerOptions& opt) {
    if (realizations < 1) throw std::invalid_argument("realizations must be >= 1");
    EnsembleResult out;
    double sum = 0.0, sumsq = 0.0;
    for (int r = 0; r < realizations; ++r) {
        FloquetSpec s = templ;
        s.haar_seed = realization_seed(master_seed, r);
        out.seeds.push_back(s.haar_seed);
        GapEstimate g;
        try {
            g = compute_gap(s, method, opt);
        } catch (const std::runtime_error&) {
            g.converged = false;
            g.delta = std::numeric_limits<double>::quiet_NaN();
        }
        if (g.converged && std::isfinite(g.delta)) {
            ++out.ok;
            sum += g.delta;
            sumsq += g.delta * g.delta;
        } else {
            ++out.failed;
        }
        out.estimates.push_back(std::move(g));
    }
    if (out.ok > 0) {
        out.mean = sum / out.ok;
        const double var = out.ok > 1 ? std::max(0.0, (sumsq - out.ok * out.mean * out.mean) / (out.ok - 1)) : 0.0;
        out.stderr_ = std::sqrt(var / out.ok);
    } else {
        out.mean = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

std::vector<double> weight_histogram(const FloquetChannel& ch, const std::vector<std::complex<double>>& mode) {
    if (mode.size() != ch.dim()) throw DimensionError("mode length is not 4^n");
    std::vector<double> hist(size_t(ch.spec().n) + 1, 0.0);
    double total = 0.0;
    for (size_t i = 1; i < mode.size(); ++i) {
        const double p = std::norm(mode[i]);
        hist[size_t(ch.weight_of(i))] += p;
        total += p;
    }
    if (total == 0.0) throw std::invalid_argument("mode has no traceless component");
    for (double& h : hist) h /= total;
    return hist;
}

GapEstimate gap_eigenmode_weights(const FloquetSpec& spec, const PowerOptions& opt) {
    if (spec.resample_each_period) throw std::invalid_argument("eigenmode needs a quenched channel");
    PowerOptions o = opt;
    o.want_mode = true;
    return power_gap(spec, o);
}

}  // namespace floqgap
