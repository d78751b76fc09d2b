#include "floqgap/truncated.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace floqgap {

// ---------------------------------------------------------------- sparse step

SparseStepper::SparseStepper(const FloquetSpec& spec, bool generic)
    : spec_(spec), circuit_(CliffordCircuit::fixed_brickwork(spec.n)), field_(spec), generic_(generic) {
    spec_.validate();
    if (spec_.resample_each_period) throw std::invalid_argument("truncated propagator needs a quenched channel");
}

SparseOp SparseStepper::layer(const SparseOp& in, size_t l) const {
    SparseOp out;
    out.reserve(in.size());
    for (const auto& [k, c] : in) {
        const PauliString img = circuit_.apply_layer(l, PauliString(spec_.n, k.x, k.z));
        out[{img.x, img.z}] += img.sign * c;
    }
    return out;
}

SparseOp SparseStepper::mix(const SparseOp& in, int layer) const {
    SparseOp cur = in;
    for (int site = 0; site < spec_.n; ++site) {
        if (!spec_.pattern.doped(site)) continue;
        const auto& r = field_.quenched(layer, site).r;
        const uint64_t bit = uint64_t{1} << site;
        SparseOp next;
        next.reserve(cur.size() * 2);
        for (const auto& [k, c] : cur) {
            const unsigned code = unsigned((k.x >> site) & 1u) | (unsigned((k.z >> site) & 1u) << 1);
            if (code == 0) {
                next[k] += c;
                continue;
            }
            const int a = kCodeAxis[code];
            for (int b = 0; b < 3; ++b) {
                const double f = generic_ ? 1.0 : r[size_t(b)][size_t(a)];
                if (f == 0.0) continue;
                const unsigned oc = kAxisCode[b];
                PKey o{(k.x & ~bit) | ((oc & 1u) ? bit : 0), (k.z & ~bit) | ((oc & 2u) ? bit : 0)};
                next[o] += f * c;
            }
        }
        cur = std::move(next);
    }
    return cur;
}

SparseOp SparseStepper::step(const SparseOp& in) const {
    const double g = spec_.symmetrized ? 0.5 * spec_.gamma : spec_.gamma;
    SparseOp cur;
    for (const auto& [k, c] : in) {
        const double pre = spec_.symmetrized ? std::exp(-g * std::popcount(k.x | k.z)) : 1.0;
        cur[k] += generic_ ? c : pre * c;
    }
    cur = mix(layer(cur, 0), 0);
    cur = mix(layer(cur, 1), 1);
    SparseOp out;
    out.reserve(cur.size());
    for (const auto& [k, c] : cur) {
        if (!generic_ && c == 0.0) continue;
        out[k] = generic_ ? 1.0 : c * std::exp(-g * std::popcount(k.x | k.z));
    }
    return out;
}

// ---------------------------------------------------------------- truncated map

size_t truncated_node_count(int n, int w_t) {
    double total = 0.0, binom = 1.0, pow3 = 1.0;
    for (int w = 1; w <= std::min(w_t, n); ++w) {
        binom = binom * (n - w + 1) / w;
        pow3 *= 3.0;
        total += binom * pow3;
    }
    return total > 1e18 ? std::numeric_limits<size_t>::max() : size_t(total + 0.5);
}

namespace {

void enumerate_low_weight(int n, int w_t, std::vector<PauliString>& out) {
    std::vector<int> sites;
    std::function<void(int, uint64_t, uint64_t)> rec = [&](int from, uint64_t x, uint64_t z) {
        if (!sites.empty()) out.emplace_back(n, x, z);
        if (int(sites.size()) == w_t) return;
        for (int s = from; s < n; ++s) {
            sites.push_back(s);
            const uint64_t bit = uint64_t{1} << s;
            for (unsigned code = 1; code < 4; ++code)
                rec(s + 1, (code & 1u) ? x | bit : x, (code & 2u) ? z | bit : z);
            sites.pop_back();
        }
    };
    rec(0, 0, 0);
}

}  // namespace

TruncatedPropagator build_truncated(const FloquetSpec& spec_in, int w_t, bool with_numeric, size_t ceiling) {
    FloquetSpec spec = spec_in;
    spec.symmetrized = true;
    spec.validate();
    if (w_t < 0) throw std::invalid_argument("cutoff must be >= 0");
    const size_t count = truncated_node_count(spec.n, w_t);
    if (count > ceiling)
        throw std::invalid_argument("truncated propagator refused: " + std::to_string(count) + " strings exceed ceiling " +
                                    std::to_string(ceiling));
    TruncatedPropagator tp;
    tp.spec = spec;
    tp.w_t = w_t;
    enumerate_low_weight(spec.n, w_t, tp.nodes);
    std::sort(tp.nodes.begin(), tp.nodes.end(), [](const PauliString& a, const PauliString& b) {
        return a.weight() != b.weight() ? a.weight() < b.weight() : (a.x != b.x ? a.x < b.x : a.z < b.z);
    });
    for (size_t i = 0; i < tp.nodes.size(); ++i) tp.index[{tp.nodes[i].x, tp.nodes[i].z}] = int(i);
    tp.succ.resize(tp.nodes.size());

    const SparseStepper generic(spec, true);
    std::optional<SparseStepper> numeric;
    if (with_numeric) numeric.emplace(spec, false);
    std::vector<Eigen::Triplet<double>> trip;
    for (size_t i = 0; i < tp.nodes.size(); ++i) {
        const SparseOp in{{PKey{tp.nodes[i].x, tp.nodes[i].z}, 1.0}};
        for (const auto& [k, c] : generic.step(in)) {
            if (std::popcount(k.x | k.z) > w_t || (k.x | k.z) == 0) continue;
            tp.succ[i].push_back(tp.index.at(k));
        }
        std::sort(tp.succ[i].begin(), tp.succ[i].end());
        if (numeric) {
            for (const auto& [k, c] : numeric->step(in)) {
                if (std::popcount(k.x | k.z) > w_t || (k.x | k.z) == 0 || c == 0.0) continue;
                trip.emplace_back(tp.index.at(k), int(i), c);
            }
        }
    }
    if (with_numeric) {
        tp.numeric.resize(Eigen::Index(tp.nodes.size()), Eigen::Index(tp.nodes.size()));
        tp.numeric.setFromTriplets(trip.begin(), trip.end());
        tp.has_numeric = true;
    }
    return tp;
}

EigenmodeFreeCertificate is_eigenmode_free(const TruncatedPropagator& tp) {
    const size_t n = tp.nodes.size();
    std::vector<int> indeg(n, 0);
    for (const auto& s : tp.succ)
        for (int v : s) ++indeg[size_t(v)];
    std::vector<int> queue;
    for (size_t i = 0; i < n; ++i)
        if (indeg[i] == 0) queue.push_back(int(i));
    EigenmodeFreeCertificate cert;
    for (size_t head = 0; head < queue.size(); ++head)
        for (int v : tp.succ[size_t(queue[head])])
            if (--indeg[size_t(v)] == 0) queue.push_back(v);
    if (queue.size() == n) {
        cert.eigenmode_free = true;
        cert.topological_order = std::move(queue);
    } else {
        // Walk backwards inside the residual (cyclic) part until a node repeats.
        std::vector<std::vector<int>> pred(n);
        for (size_t u = 0; u < n; ++u)
            if (indeg[u] > 0)
                for (int v : tp.succ[u])
                    if (indeg[size_t(v)] > 0) pred[size_t(v)].push_back(int(u));
        int cur = 0;
        while (indeg[size_t(cur)] == 0) ++cur;
        std::vector<int> pos(n, -1), walk;
        while (pos[size_t(cur)] < 0) {
            pos[size_t(cur)] = int(walk.size());
            walk.push_back(cur);
            cur = pred[size_t(cur)].front();
        }
        cert.cycle.assign(walk.begin() + pos[size_t(cur)], walk.end());
        std::reverse(cert.cycle.begin(), cert.cycle.end());
    }
    if (tp.has_numeric && cert.eigenmode_free) {
        cert.numeric_checked = true;
        Eigen::SparseMatrix<double> p = tp.numeric;
        p.prune([](Eigen::Index, Eigen::Index, const double& v) { return v != 0.0; });
        int k = 1;
        while (p.nonZeros() > 0 && size_t(k) <= n) {
            p = (p * tp.numeric).pruned();
            p.prune([](Eigen::Index, Eigen::Index, const double& v) { return v != 0.0; });
            ++k;
        }
        cert.nilpotency_index = p.nonZeros() == 0 ? (n == 0 ? 0 : k) : -1;
    }
    return cert;
}

int max_eigenmode_free_cutoff(const DopingPattern& p, int w_max) {
    int best = -1;
    FloquetSpec s = make_spec(p.n(), 1.0, p, 0);
    for (int w = 0; w <= std::min(w_max, p.n()); ++w) {
        if (truncated_node_count(p.n(), w) > kTruncatedNodeCeiling) break;
        if (!is_eigenmode_free(build_truncated(s, w, false)).eigenmode_free) break;
        best = w;
    }
    return best;
}

FeingoldVargaBound feingold_varga_bound(double rho_d, double norm_b, double norm_c) {
    if (rho_d < 0 || norm_b < 0 || norm_c < 0) throw std::invalid_argument("bound inputs must be >= 0");
    const double bc = norm_b * norm_c;
    return {rho_d + std::sqrt(bc), 0.5 * (rho_d + std::sqrt(rho_d * rho_d + 4.0 * bc))};
}

TruncationBound gap_lower_bound_from_truncation(const FloquetSpec& spec, int w, bool strong_dissipation) {
    if (w < 0) throw std::invalid_argument("cutoff must be >= 0");
    if (!is_eigenmode_free(build_truncated(spec, w, false)).eigenmode_free)
        throw std::invalid_argument("weight-" + std::to_string(w) + " eigenmode-freeness not certified for pattern " +
                                    spec.pattern.literal());
    return {(0.5 * w + 1.0) * spec.gamma, w, true, strong_dissipation};
}

// ---------------------------------------------------------------- formulas

namespace {

RotationSet quenched_layer(const FloquetSpec& spec, int layer) {
    RotationField f(spec);
    RotationSet out;
    for (int s = 0; s < spec.n; ++s) out.push_back(f.quenched(layer, s));
    return out;
}

double log_abs(double v, bool& degenerate) {
    if (v == 0.0) {
        degenerate = true;
        return -std::numeric_limits<double>::infinity();
    }
    return std::log(std::abs(v));
}

size_t wrap(int i, int n) { return size_t(((i % n) + n) % n); }

}  // namespace

FormulaResult fully_doped_formula(const RotationSet& r1, const RotationSet& r2, int n, double gamma) {
    if (int(r1.size()) != n || int(r2.size()) != n) throw DimensionError("rotation sets must have n entries");
    validate_ring(n);
    FormulaResult out;
    for (int s = 0; s < n; s += 2)
        out.log_sum[0] += log_abs(r1[wrap(s + 1, n)].r[AX][AZ] * r2[wrap(s + 2, n)].r[AX][AZ], out.degenerate);
    for (int s = 1; s < n; s += 2)
        out.log_sum[1] += log_abs(r1[wrap(s - 1, n)].r[AX][AZ] * r2[wrap(s - 2, n)].r[AX][AZ], out.degenerate);
    out.delta = gamma - 2.0 / n * std::max(out.log_sum[0], out.log_sum[1]);
    return out;
}

FormulaResult fully_doped_formula(const FloquetSpec& spec) {
    if (spec.pattern.n_h() != spec.n) throw std::invalid_argument("fully doped formula needs full doping");
    return fully_doped_formula(quenched_layer(spec, 0), quenched_layer(spec, 1), spec.n, spec.gamma);
}

double fully_doped_thermodynamic(double gamma) { return gamma + 2.0; }

FormulaResult staggered_formula(const RotationSet& r1_in, const RotationSet& r2_in, const DopingPattern& p,
                                double gamma) {
    const int n = p.n();
    if (int(r1_in.size()) != n || int(r2_in.size()) != n) throw DimensionError("rotation sets must have n entries");
    PatternRequest req;
    req.kind = PatternKind::Staggered;
    const DopingPattern even = make_pattern(req, n);
    RotationSet r1 = r1_in, r2 = r2_in;
    if (p == even.reflected()) {
        for (int s = 0; s < n; ++s) {
            r1[size_t(s)] = r1_in[wrap(1 - s, n)];
            r2[size_t(s)] = r2_in[wrap(1 - s, n)];
        }
    } else if (!(p == even)) {
        throw std::invalid_argument("staggered formula needs alternating doping, got " + p.literal());
    }
    FormulaResult out;
    for (int q = 0; q < n; q += 2) {
        const double a = r1[wrap(q + 2, n)].r[AX][AZ];
        const double c = r2[wrap(q + 2, n)].r[AX][AY];
        const double b = r2[wrap(q + 4, n)].r[AY][AZ];
        out.log_sum[0] += log_abs(a * b * c, out.degenerate);
    }
    out.log_sum[1] = out.log_sum[0];
    out.delta = 2.0 * gamma - 2.0 / n * out.log_sum[0];
    return out;
}

FormulaResult staggered_formula(const FloquetSpec& spec) {
    return staggered_formula(quenched_layer(spec, 0), quenched_layer(spec, 1), spec.pattern, spec.gamma);
}

double staggered_thermodynamic(double gamma) { return 2.0 * gamma + 3.0; }
double staggered_like_upper_bound(double gamma) { return 3.0 * gamma + 3.0; }
double dense_upper_bound(double gamma) { return 3.0 * gamma + 3.0; }
double motif_constant_max() { return (10.0 - 2.0 * std::log(2.0)) / 3.0; }

std::vector<LocalTransitions> staggered_like_transition_table() {
    static const std::pair<const char*, const char*> kStructures[] = {
        {"(i)", "oxox"}, {"(i')", "xxox"}, {"(ii)", "xoxo"}, {"(ii')", "xoxx"}, {"(iii)", "oxxo"}};
    constexpr int n = 12, a = 4;
    std::vector<LocalTransitions> table;
    for (const auto& [name, lit] : kStructures) {
        std::vector<bool> bits(n, false);
        for (int i = 0; i < 4; ++i) bits[size_t(a + i)] = lit[i] == 'x';
        FloquetSpec spec = make_spec(n, 1.0, DopingPattern(n, bits), 0);
        const SparseStepper st(spec, true);
        LocalTransitions row{name, lit, {}};
        for (unsigned c0 = 1; c0 < 4; ++c0)
            for (unsigned c1 = 0; c1 < 4; ++c1)
                for (unsigned c2 = 1; c2 < 4; ++c2) {
                    PauliString in = PauliString::identity(n);
                    in.set(a + 1, c0);
                    in.set(a + 2, c1);
                    in.set(a + 3, c2);
                    std::vector<std::string> outs;
                    for (const auto& [k, c] : st.step({{PKey{in.x, in.z}, 1.0}})) {
                        const uint64_t sup = k.x | k.z;
                        if (sup == 0) continue;
                        const int lo = std::countr_zero(sup), hi = 63 - std::countl_zero(sup);
                        if (hi - lo > 2 || lo + 2 >= n) continue;
                        const PauliString o(n, k.x, k.z);
                        std::string s;
                        for (int j = lo; j < lo + 3; ++j) s += pauli_char(o.code(j));
                        outs.push_back(s + "@" + std::to_string(lo - (a + 1)));
                    }
                    if (outs.empty()) continue;
                    std::sort(outs.begin(), outs.end());
                    const std::string key{pauli_char(c0), pauli_char(c1), pauli_char(c2)};
                    row.edges.push_back({key, std::move(outs)});
                }
        table.push_back(std::move(row));
    }
    return table;
}

// ---------------------------------------------------------------- cycle search

BlockStaggeredCycles::BlockStaggeredCycles(int k, int w, int smax, int n) : k_(k), w_(w) {
    if (k < 1) throw std::invalid_argument("block length k must be >= 1");
    if (w < 1) throw std::invalid_argument("cutoff must be >= 1");
    smax_ = smax > 0 ? smax : w + 1;
    period_ = std::lcm(2, k + 1);
    n_ = n > 0 ? n : period_ * std::max(4, (3 * smax_) / period_ + 2);
    if (n_ % (k + 1) != 0 || n_ % 2 != 0)
        throw std::invalid_argument("ring size " + std::to_string(n_) + " incompatible with block length " +
                                    std::to_string(k));
    if (n_ < 2 * smax_ + 4) throw std::invalid_argument("ring too small for the span limit");
    doped_.resize(size_t(n_));
    for (int i = 0; i < n_; ++i) doped_[size_t(i)] = (i % (k + 1)) == k;
}

void BlockStaggeredCycles::layer(std::vector<uint8_t>& c, int parity) const {
    static const TwoQubitTableau g = gates::fixed();
    for (int b = 0; b < n_ / 2; ++b) {
        const auto [p, q] = bond_sites(n_, parity, b);
        const unsigned img = g.out_code(c[size_t(p)] | (unsigned(c[size_t(q)]) << 2));
        c[size_t(p)] = uint8_t(img & 3u);
        c[size_t(q)] = uint8_t(img >> 2);
    }
}

std::vector<uint8_t> BlockStaggeredCycles::embed(const LocalKey& key, int& base) const {
    std::vector<uint8_t> c(size_t(n_), 0);
    base = key.offset + period_;
    for (size_t i = 0; i < key.local.size(); ++i) c[wrap(base + int(i), n_)] = uint8_t(pauli_code(key.local[i]));
    return c;
}

LocalKey BlockStaggeredCycles::canon(const std::vector<uint8_t>& c, int& start) const {
    int best_len = n_ + 1;
    start = 0;
    std::vector<int> sup;
    for (int i = 0; i < n_; ++i)
        if (c[size_t(i)]) sup.push_back(i);
    for (int s : sup) {
        int len = 0;
        for (int j : sup) len = std::max(len, ((j - s) % n_ + n_) % n_ + 1);
        if (len < best_len) {
            best_len = len;
            start = s;
        }
    }
    LocalKey key{start % period_, {}};
    for (int i = 0; i < best_len; ++i) key.local += pauli_char(c[wrap(start + i, n_)]);
    return key;
}

const std::vector<BlockStaggeredCycles::Edge>& BlockStaggeredCycles::successors(const LocalKey& key) {
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    int base;
    std::vector<uint8_t> c = embed(key, base);
    layer(c, 0);
    std::vector<Edge> out;
    std::unordered_map<LocalKey, int, LocalKeyHash> seen;

    auto expand = [&](const std::vector<uint8_t>& src, auto&& sink) {
        std::vector<int> sites;
        for (int i = 0; i < n_; ++i)
            if (doped_[size_t(i)] && src[size_t(i)]) sites.push_back(i);
        std::vector<uint8_t> cur = src;
        std::function<void(size_t)> rec = [&](size_t d) {
            if (d == sites.size()) {
                sink(cur);
                return;
            }
            for (uint8_t v = 1; v < 4; ++v) {
                cur[size_t(sites[d])] = v;
                rec(d + 1);
            }
        };
        rec(0);
    };

    expand(c, [&](const std::vector<uint8_t>& c2) {
        std::vector<uint8_t> c3 = c2;
        layer(c3, 1);
        expand(c3, [&](const std::vector<uint8_t>& c4) {
            int wt = 0;
            for (uint8_t v : c4) wt += v != 0;
            if (wt == 0 || wt > w_) return;
            int start;
            LocalKey to = canon(c4, start);
            if (int(to.local.size()) > smax_) return;
            if (seen.count(to)) return;
            int shift = ((start - base) % n_ + n_) % n_;
            if (shift > n_ / 2) shift -= n_;
            seen[to] = shift;
            out.push_back({std::move(to), shift});
        });
    });
    std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) {
        return a.to.local != b.to.local ? a.to.local < b.to.local : a.to.offset < b.to.offset;
    });
    return memo_.emplace(key, std::move(out)).first->second;
}

ReturnCycle BlockStaggeredCycles::finish(std::vector<LocalKey> keys) {
    ReturnCycle rc;
    rc.period = int(keys.size());
    rc.min_weight = std::numeric_limits<int>::max();
    for (size_t i = 0; i < keys.size(); ++i) {
        const LocalKey& from = keys[i];
        const LocalKey& to = keys[(i + 1) % keys.size()];
        const auto& succ = successors(from);
        const auto it = std::find_if(succ.begin(), succ.end(), [&](const Edge& e) { return e.to == to; });
        rc.shifts.push_back(it->shift);
        rc.total_shift += it->shift;
        rc.amplitude_factors.push_back(describe_step(from, *it));
        const int wt = int(std::count_if(from.local.begin(), from.local.end(), [](char ch) { return ch != 'I'; }));
        rc.min_weight = std::min(rc.min_weight, wt);
        rc.max_weight = std::max(rc.max_weight, wt);
    }
    rc.steps = std::move(keys);
    return rc;
}

std::optional<ReturnCycle> BlockStaggeredCycles::find_cycle() {
    std::unordered_map<LocalKey, int, LocalKeyHash> color;  // 1 on stack, 2 done
    struct Frame {
        LocalKey key;
        size_t next;
    };
    std::vector<Frame> stack;
    auto run = [&](const LocalKey& root) -> std::optional<ReturnCycle> {
        stack.push_back({root, 0});
        color[root] = 1;
        while (!stack.empty()) {
            Frame& f = stack.back();
            const auto& succ = successors(f.key);
            if (f.next < succ.size()) {
                const LocalKey to = succ[f.next++].to;
                const int c = color.count(to) ? color[to] : 0;
                if (c == 1) {
                    std::vector<LocalKey> cyc;
                    size_t i = 0;
                    while (!(stack[i].key == to)) ++i;
                    for (; i < stack.size(); ++i) cyc.push_back(stack[i].key);
                    stack.clear();
                    return finish(std::move(cyc));
                }
                if (c == 0) {
                    color[to] = 1;
                    stack.push_back({to, 0});
                }
                continue;
            }
            color[f.key] = 2;
            stack.pop_back();
        }
        return std::nullopt;
    };
    // Roots: every localized string, shortest windows first.
    for (int len = 1; len <= smax_; ++len) {
        std::string local(size_t(len), 'I');
        const int inner = std::max(0, len - 2);
        const uint64_t inner_count = uint64_t{1} << (2 * inner);
        for (unsigned a = 1; a < 4; ++a)
            for (unsigned b = (len > 1 ? 1u : 0u); b < (len > 1 ? 4u : 1u); ++b)
                for (uint64_t mid = 0; mid < inner_count; ++mid) {
                    local[0] = pauli_char(a);
                    int wt = 1;
                    for (int i = 0; i < inner; ++i) {
                        const unsigned code = unsigned((mid >> (2 * i)) & 3u);
                        local[size_t(i + 1)] = pauli_char(code);
                        wt += code != 0;
                    }
                    if (len > 1) {
                        local[size_t(len - 1)] = pauli_char(b);
                        ++wt;
                    }
                    if (wt > w_) continue;
                    for (int off = 0; off < period_; ++off) {
                        LocalKey key{off, local};
                        if (color.count(key)) continue;
                        if (auto rc = run(key)) return rc;
                    }
                }
    }
    return std::nullopt;
}

bool BlockStaggeredCycles::on_cycle(const LocalKey& key) {
    std::unordered_map<LocalKey, bool, LocalKeyHash> seen;
    std::vector<LocalKey> frontier{key};
    while (!frontier.empty()) {
        LocalKey cur = std::move(frontier.back());
        frontier.pop_back();
        for (const auto& e : successors(cur)) {
            if (e.to == key) return true;
            if (seen.emplace(e.to, true).second) frontier.push_back(e.to);
        }
    }
    return false;
}

std::optional<BlockStaggeredCycles::Edge> BlockStaggeredCycles::edge_to_string(const LocalKey& a,
                                                                              const std::string& b) {
    for (const auto& e : successors(a))
        if (e.to.local == b) return e;
    return std::nullopt;
}

std::string BlockStaggeredCycles::describe_step(const LocalKey& from, const Edge& e) {
    int base;
    std::vector<uint8_t> c1 = embed(from, base);
    layer(c1, 0);
    std::vector<uint8_t> target(size_t(n_), 0);
    for (size_t i = 0; i < e.to.local.size(); ++i)
        target[wrap(base + e.shift + int(i), n_)] = uint8_t(pauli_code(e.to.local[i]));
    std::vector<int> sites;
    for (int i = 0; i < n_; ++i)
        if (doped_[size_t(i)] && c1[size_t(i)]) sites.push_back(i);
    static constexpr const char* kAxisName = "XYZ";
    auto entry = [&](int layer_no, int site, uint8_t to, uint8_t fr) {
        std::ostringstream os;
        os << 'R' << layer_no << "[" << (site - base >= 0 ? "+" : "") << site - base << "]("
           << kAxisName[kCodeAxis[to]] << "<-" << kAxisName[kCodeAxis[fr]] << ")";
        return os.str();
    };
    std::vector<uint8_t> c2 = c1;
    std::string found;
    std::function<bool(size_t)> rec = [&](size_t d) -> bool {
        if (d < sites.size()) {
            for (uint8_t v = 1; v < 4; ++v) {
                c2[size_t(sites[d])] = v;
                if (rec(d + 1)) return true;
            }
            return false;
        }
        std::vector<uint8_t> c3 = c2;
        layer(c3, 1);
        for (int i = 0; i < n_; ++i) {
            const bool mixes = doped_[size_t(i)] && c3[size_t(i)];
            if (mixes ? target[size_t(i)] == 0 : target[size_t(i)] != c3[size_t(i)]) return false;
        }
        std::string s;
        for (int i : sites) s += (s.empty() ? "" : " ") + entry(1, i, c2[size_t(i)], c1[size_t(i)]);
        for (int i = 0; i < n_; ++i)
            if (doped_[size_t(i)] && c3[size_t(i)]) s += (s.empty() ? "" : " ") + entry(2, i, target[size_t(i)], c3[size_t(i)]);
        found = s.empty() ? "1" : s;
        return true;
    };
    rec(0);
    return found;
}

std::optional<ReturnCycle> cycle_search(int k, int w, int n, int smax) {
    BlockStaggeredCycles g(k, w, smax, n);
    return g.find_cycle();
}

CycleSearchResult scan_cycles(int k, int w_max, int n) {
    CycleSearchResult r;
    r.k = k;
    for (int w = 1; w <= w_max; ++w) {
        BlockStaggeredCycles g(k, w, 0, n);
        r.n = g.n();
        if (auto rc = g.find_cycle()) {
            r.w_star = w;
            r.representative = std::move(rc);
            break;
        }
    }
    return r;
}

std::string format_cycle_report(const CycleSearchResult& r) {
    std::ostringstream os;
    std::string unit(size_t(r.k), 'o');
    unit += 'x';
    os << "pattern " << unit << "\n";
    os << "k " << r.k << "\n";
    os << "w_star " << (r.w_star < 0 ? std::string("none") : std::to_string(r.w_star)) << "\n";
    if (r.representative) {
        const auto& c = *r.representative;
        os << "cycle";
        for (size_t i = 0; i < c.steps.size(); ++i) os << (i ? " -> " : " ") << c.steps[i].local << "@" << c.steps[i].offset;
        os << "\n";
        const bool uniform = std::all_of(c.shifts.begin(), c.shifts.end(), [&](int s) { return s == c.shifts[0]; });
        os << "shift_per_step";
        if (uniform) {
            os << " " << c.shifts[0];
        } else {
            for (int s : c.shifts) os << " " << s;
        }
        os << "\n";
        os << "period " << c.period << "\n";
        os << "total_shift " << c.total_shift << "\n";
        for (size_t i = 0; i < c.amplitude_factors.size(); ++i) os << "factors " << i << " " << c.amplitude_factors[i] << "\n";
    }
    return os.str();
}

}  // namespace floqgap
