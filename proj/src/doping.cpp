#include "floqgap/doping.hpp"

#include <algorithm>
#include <stdexcept>

#include "floqgap/pauli.hpp"

namespace floqgap {

namespace {
constexpr std::string_view kOpen = "\xE2\x97\x8B";    // U+25CB
constexpr std::string_view kFilled = "\xE2\x97\x8F";  // U+25CF

int parse_int(std::string_view s, std::string_view what) {
    if (s.empty()) throw ParseError("missing " + std::string(what));
    int v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') throw ParseError("bad " + std::string(what) + " '" + std::string(s) + "'");
        v = v * 10 + (c - '0');
        if (v > 1'000'000) throw ParseError(std::string(what) + " too large");
    }
    return v;
}
}  // namespace

DopingPattern::DopingPattern(int n, std::vector<bool> doped) : n_(n), doped_(std::move(doped)) {
    if (n <= 0 || n % 2 != 0) throw std::invalid_argument("pattern size must be even and positive");
    if (int(doped_.size()) != n) throw std::invalid_argument("pattern bit count differs from n");
}

DopingPattern DopingPattern::parse(std::string_view lit) {
    std::vector<bool> bits;
    while (!lit.empty()) {
        if (lit.front() == 'o' || lit.front() == 'O') {
            bits.push_back(false);
            lit.remove_prefix(1);
        } else if (lit.front() == 'x' || lit.front() == 'X') {
            bits.push_back(true);
            lit.remove_prefix(1);
        } else if (lit.starts_with(kOpen)) {
            bits.push_back(false);
            lit.remove_prefix(kOpen.size());
        } else if (lit.starts_with(kFilled)) {
            bits.push_back(true);
            lit.remove_prefix(kFilled.size());
        } else {
            throw ParseError("bad pattern character in '" + std::string(lit) + "'");
        }
    }
    if (bits.empty() || bits.size() % 2 != 0) throw ParseError("pattern literal needs an even, nonzero length");
    const int n = int(bits.size());
    return DopingPattern(n, std::move(bits));
}

int DopingPattern::n_h() const { return int(std::count(doped_.begin(), doped_.end(), true)); }

std::vector<int> DopingPattern::doped_sites() const {
    std::vector<int> out;
    for (int i = 0; i < n_; ++i)
        if (doped_[size_t(i)]) out.push_back(i);
    return out;
}

DopingPattern DopingPattern::reflected() const {
    std::vector<bool> b(static_cast<size_t>(n_));
    for (int i = 0; i < n_; ++i) b[size_t(i)] = doped(1 - i);
    return DopingPattern(n_, std::move(b));
}

std::string DopingPattern::literal() const {
    std::string s;
    for (bool b : doped_) s += b ? 'x' : 'o';
    return s;
}

std::string DopingPattern::unicode_literal() const {
    std::string s;
    for (bool b : doped_) s += b ? kFilled : kOpen;
    return s;
}

DopingPattern make_pattern(const PatternRequest& req, int n) {
    if (n <= 0 || n % 2 != 0) throw std::invalid_argument("n must be even and positive");
    std::vector<bool> bits(size_t(n), false);
    switch (req.kind) {
        case PatternKind::Undoped: break;
        case PatternKind::Full: std::fill(bits.begin(), bits.end(), true); break;
        case PatternKind::Staggered:
            for (int i = 0; i < n; i += 2) bits[size_t(i)] = true;
            break;
        case PatternKind::BlockStaggered:
            if (req.k < 1 || n % (req.k + 1) != 0)
                throw std::invalid_argument("block_staggered(" + std::to_string(req.k) + ") needs (k+1) | n, n=" +
                                            std::to_string(n));
            for (int i = req.k; i < n; i += req.k + 1) bits[size_t(i)] = true;
            break;
        case PatternKind::Contiguous:
            if (req.n_h < 0 || req.n_h > n) throw std::invalid_argument("contiguous doping count out of range");
            for (int i = 0; i < req.n_h; ++i) bits[size_t(i)] = true;
            break;
        case PatternKind::Explicit: {
            DopingPattern p = DopingPattern::parse(req.bits);
            if (p.n() != n) throw std::invalid_argument("explicit pattern length differs from n");
            return p;
        }
    }
    return DopingPattern(n, std::move(bits));
}

DopingPattern pattern_from_spec(std::string_view spec, int n) {
    PatternRequest req;
    if (spec == "undoped" || spec == "none") {
        req.kind = PatternKind::Undoped;
    } else if (spec == "full") {
        req.kind = PatternKind::Full;
    } else if (spec == "staggered") {
        req.kind = PatternKind::Staggered;
    } else if (spec.starts_with("block:")) {
        req.kind = PatternKind::BlockStaggered;
        req.k = parse_int(spec.substr(6), "block length");
    } else if (spec.starts_with("contiguous:")) {
        req.kind = PatternKind::Contiguous;
        req.n_h = parse_int(spec.substr(11), "doped count");
    } else {
        req.kind = PatternKind::Explicit;
        req.bits = std::string(spec);
    }
    return make_pattern(req, n);
}

int longest_undoped_arc(const DopingPattern& p) {
    const int n = p.n();
    if (p.n_h() == 0) return n;
    int start = 0;
    while (!p.doped(start)) ++start;
    int best = 0, run = 0;
    for (int i = 1; i <= n; ++i) {
        if (p.doped(start + i)) {
            best = std::max(best, run);
            run = 0;
        } else {
            ++run;
        }
    }
    return best;
}

int pigeonhole_arc_bound(const DopingPattern& p) {
    const int nh = p.n_h();
    if (nh == 0) return p.n();
    return (p.n_cl() + nh - 1) / nh;
}

double gap_lower_bound_general(const DopingPattern& p, double gamma, double c) {
    if (p.n_h() == 0) throw std::invalid_argument("undoped pattern: use the exact undoped gap");
    if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("bound constant must lie in (0,1)");
    return c * (double(p.n()) / p.n_h() - 1.0) * gamma;
}

bool is_dense(const DopingPattern& p) { return longest_undoped_arc(p) <= 1; }

bool is_staggered_like(const DopingPattern& p) {
    if (!is_dense(p)) return false;
    if (p.n_cl() == 0) return false;
    const int n = p.n();
    int start = 0;
    while (p.doped(start)) ++start;  // an undoped site exists
    int run = 0;
    for (int i = 1; i <= n; ++i) {
        if (p.doped(start + i)) {
            ++run;
        } else {
            if (run < 1 || run > 2) return false;
            run = 0;
        }
    }
    return true;
}

}  // namespace floqgap
