#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace floqgap {

class DopingPattern {
   public:
    DopingPattern() = default;
    DopingPattern(int n, std::vector<bool> doped);

    // Literal of 'o'/'x' or U+25CB/U+25CF characters, one per site.
    static DopingPattern parse(std::string_view literal);

    int n() const { return n_; }
    bool doped(int site) const { return doped_[size_t(((site % n_) + n_) % n_)]; }
    const std::vector<bool>& bits() const { return doped_; }
    int n_h() const;
    int n_cl() const { return n_ - n_h(); }
    double density() const { return double(n_h()) / n_; }
    std::vector<int> doped_sites() const;
    // Site i -> (1 - i) mod n.
    DopingPattern reflected() const;

    std::string literal() const;          // "oxox"
    std::string unicode_literal() const;  // "○●○●"

    bool operator==(const DopingPattern&) const = default;

   private:
    int n_ = 0;
    std::vector<bool> doped_;
};

enum class PatternKind { Undoped, Full, Staggered, BlockStaggered, Contiguous, Explicit };

struct PatternRequest {
    PatternKind kind = PatternKind::Undoped;
    int k = 1;         // block length for BlockStaggered
    int n_h = 0;       // doped count for Contiguous
    std::string bits;  // literal for Explicit
};

// staggered: doped on even sites, "xoxo...".
// block_staggered(k): (o^k x) repeated, requires (k+1) | n.
// contiguous(n_h): the first n_h sites doped.
DopingPattern make_pattern(const PatternRequest& req, int n);
// Accepts undoped|none, full, staggered, block:K, contiguous:M, or a literal.
DopingPattern pattern_from_spec(std::string_view spec, int n);

int longest_undoped_arc(const DopingPattern& p);
int pigeonhole_arc_bound(const DopingPattern& p);  // ceil((n - n_h) / n_h)

// c (n/n_h - 1) gamma; c is not fixed by theory, 0.25 is only a default.
inline constexpr double kDefaultBoundConstant = 0.25;
double gap_lower_bound_general(const DopingPattern& p, double gamma, double c = kDefaultBoundConstant);

bool is_dense(const DopingPattern& p);
bool is_staggered_like(const DopingPattern& p);

}  // namespace floqgap
