#include "floqgap/haar.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace floqgap {

namespace {

Mat3 matmul(const Mat3& a, const Mat3& b) {
    Mat3 c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
    return c;
}

class Welford {
   public:
    void add(double v) {
        ++n_;
        const double d = v - mean_;
        mean_ += d / double(n_);
        m2_ += d * (v - mean_);
    }
    int64_t count() const { return n_; }
    double mean() const { return mean_; }
    double stderr_() const { return n_ > 1 ? std::sqrt(m2_ / double(n_ - 1) / double(n_)) : 0.0; }

   private:
    int64_t n_ = 0;
    double mean_ = 0.0, m2_ = 0.0;
};

constexpr double kTiny = 1e-300;

}  // namespace

SingleQubitRotation SingleQubitRotation::identity() {
    SingleQubitRotation s;
    for (int i = 0; i < 3; ++i) s.r[i][i] = 1.0;
    return s;
}

SingleQubitRotation SingleQubitRotation::from_quaternion(const Quaternion& q) {
    const double w = q.w, x = q.x, y = q.y, z = q.z;
    SingleQubitRotation s;
    s.r = {{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
            {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
            {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
    return s;
}

double SingleQubitRotation::orthogonality_error() const {
    double err = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double dot = 0.0;
            for (int k = 0; k < 3; ++k) dot += r[k][i] * r[k][j];
            err = std::max(err, std::abs(dot - (i == j ? 1.0 : 0.0)));
        }
    return err;
}

double SingleQubitRotation::det() const {
    return r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0]) +
           r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
}

SingleQubitRotation SingleQubitRotation::compose(const SingleQubitRotation& after) const {
    SingleQubitRotation s;
    s.r = matmul(after.r, r);
    return s;
}

Quaternion sample_quaternion(Rng& rng) {
    const double u1 = rng.uniform(), u2 = rng.uniform(), u3 = rng.uniform();
    const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
    const double t2 = 2.0 * std::numbers::pi * u2, t3 = 2.0 * std::numbers::pi * u3;
    return {a * std::sin(t2), a * std::cos(t2), b * std::sin(t3), b * std::cos(t3)};
}

SingleQubitRotation sample_rotation(Rng& rng) { return SingleQubitRotation::from_quaternion(sample_quaternion(rng)); }

SingleQubitRotation sample_rotation(uint64_t seed) {
    Rng rng(seed);
    return sample_rotation(rng);
}

double analytic_log_entry_average() { return -1.0; }
double analytic_log_bilinear_average() { return std::log(2.0) - 2.0; }

HaarLogStats mc_log_entry_average(int64_t samples, uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    Rng rng(seed);
    Welford acc;
    HaarLogStats out;
    for (int64_t s = 0; s < samples; ++s) {
        const double v = std::abs(sample_rotation(rng).entry(2, 2));
        if (v < kTiny) {
            ++out.skipped;
            continue;
        }
        acc.add(std::log(v));
    }
    out.sample_count = acc.count();
    out.mean = acc.mean();
    out.stderr_ = acc.stderr_();
    out.target = analytic_log_entry_average();
    return out;
}

HaarLogStats mc_log_bilinear_average(int64_t samples, uint64_t seed, bool force_v_identity) {
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    Rng rng(seed);
    Welford acc;
    HaarLogStats out;
    for (int64_t s = 0; s < samples; ++s) {
        const SingleQubitRotation u = sample_rotation(rng);
        const SingleQubitRotation v = force_v_identity ? SingleQubitRotation::identity() : sample_rotation(rng);
        const double val =
            std::abs(u.entry(2, 2) * v.entry(1, 1) + u.entry(2, 1) * v.entry(0, 1));
        if (val < kTiny) {
            ++out.skipped;
            continue;
        }
        acc.add(std::log(val));
    }
    out.sample_count = acc.count();
    out.mean = acc.mean();
    out.stderr_ = acc.stderr_();
    out.target = force_v_identity ? analytic_log_entry_average() : analytic_log_bilinear_average();
    return out;
}

const std::array<std::array<Mat3, 3>, 3>& clifford_basis() {
    static const auto basis = [] {
        // Adjoint actions on (X, Y, Z), column = input axis.
        const Mat3 ad_x = {{{1, 0, 0}, {0, -1, 0}, {0, 0, -1}}};
        const Mat3 ad_y = {{{-1, 0, 0}, {0, 1, 0}, {0, 0, -1}}};
        const Mat3 ad_z = {{{-1, 0, 0}, {0, -1, 0}, {0, 0, 1}}};
        const Mat3 ad_i = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
        const Mat3 ad_hs = {{{0, 0, 1}, {-1, 0, 0}, {0, -1, 0}}};  // X->-Y, Y->-Z, Z->X
        const Mat3 ad_sh = {{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}};    // X->Z, Y->X, Z->Y
        const Mat3 pats[3] = {ad_i, ad_hs, ad_sh};
        const Mat3 paulis[3] = {ad_x, ad_y, ad_z};
        std::array<std::array<Mat3, 3>, 3> b{};
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 3; ++i) b[j][i] = matmul(pats[j], paulis[i]);
        return b;
    }();
    return basis;
}

CliffordCoefficients clifford_decompose(const SingleQubitRotation& rot) {
    const auto& basis = clifford_basis();
    CliffordCoefficients a{};
    for (int j = 0; j < 3; ++j) {
        // Pattern j occupies one entry per column; strip its sign to get the
        // diagonal weight d[col], then invert the sign-flip combination.
        double d[3];
        for (int col = 0; col < 3; ++col) {
            int row = 0;
            while (basis[j][0][row][col] == 0.0) ++row;
            const double flip = basis[j][0][row][col] * (col == 0 ? 1.0 : -1.0);  // Ad X sign on col
            d[col] = rot.r[row][col] / flip;
        }
        const double sum = d[0] + d[1] + d[2];
        // Sign patterns of Ad X, Ad Y, Ad Z: s_i[c] = -1 + 2 delta_ic.
        for (int i = 0; i < 3; ++i) a[j][i] = 0.5 * (d[i] - sum);
    }
    return a;
}

Mat3 clifford_reassemble(const CliffordCoefficients& a) {
    const auto& basis = clifford_basis();
    Mat3 out{};
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i)
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) out[r][c] += a[j][i] * basis[j][i][r][c];
    return out;
}

}  // namespace floqgap
