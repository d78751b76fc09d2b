#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "floqgap/rng.hpp"

namespace floqgap {

// Axes are (X, Y, Z). r[b][a] is the coefficient of sigma_b in V sigma_a V^dag.
using Mat3 = std::array<std::array<double, 3>, 3>;

enum Axis : int { AX = 0, AY = 1, AZ = 2 };

// Pauli site code (I=0, X=1, Z=2, Y=3) to axis; code 0 has no axis.
inline constexpr int kCodeAxis[4] = {-1, AX, AZ, AY};
inline constexpr unsigned kAxisCode[3] = {1, 3, 2};

struct Quaternion {
    double w, x, y, z;
};

struct SingleQubitRotation {
    Mat3 r{};

    static SingleQubitRotation identity();
    static SingleQubitRotation from_quaternion(const Quaternion& q);
    // Row/column swapped view, 0-based: entry(i, j) = 1/2 Tr[U s_i U^dag s_j].
    double entry(int i, int j) const { return r[size_t(j)][size_t(i)]; }
    double orthogonality_error() const;
    double det() const;
    SingleQubitRotation compose(const SingleQubitRotation& after) const;  // after o this
};

// Uniform point on S^3 (Shoemake) from three uniforms.
Quaternion sample_quaternion(Rng& rng);
SingleQubitRotation sample_rotation(Rng& rng);
SingleQubitRotation sample_rotation(uint64_t seed);

struct HaarLogStats {
    int64_t sample_count = 0;
    int64_t skipped = 0;  // |value| < 1e-300
    double mean = 0.0;
    double stderr_ = 0.0;
    double target = 0.0;
};

double analytic_log_entry_average();     // -1
double analytic_log_bilinear_average();  // log 2 - 2

// E log|U_33| for independent Haar draws.
HaarLogStats mc_log_entry_average(int64_t samples, uint64_t seed);
// E log|U_33 V_22 + U_32 V_12| for independent U, V. With force_v_identity
// the V draw is replaced by the identity.
HaarLogStats mc_log_bilinear_average(int64_t samples, uint64_t seed, bool force_v_identity = false);

// Coefficients a[j][i] over the maps Ad(C_j) o Ad(sigma_i), C = (I, HS, SH),
// sigma = (X, Y, Z), restricted to the traceless block.
using CliffordCoefficients = std::array<std::array<double, 3>, 3>;
const std::array<std::array<Mat3, 3>, 3>& clifford_basis();
CliffordCoefficients clifford_decompose(const SingleQubitRotation& rot);
Mat3 clifford_reassemble(const CliffordCoefficients& a);

}  // namespace floqgap
