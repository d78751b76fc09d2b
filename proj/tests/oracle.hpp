#pragma once

// Dense reference implementations used only by the tests: explicit 2^n
// matrices, conjugation by unitaries, and a Pauli transfer matrix assembled
// from gate matrices and per-site rotation blocks.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "floqgap/floquet.hpp"
#include "floqgap/pauli.hpp"

namespace oracle {

using cd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;

inline CMat single(unsigned code) {
    CMat m(2, 2);
    const cd i(0, 1);
    switch (code) {
        case 0: m << 1, 0, 0, 1; break;
        case 1: m << 0, 1, 1, 0; break;
        case 2: m << 1, 0, 0, -1; break;
        default: m << 0, -i, i, 0; break;
    }
    return m;
}

// Site 0 is the least significant bit of the computational index.
inline CMat kron_sites(const std::vector<CMat>& per_site) {
    CMat out = CMat::Identity(1, 1);
    for (const auto& m : per_site) {
        CMat next(out.rows() * m.rows(), out.cols() * m.cols());
        for (int a = 0; a < m.rows(); ++a)
            for (int b = 0; b < m.cols(); ++b) next.block(a * out.rows(), b * out.cols(), out.rows(), out.cols()) = m(a, b) * out;
        out = next;
    }
    return out;
}

inline CMat pauli_matrix(const floqgap::PauliString& s) {
    std::vector<CMat> sites;
    for (int j = 0; j < s.n; ++j) sites.push_back(single(s.code(j)));
    return double(s.sign) * kron_sites(sites);
}

inline CMat pauli_matrix_index(int n, uint64_t index) { return pauli_matrix(floqgap::PauliString::from_index(n, index)); }

inline CMat hadamard() {
    CMat h(2, 2);
    h << 1, 1, 1, -1;
    return h / std::sqrt(2.0);
}
inline CMat phase_s() {
    CMat s(2, 2);
    s << 1, 0, 0, cd(0, 1);
    return s;
}

// Two-qubit gates with qubit "first" on the low bit.
inline CMat two(const CMat& first, const CMat& second) { return kron_sites({first, second}); }

inline CMat cz() {
    CMat m = CMat::Identity(4, 4);
    m(3, 3) = -1;
    return m;
}
inline CMat cnot() {  // control first (low bit), target second
    CMat m = CMat::Zero(4, 4);
    m(0, 0) = m(2, 2) = 1;
    m(3, 1) = m(1, 3) = 1;
    return m;
}
inline CMat swap() {
    CMat m = CMat::Zero(4, 4);
    m(0, 0) = m(3, 3) = 1;
    m(1, 2) = m(2, 1) = 1;
    return m;
}
inline CMat iswap() {  // exp[i pi/4 (XX + YY)]
    CMat m = CMat::Zero(4, 4);
    m(0, 0) = m(3, 3) = 1;
    m(1, 2) = m(2, 1) = cd(0, 1);
    return m;
}
inline CMat fixed_gate() { return iswap() * two(hadamard(), hadamard()); }

// Embeds a two-qubit unitary acting on sites (p, q) of n qubits.
inline CMat embed(const CMat& g, int n, int p, int q) {
    const int dim = 1 << n;
    CMat out = CMat::Zero(dim, dim);
    for (int col = 0; col < dim; ++col) {
        const int in_pair = ((col >> p) & 1) | (((col >> q) & 1) << 1);
        for (int out_pair = 0; out_pair < 4; ++out_pair) {
            const cd a = g(out_pair, in_pair);
            if (a == cd(0, 0)) continue;
            int row = col & ~(1 << p) & ~(1 << q);
            row |= (out_pair & 1) << p;
            row |= ((out_pair >> 1) & 1) << q;
            out(row, col) += a;
        }
    }
    return out;
}

inline CMat brickwork_layer(const CMat& g, int n, int parity) {
    CMat u = CMat::Identity(1 << n, 1 << n);
    for (int b = 0; b < n / 2; ++b) {
        const int p = (2 * b + parity) % n, q = (p + 1) % n;
        u = embed(g, n, p, q) * u;
    }
    return u;
}

// Expands O = sum_b c_b P_b; returns c over interleaved indices.
inline std::vector<double> pauli_coefficients(const CMat& o, int n) {
    const size_t d = size_t(1) << (2 * n);
    std::vector<double> c(d);
    for (size_t b = 0; b < d; ++b) c[b] = ((pauli_matrix_index(n, b).adjoint() * o).trace() / double(1 << n)).real();
    return c;
}

// Transfer matrix of O -> U O U^dag, M(b, a) = tr(P_b U P_a U^dag) / 2^n.
inline RMat unitary_ptm(const CMat& u, int n) {
    const size_t d = size_t(1) << (2 * n);
    std::vector<CMat> basis(d);
    for (size_t a = 0; a < d; ++a) basis[a] = pauli_matrix_index(n, a);
    RMat m(d, d);
    for (size_t a = 0; a < d; ++a) {
        const CMat img = u * basis[a] * u.adjoint();
        for (size_t b = 0; b < d; ++b) m(Eigen::Index(b), Eigen::Index(a)) = (basis[b] * img).trace().real() / double(1 << n);
    }
    return m;
}

// Site-local 4x4 transfer block of the rotation: identity on I, r on (X,Y,Z).
inline RMat rotation_block(const floqgap::SingleQubitRotation& rot) {
    RMat b = RMat::Zero(4, 4);
    b(0, 0) = 1;
    for (unsigned co = 1; co < 4; ++co)
        for (unsigned ci = 1; ci < 4; ++ci)
            b(co, ci) = rot.r[size_t(floqgap::kCodeAxis[co])][size_t(floqgap::kCodeAxis[ci])];
    return b;
}

inline RMat kron_blocks(const std::vector<RMat>& blocks) {
    const int n = int(blocks.size());
    const size_t d = size_t(1) << (2 * n);
    RMat m(d, d);
    for (size_t o = 0; o < d; ++o)
        for (size_t i = 0; i < d; ++i) {
            double v = 1;
            for (int j = 0; j < n && v != 0; ++j) v *= blocks[size_t(j)]((o >> (2 * j)) & 3, (i >> (2 * j)) & 3);
            m(Eigen::Index(o), Eigen::Index(i)) = v;
        }
    return m;
}

// Full period with the fixed gate: D K2 G2 K1 G1.
inline RMat channel_ptm(const floqgap::FloquetSpec& spec) {
    const int n = spec.n;
    const size_t d = size_t(1) << (2 * n);
    floqgap::RotationField field(spec);
    RMat total = RMat::Identity(d, d);
    for (int layer = 0; layer < 2; ++layer) {
        total = unitary_ptm(brickwork_layer(fixed_gate(), n, layer), n) * total;
        std::vector<RMat> blocks;
        for (int s = 0; s < n; ++s)
            blocks.push_back(spec.pattern.doped(s) ? rotation_block(field.quenched(layer, s)) : RMat::Identity(4, 4));
        total = kron_blocks(blocks) * total;
    }
    RMat damp = RMat::Zero(d, d);
    for (size_t i = 0; i < d; ++i)
        damp(Eigen::Index(i), Eigen::Index(i)) = std::exp(-spec.gamma * floqgap::index_weight(i));
    if (spec.symmetrized) {
        RMat half = damp.cwiseSqrt();
        return half * total * half;
    }
    return damp * total;
}

// SU(2) element from a quaternion, U = w - i (x X + y Y + z Z).
inline CMat su2(const floqgap::Quaternion& q) {
    return q.w * single(0) - cd(0, 1) * (q.x * single(1) + q.y * single(3) + q.z * single(2));
}

// Adjoint action as r[b][a] with axes (X, Y, Z).
inline floqgap::Mat3 adjoint_rotation(const CMat& u) {
    const unsigned axis_code[3] = {1, 3, 2};
    floqgap::Mat3 r{};
    for (int a = 0; a < 3; ++a) {
        const CMat img = u * single(axis_code[a]) * u.adjoint();
        for (int b = 0; b < 3; ++b) r[size_t(b)][size_t(a)] = (single(axis_code[b]) * img).trace().real() / 2.0;
    }
    return r;
}

}  // namespace oracle
