#include <gtest/gtest.h>

#include <cmath>

#include "floqgap/floquet.hpp"
#include "oracle.hpp"

using namespace floqgap;

namespace {

FloquetSpec spec_for(const std::string& pat, int n, double gamma, uint64_t seed) {
    return make_spec(n, gamma, pattern_from_spec(pat, n), seed);
}

double traceless_norm(const std::vector<double>& v) {
    double s = 0;
    for (size_t i = 1; i < v.size(); ++i) s += v[i] * v[i];
    return std::sqrt(s);
}

}  // namespace

TEST(Channel, MatchesOracleOnEveryIndicator) {
    for (const char* pat : {"undoped", "staggered", "full", "oxxo"})
        for (uint64_t seed : {0u, 17u})
            for (bool sym : {false, true}) {
                FloquetSpec s = spec_for(pat, 4, 0.7, seed);
                s.symmetrized = sym;
                const oracle::RMat m = oracle::channel_ptm(s);
                for (size_t j = 0; j < 256; ++j) {
                    std::vector<double> v(256, 0.0);
                    v[j] = 1.0;
                    v = apply_channel(s, v);
                    for (size_t i = 0; i < 256; ++i)
                        ASSERT_NEAR(v[i], m(Eigen::Index(i), Eigen::Index(j)), 1e-12) << pat << " seed " << seed << " col " << j;
                }
            }
}

TEST(Channel, DenseMatrixIsTracelessBlock) {
    const FloquetSpec s = spec_for("staggered", 4, 1.3, 2);
    const oracle::RMat m = oracle::channel_ptm(s);
    const std::vector<double> d = dense_traceless_matrix(FloquetChannel(s));
    for (size_t j = 0; j < 255; ++j)
        for (size_t i = 0; i < 255; ++i) ASSERT_NEAR(d[j * 255 + i], m(Eigen::Index(i + 1), Eigen::Index(j + 1)), 1e-12);
}

TEST(Channel, RejectsBadSpecs) {
    EXPECT_THROW(make_spec(5, 1.0, pattern_from_spec("full", 6)), std::invalid_argument);
    EXPECT_THROW(make_spec(4, -1.0, pattern_from_spec("full", 4)), std::invalid_argument);
    EXPECT_THROW(FloquetChannel(spec_for("full", 14, 1.0, 0)), std::invalid_argument);
    EXPECT_THROW(apply_channel(spec_for("full", 4, 1.0, 0), std::vector<double>(10)), std::invalid_argument);
}

TEST(ChannelProperty, TracePreservedAndContracting) {
    Rng rng(12);
    for (const char* pat : {"undoped", "staggered", "full", "block:2"}) {
        const FloquetSpec s = spec_for(pat, 6, 0.2, 3);
        const FloquetChannel ch(s);
        std::vector<double> v(ch.dim()), scratch;
        for (auto& x : v) x = rng.uniform() - 0.5;
        const double trace = v[0];
        double norm = traceless_norm(v);
        for (int p = 0; p < 5; ++p) {
            ch.apply(v, scratch, p);
            EXPECT_EQ(v[0], trace);
            const double next = traceless_norm(v);
            EXPECT_LE(next, norm * (1 + 1e-12));
            norm = next;
        }
    }
}

TEST(ChannelProperty, ZeroGammaIsOrthogonal) {
    Rng rng(13);
    const FloquetSpec s = spec_for("full", 4, 0.0, 4);
    std::vector<double> v(256);
    for (auto& x : v) x = rng.uniform() - 0.5;
    const double before = traceless_norm(v);
    v = apply_channel(s, v);
    EXPECT_NEAR(traceless_norm(v), before, 1e-12);
}

TEST(Rotations, CounterSeeded) {
    FloquetSpec s = spec_for("full", 4, 1.0, 5);
    const RotationField quenched(s);
    EXPECT_EQ(quenched.at(0, 1, 2).r, quenched.at(99, 1, 2).r);
    EXPECT_NE(quenched.at(0, 0, 2).r, quenched.at(0, 1, 2).r);
    s.resample_each_period = true;
    const RotationField fresh(s);
    EXPECT_NE(fresh.at(0, 1, 2).r, fresh.at(1, 1, 2).r);
    EXPECT_EQ(fresh.at(3, 1, 2).r, RotationField(s).at(3, 1, 2).r);
}

TEST(Gap, UndopedExact) {
    for (int n : {2, 4, 6})
        for (double g : {0.1, 1.0, 5.0}) {
            const FloquetSpec s = spec_for("undoped", n, g, 0);
            EXPECT_NEAR(compute_gap(s, GapMethod::Power).delta, n * g / 2, 1e-6) << n << " " << g;
            if (n <= 4) EXPECT_NEAR(dense_gap(s).delta, n * g / 2, 1e-9);
        }
}

TEST(Gap, SymmetrizedSpectrumMatches) {
    for (const char* pat : {"staggered", "full", "oxxo"}) {
        FloquetSpec s = spec_for(pat, 4, 0.9, 6);
        const double plain = dense_gap(s).delta;
        s.symmetrized = true;
        EXPECT_NEAR(dense_gap(s).delta, plain, 1e-9) << pat;
    }
}

TEST(Gap, DenseSpectrumMatchesEigen) {
    const FloquetSpec s = spec_for("staggered", 4, 0.4, 8);
    const std::vector<double> d = dense_traceless_matrix(FloquetChannel(s));
    const Eigen::Map<const Eigen::MatrixXd> m(d.data(), 255, 255);
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    double top = 0;
    for (Eigen::Index i = 0; i < 255; ++i) top = std::max(top, std::abs(es.eigenvalues()(i)));
    EXPECT_NEAR(dense_gap(s).delta, -std::log(top), 1e-9);
    EXPECT_EQ(dense_spectrum(s).size(), 255u);
}

TEST(Gap, PowerAgreesWithDense) {
    for (const char* pat : {"staggered", "full", "oxxo", "contiguous:1"})
        for (double g : {0.3, 2.0}) {
            const FloquetSpec s = spec_for(pat, 4, g, 9);
            const GapEstimate p = power_gap(s), d = dense_gap(s);
            EXPECT_TRUE(p.converged);
            EXPECT_NEAR(p.delta, d.delta, 1e-6) << pat << " " << g;
        }
}

TEST(Gap, Guards) {
    EXPECT_THROW(dense_gap(spec_for("full", 8, 1.0, 0)), std::invalid_argument);
    FloquetSpec r = spec_for("full", 4, 1.0, 0);
    r.resample_each_period = true;
    EXPECT_THROW(dense_gap(r), std::invalid_argument);
    EXPECT_EQ(resolve_method(GapMethod::Auto, r), GapMethod::Power);
    EXPECT_EQ(parse_gap_method("dense"), GapMethod::Dense);
    EXPECT_THROW(parse_gap_method("lanczos"), std::invalid_argument);
}

TEST(Gap, ResampledUndopedStillExact) {
    FloquetSpec s = spec_for("undoped", 4, 1.0, 0);
    s.resample_each_period = true;
    const GapEstimate g = power_gap(s);
    EXPECT_NEAR(g.delta, 2.0, 1e-4);
}

TEST(Gap, ResampledDopedIsFinite) {
    FloquetSpec s = spec_for("full", 4, 1.0, 3);
    s.resample_each_period = true;
    const GapEstimate g = power_gap(s);
    EXPECT_TRUE(std::isfinite(g.delta));
    EXPECT_GT(g.delta, 0.0);
}

TEST(Ensemble, Reproducible) {
    const FloquetSpec s = spec_for("full", 4, 3.0, 0);
    const EnsembleResult a = ensemble_gap(s, 4, 77, GapMethod::Dense), b = ensemble_gap(s, 4, 77, GapMethod::Dense);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.ok, 4);
    EXPECT_EQ(a.seeds[2], realization_seed(77, 2));
    EXPECT_GT(a.stderr_, 0.0);
    EXPECT_THROW(ensemble_gap(s, 0, 1, GapMethod::Dense), std::invalid_argument);
}

TEST(WeightHistogram, NormalizedAndGuarded) {
    const GapEstimate g = gap_eigenmode_weights(spec_for("full", 4, 3.0, 1));
    double total = 0;
    for (double p : g.weight_histogram) total += p;
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_EQ(g.weight_histogram[0], 0.0);
    const FloquetChannel ch(spec_for("full", 4, 3.0, 1));
    std::vector<std::complex<double>> identity_only(256, 0.0);
    identity_only[0] = 1.0;
    EXPECT_THROW(weight_histogram(ch, identity_only), std::invalid_argument);
}

TEST(WeightHistogram, UndopedModeSitsAtHalfWeight) {
    const GapEstimate g = gap_eigenmode_weights(spec_for("undoped", 4, 1.0, 0));
    const auto& h = g.weight_histogram;
    EXPECT_EQ(std::max_element(h.begin(), h.end()) - h.begin(), 2);
}
