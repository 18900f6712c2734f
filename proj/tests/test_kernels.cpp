#include <doctest.h>

#include <cmath>
#include <random>

#include "graphon/errors.hpp"
#include "graphon/kernels.hpp"

using namespace graphon;

TEST_CASE("kernel values at pinned points") {
    CHECK(GraphonKernel::constant().eval(0.3, 0.9) == 1.0);
    CHECK(GraphonKernel::min_max().eval(0.3, 0.6) == doctest::Approx(0.3 * 0.4).epsilon(1e-15));
    CHECK(GraphonKernel::min_max().eval(0.6, 0.3) == doctest::Approx(0.12).epsilon(1e-15));
    // power law at gamma = -1/2: (uv)^{1/2}
    CHECK(GraphonKernel::power_law(-0.5).eval(0.25, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(GraphonKernel::power_law(-0.5).eval(0.0, 0.7) == 0.0);

    const GraphonKernel two = GraphonKernel::two_block(2.0, 0.5);
    CHECK(two.eval(0.1, 0.4) == 2.0);   // both in the first block
    CHECK(two.eval(0.6, 0.9) == 0.5);   // both in the second block
    CHECK(two.eval(0.1, 0.9) == 0.0);   // cross-block
    CHECK(two.eval(0.5, 0.5) == 0.5);   // boundary label belongs to the upper block

    const GraphonKernel star = GraphonKernel::star(1.0, 0.2);
    CHECK(star.eval(0.1, 0.5) == 1.0);  // minority-majority edge
    CHECK(star.eval(0.1, 0.15) == 0.0); // within minority
    CHECK(star.eval(0.5, 0.9) == 0.0);  // within majority
    CHECK(star.eval(0.2, 0.1) == 1.0);  // alpha itself is in the majority block
}

TEST_CASE("kernels are symmetric") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const GraphonKernel kernels[] = {
        GraphonKernel::constant(), GraphonKernel::two_block(2.0, 0.5),
        GraphonKernel::star(1.5, 0.2), GraphonKernel::min_max(), GraphonKernel::power_law(-0.5)};
    for (const auto& k : kernels) {
        for (int trial = 0; trial < 10000; ++trial) {
            const double u = unif(rng), v = unif(rng);
            CHECK(k.eval(u, v) == k.eval(v, u));
        }
    }
}

TEST_CASE("labels outside the unit interval are rejected") {
    CHECK_THROWS_AS(GraphonKernel::constant().eval(-0.1, 0.5), DomainError);
    CHECK_THROWS_AS(GraphonKernel::min_max().eval(0.5, 1.2), DomainError);
    CHECK_THROWS_AS(GraphonKernel::constant().degree(1.5), DomainError);
}

TEST_CASE("positive power-law exponents are rejected") {
    CHECK_THROWS_AS(GraphonKernel::power_law(0.5), ConfigError);
    CHECK_THROWS_AS(GraphonKernel::power_law(1.0), ConfigError);
    CHECK_NOTHROW(GraphonKernel::power_law(-0.5));
}

TEST_CASE("analytic degree at pinned points") {
    CHECK(GraphonKernel::constant().degree(0.42) == 1.0);
    // two-block: deg = a/2 on the lower half, b/2 on the upper
    const GraphonKernel two = GraphonKernel::two_block(2.0, 0.5);
    CHECK(two.degree(0.2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(two.degree(0.8) == doctest::Approx(0.25).epsilon(1e-15));
    // star: deg = c(1-alpha) for minority, c*alpha for majority
    const GraphonKernel star = GraphonKernel::star(1.0, 0.2);
    CHECK(star.degree(0.1) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(star.degree(0.7) == doctest::Approx(0.2).epsilon(1e-15));
    // min-max: deg = u(1-u)/2 + known closed form
    const GraphonKernel mm = GraphonKernel::min_max();
    // integral of min(u,v)(1-max(u,v)) dv = u(1-u)/2 ... verified numerically below
    // power law at gamma=-1/2: deg = (2/3) sqrt(u)
    const GraphonKernel pl = GraphonKernel::power_law(-0.5);
    CHECK(pl.degree(0.25) == doctest::Approx(2.0 / 3.0 * 0.5).epsilon(1e-14));
    CHECK(pl.degree(1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    (void)mm;
}

TEST_CASE("analytic degree matches numerical quadrature") {
    const GraphonKernel kernels[] = {
        GraphonKernel::constant(), GraphonKernel::two_block(2.0, 0.5),
        GraphonKernel::star(1.0, 0.2), GraphonKernel::min_max(), GraphonKernel::power_law(-0.5)};
    const double labels[] = {0.05, 0.2, 0.35, 0.5, 0.65, 0.8, 0.95};
    // Composite Simpson per kernel piece; pieces are split at block boundaries
    // so the integrand is smooth on each subinterval.
    // For the power law the substitution v = s^2 removes the square-root
    // singularity at v = 0, so Simpson converges at full order everywhere.
    auto quad = [](const GraphonKernel& k, double u, double lo, double hi) {
        const bool subst = k.kind() == GraphonKind::PowerLaw;
        // Sample the half-open block kernels strictly inside the piece: the
        // value exactly on a block boundary belongs to the neighboring piece.
        const double a = subst ? std::sqrt(lo) : lo;
        const double b = subst ? std::sqrt(hi) : hi;
        auto f = [&, a, b](double s) {
            s = std::min(std::max(s, a + 1e-13), b - 1e-13);
            return subst ? k.eval(u, s * s) * 2.0 * s : k.eval(u, s);
        };
        const int n = 20000;  // even
        const double h = (b - a) / n;
        double s = f(a) + f(b);
        for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
        return s * h / 3.0;
    };
    for (const auto& k : kernels) {
        for (double u : labels) {
            double num = 0.0;
            std::vector<double> cuts = {0.0, 1.0};
            if (k.kind() == GraphonKind::TwoBlock) cuts = {0.0, 0.5, 1.0};
            if (k.kind() == GraphonKind::Star) cuts = {0.0, k.alpha(), 1.0};
            if (k.kind() == GraphonKind::MinMax) cuts = {0.0, u, 1.0};
            for (std::size_t c = 0; c + 1 < cuts.size(); ++c) num += quad(k, u, cuts[c], cuts[c + 1]);
            CHECK(std::abs(k.degree(u) - num) < 1e-10);
        }
    }
}

TEST_CASE("mean-field weights and weight matrix agree with eval") {
    const GraphonKernel k = GraphonKernel::two_block(2.0, 0.5);
    Eigen::VectorXd labels(4);
    labels << 0.1, 0.4, 0.6, 0.9;
    const Eigen::VectorXd w = k.mean_field_weights(0.1, labels);
    REQUIRE(w.size() == 4);
    CHECK(w(0) == 2.0);
    CHECK(w(1) == 2.0);
    CHECK(w(2) == 0.0);
    CHECK(w(3) == 0.0);

    const Eigen::MatrixXd mat = k.weight_matrix(labels);
    REQUIRE(mat.rows() == 4);
    REQUIRE(mat.cols() == 4);
    CHECK((mat - mat.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(mat(i, j) == k.eval(labels(i), labels(j)));
}

TEST_CASE("adjacency sampling: degenerate probabilities") {
    std::mt19937_64 rng(2);
    // Constant kernel has probability 1 everywhere: complete graph.
    const Eigen::MatrixXi full = GraphonKernel::constant().sample_adjacency(6, rng);
    CHECK(full.minCoeff() == 1);
    CHECK((full - full.transpose()).cwiseAbs().maxCoeff() == 0);

    // Two-block with a=b=0 gives within-block probability 0 and cross 0.
    const Eigen::MatrixXi empty = GraphonKernel::two_block(0.0, 0.0).sample_adjacency(6, rng);
    CHECK(empty.maxCoeff() == 0);
}

TEST_CASE("adjacency sampling: empirical edge frequency within 3 standard errors") {
    std::mt19937_64 rng(3);
    const GraphonKernel k = GraphonKernel::two_block(0.6, 0.3);
    const int n = 40, reps = 200;
    long in_lower = 0, trials_lower = 0;
    for (int r = 0; r < reps; ++r) {
        const Eigen::MatrixXi adj = k.sample_adjacency(n, rng);
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                const double ui = static_cast<double>(i + 1) / n;
                const double uj = static_cast<double>(j + 1) / n;
                if (ui < 0.5 && uj < 0.5) {
                    in_lower += adj(i, j);
                    ++trials_lower;
                }
            }
        }
    }
    const double p = 0.6;
    const double freq = static_cast<double>(in_lower) / trials_lower;
    const double se = std::sqrt(p * (1 - p) / trials_lower);
    CHECK(std::abs(freq - p) < 3 * se);
}

TEST_CASE("kind round trip") {
    for (auto kind : {GraphonKind::Constant, GraphonKind::TwoBlock, GraphonKind::Star,
                      GraphonKind::MinMax, GraphonKind::PowerLaw})
        CHECK(graphon_kind_from_string(to_string(kind)) == kind);
    CHECK_THROWS_AS(graphon_kind_from_string("nope"), ConfigError);
}
