#include <catch2/catch_amalgamated.hpp>

#include "meshwatch/detect/anova.hpp"
#include "meshwatch/sim/rng.hpp"

using namespace meshwatch::detect;

namespace {
using Clusters = std::vector<std::vector<std::size_t>>;
}

TEST_CASE("the worked two-cluster example gives F = 128") {
    Clusters clusters{{0, 1}, {2, 3}};
    std::vector<double> scores{1.0, 0.9, 0.1, 0.2};
    double p = anova_p(clusters, scores);
    CHECK(p == Catch::Approx(0.0077219).margin(1e-6));
}

TEST_CASE("identical scores carry no cluster signal") {
    Clusters clusters{{0, 1}, {2, 3}};
    std::vector<double> scores{0.7, 0.7, 0.7, 0.7};
    CHECK(anova_p(clusters, scores) == 1.0);
}

TEST_CASE("two singletons have no within-group freedom") {
    Clusters clusters{{0}, {1}};
    std::vector<double> scores{0.9, 0.1};
    CHECK(anova_p(clusters, scores) == 1.0);
}

TEST_CASE("perfectly separated clusters give probability zero") {
    Clusters clusters{{0, 1}, {2, 3}};
    std::vector<double> scores{1.0, 1.0, 0.0, 0.0};
    CHECK(anova_p(clusters, scores) == 0.0);
}

TEST_CASE("p stays within [0,1] and is permutation and shift invariant") {
    meshwatch::sim::Rng rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 4 + rng.uniform_int(8);
        std::vector<double> scores;
        for (std::size_t i = 0; i < n; ++i) scores.push_back(rng.uniform01());

        // random 2- or 3-way partition
        std::size_t k = 2 + rng.uniform_int(2);
        Clusters clusters(k);
        for (std::size_t i = 0; i < n; ++i) clusters[rng.uniform_int(k)].push_back(i);
        Clusters nonempty;
        for (auto& c : clusters)
            if (!c.empty()) nonempty.push_back(c);
        if (nonempty.size() < 2) continue;

        double p = anova_p(nonempty, scores);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);

        // permuting cluster order changes nothing
        Clusters reversed(nonempty.rbegin(), nonempty.rend());
        CHECK(anova_p(reversed, scores) == Catch::Approx(p).margin(1e-12));

        // adding a constant to every score changes nothing appreciable
        std::vector<double> shifted = scores;
        for (double& x : shifted) x += 0.25;
        CHECK(anova_p(nonempty, shifted) == Catch::Approx(p).margin(1e-7));
    }
}

TEST_CASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS(anova_p({{0, 1}}, std::vector<double>{0.1, 0.2}), std::invalid_argument);
    CHECK_THROWS_AS(anova_p({{0}, {5}}, std::vector<double>{0.1}), std::invalid_argument);
}
