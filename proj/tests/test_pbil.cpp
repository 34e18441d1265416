#include <doctest.h>

#include <cmath>

#include "daeeda/pbil.hpp"

using namespace daeeda;

TEST_CASE("pbil_init") {
    auto p = pbil_init(3);
    CHECK(p.size() == 3);
    for (double v : p.values()) {
        CHECK(v == 0.5);
    }
    CHECK(pbil_init(1).values()[0] == 0.5);
    CHECK_THROWS_AS(pbil_init(0), std::invalid_argument);
    CHECK_THROWS_AS(ProbabilityVector(RealVector{0.2, 1.1}), std::domain_error);
}

TEST_CASE("pbil_update substitutes into the update rule") {
    auto p = pbil_init(1);
    std::vector<Bitstring> best{Bitstring::from_string("1")};
    CHECK(pbil_update(p, best, 0.02)[0] == doctest::Approx(0.51));

    // target is the mean of the best individuals
    ProbabilityVector q(RealVector{0.5, 0.25});
    std::vector<Bitstring> two{Bitstring::from_string("10"), Bitstring::from_string("00")};
    auto fixed = pbil_update(q, two, 0.3);
    CHECK(fixed[0] == doctest::Approx(0.5));
    CHECK(fixed[1] == doctest::Approx(0.25 * 0.7));
}

TEST_CASE("pbil_update preconditions") {
    auto p = pbil_init(2);
    std::vector<Bitstring> best{Bitstring::from_string("10")};
    CHECK_THROWS_AS(pbil_update(p, best, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(pbil_update(p, best, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(pbil_update(p, std::vector<Bitstring>{}, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(pbil_update(p, std::vector<Bitstring>{Bitstring(3)}, 0.1), ShapeError);
}

TEST_CASE("pbil_update contracts toward the target by exactly (1 - alpha)") {
    Rng r(17);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + r.below(10);
        RealVector v(n);
        for (auto& x : v) {
            x = r.uniform();
        }
        ProbabilityVector p(v);
        const std::size_t mu = 1 + r.below(4);
        std::vector<Bitstring> best;
        RealVector target(n, 0.0);
        for (std::size_t k = 0; k < mu; ++k) {
            Bitstring b(n);
            for (std::size_t i = 0; i < n; ++i) {
                b.set(i, r.coin());
                target[i] += b[i] / static_cast<double>(mu);
            }
            best.push_back(b);
        }
        const double alpha = r.uniform(0.01, 0.99);
        auto next = pbil_update(p, best, alpha);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(next[i] >= 0.0);
            CHECK(next[i] <= 1.0);
            CHECK(std::abs(next[i] - target[i]) == doctest::Approx((1 - alpha) * std::abs(p[i] - target[i])));
        }
    }
}

TEST_CASE("repeated updates converge to a constant best individual") {
    const auto y = Bitstring::from_string("1011001110");
    std::vector<Bitstring> best{y};
    auto p = pbil_init(10);
    for (int step = 0; step < 2000; ++step) {
        p = pbil_update(p, best, 0.02);
    }
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(std::abs(p[i] - y[i]) < 1e-6);
    }
}

TEST_CASE("pbil_sample") {
    Rng r(2);
    CHECK(pbil_sample(ProbabilityVector(RealVector(6, 1.0)), r) == Bitstring::ones(6));
    CHECK(pbil_sample(ProbabilityVector(RealVector(6, 0.0)), r) == Bitstring(6));

    ProbabilityVector p(RealVector(4, 0.3));
    RealVector ones(4, 0.0);
    const int draws = 10000;
    for (int d = 0; d < draws; ++d) {
        auto b = pbil_sample(p, r);
        for (std::size_t i = 0; i < 4; ++i) {
            ones[i] += b[i];
        }
    }
    for (double c : ones) {
        CHECK(std::abs(c / draws - 0.3) <= 0.02);
    }
}
