#include <doctest.h>

#include <cmath>

#include "zofo/rng.hpp"

using namespace zofo;

TEST_CASE("streams are deterministic and addressable") {
    rng::Stream a(1, 2, 3);
    rng::Stream b(1, 2, 3);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());

    rng::Stream c(1, 2, 4);
    rng::Stream d(1, 3, 3);
    rng::Stream e(2, 2, 3);
    rng::Stream base(1, 2, 3);
    bool all_equal = true;
    for (int i = 0; i < 10; ++i) {
        const double r = base.uniform();
        all_equal = all_equal && r == c.uniform() && r == d.uniform() && r == e.uniform();
    }
    CHECK(!all_equal);
}

TEST_CASE("uniform values live in [0, 1)") {
    rng::Stream s(7, 1, 0);
    for (int i = 0; i < 10000; ++i) {
        const double u = s.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("normal draws have the right first two moments") {
    rng::Stream s(11, 1, 0);
    const long n = 200000;
    double sum = 0.0, sum_sq = 0.0;
    for (long i = 0; i < n; ++i) {
        const double z = s.normal();
        sum += z;
        sum_sq += z * z;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(std::abs(mean) <= 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(var - 1.0) <= 3.0 * std::sqrt(2.0 / static_cast<double>(n)));
}

TEST_CASE("matrix fill order is row-major") {
    rng::Stream a(5, 6, 7);
    const Eigen::MatrixXd m = a.uniform_matrix(2, 3);
    rng::Stream b(5, 6, 7);
    for (Eigen::Index i = 0; i < 2; ++i)
        for (Eigen::Index j = 0; j < 3; ++j) CHECK(m(i, j) == b.uniform());
}
