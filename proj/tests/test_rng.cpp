#include "bdris/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

using bdris::Rng;

TEST_CASE("same seed reproduces the same sequence")
{
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng c(43);
    Rng d(42);
    int equal = 0;
    for (int i = 0; i < 1000; ++i) equal += c.next_u64() == d.next_u64();
    CHECK(equal == 0);
}

TEST_CASE("split streams depend only on the key and id, not on the parent position")
{
    Rng parent(9);
    const Rng child_before = parent.split(5);
    for (int i = 0; i < 17; ++i) parent.next_u64();
    Rng child_after = parent.split(5);
    Rng copy = child_before;
    for (int i = 0; i < 100; ++i) CHECK(copy.next_u64() == child_after.next_u64());
    CHECK(parent.split(5).key() != parent.split(6).key());
    CHECK(parent.split(5).key() != parent.key());
}

TEST_CASE("uniform draws lie in [0,1) with the right mean")
{
    Rng r(1);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.005));
}

TEST_CASE("normal and complex normal moments")
{
    Rng r(2);
    const int n = 200000;
    double s1 = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        const double x = r.normal();
        s1 += x;
        s2 += x * x;
    }
    CHECK(std::abs(s1 / n) < 0.01);
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));

    double p = 0, re2 = 0, im2 = 0, cross = 0;
    for (int i = 0; i < n; ++i) {
        const auto z = r.complex_normal(0.01);
        p += std::norm(z);
        re2 += z.real() * z.real();
        im2 += z.imag() * z.imag();
        cross += z.real() * z.imag();
    }
    CHECK(p / n == doctest::Approx(0.01).epsilon(0.01));
    CHECK(re2 / n == doctest::Approx(0.005).epsilon(0.02));
    CHECK(im2 / n == doctest::Approx(0.005).epsilon(0.02));
    CHECK(std::abs(cross / n) < 1e-4);
}

TEST_CASE("trial seeds are distinct and stable")
{
    std::set<std::uint64_t> seen;
    for (std::uint64_t t = 0; t < 5000; ++t) seen.insert(bdris::trial_seed(1, t));
    CHECK(seen.size() == 5000);
    CHECK(bdris::trial_seed(1, 3) == bdris::trial_seed(1, 3));
    CHECK(bdris::trial_seed(1, 3) != bdris::trial_seed(2, 3));
}

TEST_CASE("usable as a standard uniform random bit generator")
{
    std::vector<int> v(50);
    std::iota(v.begin(), v.end(), 0);
    auto w = v;
    Rng a(3), b(3);
    std::shuffle(v.begin(), v.end(), a);
    std::shuffle(w.begin(), w.end(), b);
    CHECK(v == w);
    CHECK(a == b);
}
