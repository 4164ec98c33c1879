#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"

using namespace ergopress;

TEST_CASE("pressure_finite") {
    Sft full2 = Sft::full_shift(2);
    Potential zero = Potential::zero(full2);
    CHECK(pressure_finite(full2, zero, 5) == doctest::Approx(5 * std::log(2.0)).epsilon(1e-14));

    Sft gm = golden_mean();
    CHECK(pressure_finite(gm, Potential::zero(gm), 4) ==
          doctest::Approx(std::log(8.0)).epsilon(1e-14));

    const double beta = 1.0;
    Potential field({0.0, beta});
    CHECK(pressure_finite(full2, field, 1) ==
          doctest::Approx(std::log(1.0 + std::exp(beta))).epsilon(1e-14));

    // against brute-force sums with a nonzero potential
    Potential f({0.4, -0.8});
    for (int n = 1; n <= 8; ++n)
        CHECK(pressure_finite(gm, f, n) ==
              doctest::Approx(std::log(oracle::brute_pressure_sum(gm, f, n))).epsilon(1e-12));

    CHECK_THROWS_AS(pressure_finite(gm, f, 0), ValidationError);
}

TEST_CASE("weighted_fiber_weight on the product tower") {
    Tower t = product_tower(3, 2, Sft::full_shift(1));
    Potential zero = Potential::zero(t.x);

    for (int n = 1; n <= 6; ++n) {
        Word zeta(n, 0);
        FiberWeightTable table = weighted_fiber_weight(t, zero, 0.5, zeta);
        // W_n = 2^n * 3^{n/2}
        CHECK(table.total / n ==
              doctest::Approx(std::log(2.0) + 0.5 * std::log(3.0)).epsilon(1e-12));
        CHECK(table.log_inner.size() == static_cast<std::size_t>(1 << n));
        // every inner sum is 3^n
        for (const auto& [v, w] : table.log_inner)
            CHECK(w == doctest::Approx(n * std::log(3.0)).epsilon(1e-12));
    }

    // omega = 1 collapses to the plain pressure sum
    Potential f({0.3, -0.2, 0.9, -0.7, 0.1, 0.5});
    for (int n = 1; n <= 5; ++n) {
        Word zeta(n, 0);
        CHECK(weighted_fiber_total(t, f, 1.0, zeta) ==
              doctest::Approx(pressure_finite(t.x, f, n)).epsilon(1e-12));
        // omega = 0 counts fiber words
        CHECK(weighted_fiber_total(t, f, 0.0, zeta) ==
              doctest::Approx(n * std::log(2.0)).epsilon(1e-12));
        // table matches the brute-force oracle
        CHECK(weighted_fiber_total(t, f, 0.5, zeta) ==
              doctest::Approx(std::log(oracle::brute_fiber_weight(t, f, 0.5, zeta)))
                  .epsilon(1e-12));
    }
}

TEST_CASE("weighted fiber weights on a genuine SFT tower match brute force") {
    // product of pairs over a 2-cycle z through a quotient y
    Sft z = cycle_sft(2);
    Tower t = product_tower(2, 2, z);
    Potential f({0.25, -0.5, 0.75, -0.25, 0.1, 0.6, -0.9, 0.0});
    for (double omega : {0.0, 0.3, 1.0}) {
        for (int n = 2; n <= 4; ++n) {
            Word zeta;
            for (int k = 0; k < n; ++k) zeta.push_back(k % 2);
            CHECK(weighted_fiber_total(t, f, omega, zeta) ==
                  doctest::Approx(std::log(oracle::brute_fiber_weight(t, f, omega, zeta)))
                      .epsilon(1e-12));
        }
    }

    // per-v inner sums against direct enumeration of x-words
    Word zeta{0, 1, 0, 1};
    FiberWeightTable table = weighted_fiber_weight(t, f, 0.4, zeta);
    std::map<Word, double> inner;
    for (const auto& u : oracle::brute_words(t.x, 4)) {
        Word v(4), zz(4);
        for (int i = 0; i < 4; ++i) {
            v[i] = t.pi.apply(u[i]);
            zz[i] = t.phi.apply(v[i]);
        }
        if (zz == zeta) inner[v] += std::exp(birkhoff_sum(f, u));
    }
    REQUIRE(table.log_inner.size() == inner.size());
    for (const auto& [v, logw] : table.log_inner) {
        CHECK(t.y.word_admissible(v));
        CHECK(logw == doctest::Approx(std::log(inner.at(v))).epsilon(1e-12));
    }
    // listed in lex order
    for (std::size_t i = 1; i < table.log_inner.size(); ++i)
        CHECK(table.log_inner[i - 1].first < table.log_inner[i].first);
}

TEST_CASE("empty fiber raises") {
    // z strictly larger than the image of phi: word 11 has no y-preimage
    Sft y = golden_mean();
    Sft z = Sft::full_shift(2);
    Tower t(y, y, z, SlidingBlockCode(y, y, {0, 1}), SlidingBlockCode(y, z, {0, 1}));
    CHECK_THROWS_AS(weighted_fiber_total(t, Potential::zero(y), 0.5, Word{1, 1}),
                    EmptyFiberError);
}

TEST_CASE("sup_weighted") {
    SUBCASE("trivial z has a single word") {
        Tower t = product_tower(3, 2, Sft::full_shift(1));
        auto [val, arg] = sup_weighted(t, Potential::zero(t.x), 0.5, 4);
        CHECK(val / 4 == doctest::Approx(std::log(2.0) + 0.5 * std::log(3.0)).epsilon(1e-12));
        CHECK(arg == Word{0, 0, 0, 0});
    }

    SUBCASE("argmax picks the richer of two disconnected fixed points") {
        // z = two fixed points; the fiber over c has two x-symbols, over c' one
        Sft z({"c", "cc"}, std::vector<std::pair<int, int>>{{0, 0}, {1, 1}});
        Sft x({"x1", "x2", "x3"},
              std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 2}});
        SlidingBlockCode pi(x, z, {0, 0, 1}, "pi");
        SlidingBlockCode phi(z, z, {0, 1}, "phi");
        Tower t(x, z, z, pi, phi);
        auto [val, arg] = sup_weighted(t, Potential::zero(t.x), 1.0, 3);
        CHECK(arg == Word{0, 0, 0});
        CHECK(val == doctest::Approx(3 * std::log(2.0)).epsilon(1e-12));
    }

    SUBCASE("omega=1 with zero potential over a point is the word count") {
        Tower t = oracle::golden_tower();
        auto [val, arg] = sup_weighted(t, Potential::zero(t.x), 1.0, 6);
        CHECK(val == doctest::Approx(std::log(static_cast<double>(count_words(t.x, 6))))
                         .epsilon(1e-12));
    }
}

TEST_CASE("orbit_average_weighted") {
    SUBCASE("period 1 equals the fiber weight at the constant word") {
        Tower t = product_tower(3, 2, Sft::full_shift(1));
        Potential f({0.3, -0.2, 0.9, -0.7, 0.1, 0.5});
        double avg = orbit_average_weighted(t, f, 0.5, Word{0}, 5);
        CHECK(avg == weighted_fiber_total(t, f, 0.5, Word{0, 0, 0, 0, 0}));
    }

    SUBCASE("period-2 cycle with equal fibers gives the common value") {
        Tower t = product_tower(2, 2, cycle_sft(2));
        Potential zero = Potential::zero(t.x);
        double avg = orbit_average_weighted(t, zero, 0.5, Word{0, 1}, 4);
        Word zeta{0, 1, 0, 1};
        CHECK(avg == doctest::Approx(weighted_fiber_total(t, zero, 0.5, zeta)).epsilon(1e-12));
    }

    SUBCASE("asymmetric fibers cross-checked by brute force at n=4") {
        // fibers of size 2 over symbol 0 and 3 over symbol 1
        Sft z = cycle_sft(2);
        std::vector<std::string> names{"a0", "b0", "a1", "b1", "c1"};
        std::vector<std::pair<int, int>> edges;
        for (int i : {0, 1})
            for (int j : {2, 3, 4}) {
                edges.emplace_back(i, j);
                edges.emplace_back(j, i);
            }
        Sft x(names, edges);
        SlidingBlockCode psi_like(x, z, {0, 0, 1, 1, 1}, "pi");
        SlidingBlockCode phi(z, z, {0, 1}, "phi");
        Tower t(x, z, z, psi_like, phi);
        Potential zero = Potential::zero(t.x);
        double avg = orbit_average_weighted(t, zero, 1.0, Word{0, 1}, 4);
        Word z01{0, 1, 0, 1}, z10{1, 0, 1, 0};
        double expect = 0.5 * (std::log(oracle::brute_fiber_weight(t, zero, 1.0, z01)) +
                               std::log(oracle::brute_fiber_weight(t, zero, 1.0, z10)));
        CHECK(avg == doctest::Approx(expect).epsilon(1e-12));
    }

    SUBCASE("inadmissible period throws") {
        Tower t = product_tower(2, 2, cycle_sft(2));
        CHECK_THROWS_AS(
            orbit_average_weighted(t, Potential::zero(t.x), 0.5, Word{0, 0}, 4),
            InadmissiblePeriodError);
    }
}

TEST_CASE("fekete_bracket") {
    SUBCASE("affine sequence a_n = 2n + 3") {
        std::vector<double> a;
        for (int n = 1; n <= 8; ++n) a.push_back(2.0 * n + 3.0);
        PressureEstimate est = fekete_bracket(a);
        CHECK(est.upper == doctest::Approx(2.0 + 3.0 / 8.0));
        CHECK(est.extrapolated == doctest::Approx(2.0));
        PressureEstimate first = fekete_bracket({5.0});
        CHECK(first.upper == 5.0);
        // upper is nonincreasing in the horizon
        double prev = 1e300;
        for (int N = 1; N <= 8; ++N) {
            std::vector<double> prefix(a.begin(), a.begin() + N);
            double u = fekete_bracket(prefix).upper;
            CHECK(u <= prev + 1e-15);
            prev = u;
        }
    }

    SUBCASE("exact linear growth: product full shift") {
        std::vector<double> a;
        for (int n = 1; n <= 6; ++n) a.push_back(n * std::log(6.0));
        PressureEstimate est = fekete_bracket(a);
        CHECK(est.upper == doctest::Approx(std::log(6.0)).epsilon(1e-14));
        CHECK(est.extrapolated == doctest::Approx(std::log(6.0)).epsilon(1e-14));
    }

    SUBCASE("golden mean upper estimate approaches log phi") {
        Tower t = oracle::golden_tower();
        std::vector<double> a;
        for (int n = 1; n <= 16; ++n)
            a.push_back(sup_weighted(t, Potential::zero(t.x), 1.0, n).first);
        PressureEstimate est = fekete_bracket(a);
        const double target = std::log(oracle::kGolden);
        CHECK(est.upper >= target);
        CHECK(est.upper - target < 0.02);
        CHECK(est.extrapolated <= est.upper + 1e-12);
    }

    CHECK_THROWS_AS(fekete_bracket({}), ValidationError);
}

TEST_CASE("conditional_top_entropy_finite") {
    Sft gm = golden_mean();
    SlidingBlockCode identity(gm, gm, {0, 1});
    for (int n = 1; n <= 6; ++n) CHECK(conditional_top_entropy_finite(identity, n) == 0.0);

    Tower t = product_tower(3, 2, Sft::full_shift(1));
    for (int n = 1; n <= 6; ++n)
        CHECK(conditional_top_entropy_finite(t.pi, n) ==
              doctest::Approx(n * std::log(3.0)).epsilon(1e-13));

    Sft point = Sft::full_shift(1);
    SlidingBlockCode constant(gm, point, {0, 0});
    CHECK(conditional_top_entropy_finite(constant, 4) ==
          doctest::Approx(std::log(8.0)).epsilon(1e-14));
}

TEST_CASE("subadditivity of log weights, exhaustive n,m <= 5") {
    Tower t = product_tower(2, 2, cycle_sft(2));
    Potential f({0.2, -0.4, 0.6, -0.1, 0.5, -0.8, 0.05, 0.3});
    for (double omega : {0.5, 1.0}) {
        std::vector<std::map<Word, double>> table(11);
        for (int k = 1; k <= 10; ++k)
            for (auto& [zeta, total] : fiber_totals_all(t, f, omega, k)) table[k][zeta] = total;
        for (int n = 1; n <= 5; ++n)
            for (int m = 1; m <= 5; ++m)
                for (const auto& [word, total] : table[n + m]) {
                    Word zeta(word.begin(), word.begin() + n);
                    Word xi(word.begin() + n, word.end());
                    auto a = table[n].find(zeta);
                    auto b = table[m].find(xi);
                    REQUIRE(a != table[n].end());
                    REQUIRE(b != table[m].end());
                    CHECK(total <= a->second + b->second + 1e-9);
                }
    }
}

TEST_CASE("fiber weight is log-convex and monotone in omega") {
    Tower t = product_tower(2, 2, cycle_sft(2));
    Potential f({0.2, -0.4, 0.6, -0.1, 0.5, -0.8, 0.05, 0.3});
    Word zeta{0, 1, 0, 1, 0, 1};
    std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<double> vals;
    for (double w : grid) vals.push_back(weighted_fiber_total(t, f, w, zeta));
    for (std::size_t i = 1; i + 1 < vals.size(); ++i)
        CHECK(vals[i - 1] - 2 * vals[i] + vals[i + 1] >= -1e-9);

    Potential zero = Potential::zero(t.x);
    double prev = -1e300;
    for (double w : grid) {
        double v = weighted_fiber_total(t, zero, w, zeta);
        CHECK(v >= prev - 1e-9);
        prev = v;
    }
}

TEST_CASE("batched totals are bit-identical to per-zeta evaluation") {
    Tower t = product_tower(2, 2, cycle_sft(2));
    Potential f({0.2, -0.4, 0.6, -0.1, 0.5, -0.8, 0.05, 0.3});
    for (auto& [zeta, total] : fiber_totals_all(t, f, 0.7, 5)) {
        CHECK(weighted_fiber_total(t, f, 0.7, zeta) == total);
        CHECK(weighted_fiber_weight(t, f, 0.7, zeta).total == total);
    }
}

TEST_CASE("power rule on full-shift towers, exact") {
    Tower t = product_tower(3, 2, Sft::full_shift(1));
    Potential f({0.3, -0.2, 0.9, -0.7, 0.1, 0.5});
    for (int k : {2, 3}) {
        PowerSystem ps = power_system(t, f, k);
        for (int n = 1; k * n <= 6; ++n) {
            Word zeta_power(n, 0);
            Word zeta(k * n, 0);
            CHECK(weighted_fiber_total(ps.tower, ps.potential, 0.5, zeta_power) ==
                  doctest::Approx(weighted_fiber_total(t, f, 0.5, zeta)).epsilon(1e-12));
        }
    }
}

TEST_CASE("extension by a product factor never decreases the weighted sum") {
    Tower t = product_tower(2, 2, cycle_sft(2));
    Potential f({0.2, -0.4, 0.6, -0.1, 0.5, -0.8, 0.05, 0.3});
    Tower ext = extend_by_full_factor(t, 2);
    Potential fe = pullback_to_extension(f, t, 2);
    for (double omega : {0.0, 0.5, 1.0}) {
        Word zeta{0, 1, 0, 1, 0};
        double base = weighted_fiber_total(t, f, omega, zeta);
        double lifted = weighted_fiber_total(ext, fe, omega, zeta);
        CHECK(lifted >= base - 1e-9);
        // the lift is exactly omega * n * log 2 above the base
        CHECK(lifted == doctest::Approx(base + omega * 5 * std::log(2.0)).epsilon(1e-12));
    }
}

TEST_CASE("uniform bound on normalized weights") {
    Tower t = product_tower(2, 2, cycle_sft(2));
    Potential f({0.2, -0.4, 0.6, -0.1, 0.5, -0.8, 0.05, 0.3});
    const double fx = f.sup_norm();
    for (double omega : {0.0, 0.5, 1.0}) {
        double bound = std::log(static_cast<double>(t.y.size())) +
                       omega * (std::log(static_cast<double>(t.x.size())) + fx);
        for (int n = 1; n <= 8; ++n)
            for (auto& [zeta, total] : fiber_totals_all(t, f, omega, n))
                CHECK(total / n <= bound + 1e-9);
    }
}
