#include "bdris/channel.hpp"
#include "bdris/scatter.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace bdris;

namespace {

double max_abs_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("ULA steering examples")
{
    const auto flat = ula_steering(0.0, 4);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(flat.entries(k) - Complex(0.5, 0.0)) < 1e-15);

    const auto tilted = ula_steering(kPi / 6.0, 4);
    const Complex want[] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    for (int k = 0; k < 4; ++k) CHECK(std::abs(tilted.entries(k) - want[k] / 2.0) < 1e-15);

    const auto single = ula_steering(1.234, 1);
    CHECK(std::abs(single.entries(0) - Complex(1.0, 0.0)) < 1e-15);

    CHECK_THROWS_AS(ula_steering(0.3, 0), DimensionError);
    CHECK_THROWS_AS(ula_steering(NAN, 3), DomainError);
}

TEST_CASE("steering vectors have unit norm and constant modulus")
{
    oracle::Gen gen(11);
    for (int i = 0; i < 200; ++i) {
        const int m = gen.integer(1, 128);
        const auto sv = ula_steering(gen.uniform(-kPi, kPi), m);
        CHECK(std::abs(sv.entries.norm() - 1.0) < 1e-12);
        for (int k = 0; k < m; ++k) CHECK(std::abs(std::abs(sv.entries(k)) - 1.0 / std::sqrt(m)) < 1e-15);
    }
}

TEST_CASE("path loss and noise power examples")
{
    CHECK(path_loss_db(1.0, 2.0, -28.0) == doctest::Approx(-28.0));
    CHECK(path_loss_db(10.0, 2.0, -28.0) == doctest::Approx(-48.0));
    CHECK(path_loss_db(100.0, 3.75, -28.0) == doctest::Approx(-103.0));
    CHECK_THROWS_AS(path_loss_db(0.5, 2.0, -28.0), DomainError);

    CHECK(noise_power_dbm(1.0, 0.0) == doctest::Approx(-174.0));
    CHECK(noise_power_dbm(20e6, 10.0) == doctest::Approx(-90.9897).epsilon(1e-6));
    CHECK(noise_power_dbm(10e6, 0.0) == doctest::Approx(-104.0));
    CHECK_THROWS_AS(noise_power_dbm(0.0, 0.0), DomainError);
}

TEST_CASE("scenario geometry")
{
    const ScenarioConfig cfg;
    CHECK(distance(cfg.tx_pos, cfg.ris_pos) == doctest::Approx(std::sqrt(20.0 * 20 + 20 * 20 + 17 * 17)));
    // (20, 20, 17) has norm sqrt(1089), exactly 33 m.
    CHECK(distance(cfg.tx_pos, cfg.ris_pos) == doctest::Approx(33.0).epsilon(1e-15));
    CHECK(azimuth({0, 0, 0}, {1, 1, 5}) == doctest::Approx(kPi / 4));

    ScenarioConfig bad = cfg;
    bad.ris_pos = bad.tx_pos;
    CHECK_THROWS_AS(build_scenario_channels(bad, Rng(1)), GeometryError);
    bad = cfg;
    bad.rx_pos = bad.tx_pos;
    CHECK_THROWS_AS(build_scenario_channels(bad, Rng(1)), GeometryError);
}

TEST_CASE("scenario validation")
{
    ScenarioConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    auto expect_invalid = [](auto mutate) {
        ScenarioConfig c;
        mutate(c);
        CHECK_THROWS_AS(c.validate(), ConfigError);
    };
    expect_invalid([](ScenarioConfig& c) { c.n_t = 0; });
    expect_invalid([](ScenarioConfig& c) { c.m = 0; });
    expect_invalid([](ScenarioConfig& c) { c.bandwidth_hz = 0; });
    expect_invalid([](ScenarioConfig& c) { c.trials = 0; });
    expect_invalid([](ScenarioConfig& c) { c.ricean_k = -1; });
}

TEST_CASE("Rayleigh channel statistics and determinism")
{
    Rng first(5), second(5);
    const CMatrix a = rayleigh_channel(2, 2, 0.0, first);
    const CMatrix b = rayleigh_channel(2, 2, 0.0, second);
    CHECK(a == b);

    Rng r(6);
    const CMatrix big = rayleigh_channel(100000, 1, 0.0, r);
    CHECK(big.cwiseAbs2().mean() == doctest::Approx(1.0).epsilon(0.02));

    const CMatrix small = rayleigh_channel(400, 250, -20.0, r);
    CHECK(small.cwiseAbs2().mean() == doctest::Approx(0.01).epsilon(0.02));
    CHECK(small.real().array().square().mean() == doctest::Approx(0.005).epsilon(0.03));

    CHECK_THROWS_AS(rayleigh_channel(0, 2, 0.0, r), DimensionError);
}

TEST_CASE("Ricean mixing")
{
    oracle::Gen gen(3);
    const CMatrix los = gen.matrix(3, 5);
    CMatrix nlos = gen.matrix(3, 5);
    nlos *= los.norm() / nlos.norm(); // matched power, as in the scenario normalization
    CHECK(ricean_mix(los, nlos, 0.0) == nlos);
    CHECK((ricean_mix(los, nlos, 1e12) - los).norm() / los.norm() < 1e-6);
    CHECK(max_abs_diff(ricean_mix(los, nlos, 1.0), (los + nlos) / std::sqrt(2.0)) < 1e-15);
    CHECK(ricean_mix(los, nlos, INFINITY) == los);
    CHECK_THROWS_AS(ricean_mix(los, gen.matrix(3, 4), 1.0), DimensionError);
    CHECK_THROWS_AS(ricean_mix(los, nlos, -0.5), DomainError);

    // Power preservation when both parts carry the same expected energy.
    Rng r(8);
    double mean = 0.0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        const CMatrix l = rayleigh_channel(2, 4, 0.0, r), n = rayleigh_channel(2, 4, 0.0, r);
        mean += ricean_mix(l, n, 3.0).squaredNorm();
    }
    CHECK(mean / trials == doctest::Approx(8.0).epsilon(0.02));
}

TEST_CASE("LoS factors carry the link amplitudes")
{
    const ScenarioConfig cfg;
    const LosFactors los = los_factors(cfg);
    const double gain_g = db_to_linear(path_loss_db(distance(cfg.tx_pos, cfg.ris_pos), 2.0, -28.0));
    const double gain_f = db_to_linear(path_loss_db(distance(cfg.ris_pos, cfg.rx_pos), 2.0, -28.0));
    // Each entry of the rank-1 LoS matrix has modulus sqrt(gain), matching the NLoS per-entry power.
    CHECK(los.forward().cwiseAbs().minCoeff() == doctest::Approx(std::sqrt(gain_g)).epsilon(1e-12));
    CHECK(los.forward().cwiseAbs().maxCoeff() == doctest::Approx(std::sqrt(gain_g)).epsilon(1e-12));
    CHECK(los.backward().cwiseAbs().maxCoeff() == doctest::Approx(std::sqrt(gain_f)).epsilon(1e-12));
    CHECK(los.f_d.size() == cfg.m);
    CHECK(los.g_d.size() == cfg.n_t);
    CHECK(los.f_a.size() == cfg.n_r);
}

TEST_CASE("equivalent channel assembly")
{
    oracle::Gen gen(21);
    for (int i = 0; i < 50; ++i) {
        const int nr = gen.integer(1, 5), nt = gen.integer(1, 5), m = gen.integer(1, 9);
        ChannelSet ch;
        ch.direct = gen.matrix(nr, nt);
        LosFactors los{gen.vector(nr), gen.vector(m), gen.vector(m), gen.vector(nt)};
        ch.ris_links = los;
        const CMatrix t1 = oracle::random_symmetric_unitary(gen, m), t2 = gen.matrix(m, m);

        CHECK((assemble_equivalent(ch, CMatrix::Zero(m, m)) - ch.direct).norm() == 0.0);

        const CMatrix factored = assemble_equivalent(ch, t1);
        const CMatrix full = ch.direct + los.backward() * t1 * los.forward().adjoint();
        CHECK((factored - full).norm() <= 1e-12 * full.norm());

        // Linearity in Theta.
        const CMatrix lin = (assemble_equivalent(ch, CMatrix(t1 + t2)) - ch.direct)
                            - (assemble_equivalent(ch, t1) - ch.direct) - (assemble_equivalent(ch, t2) - ch.direct);
        CHECK(lin.norm() <= 1e-12 * (1.0 + full.norm() + t2.norm() * los.f_a.norm() * los.g_d.norm() * los.f_d.norm()));

        // H - H_d is rank <= 1 with factors along f_a and g_d.
        const CMatrix diff = factored - ch.direct;
        Eigen::JacobiSVD<CMatrix> svd(diff, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto& s = svd.singularValues();
        if (s.size() > 1) CHECK(s(1) <= 1e-12 * std::max(1.0, s(0)));
        if (s(0) > 1e-9) {
            const Complex align = svd.matrixU().col(0).dot(los.f_a) / los.f_a.norm();
            CHECK(std::abs(std::abs(align) - 1.0) < 1e-9);
        }

        // Same result through the full-matrix variant of the channel set.
        ChannelSet as_full;
        as_full.direct = ch.direct;
        as_full.ris_links = FullLinks{los.backward(), los.forward(), los};
        CHECK((assemble_equivalent(as_full, t1) - factored).norm() <= 1e-12 * full.norm());
    }
    ChannelSet ch;
    ch.direct = gen.matrix(2, 2);
    ch.ris_links = LosFactors{gen.vector(2), gen.vector(4), gen.vector(4), gen.vector(2)};
    CHECK_THROWS_AS(assemble_equivalent(ch, gen.matrix(3, 3)), DimensionError);
}

TEST_CASE("scenario channels")
{
    ScenarioConfig cfg;
    cfg.n_t = 2;
    cfg.n_r = 3;
    cfg.m = 16;

    const ChannelSet los = build_scenario_channels(cfg, Rng(77));
    REQUIRE(los.pure_los());
    const auto& f = std::get<LosFactors>(los.ris_links);
    CHECK((los.backward() - f.f_a * f.f_d.adjoint()).norm() == 0.0);
    CHECK(los.direct.rows() == 3);
    CHECK(los.direct.cols() == 2);

    // Bit-for-bit reproducibility, including the Ricean draw.
    cfg.ricean_k = 2.0;
    const ChannelSet r1 = build_scenario_channels(cfg, Rng(77)), r2 = build_scenario_channels(cfg, Rng(77));
    CHECK(r1.direct == r2.direct);
    CHECK(r1.backward() == r2.backward());
    CHECK(r1.forward() == r2.forward());
    // The direct link does not depend on K.
    CHECK(r1.direct == los.direct);

    cfg.ricean_k = 0.0;
    const ChannelSet rayleigh = build_scenario_channels(cfg, Rng(77));
    Eigen::JacobiSVD<CMatrix> svd(rayleigh.backward());
    CHECK(svd.singularValues()(2) > 1e-6 * svd.singularValues()(0));
    CHECK(!rayleigh.pure_los());
}

TEST_CASE("dominant rank-1 factors reproduce exact rank-1 links")
{
    const ChannelSet ch = build_scenario_channels(ScenarioConfig{}, Rng(3));
    const auto& los = std::get<LosFactors>(ch.ris_links);
    const LosFactors dom = dominant_factors(los.backward(), los.forward());
    CHECK((dom.backward() - los.backward()).norm() <= 1e-12 * los.backward().norm());
    CHECK((dom.forward() - los.forward()).norm() <= 1e-12 * los.forward().norm());
}
