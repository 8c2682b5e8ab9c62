#include "zeno/experiment.hpp"
#include "zeno/harness.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace zeno;

TEST(Schedule, PeriodicThenFreeHasExactlyNDephasings) {
    const Schedule s = Schedule::periodic_then_free(1.0, 8, 12.0);
    EXPECT_EQ(s.measurement_count(), 8);
    EXPECT_DOUBLE_EQ(s.total_ms(), 20.0);
    ASSERT_TRUE(s.interval_ms().has_value());
    EXPECT_EQ(*s.interval_ms(), 1.0);
    EXPECT_EQ(s.segments().size(), 17U);
    EXPECT_EQ(s.segments().back().kind, Segment::Kind::Evolve);
}

TEST(Schedule, FreeHasNoInterval) {
    const Schedule s = Schedule::free(3.0);
    EXPECT_EQ(s.measurement_count(), 0);
    EXPECT_FALSE(s.interval_ms().has_value());
}

TEST(Schedule, RejectsBadArguments) {
    EXPECT_THROW(Schedule::free(-1.0), InvalidArgument);
    EXPECT_THROW(Schedule::periodic(0.0, 3), InvalidArgument);
    EXPECT_THROW(Schedule::periodic(1.0, -1), InvalidArgument);
    Schedule s;
    EXPECT_THROW(s.evolve(std::nan("")), InvalidArgument);
}

TEST(Run, TrajectoryInvariants) {
    const SystemConfig cfg = figure1_config();
    RunOptions opts;
    opts.samples_per_segment = 7;
    opts.check_physical = true;
    const Trajectory tr = run(cfg, Schedule::periodic_then_free(0.5, 4, 1.0), EngineKind::Sector, {}, opts);
    ASSERT_EQ(tr.rows.size(), 1U + 5U * 7U);
    for (std::size_t i = 1; i < tr.rows.size(); ++i) EXPECT_GT(tr.rows[i].t_ms, tr.rows[i - 1].t_ms);
    EXPECT_DOUBLE_EQ(tr.back().t_ms, 3.0);
    for (const auto& r : tr.rows) {
        EXPECT_GE(r.eps_S, -1e-9);
        EXPECT_LE(r.eps_S, 1.0 + 1e-9);
        EXPECT_GE(r.eps_I, -1e-9);
        EXPECT_LE(r.eps_I, 1.0 + 1e-9);
        EXPECT_DOUBLE_EQ(r.pol_S, 1.0 - 2.0 * r.eps_S);
    }
    EXPECT_NEAR(tr.rows.front().pol_ratio, 1.0, 1e-12);
}

TEST(Run, RatioFallsBackToBathPolarization) {
    SystemConfig cfg = figure2_config();
    const Trajectory tr = run(cfg, Schedule::free(1.0), EngineKind::Sector, {});
    EXPECT_NEAR(tr.rows.front().pol_ratio, 0.0, 1e-12);
    EXPECT_NEAR(tr.back().pol_ratio, tr.back().pol_S / polarization(cfg.eps_I0), 1e-15);
    cfg.eps_I0 = 0.5;
    EXPECT_EQ(polarization_reference(cfg), 0.0);
}

TEST(Run, SectorEngineRejectsOtherChannels) {
    const SystemConfig cfg = figure1_config();
    EXPECT_THROW(run(cfg, Schedule::periodic(1.0, 2), EngineKind::Sector, {ChannelKind::SOnly, {}}), InvalidArgument);
    EXPECT_THROW(run(cfg, Schedule::periodic(1.0, 2), EngineKind::Sector, {ChannelKind::Gradient, {}}), InvalidArgument);
    RunOptions opts;
    opts.samples_per_segment = 0;
    EXPECT_THROW(run(cfg, Schedule::free(1.0), EngineKind::Sector, {}, opts), InvalidArgument);
}

TEST(Run, EnginesAgreeForEveryCoupling) {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 1; n <= 4; ++n) {
        for (auto c : {Coupling::XX, Coupling::RW, Coupling::CR, Coupling::ISO}) {
            SystemConfig cfg = figure1_config();
            cfg.N = n;
            cfg.coupling = c;
            cfg.eps_S0 = u(gen);
            cfg.eps_I0 = u(gen);
            EXPECT_LE(compare_engines(cfg, Schedule::periodic_then_free(0.3 + u(gen), 5, 6.0), 8), 1e-10);
        }
    }
}

TEST(Run, IsoTrajectoryEqualsRotatingWave) {
    for (int n = 1; n <= 3; ++n) {
        SystemConfig cfg = figure1_config();
        cfg.N = n;
        cfg.coupling = Coupling::ISO;
        const Trajectory iso = run(cfg, Schedule::periodic_then_free(0.8, 6, 9.0), EngineKind::Full, {ChannelKind::SOnly, {}});
        cfg.coupling = Coupling::RW;
        const Trajectory rw = run(cfg, Schedule::periodic_then_free(0.8, 6, 9.0), EngineKind::Full, {ChannelKind::SOnly, {}});
        for (std::size_t i = 0; i < iso.rows.size(); ++i) EXPECT_NEAR(iso.rows[i].eps_S, rw.rows[i].eps_S, 1e-10);
    }
}

TEST(Run, Fig1HeatingAtShortIntervals) {
    const Trajectory tr = run(figure1_config(), Schedule::periodic(0.2, 20), EngineKind::Sector, {});
    EXPECT_LT(tr.back().pol_ratio, 1.0);
}

TEST(Run, DeterministicAcrossRepeats) {
    Channel ch{ChannelKind::Gradient, {}};
    ch.gradient.max_gradient = 300.0;
    ch.gradient.rng_seed = 42;
    SystemConfig cfg = figure1_config();
    cfg.N = 2;
    const Trajectory a = run(cfg, Schedule::periodic(0.7, 6), EngineKind::Full, ch);
    const Trajectory b = run(cfg, Schedule::periodic(0.7, 6), EngineKind::Full, ch);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) EXPECT_EQ(a.rows[i].eps_S, b.rows[i].eps_S);
}

TEST(Run, GradientChannelsStayPhysical) {
    SystemConfig cfg = figure1_config();
    cfg.N = 2;
    RunOptions opts;
    opts.check_physical = true;
    opts.samples_per_segment = 4;
    for (auto mode : {GradientMode::Random, GradientMode::Fixed}) {
        Channel ch{ChannelKind::Gradient, {}};
        ch.gradient.mode = mode;
        ch.gradient.max_gradient = 500.0;
        ch.gradient.slices = 64;
        EXPECT_NO_THROW(run(cfg, Schedule::periodic_then_free(0.9, 5, 5.0), EngineKind::Full, ch, opts));
    }
}

TEST(Run, StrongRandomGradientsApproachSOnlyChannel) {
    SystemConfig cfg = figure1_config();
    cfg.N = 1;  // one bath spin: S-only and product-basis projections coincide
    Channel ch{ChannelKind::Gradient, {}};
    ch.gradient.min_gradient = 400.0;
    ch.gradient.max_gradient = 800.0;
    ch.gradient.rng_seed = 3;
    const Trajectory g = run(cfg, Schedule::periodic(1.0, 8), EngineKind::Full, ch);
    const Trajectory s = run(cfg, Schedule::periodic(1.0, 8), EngineKind::Full, {ChannelKind::SOnly, {}});
    const double scale = std::abs(polarization(cfg.eps_I0));
    EXPECT_NEAR(g.back().pol_S, s.back().pol_S, 0.05 * scale);
}

TEST(Sweep, ZeroMeasurementsIsFlat) {
    const SystemConfig cfg = figure1_config();
    const auto pts = sweep_tau(cfg, 0, {0.1, 0.5, 1.0, 2.0}, EngineKind::Sector, {});
    for (const auto& p : pts) EXPECT_NEAR(p.eps_S, cfg.eps_S0, 1e-15);
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
    const SystemConfig cfg = figure1_config();
    const auto grid = linear_grid(0.1, 2.5, 13);
    const auto a = sweep_tau(cfg, 20, grid, EngineKind::Sector, {}, 1);
    const auto b = sweep_tau(cfg, 20, grid, EngineKind::Sector, {}, 4);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].tau_ms, grid[i]);
        EXPECT_EQ(a[i].eps_S, b[i].eps_S);
    }
}

TEST(Sweep, MatchesIndividualRuns) {
    const SystemConfig cfg = figure1_config();
    RunOptions opts;
    opts.samples_per_segment = 1;
    const auto pts = sweep_tau(cfg, 7, {0.3, 1.1}, EngineKind::Sector, {});
    for (const auto& p : pts)
        EXPECT_EQ(p.eps_S, run(cfg, Schedule::periodic(p.tau_ms, 7), EngineKind::Sector, {}, opts).back().eps_S);
}

TEST(Sweep, RejectsBadGrid) {
    const SystemConfig cfg = figure1_config();
    EXPECT_THROW(sweep_tau(cfg, 3, {}, EngineKind::Sector, {}), InvalidArgument);
    EXPECT_THROW(sweep_tau(cfg, 3, {0.0}, EngineKind::Sector, {}), InvalidArgument);
    EXPECT_THROW(sweep_tau(cfg, 3, {1.0}, EngineKind::Sector, {ChannelKind::SOnly, {}}), InvalidArgument);
}

TEST(Reheating, RotatingWaveControlIsFlat) {
    SystemConfig cfg = figure1_config();
    cfg.coupling = Coupling::RW;
    RunOptions opts;
    opts.samples_per_segment = 1;
    const ReheatingProbe probe = reheating_probe(cfg, 1.0, 40, EngineKind::Sector, {}, opts);
    const auto& rows = probe.trajectory.rows;
    ASSERT_EQ(static_cast<int>(rows.size()), probe.n_total + 1);
    const double plateau = rows[static_cast<std::size_t>(probe.n_qe)].pol_S;
    for (std::size_t i = static_cast<std::size_t>(probe.n_qe); i < rows.size(); ++i)
        EXPECT_NEAR(rows[i].pol_S, plateau, 1e-6 * std::abs(polarization(cfg.eps_S0)));
}

TEST(Reheating, CounterRotatingTermsDepolarize) {
    const SystemConfig cfg = figure1_config();
    RunOptions opts;
    opts.samples_per_segment = 1;
    const ReheatingProbe probe = reheating_probe(cfg, 1.0, 60, EngineKind::Sector, {}, opts);
    double peak = 0.0;
    for (const auto& r : probe.trajectory.rows) peak = std::max(peak, r.pol_ratio);
    EXPECT_LT(probe.trajectory.back().pol_ratio, 0.9 * peak);
}

TEST(Reheating, CounterRotatingOnlyDrivesQubitUp) {
    SystemConfig cfg = figure1_config();
    cfg.coupling = Coupling::CR;
    cfg.eps_S0 = 0.0;
    cfg.eps_I0 = 0.0;
    RunOptions opts;
    opts.samples_per_segment = 1;
    const Trajectory tr = run(cfg, Schedule::periodic(1.0, 400), EngineKind::Sector, {}, opts);
    EXPECT_GT(tr.back().eps_S, 0.1);
    EXPECT_NEAR(tr.back().eps_S, eps_quasi_equilibrium(cfg).cr, 1e-3);
}

TEST(Reheating, QuasiEquilibriumCount) {
    const SystemConfig cfg = figure1_config();
    const int n = quasi_equilibrium_count(cfg, 1.0);
    EXPECT_GT(n, 1);
    double worst = 0.0;
    detail::for_each_rw_block(cfg, [&](const SectorLabel&, int, const SectorSpectrum& spec) {
        const auto rec = block_recursion(spec, 1e-3, cfg.angular_factor());
        if (rec.f2 > 1e-14) worst = std::max(worst, std::abs(rec.f1));
    });
    EXPECT_LE(std::pow(worst, n), 1e-8);
    EXPECT_GT(std::pow(worst, n - 1), 1e-8);
    EXPECT_THROW(reheating_probe(cfg, 1.0, -1), InvalidArgument);
}

TEST(Calibration, PicksTwoPi) {
    const CalibrationResult r = calibrate_angular_convention(figure1_config());
    EXPECT_EQ(r.chosen, AngularConvention::TwoPi);
    ASSERT_EQ(r.entries.size(), 2U);
}
