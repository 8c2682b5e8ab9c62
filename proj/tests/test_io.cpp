#include "zeno/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace zeno;

namespace {

const char* kMinimal = R"({
  "N": 3,
  "J": "150 Hz",
  "omega_S": "420 Hz",
  "omega_I": "250 Hz",
  "eps_S0": 0.4995,
  "eps_I0": 0.498,
  "schedule": {"kind": "periodic", "tau": "1 ms", "n": 20}
})";

ValidationError expect_invalid(const std::string& text) {
    try {
        parse_runspec(text);
    } catch (const ValidationError& e) {
        return e;
    }
    ADD_FAILURE() << "document was accepted:\n" << text;
    return ValidationError(std::vector<FieldError>{});
}

std::string with_schedule(const std::string& schedule) {
    return R"({"N": 3, "J": "150 Hz", "omega_S": "420 Hz", "omega_I": "250 Hz", "eps_S0": 0.4, "eps_I0": 0.3,
               "schedule": )" + schedule + "}";
}

}  // namespace

TEST(ParseRunSpec, MinimalDocument) {
    const RunSpec spec = parse_runspec(kMinimal);
    EXPECT_EQ(spec.system.N, 3);
    EXPECT_EQ(spec.system.J, 150.0);
    EXPECT_EQ(spec.system.omega_S, 420.0);
    EXPECT_EQ(spec.system.omega_I, 250.0);
    EXPECT_EQ(spec.system.coupling, Coupling::XX);
    EXPECT_EQ(spec.system.angular, AngularConvention::TwoPi);
    EXPECT_EQ(spec.schedule.kind, ScheduleKind::Periodic);
    EXPECT_EQ(spec.schedule.tau_ms, 1.0);
    EXPECT_EQ(spec.schedule.n, 20);
    EXPECT_EQ(spec.channel.kind, ChannelKind::Ideal);
    EXPECT_EQ(spec.engine, EngineKind::Sector);
    EXPECT_EQ(spec.samples_per_segment, 64);
}

TEST(ParseRunSpec, UnitConversions) {
    const RunSpec spec = parse_runspec(R"({
      "N": 2, "J": "0.15 kHz", "omega_S": "3.5 kHz", "omega_I": "0.0026 MHz", "eps_S0": 0.5, "eps_I0": 0.4995,
      "schedule": {"kind": "periodic-then-free", "tau": "692 us", "n": 45, "t_stop": "0.04 s"},
      "channel": {"kind": "gradient", "gradient": {"mode": "fixed", "max": "300 mT/m", "min": "1 G/cm",
                  "sample_length": "5 mm", "tau_m": "100 μs", "gamma_S": "1.0666 kHz/G", "slices": 128}},
      "engine": "full", "seed": 18446744073709551615
    })");
    EXPECT_DOUBLE_EQ(spec.system.J, 150.0);
    EXPECT_DOUBLE_EQ(spec.system.omega_S, 3500.0);
    EXPECT_DOUBLE_EQ(spec.system.omega_I, 2600.0);
    EXPECT_DOUBLE_EQ(*spec.schedule.tau_ms, 0.692);
    EXPECT_DOUBLE_EQ(*spec.schedule.t_stop_ms, 40.0);
    EXPECT_EQ(spec.channel.gradient.mode, GradientMode::Fixed);
    EXPECT_DOUBLE_EQ(spec.channel.gradient.max_gradient, 30.0);
    EXPECT_DOUBLE_EQ(spec.channel.gradient.sample_length, 0.5);
    EXPECT_DOUBLE_EQ(spec.channel.gradient.tau_m, 100e-6);
    EXPECT_DOUBLE_EQ(spec.channel.gradient.gamma_S, 1066.6);
    EXPECT_EQ(spec.channel.gradient.slices, 128);
    EXPECT_EQ(spec.seed, 18446744073709551615ULL);
    EXPECT_EQ(spec.channel.gradient.rng_seed, spec.seed);
}

TEST(ParseRunSpec, NegativeTauNamesTheField) {
    const auto e = expect_invalid(with_schedule(R"({"kind": "periodic", "tau": "-1 ms", "n": 3})"));
    EXPECT_TRUE(e.mentions("schedule.tau")) << e.what();
}

TEST(ParseRunSpec, StopTimeAndGridAreExclusive) {
    const auto e = expect_invalid(
        with_schedule(R"({"kind": "sweep", "n": 20, "t_stop": "5 ms", "grid": {"from": "0.1 ms", "to": "2 ms", "points": 10}})"));
    EXPECT_TRUE(e.mentions("schedule.grid")) << e.what();
}

TEST(ParseRunSpec, CollectsEveryError) {
    const auto e = expect_invalid(R"({"N": 0, "J": 150, "omega_S": "420 Hz", "omega_I": "250 furlongs",
                                       "eps_S0": 1.5, "bogus": true, "schedule": {"kind": "free"}})");
    for (const char* field : {"N", "J", "omega_I", "eps_S0", "eps_I0", "bogus", "schedule.t_stop"})
        EXPECT_TRUE(e.mentions(field)) << field << " missing from:\n" << e.what();
}

TEST(ParseRunSpec, BareNumbersNeedUnits) {
    const auto e = expect_invalid(with_schedule(R"({"kind": "periodic", "tau": 1, "n": 3})"));
    EXPECT_TRUE(e.mentions("schedule.tau"));
}

TEST(ParseRunSpec, ScheduleKindRequirements) {
    EXPECT_TRUE(expect_invalid(with_schedule(R"({"kind": "periodic", "n": 3})")).mentions("schedule.tau"));
    EXPECT_TRUE(expect_invalid(with_schedule(R"({"kind": "sweep", "n": 3})")).mentions("schedule.grid"));
    EXPECT_TRUE(expect_invalid(with_schedule(R"({"kind": "reheat", "tau": "1 ms"})")).mentions("schedule.n_past_qe"));
    EXPECT_TRUE(expect_invalid(with_schedule(R"({"kind": "periodic-then-free", "tau": "1 ms", "n": 8, "t_stop": "5 ms"})"))
                    .mentions("schedule.t_stop"));
    EXPECT_TRUE(expect_invalid(with_schedule(R"({"kind": "warp"})")).mentions("schedule.kind"));
    EXPECT_NO_THROW(parse_runspec(with_schedule(R"({"kind": "reheat", "tau": "1 ms", "n_past_qe": 10})")));
}

TEST(ParseRunSpec, SectorEngineNeedsIdealChannel) {
    const std::string doc = R"({"N": 2, "J": "150 Hz", "omega_S": "420 Hz", "omega_I": "250 Hz", "eps_S0": 0.4,
                                "eps_I0": 0.3, "schedule": {"kind": "free", "t_stop": "1 ms"},
                                "channel": {"kind": "s_only"}, "engine": "sector"})";
    EXPECT_TRUE(expect_invalid(doc).mentions("engine"));
}

TEST(ParseRunSpec, SyntaxErrorsCarryPosition) {
    try {
        parse_runspec("{\n  \"N\": 3,\n  \"J\": ,\n}");
        FAIL() << "accepted malformed JSON";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3U);
        EXPECT_EQ(e.column(), 8U);
    }
}

TEST(ParseRunSpec, RoundTrip) {
    for (const std::string& doc :
         {std::string(kMinimal), with_schedule(R"({"kind": "sweep", "n": 20, "grid": {"from": "0.1 ms", "to": "2.9 ms", "points": 29}})"),
          std::string(R"({"N": 2, "J": "0.1 kHz", "omega_S": "0.3 kHz", "omega_I": "321.123456789 Hz", "eps_S0": 0.1,
             "eps_I0": 0.7, "coupling": "cr", "angular_convention": "hz_as_rad",
             "schedule": {"kind": "periodic-then-free", "tau": "0.3 ms", "n": 3, "t_stop": "4 ms"},
             "channel": {"kind": "gradient", "gradient": {"mode": "random", "max": "31.7 G/cm", "tau_m": "123 us"}},
             "engine": "full", "output": "x.csv", "seed": 77, "samples_per_segment": 9})")}) {
        const RunSpec a = parse_runspec(doc);
        const RunSpec b = parse_runspec(to_json(a));
        EXPECT_TRUE(a == b) << to_json(a);
        EXPECT_EQ(to_json(a), to_json(b));
    }
}

TEST(Csv, SingleRowHasHeaderAndOneLine) {
    Trajectory tr;
    tr.rows.push_back({0.0, 0.25, 0.5, 0.5, 1.0});
    EXPECT_EQ(format_csv(tr), "t_ms,eps_S,eps_I,pol_S,pol_ratio\n0,0.25,0.5,0.5,1\n");
}

TEST(Csv, TwelveSignificantDigits) {
    Trajectory tr;
    tr.rows.push_back({1.0 / 3.0, 0.1234567890123456, 2e-20, -0.5, 2.875});
    EXPECT_EQ(format_csv(tr), "t_ms,eps_S,eps_I,pol_S,pol_ratio\n0.333333333333,0.123456789012,2e-20,-0.5,2.875\n");
}

TEST(Csv, EmptyTrajectoryAndBadPath) {
    EXPECT_THROW(format_csv(Trajectory{}), InvalidArgument);
    Trajectory tr;
    tr.rows.push_back({});
    EXPECT_THROW(emit_csv(tr, "/nonexistent-dir/deeper/out.csv"), IoError);
}

TEST(Csv, WritesExactBytes) {
    Trajectory tr;
    tr.rows.push_back({0.0, 0.4, 0.3, 0.2, 1.0});
    tr.rows.push_back({0.5, 0.41, 0.29, 0.18, 0.9});
    const auto path = std::filesystem::temp_directory_path() / "zeno_csv_bytes.csv";
    emit_csv(tr, path.string());
    EXPECT_EQ(read_file(path.string()), format_csv(tr));
    std::filesystem::remove(path);
}

TEST(Execute, GoldenGradientRun) {
    const std::string dir = ZENO_TEST_DATA_DIR;
    const RunSpec spec = parse_runspec(read_file(dir + "/golden/gradient_random.json"));
    EXPECT_EQ(format_csv(execute(spec)), read_file(dir + "/golden/gradient_random.csv"));
}

TEST(Execute, ScheduleKinds) {
    RunSpec spec = parse_runspec(with_schedule(R"({"kind": "periodic-then-free", "tau": "1 ms", "n": 3, "t_stop": "5 ms"})"));
    spec.samples_per_segment = 2;
    const Trajectory tr = execute(spec);
    EXPECT_EQ(tr.rows.size(), 1U + 4U * 2U);
    EXPECT_DOUBLE_EQ(tr.back().t_ms, 5.0);

    spec = parse_runspec(with_schedule(R"({"kind": "sweep", "n": 5, "grid": {"from": "0.5 ms", "to": "1 ms", "points": 3}})"));
    const Trajectory sw = execute(spec, 2);
    ASSERT_EQ(sw.rows.size(), 3U);
    EXPECT_DOUBLE_EQ(sw.rows[1].t_ms, 0.75);
}
