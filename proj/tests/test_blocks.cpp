#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "papsim/blocks.hpp"
#include "test_support.hpp"

using namespace papsim;
using namespace papsim::testing;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected papsim::Error";
    return ErrorCode::InvalidSpec;
}

Reaction desired_reaction(double x) {
    return {"desired", {{kNB, -1}, {kH2, -2}, {kPAP, 1}, {kW, 1}}, kNB, x};
}

Reaction undesired_reaction(double x) {
    return {"undesired", {{kNB, -1}, {kH2, -3}, {kAN, 1}, {kW, 2}}, kNB, x};
}

ReactorSpec pap_reactor(double x1, double x2) {
    return {{desired_reaction(x1), undesired_reaction(x2)}, {85.0, 4.0, Phase::Mixed}};
}

/// Streams 7 and 8 combined: the reactor feed.
Stream reactor_feed() {
    Stream s8 = table_stream("6"); // same flows as stream 8, unrounded hydrogen
    s8.temperature = 85.0;
    return mix({table_stream("7"), s8}, registry());
}

} // namespace

// ---- mix --------------------------------------------------------------------

TEST(Mix, HydrogenMakeupWithRecycle) {
    const Stream out = mix({table_stream("2"), table_stream("15")}, registry());
    EXPECT_NEAR(out.total_flow(), 169.933, 0.002); // table rows are rounded
    EXPECT_NEAR(out.flow(kH2), 166.411, 1e-9);
    EXPECT_NEAR(out.temperature, 27.725, 0.2);
    EXPECT_EQ(out.pressure, 1.0);
    EXPECT_EQ(out.phase, Phase::Vapor);
}

TEST(Mix, NitrobenzeneFeedWithRecycle) {
    const Stream out = mix({table_stream("3"), table_stream("11")}, registry());
    EXPECT_NEAR(out.flow(kNB), 54.082, 1e-9);
    EXPECT_NEAR(out.total_flow(), 55.738, 0.002);
    EXPECT_EQ(out.pressure, 4.0);
}

TEST(Mix, SingleInletIsIdentity) {
    const Stream s = table_stream("9");
    EXPECT_EQ(mix({s}, registry()), s);
}

TEST(Mix, EmptyInletListThrows) {
    EXPECT_EQ(code_of([] { (void)mix(std::span<const Stream>{}, registry()); }), ErrorCode::EmptyInletList);
}

TEST(Mix, DifferentPhasesGiveMixed) {
    const Stream out = mix({table_stream("1"), table_stream("2")}, registry());
    EXPECT_EQ(out.phase, Phase::Mixed);
}

// ---- split_stream -----------------------------------------------------------

TEST(SplitStream, HydrogenPurge) {
    const auto r = split_stream(table_stream("13"), 0.8);
    EXPECT_NEAR(r.kept.total_flow(), 76.933, 0.01);
    EXPECT_NEAR(r.rejected.total_flow(), 19.23, 0.01);
    EXPECT_EQ(r.kept.temperature, 25.0);
    EXPECT_EQ(r.rejected.phase, Phase::Vapor);
}

TEST(SplitStream, NitrobenzenePurge) {
    const auto r = split_stream(table_stream("22"), 0.9);
    EXPECT_NEAR(r.kept.total_flow(), 20.738, 0.001);
    EXPECT_NEAR(r.rejected.total_flow(), 2.304, 0.001);
}

TEST(SplitStream, PhiOneRejectsNothing) {
    const auto r = split_stream(table_stream("22"), 1.0);
    for (const auto& [name, n] : r.rejected.flows) EXPECT_EQ(n, 0.0) << name;
    EXPECT_EQ(r.kept.flows, table_stream("22").flows);
}

TEST(SplitStream, PhiOutOfRange) {
    EXPECT_EQ(code_of([] { (void)split_stream(table_stream("22"), 1.5); }), ErrorCode::PhiOutOfRange);
    EXPECT_EQ(code_of([] { (void)split_stream(table_stream("22"), -0.1); }), ErrorCode::PhiOutOfRange);
}

// ---- split_components -------------------------------------------------------

TEST(SplitComponents, FlashDrum) {
    const FlowMap frac{{kH2, 0.9999}, {kW, 0.09586}, {kNB, 3.7e-4}, {kAN, 1.24e-3}, {kPAP, 0.0}};
    const auto r = split_components(table_stream("9"), frac, {25, 1, Phase::Vapor}, {25, 1, Phase::Liquid});
    EXPECT_NEAR(r.top.flow(kH2), 91.76, 0.01 * 91.76);
    EXPECT_NEAR(r.top.flow(kW), 4.380, 0.01 * 4.380);
    EXPECT_NEAR(r.bottom.flow(kPAP), 22.815, 0.01 * 22.815);
    EXPECT_NEAR(r.bottom.flow(kNB), 21.627, 0.01 * 21.627);
    EXPECT_NEAR(r.bottom.flow(kW), 41.313, 0.01 * 41.313);
    EXPECT_EQ(r.top.phase, Phase::Vapor);
    EXPECT_EQ(r.bottom.temperature, 25.0);
}

TEST(SplitComponents, FirstColumnBottoms) {
    const FlowMap frac{{kNB, 0.99931}, {kH2, 1.0}, {kPAP, 4.73e-3}, {kW, 1.0}, {kAN, 0.99991}};
    const auto r = split_components(table_stream("16"), frac, {176.91, 1, Phase::Vapor},
                                    {283.48, 1, Phase::Liquid});
    EXPECT_NEAR(r.bottom.flow(kPAP), 22.707, 0.001);
    EXPECT_NEAR(r.bottom.flow(kNB), 0.015, 0.001);
    EXPECT_GT(r.bottom.flow(kPAP) / r.bottom.total_flow(), 0.999);
}

TEST(SplitComponents, AllToTop) {
    const Stream in = table_stream("9");
    const FlowMap frac{{kNB, 1}, {kH2, 1}, {kPAP, 1}, {kW, 1}, {kAN, 1}};
    const auto r = split_components(in, frac, in.state(), in.state());
    EXPECT_EQ(r.top, in);
    EXPECT_EQ(r.bottom.total_flow(), 0.0);
}

TEST(SplitComponents, MissingFractionsGoToBottom) {
    const Stream in = table_stream("9");
    const auto r = split_components(in, {{kH2, 1.0}}, in.state(), in.state());
    EXPECT_EQ(r.top.total_flow(), in.flow(kH2));
    EXPECT_EQ(r.bottom.flow(kNB), in.flow(kNB));
}

TEST(SplitComponents, FractionOutOfRange) {
    EXPECT_EQ(code_of([] {
                  (void)split_components(table_stream("9"), {{kH2, 1.2}}, {}, {});
              }),
              ErrorCode::FractionOutOfRange);
}

// ---- conversion_split / react ----------------------------------------------

TEST(ConversionSplit, ReferenceOperatingPoint) {
    const auto s = conversion_split(0.60, 0.70);
    EXPECT_EQ(s.desired, 0.42);
    EXPECT_EQ(s.undesired, 0.18);
}

TEST(ConversionSplit, ZeroConversion) {
    const auto s = conversion_split(0.0, 0.5);
    EXPECT_EQ(s.desired, 0.0);
    EXPECT_EQ(s.undesired, 0.0);
}

TEST(ConversionSplit, LaboratoryOptimum) {
    const auto s = conversion_split(0.61, 0.778);
    EXPECT_NEAR(s.desired, 0.47458, 1e-12);
    EXPECT_NEAR(s.undesired, 0.13542, 1e-12);
    EXPECT_EQ(s.desired + s.undesired, 0.61);
    // Extent form: alpha / (alpha + beta) recovers the selectivity.
    EXPECT_NEAR(s.desired / (s.desired + s.undesired), 0.778, 1e-12);
}

TEST(React, ReproducesReactorOutlet) {
    const Stream out = react(reactor_feed(), pap_reactor(0.42, 0.18), registry());
    const Stream s9 = table_stream("9");
    for (const char* c : table_components()) {
        EXPECT_NEAR(out.flow(c), s9.flow(c), 0.15) << c;
    }
    EXPECT_EQ(out.temperature, 85.0);
    EXPECT_EQ(out.pressure, 4.0);
    EXPECT_EQ(out.phase, Phase::Mixed);

    const double m_in = stream_mass_flow(reactor_feed(), registry());
    EXPECT_NEAR(stream_mass_flow(out, registry()), m_in, 1e-6 * m_in);
}

TEST(React, ExtentsFollowConversions) {
    const Stream feed = reactor_feed();
    const Stream out = react(feed, pap_reactor(0.42, 0.18), registry());
    const double fa0 = feed.flow(kNB);
    EXPECT_NEAR(out.flow(kNB), fa0 * 0.40, 1e-9);
    EXPECT_NEAR(out.flow(kPAP) - feed.flow(kPAP), 0.42 * fa0, 1e-9);
    EXPECT_NEAR(out.flow(kAN) - feed.flow(kAN), 0.18 * fa0, 1e-9);
    EXPECT_NEAR(feed.flow(kH2) - out.flow(kH2), (2 * 0.42 + 3 * 0.18) * fa0, 1e-9);
}

TEST(React, ZeroConversionResetsStateOnly) {
    Stream feed = reactor_feed();
    feed.temperature = 40.0;
    const Stream out = react(feed, pap_reactor(0.0, 0.0), registry());
    EXPECT_EQ(out.flows, feed.flows);
    EXPECT_EQ(out.temperature, 85.0);
}

TEST(React, HydrogenStarvation) {
    const Stream feed{{{kNB, 10.0}, {kH2, 5.0}}, 85.0, 4.0, Phase::Mixed};
    EXPECT_EQ(code_of([&] { (void)react(feed, pap_reactor(0.42, 0.18), registry()); }),
              ErrorCode::NegativeFlow);
}

TEST(Reaction, ChecksKeyReactantAndMassBalance) {
    EXPECT_NO_THROW(desired_reaction(0.42).check(registry()));
    EXPECT_NO_THROW(undesired_reaction(0.18).check(registry()));

    Reaction wrong_key = desired_reaction(0.4);
    wrong_key.key_reactant = kPAP;
    EXPECT_EQ(code_of([&] { wrong_key.check(registry()); }), ErrorCode::InvalidReaction);

    Reaction unbalanced = desired_reaction(0.4);
    unbalanced.stoich[kW] = 2;
    EXPECT_EQ(code_of([&] { unbalanced.check(registry()); }), ErrorCode::InvalidReaction);

    EXPECT_EQ(code_of([&] { pap_reactor(0.7, 0.4).check(registry()); }), ErrorCode::InvalidReaction);
}

TEST(Reaction, ReactionsConserveMassExactlyWithRegistryMasses) {
    for (const auto& r : {desired_reaction(1), undesired_reaction(1)}) {
        double net = 0.0;
        for (const auto& [c, nu] : r.stoich) net += nu * registry().get(c).molar_mass;
        EXPECT_NEAR(net, 0.0, 1e-9) << r.name;
    }
}

// ---- compress / pump / set_temperature -------------------------------------

TEST(Compress, HydrogenCompressor) {
    const auto r = compress(table_stream("5"), {4.0, 1.4, 0.66}, registry());
    EXPECT_NEAR(r.outlet.temperature, 249.3, 0.1);
    EXPECT_NEAR(r.outlet.temperature, 246.77, 5.0);
    EXPECT_NEAR(r.power_kw, 303.04, 0.05 * 303.04);
    EXPECT_EQ(r.outlet.pressure, 4.0);
    EXPECT_EQ(r.outlet.flows, table_stream("5").flows);
}

TEST(Compress, IdealDiatomicOracle) {
    const Stream s{{{kH2, 1.0}}, units::to_celsius(300.0), 1.0, Phase::Vapor};
    const auto r = compress(s, {2.0, 1.4, 1.0}, registry());
    const double t2 = 300.0 * std::pow(2.0, 0.4 / 1.4);
    const double kw = 6.85 * (t2 - 300.0) * 1000.0 / 3600.0 * 4.184 / 1000.0;
    EXPECT_NEAR(units::to_kelvin(r.outlet.temperature), t2, 1e-9);
    EXPECT_NEAR(units::to_kelvin(r.outlet.temperature), 365.7, 0.05);
    EXPECT_NEAR(r.power_kw, kw, 1e-12);
    EXPECT_NEAR(r.power_kw, 0.523, 0.001);
}

TEST(Compress, SamePressureIsIdentity) {
    const Stream s = table_stream("5");
    const auto r = compress(s, {1.0, 1.4, 0.66}, registry());
    EXPECT_EQ(r.outlet, s);
    EXPECT_EQ(r.power_kw, 0.0);
}

TEST(Compress, PressureDecrease) {
    EXPECT_EQ(code_of([] { (void)compress(table_stream("6"), {1.0, 1.4, 0.66}, registry()); }),
              ErrorCode::PressureDecrease);
}

TEST(Pump, IsothermalPressureRaise) {
    const Stream s3 = pump(table_stream("1"), 4.0);
    EXPECT_EQ(s3.flows, table_stream("1").flows);
    EXPECT_EQ(s3.pressure, 4.0);
    EXPECT_NEAR(s3.temperature, 25.100, 0.2);

    const Stream s11 = pump(table_stream("10"), 4.0);
    EXPECT_NEAR(s11.temperature, 85.115, 0.2);
}

TEST(Pump, SamePressureIsIdentity) {
    EXPECT_EQ(pump(table_stream("10"), 1.0), table_stream("10"));
}

TEST(Pump, PressureDecrease) {
    EXPECT_EQ(code_of([] { (void)pump(table_stream("11"), 1.0); }), ErrorCode::PressureDecrease);
}

TEST(SetTemperature, CoolerAfterCompressor) {
    const auto r = set_temperature(table_stream("6"), {85.0, 4.0, Phase::Vapor}, registry());
    EXPECT_LT(r.duty, 0.0);
    EXPECT_NEAR(r.duty, -53583.8, 0.15 * 53583.8);
    EXPECT_EQ(r.outlet.temperature, 85.0);
    EXPECT_EQ(r.outlet.flows, table_stream("6").flows);
}

TEST(SetTemperature, NoChangeNoDuty) {
    const Stream s = table_stream("7");
    EXPECT_EQ(set_temperature(s, s.state(), registry()).duty, 0.0);
}

TEST(SetTemperature, FeedHeaterForFirstColumnHeats) {
    Stream s12 = table_stream("12");
    s12.temperature = 85.0;
    const auto r = set_temperature(s12, {120.0, 1.0, Phase::Mixed}, registry());
    EXPECT_GT(r.duty, 0.0);
    EXPECT_NEAR(r.duty, sensible_duty(s12, 120.0, registry()), 1e-12);
}

// ---- properties --------------------------------------------------------------

class BlockProperty : public ::testing::Test {
protected:
    std::mt19937 rng{4242};

    Stream random_stream() {
        std::uniform_real_distribution<double> flow(0.0, 200.0);
        std::uniform_real_distribution<double> temp(0.0, 250.0);
        Stream s;
        for (const auto& c : registry().components()) s.flows[c.name] = flow(rng);
        s.temperature = temp(rng);
        s.pressure = 1.0;
        return s;
    }

    double mass(const Stream& s) { return stream_mass_flow(s, registry()); }
};

TEST_F(BlockProperty, SplitThenMixIsExact) {
    std::uniform_real_distribution<double> phi(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const Stream s = random_stream();
        const auto r = split_stream(s, phi(rng));
        const Stream back = mix({r.kept, r.rejected}, registry());
        for (const auto& [name, n] : s.flows) EXPECT_EQ(back.flow(name), n) << name;
    }
}

TEST_F(BlockProperty, SeparatorConservesEachComponentExactly) {
    std::uniform_real_distribution<double> f(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const Stream s = random_stream();
        FlowMap frac;
        for (const auto& c : registry().components()) frac[c.name] = f(rng);
        const auto r = split_components(s, frac, s.state(), s.state());
        for (const auto& [name, n] : s.flows) {
            EXPECT_EQ(r.top.flow(name) + r.bottom.flow(name), n) << name;
            EXPECT_GE(r.bottom.flow(name), 0.0);
        }
    }
}

TEST_F(BlockProperty, EveryBlockConservesMass) {
    std::uniform_real_distribution<double> x(0.0, 0.5);
    for (int i = 0; i < 300; ++i) {
        const Stream a = random_stream();
        const Stream b = random_stream();
        const double m = mass(a);

        EXPECT_NEAR(mass(mix({a, b}, registry())), m + mass(b), 1e-6 * (m + mass(b)));
        const auto sp = split_stream(a, x(rng));
        EXPECT_NEAR(mass(sp.kept) + mass(sp.rejected), m, 1e-6 * m);
        EXPECT_NEAR(mass(pump(a, 3.0)), m, 1e-6 * m);
        EXPECT_NEAR(mass(compress(a, {3.0, 1.4, 0.7}, registry()).outlet), m, 1e-6 * m);
        EXPECT_NEAR(mass(set_temperature(a, {50, 1, Phase::Liquid}, registry()).outlet), m, 1e-6 * m);

        // Hydrogen-rich feed so the reactor never starves.
        Stream feed = a;
        feed.flows[kH2] = 3.0 * feed.flow(kNB) + 1.0;
        const Stream out = react(feed, pap_reactor(x(rng), x(rng)), registry());
        EXPECT_NEAR(mass(out), mass(feed), 1e-6 * mass(feed));
        for (const auto& [name, n] : out.flows) EXPECT_GE(n, 0.0) << name;
    }
}

TEST_F(BlockProperty, ZeroConversionReactorIsIdentityOnFlows) {
    for (int i = 0; i < 100; ++i) {
        const Stream s = random_stream();
        EXPECT_EQ(react(s, pap_reactor(0.0, 0.0), registry()).flows, s.flows);
    }
}
