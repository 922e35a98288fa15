#include "test_support.hpp"
#include "tlfabrikc/arc.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace tlf;

TEST(DiscToSegment, FlatState) {
    const auto [theta, phi] = disc_to_segment({{0, 0, 0}, {0, 0, 0}});
    EXPECT_EQ(theta, 0.0);
    EXPECT_EQ(phi, 0.0);
}

TEST(DiscToSegment, EightGroupsAtLimit) {
    const double d = 20.0 * kPi / 180.0;
    const auto [theta, phi] = disc_to_segment({std::vector<double>(8, d), std::vector<double>(8, 0.0)});
    EXPECT_NEAR(theta, 160.0 * kPi / 180.0, 1e-12);
    EXPECT_NEAR(theta / kPi, 0.89, 0.005);
    EXPECT_EQ(phi, 0.0);
}

TEST(DiscToSegment, BetaOnly) {
    const auto [theta, phi] = disc_to_segment({{0.0, 0.0}, {0.2, 0.3}});
    EXPECT_NEAR(theta, 0.5, 1e-15);
    EXPECT_NEAR(phi, kPi / 2, 1e-15);
}

TEST(DiscToSegment, AllQuadrantsAndPermutation) {
    const auto [t1, p1] = disc_to_segment({{-0.1, -0.2}, {-0.05, 0.01}});
    EXPECT_NEAR(p1, std::atan2(-0.04, -0.3) + kTwoPi, 1e-12);
    EXPECT_NEAR(t1, std::hypot(-0.04, -0.3), 1e-15);
    const auto [t2, p2] = disc_to_segment({{-0.2, -0.1}, {0.01, -0.05}});
    EXPECT_NEAR(t1, t2, 1e-15);
    EXPECT_NEAR(p1, p2, 1e-15);
}

TEST(DiscToSegment, Errors) {
    EXPECT_THROW(disc_to_segment({{}, {}}), ConfigError);
    EXPECT_THROW(disc_to_segment({{0.1}, {0.1, 0.2}}), ConfigError);
    EXPECT_THROW(disc_to_segment({{0.5}, {0.0}}), OutOfRangeError);
    const double d = 20.0 * kPi / 180.0;
    EXPECT_THROW(disc_to_segment({std::vector<double>(9, d), std::vector<double>(9, 0.0)}), OutOfRangeError);
}

TEST(SegmentTransform, Straight) {
    const Pose t = segment_transform({0.0, 1.3, 1.0});
    EXPECT_LT((t.position - Vec3(0, 0, 1)).norm(), 1e-15);
    EXPECT_LT((t.orientation - RotMat::Identity()).norm(), 1e-15);
}

TEST(SegmentTransform, QuarterCircle) {
    const Pose t = segment_transform({kPi / 2, 0.0, 1.0});
    EXPECT_LT((t.position - Vec3(2 / kPi, 0, 2 / kPi)).norm(), 1e-15);
    EXPECT_LT((t.z_axis() - Vec3::UnitX()).norm(), 1e-15);
}

TEST(SegmentTransform, ContinuityAtZero) {
    for (double phi : {0.0, 1.0, 4.0}) {
        const Pose a = segment_transform({1e-9, phi, 0.1});
        const Pose b = segment_transform({0.0, phi, 0.1});
        EXPECT_LT((a.position - b.position).cwiseAbs().maxCoeff(), 1e-8);
        EXPECT_LT((a.orientation - b.orientation).cwiseAbs().maxCoeff(), 1e-8);
        // Both sides of the Taylor switch match the stable closed form.
        for (double t : {0.99e-7, 1.01e-7}) {
            const double r = 0.1 / t;
            const double lateral = 2.0 * r * std::sin(t / 2) * std::sin(t / 2);
            const Vec3 expected(lateral * std::cos(phi), lateral * std::sin(phi), r * std::sin(t));
            EXPECT_LT((segment_transform({t, phi, 0.1}).position - expected).cwiseAbs().maxCoeff(), 1e-16);
        }
    }
}

TEST(SegmentTransform, MatchesClosedFormAndIntegration) {
    Rng rng(21);
    for (int i = 0; i < 100; ++i) {
        const SegmentArc seg{rng.uniform(0.0, 0.99 * kPi), rng.uniform(0.0, kTwoPi), rng.uniform(0.05, 0.3)};
        const Pose t = segment_transform(seg);
        const double c = std::cos(seg.theta), s = std::sin(seg.theta);
        const double r = seg.length / seg.theta;
        const Vec3 expected(r * std::cos(seg.phi) * (1 - c), r * std::sin(seg.phi) * (1 - c), r * s);
        EXPECT_LT((t.position - expected).norm(), 1e-14);
        EXPECT_LT((t.z_axis() - Vec3(std::cos(seg.phi) * s, std::sin(seg.phi) * s, c)).norm(), 1e-14);

        ArmShape one;
        one.connector_length = 0.0;
        one.segments = {seg};
        const Pose oracle = tlf::testing::integrate_arm(one);
        EXPECT_LT((t.position - oracle.position).norm(), 1e-8);
        EXPECT_LT((t.orientation - oracle.orientation).cwiseAbs().maxCoeff(), 1e-8);
    }
}

TEST(VirtualLink, Values) {
    EXPECT_DOUBLE_EQ(virtual_link_length(0.0, 1.0), 0.5);
    EXPECT_NEAR(virtual_link_length(kPi / 2, 1.0), 2 / kPi, 1e-15);
    EXPECT_NEAR(virtual_link_length(1e-8, 0.2), 0.1, 1e-15);
    EXPECT_NEAR(virtual_link_length(0.99e-7, 0.2), virtual_link_length(1.01e-7, 0.2), 1e-15);
}

TEST(ForwardKinematics, StraightStack) {
    ArmShape s;
    s.segments = {{0, 0, 0.1}, {0, 2, 0.12}, {0, 4, 0.08}};
    const Pose tip = forward_kinematics(s);
    EXPECT_LT((tip.position - Vec3(0, 0, 0.3 + 3 * kDefaultConnectorLength)).norm(), 1e-15);
    EXPECT_LT((tip.orientation - RotMat::Identity()).norm(), 1e-15);
}

TEST(ForwardKinematics, SingleSegmentComposesWithBase) {
    ArmShape s;
    s.connector_length = 0.0;
    s.base_pose = {Vec3(0.1, -0.2, 0.3), rotate_about_axis(Vec3(1, 1, 0), 0.6)};
    s.segments = {{0.8, 2.2, 0.15}};
    const Pose expected = s.base_pose * segment_transform(s.segments[0]);
    const Pose tip = forward_kinematics(s);
    EXPECT_LT((tip.position - expected.position).norm(), 1e-15);
    EXPECT_LT((tip.orientation - expected.orientation).norm(), 1e-14);
}

TEST(ForwardKinematics, IntegrationOracleThreeSegments) {
    Rng rng(22);
    for (int i = 0; i < 50; ++i) {
        ArmShape s = tlf::testing::random_shape(rng, 3, 0.89 * kPi);
        s.base_extension = rng.uniform(-0.05, 0.05);
        s.base_pose = {Vec3(rng.uniform(-1, 1), 0.2, 0.1), rotate_about_axis(Vec3(0.2, 1, 0.4), rng.uniform(0, 3))};
        const Pose tip = forward_kinematics(s);
        const Pose oracle = tlf::testing::integrate_arm(s);
        EXPECT_LT((tip.position - oracle.position).norm(), 1e-8);
        EXPECT_LT((tip.orientation - oracle.orientation).cwiseAbs().maxCoeff(), 1e-8);
    }
}

TEST(ForwardKinematics, BoundaryFrames) {
    Rng rng(23);
    const ArmShape s = tlf::testing::random_shape(rng, 4, 2.0);
    const auto frames = boundary_frames(s);
    ASSERT_EQ(frames.size(), 2 * s.size() + 1);
    EXPECT_LT((frames.front().position - root_frame(s).position).norm(), 1e-15);
    for (std::size_t j = 0; j < s.size(); ++j) {
        const Pose tip = frames[2 * j] * segment_transform(s.segments[j]);
        EXPECT_LT((tip.position - frames[2 * j + 1].position).norm(), 1e-14);
        const Vec3 next = frames[2 * j + 1].position + frames[2 * j + 1].z_axis() * s.connector_length;
        EXPECT_LT((next - frames[2 * j + 2].position).norm(), 1e-14);
    }
    const Pose tip = forward_kinematics(s);
    EXPECT_LT((tip.position - frames.back().position).norm(), 1e-15);
    EXPECT_LT((tip.z_axis() - frames[2 * s.size() - 1].z_axis()).norm(), 1e-10);
}

TEST(ArcPoint, EndsAndRadius) {
    const SegmentArc seg{1.2, 0.7, 0.2};
    EXPECT_LT(arc_point(seg, 0.0).norm(), 1e-15);
    EXPECT_LT((arc_point(seg, 0.2) - segment_transform(seg).position).norm(), 1e-15);
    const double r = seg.length / seg.theta;
    const Vec3 center = r * Vec3(std::cos(seg.phi), std::sin(seg.phi), 0);
    for (double s : {0.03, 0.11, 0.17}) EXPECT_NEAR((arc_point(seg, s) - center).norm(), r, 1e-14);
}

TEST(Tendons, Straight) {
    ArmShape s;
    s.segments.assign(3, SegmentArc{0, 0, 0.1});
    for (const auto& row : tendon_deltas(s)) {
        for (double d : row) EXPECT_EQ(d, 0.0);
    }
}

TEST(Tendons, SingleTerm) {
    ArmShape s;
    s.segments = {{0.2, 0.0, 0.1}};
    const auto d = tendon_deltas(s, 0.0075);
    EXPECT_NEAR(d[0][0], 1.5e-3, 1e-15);
    EXPECT_NEAR(d[0][1], -0.75e-3, 1e-15);
    EXPECT_NEAR(d[0][2], -0.75e-3, 1e-15);
}

TEST(Tendons, SumZeroAndLowerTriangular) {
    Rng rng(24);
    for (int i = 0; i < 200; ++i) {
        ArmShape s = tlf::testing::random_shape(rng, 4, 2.5);
        const auto d = tendon_deltas(s);
        for (const auto& row : d) EXPECT_NEAR(row[0] + row[1] + row[2], 0.0, 1e-12);
        ArmShape changed = s;
        changed.segments[3].theta = 0.3;
        changed.segments[3].phi = 1.0;
        const auto d2 = tendon_deltas(changed);
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(d[j], d2[j]);
        // Direct evaluation of the coupled sum for the last row.
        for (int m = 0; m < 3; ++m) {
            double expected = 0.0;
            for (int jj = 0; jj < 4; ++jj) {
                expected += kDefaultHoleRadius * s.segments[jj].theta *
                            std::cos(s.segments[jj].phi + 40.0 * kPi / 180.0 * 3 + 2.0 * kPi * m / 3.0);
            }
            EXPECT_NEAR(d[3][m], expected, 1e-15);
        }
    }
}

TEST(Tendons, StrokeFeasible) {
    EXPECT_TRUE(stroke_feasible(TendonDeltas{{0, 0, 0}}, 0.03));
    EXPECT_FALSE(stroke_feasible(TendonDeltas{{0.031, -0.02, -0.011}}, 0.03));
    EXPECT_FALSE(stroke_feasible(TendonDeltas{{0, 0, 0}, {-0.031, 0.02, 0.011}}, 0.03));
    EXPECT_TRUE(stroke_feasible(TendonDeltas{{0.03, -0.015, -0.015}}, 0.03));
}

TEST(ArmShapeTest, NormalizedAndLength) {
    const SegmentArc a = SegmentArc{0.0, 5.0, 0.1}.normalized();
    EXPECT_EQ(a.phi, 0.0);
    const SegmentArc b = SegmentArc{0.2, -1.0, 0.1}.normalized();
    EXPECT_NEAR(b.phi, kTwoPi - 1.0, 1e-15);
    ArmShape s;
    s.segments.assign(3, SegmentArc{0.4, 0.0, 0.1});
    EXPECT_NEAR(s.arm_length(), 0.3 + 3 * kDefaultConnectorLength, 1e-15);
}
