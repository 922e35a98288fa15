#include "test_support.hpp"
#include "tlfabrikc/fabrikc.hpp"

#include <gtest/gtest.h>

using namespace tlf;

TEST(UpdateSegment, CollinearIsStraight) {
    const auto u = update_segment(Vec3(0, 0, 1), Vec3::UnitZ(), Vec3(0, 0, 0.2), 0.4, 0.2);
    EXPECT_NEAR(u.theta, 0.0, 1e-15);
    EXPECT_NEAR(u.link_length, 0.2, 1e-15);
    EXPECT_LT((u.joint - Vec3(0, 0, 0.8)).norm(), 1e-15);
}

TEST(UpdateSegment, RightAngle) {
    // vj* = (0,0,1) - z·0.5 = (0,0,0.5); prev joint lies along -x from it.
    const auto u = update_segment(Vec3(0, 0, 1), Vec3::UnitZ(), Vec3(-1, 0, 0.5), 1.0, 0.5);
    EXPECT_NEAR(u.theta, kPi / 2, 1e-15);
    EXPECT_NEAR(u.link_length, 2 / kPi * std::tan(kPi / 4), 1e-15);
    EXPECT_LT((u.joint - Vec3(0, 0, 1 - 2 / kPi)).norm(), 1e-15);
}

TEST(UpdateSegment, DegenerateGivesStraight) {
    const auto u = update_segment(Vec3(0, 0, 1), Vec3::UnitZ(), Vec3(0, 0, 0.75), 0.5, 0.25);
    EXPECT_EQ(u.theta, 0.0);
    EXPECT_LT((u.dir - Vec3::UnitZ()).norm(), 1e-15);
}

TEST(UpdateSegment, FixedPointIteration) {
    Rng rng(41);
    for (int i = 0; i < 1000; ++i) {
        const double len = rng.uniform(0.05, 0.2);
        const Vec3 dir = tlf::testing::random_unit(rng);
        const Vec3 node(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
        // Previous joint somewhere behind the node, at most a right angle off the axis.
        Vec3 off = tlf::testing::random_unit(rng);
        off -= off.dot(dir) * dir;
        const Vec3 prev = node - dir * rng.uniform(0.8, 2.0) * len + off.normalized() * rng.uniform(0.0, 0.8) * len;
        double link = len / 2;
        int k = 0;
        double change = 1.0;
        while (k < 50 && change >= 1e-12) {
            const auto u = update_segment(node, dir, prev, len, link);
            change = std::abs(u.link_length - link);
            link = u.link_length;
            ++k;
        }
        EXPECT_LT(change, 1e-12) << "case " << i;
        EXPECT_LE(k, 50);
    }
}

TEST(UpdateSegment, ReproducesExistingSegment) {
    Rng rng(42);
    for (int i = 0; i < 200; ++i) {
        ArmShape s = tlf::testing::random_shape(rng, 2, 2.5);
        const LinkChain c = arc_to_link(s);
        const auto& seg = c.segments[1];
        // The joint of a consistent segment is a fixed point when the neighbour lies on the
        // base link line.
        const Vec3 prev = seg.joint - seg.base_dir * 0.03;
        const auto u = update_segment(seg.tip_node, seg.tip_dir, prev, seg.arc_length, seg.link_length);
        EXPECT_NEAR(u.theta, s.segments[1].theta, 1e-9);
        EXPECT_LT((u.joint - seg.joint).norm(), 1e-9);
    }
}

TEST(ForwardReach, AlreadyAtTargetUnchanged) {
    Rng rng(43);
    for (int i = 0; i < 100; ++i) {
        const ArmShape s = tlf::testing::random_shape(rng, 3, 2.0);
        const LinkChain c = arc_to_link(s);
        const LinkChain f = forward_reach(c, c.tip_pose());
        for (std::size_t j = 0; j < c.size(); ++j) {
            EXPECT_LT((f.segments[j].joint - c.segments[j].joint).norm(), 1e-12);
            EXPECT_LT((f.segments[j].base_node - c.segments[j].base_node).norm(), 1e-12);
        }
    }
}

TEST(ForwardReach, TipPinnedToTarget) {
    Rng rng(44);
    for (int i = 0; i < 1000; ++i) {
        const LinkChain c = arc_to_link(tlf::testing::random_shape(rng, 3, 0.5 * kPi));
        const Pose target = forward_kinematics(tlf::testing::random_shape(rng, 3, 0.5 * kPi));
        const LinkChain f = forward_reach(c, target);
        EXPECT_LT((f.tip_position() - target.position).norm(), 1e-12);
        EXPECT_LT((f.tip_direction() - target.z_axis()).norm(), 1e-12);
        EXPECT_LT(f.consistency_error(), 1e-9);
        for (std::size_t j = 0; j < f.size(); ++j) {
            EXPECT_EQ(f.segments[j].arc_length, c.segments[j].arc_length);
            EXPECT_GE(f.segments[j].theta(), 0.0);
            EXPECT_LT(f.segments[j].theta(), kPi);
        }
    }
}

TEST(BackwardReach, AlreadyRootedUnchanged) {
    Rng rng(45);
    for (int i = 0; i < 100; ++i) {
        const LinkChain c = arc_to_link(tlf::testing::random_shape(rng, 3, 2.0));
        const LinkChain b = backward_reach(c, c.root);
        for (std::size_t j = 0; j < c.size(); ++j) {
            EXPECT_LT((b.segments[j].joint - c.segments[j].joint).norm(), 1e-12);
            EXPECT_LT((b.segments[j].tip_node - c.segments[j].tip_node).norm(), 1e-12);
        }
    }
}

TEST(BackwardReach, RestoresRootAndTipDirection) {
    Rng rng(46);
    for (int i = 0; i < 500; ++i) {
        const ArmShape s = tlf::testing::random_shape(rng, 3, 0.5 * kPi);
        const LinkChain c = arc_to_link(s);
        const Pose target = forward_kinematics(tlf::testing::random_shape(rng, 3, 0.5 * kPi));
        const LinkChain f = forward_reach(c, target);
        const LinkChain b = backward_reach(f, c.root);
        EXPECT_EQ((b.segments[0].base_node - c.root.position).norm(), 0.0);
        EXPECT_LT((b.segments[0].base_dir - Vec3::UnitZ()).norm(), 1e-15);
        EXPECT_LT((b.tip_direction() - target.z_axis()).norm(), 1e-12);
        EXPECT_LT(b.consistency_error(), 1e-9);
    }
}

TEST(Sweeps, PairReducesErrorMostly) {
    Rng rng(47);
    int improved = 0;
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
        const LinkChain c = arc_to_link(tlf::testing::random_shape(rng, 3, 0.5 * kPi));
        const Pose target = forward_kinematics(tlf::testing::random_shape(rng, 3, 0.5 * kPi));
        const double before = (c.tip_position() - target.position).norm();
        SweepOptions opts;
        opts.base_direction = Vec3::UnitZ();
        const LinkChain b = backward_reach(forward_reach(c, target, opts), c.root, std::nullopt, opts);
        if ((b.tip_position() - target.position).norm() < before) ++improved;
    }
    EXPECT_GE(improved, 950);
}

TEST(Sweeps, BendLimitRespected) {
    Rng rng(48);
    SweepOptions opts;
    opts.theta_max = 0.6;
    for (int i = 0; i < 300; ++i) {
        const LinkChain c = arc_to_link(tlf::testing::random_shape(rng, 3, 0.6));
        const Pose target = forward_kinematics(tlf::testing::random_shape(rng, 3, 2.5));
        const LinkChain f = forward_reach(c, target, opts);
        for (std::size_t j = 1; j < f.size(); ++j) EXPECT_LE(f.segments[j].theta(), 0.6 + 1e-9);
    }
}

TEST(Sweeps, AdjusterSeesEverySegment) {
    const LinkChain c = arc_to_link(ArmShape{{{0.3, 0, 0.1}, {0.4, 1, 0.1}, {0.2, 2, 0.1}}});
    std::vector<std::size_t> seen;
    SweepOptions opts;
    opts.adjuster = [&](const JointQuery& q, const Vec3& n) {
        seen.push_back(q.segment);
        EXPECT_TRUE(q.forward);
        return n;
    };
    forward_reach(c, c.tip_pose(), opts);
    EXPECT_EQ(seen, (std::vector<std::size_t>{2, 1, 0}));
}
