#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "lowply/domination.hpp"
#include "lowply/layout.hpp"
#include "lowply/ply.hpp"

using namespace lowply;

namespace {

// root 0, vertices along +x; edges top-down are f3=(0,1), f2=(1,2), f1=(2,3), f0=(3,4)
struct ReferencePath {
  RootedTree tree = path_tree(5);
  Drawing drawing = drawing_for_tree(tree, {{0, 0}, {1, 0}, {5, 0}, {11, 0}, {39, 0}});
};

const Edge f0{3, 4}, f1{2, 3}, f2{1, 2}, f3{0, 1};

Drawing path_only(const std::vector<Point>& pts) {
  Drawing d;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    d.ids.push_back(static_cast<VertexId>(i));
    d.positions.push_back(pts[i]);
    if (i > 0) d.edges.emplace_back(static_cast<int>(i - 1), static_cast<int>(i));
  }
  return d;
}

Drawing random_drawing(const RootedTree& t, std::mt19937_64& rng) {
  // edge lengths spread over several powers of three
  std::uniform_real_distribution<double> angle(0.0, kTwoPi), expo(0.0, 6.0);
  std::vector<Point> pos(t.size());
  for (Vertex v : t.preorder()) {
    if (v == t.root()) continue;
    pos[v] = pos[t.parent(v)] + std::pow(3.0, expo(rng)) * unit_vector(angle(rng));
  }
  return drawing_for_tree(t, pos);
}

}  // namespace

TEST(Domination, ReferencePathVerdicts) {
  ReferencePath ref;
  EXPECT_TRUE(dominates(ref.tree, ref.drawing, f0, f1));
  EXPECT_TRUE(dominates(ref.tree, ref.drawing, f0, f3));
  EXPECT_TRUE(dominates(ref.tree, ref.drawing, f2, f3));
  EXPECT_FALSE(dominates(ref.tree, ref.drawing, f0, f2));
  EXPECT_TRUE(first_hand_dominates(ref.tree, ref.drawing, f0, f1));
  // f2 already dominates f3 from closer in
  EXPECT_FALSE(first_hand_dominates(ref.tree, ref.drawing, f0, f3));
  EXPECT_FALSE(first_hand_dominates(ref.tree, ref.drawing, f0, f2));
  EXPECT_TRUE(first_hand_dominates(ref.tree, ref.drawing, f2, f3));
  // first-hand domination only looks toward the root
  EXPECT_FALSE(first_hand_dominates(ref.tree, ref.drawing, f3, f2));
  EXPECT_EQ(longest_fd_chain(ref.tree, ref.drawing).bound, 2);
}

TEST(Domination, EdgeOrientationDoesNotMatter) {
  ReferencePath ref;
  EXPECT_TRUE(dominates(ref.tree, ref.drawing, Edge{4, 3}, Edge{3, 2}));
}

TEST(Domination, SelfAndOffBranch) {
  ReferencePath ref;
  EXPECT_FALSE(dominates(ref.tree, ref.drawing, f0, f0));
  EXPECT_FALSE(first_hand_dominates(ref.tree, ref.drawing, f1, f1));
  // two leaf edges of a star share no branch
  auto t = star(2);
  auto d = drawing_for_tree(t, {{0, 0}, {100, 0}, {0, 1}});
  EXPECT_FALSE(dominates(t, d, Edge{0, 1}, Edge{0, 2}));
}

TEST(Domination, Errors) {
  ReferencePath ref;
  EXPECT_THROW(dominates(ref.tree, ref.drawing, Edge{0, 2}, f1), PreconditionError);
  EXPECT_THROW(dominates(ref.tree, ref.drawing, Edge{0, 99}, f1), PreconditionError);
  auto short_drawing = path_only({{0, 0}, {1, 0}});
  EXPECT_THROW(DrawnTree(ref.tree, short_drawing), MismatchError);
  auto wrong_edges = ref.drawing;
  wrong_edges.edges[0] = {0, 2};
  EXPECT_THROW(DrawnTree(ref.tree, wrong_edges), MismatchError);
  auto wrong_ids = ref.drawing;
  wrong_ids.ids[4] = 77;
  EXPECT_THROW(DrawnTree(ref.tree, wrong_ids), MismatchError);
}

TEST(FdChain, UniformLengthsGiveOne) {
  auto t = path_tree(10);
  std::vector<Point> pos;
  for (int i = 0; i < 10; ++i) pos.push_back({double(i), 0});
  auto d = drawing_for_tree(t, pos);
  EXPECT_FALSE(first_hand_dominates(t, d, Edge{8, 9}, Edge{0, 1}));
  EXPECT_EQ(longest_fd_chain(t, d).bound, 1);
  EXPECT_EQ(longest_fd_chain(path_tree(1), path_only({{0, 0}})).bound, 0);
}

TEST(FdChain, RadialTernaryTreeOfHeightSix) {
  auto t = complete_kary(3, 6);
  auto d = radial_layout(t, 0.25, 1.0);
  auto cert = longest_fd_chain(t, d);
  EXPECT_EQ(cert.bound, 6);
  EXPECT_TRUE(verify_certificate(t, d, cert).ok);
  EXPECT_GE(exact_ply(ply_disks(d)).ply, 6);
  auto back = certificate_from_json(certificate_to_json(cert));
  EXPECT_EQ(back.bound, cert.bound);
  ASSERT_EQ(back.chain.size(), cert.chain.size());
  for (std::size_t i = 0; i < back.chain.size(); ++i) {
    EXPECT_EQ(back.chain[i].a, cert.chain[i].a);
    EXPECT_EQ(back.chain[i].b, cert.chain[i].b);
  }
}

TEST(FdChain, TamperedCertificatesFail) {
  auto t = complete_kary(3, 4);
  auto d = radial_layout(t, 0.25, 1.0);
  auto cert = longest_fd_chain(t, d);
  ASSERT_EQ(cert.bound, 4);

  auto bumped = cert;
  bumped.bound = 5;
  EXPECT_FALSE(verify_certificate(t, d, bumped).ok);

  auto reversed = cert;
  std::reverse(reversed.chain.begin(), reversed.chain.end());
  EXPECT_FALSE(verify_certificate(t, d, reversed).ok);

  auto flipped = cert;
  std::swap(flipped.chain[0].a, flipped.chain[0].b);
  EXPECT_FALSE(verify_certificate(t, d, flipped).ok);

  auto unknown = cert;
  unknown.chain[1].b = 123456;
  EXPECT_FALSE(verify_certificate(t, d, unknown).ok);

  // stretch an edge between two chain edges so it dominates the upper one
  auto flat = path_tree(4);
  auto flat_d = drawing_for_tree(flat, {{0, 0}, {1, 0}, {2, 0}, {50, 0}});
  FdChainCertificate skip{{Edge{2, 3}, Edge{0, 1}}, 2};
  EXPECT_TRUE(dominates(flat, flat_d, Edge{2, 3}, Edge{0, 1}));
  EXPECT_TRUE(verify_certificate(flat, flat_d, skip).ok);
  flat_d.positions[2] = {4, 0};
  flat_d.positions[3] = {52, 0};
  EXPECT_FALSE(verify_certificate(flat, flat_d, skip).ok);

  EXPECT_THROW(certificate_from_json(nlohmann::json{{"chain", {{1}}}, {"bound", 1}}), ParseError);
  EXPECT_THROW(certificate_from_json(nlohmann::json{{"bound", 1}}), ParseError);
}

TEST(FdChain, CertificatesOnRandomDrawingsVerifyAndBoundPly) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    auto t = random_tree(2 + trial * 3, 3, trial);
    auto d = random_drawing(t, rng);
    auto cert = longest_fd_chain(t, d);
    auto check = verify_certificate(t, d, cert);
    EXPECT_TRUE(check.ok) << check.reason;
    EXPECT_LE(cert.bound, exact_ply(ply_disks(d)).ply);
  }
}

TEST(DominationProperties, FirstHandImpliesDominationAndTransitivityAlongABranch) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 40; ++trial) {
    auto t = path_tree(12);
    auto d = random_drawing(t, rng);
    const DrawnTree dt(t, d);
    for (Vertex e = 1; e < 12; ++e)
      for (Vertex f = 1; f < 12; ++f) {
        if (dt.first_hand_dominates(e, f)) EXPECT_TRUE(dt.dominates(e, f));
        if (dt.dominates(e, f)) EXPECT_GT(dt.length(e), dt.length(f));
        for (Vertex g = 1; g < 12; ++g) {
          const bool monotone = (e > f && f > g) || (e < f && f < g);
          if (monotone && dt.dominates(e, f) && dt.dominates(f, g)) EXPECT_TRUE(dt.dominates(e, g));
        }
      }
  }
}

TEST(PathContainment, ReferencePath) {
  ReferencePath ref;
  const std::vector<VertexId> two{4, 3, 2};
  EXPECT_TRUE(check_dominated_path_containment(ref.drawing, two));
  // f0 = 28 fails to dominate the third edge (length 4) two steps away
  const std::vector<VertexId> three{4, 3, 2, 1};
  EXPECT_THROW(check_dominated_path_containment(ref.drawing, three), PreconditionError);
  EXPECT_THROW(check_dominated_path_containment(ref.drawing, std::vector<VertexId>{4, 3}), PreconditionError);
}

TEST(PathContainment, RandomDominatedPathsStayInside) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi), shrink(0.0, 1.0), first(1.0, 1000.0);
  std::uniform_int_distribution<int> count(1, 8);
  for (int trial = 0; trial < 1000; ++trial) {
    const int p = count(rng);
    const double l0 = first(rng);
    std::vector<Point> pts{{0, 0}};
    pts.push_back(l0 * unit_vector(angle(rng)));
    for (int i = 1; i <= p; ++i) {
      const double li = l0 / std::pow(3.0, i) * std::max(shrink(rng), 1e-6);
      pts.push_back(pts.back() + li * unit_vector(angle(rng)));
    }
    std::vector<VertexId> ids;
    for (int i = 0; i <= p + 1; ++i) ids.push_back(i);
    ASSERT_TRUE(check_dominated_path_containment(path_only(pts), ids)) << "trial " << trial;
  }
}

TEST(SubtreeContainment, GeometricShrink) {
  auto t = path_tree(6);
  auto d = drawing_for_tree(t, {{0, 0}, {100, 0}, {130, 0}, {139, 0}, {142, 0}, {143, 0}});
  auto r = check_dominated_subtree(t, d, 2);
  EXPECT_TRUE(r.holds);
  ASSERT_TRUE(r.witness_vertex.has_value());
  EXPECT_EQ(*r.witness_vertex, 1);
}

TEST(SubtreeContainment, LeafSubtreeIsTrivial) {
  auto t = star(3);
  auto d = drawing_for_tree(t, {{0, 0}, {1, 0}, {0, 1}, {-1, 0}});
  auto r = check_dominated_subtree(t, d, 2);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(*r.witness_vertex, 2);
  // the root path of the root is empty, so no subtree edge is dominated
  EXPECT_THROW(check_dominated_subtree(t, d, 0), PreconditionError);
}

TEST(SubtreeContainment, HypothesisViolation) {
  auto t = path_tree(4);
  auto d = drawing_for_tree(t, {{0, 0}, {1, 0}, {2, 0}, {3, 0}});
  EXPECT_THROW(check_dominated_subtree(t, d, 1), PreconditionError);
  EXPECT_THROW(check_dominated_subtree(t, path_only({{0, 0}, {1, 0}}), 1), MismatchError);
}

TEST(SubtreeContainment, RandomShrinkingSubtrees) {
  // every subtree edge at depth k below the hanging edge is at most 3^-(k+1)
  // of it, so the hanging edge dominates all of them
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi), shrink(0.05, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    auto sub = random_tree(2 + trial % 30, 3, trial);
    // prefix a root edge of length 1000 above the subtree
    std::vector<Vertex> parent(sub.size() + 1, kNoVertex);
    for (Vertex v = 0; v < static_cast<Vertex>(sub.size()); ++v)
      parent[v + 1] = sub.parent(v) == kNoVertex ? 0 : sub.parent(v) + 1;
    auto t = detail::from_parent_list(parent);
    const auto ann = annotate(t);
    std::vector<Point> pos(t.size());
    pos[1] = {1000, 0};
    for (Vertex v : t.preorder()) {
      if (v <= 1) continue;
      const double len = 1000 / std::pow(3.0, ann.depth[v] - 1) * shrink(rng) / 3.0;
      pos[v] = pos[t.parent(v)] + len * unit_vector(angle(rng));
    }
    auto d = drawing_for_tree(t, pos);
    auto r = check_dominated_subtree(t, d, t.id(1));
    EXPECT_TRUE(r.holds) << "trial " << trial;
  }
}
