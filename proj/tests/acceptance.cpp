// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lowply/lowply.hpp"

using namespace lowply;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;
};

struct CorpusItem {
  std::string name;
  RootedTree tree;
  LogPlyLayout layout;
  int heavy_height = 0;
};

const LayoutConfig kConfig{SectorMode::quarter_disk, 6.0, kSqrt2, 1.0};

std::vector<CorpusItem> build_corpus() {
  std::vector<CorpusItem> out;
  for (int h = 1; h <= 5; ++h) {
    auto t = complete_kary(5, h);
    out.push_back({"5-ary h=" + std::to_string(h), t, {}, 0});
  }
  std::mt19937_64 rng(20240501);
  std::uniform_int_distribution<int> size(2, 2000), degree(2, 6);
  for (int i = 0; i < 200; ++i) {
    const int n = size(rng);
    const int max_deg = degree(rng);
    auto t = reroot_for_capacity(random_tree(n, max_deg, rng()), kConfig.mode);
    out.push_back({"random #" + std::to_string(i) + " n=" + std::to_string(n), t, {}, 0});
  }
  for (auto& item : out) {
    item.layout = layout_logply(item.tree, kConfig);
    item.heavy_height = item.layout.decomposition.height();
  }
  return out;
}

// Fixpoint of l_j = max(init_j, l_{j-1}/2, l_{j+1}/2), iterated to stability.
std::vector<double> drawpath_oracle(const std::vector<std::int64_t>& w) {
  std::vector<double> l(w.size());
  l[0] = static_cast<double>(w[0]);
  for (std::size_t i = 1; i < w.size(); ++i) l[i] = static_cast<double>(w[i - 1] + w[i]);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t j = 0; j < l.size(); ++j) {
      double want = l[j];
      if (j > 0) want = std::max(want, l[j - 1] / 2);
      if (j + 1 < l.size()) want = std::max(want, l[j + 1] / 2);
      if (want > l[j]) {
        l[j] = want;
        changed = true;
      }
    }
  }
  return l;
}

PlyDiskSet random_disk_set(std::mt19937_64& rng, int n, bool lattice) {
  std::uniform_real_distribution<double> coord(0.0, 20.0), rad(0.3, 5.0);
  std::uniform_int_distribution<int> icoord(0, 8), irad(1, 4);
  PlyDiskSet set;
  for (int i = 0; i < n; ++i) {
    if (lattice)
      set.disks.push_back({i, {double(icoord(rng)), double(icoord(rng))}, double(irad(rng))});
    else
      set.disks.push_back({i, {coord(rng), coord(rng)}, rad(rng)});
  }
  return set;
}

Drawing randomized_star(std::mt19937_64& rng, int leaves) {
  std::uniform_real_distribution<double> ratio(2.0, 3.0), angle(0.0, kTwoPi);
  std::vector<Point> pos{{0, 0}};
  double r = 1.0;
  for (int i = 0; i < leaves; ++i) {
    pos.push_back(r * unit_vector(angle(rng)));
    r *= ratio(rng);
  }
  return drawing_for_tree(star(leaves), pos);
}

void fail(Verdict& v, const std::string& why) {
  if (v.ok) v.detail = why;
  v.ok = false;
}

Verdict ac1(const std::vector<CorpusItem>& corpus) {
  Verdict v;
  int worst_gap = 1 << 30;
  for (const auto& item : corpus) {
    const int ply = exact_ply(ply_disks(item.layout.drawing)).ply;
    const int bound = 2 * (item.heavy_height + 1);
    const int log_bound = 2 * floor_log2(item.tree.size()) + 2;
    if (ply > bound || bound > log_bound)
      fail(v, item.name + ": ply " + std::to_string(ply) + ", bound " + std::to_string(bound) + ", 2log2n+2 " +
                  std::to_string(log_bound));
    worst_gap = std::min(worst_gap, bound - ply);
  }
  if (v.ok) v.detail = std::to_string(corpus.size()) + " layouts, smallest slack " + std::to_string(worst_gap);
  return v;
}

Verdict ac2(const std::vector<CorpusItem>& corpus) {
  Verdict v;
  double worst = 0.0;
  for (const auto& item : corpus) {
    const auto area = measure_area(item.layout.drawing);
    const double side = 2 * kConfig.inflation * std::pow(6.0, item.heavy_height) * double(item.tree.size());
    if (area.min_edge < 1.0) fail(v, item.name + ": min edge " + std::to_string(area.min_edge));
    if (area.normalized_area > side * side) fail(v, item.name + ": area above bound");
    worst = std::max(worst, area.normalized_area / (side * side));
  }
  if (v.ok) {
    std::ostringstream s;
    s << "min edge >= 1 everywhere, largest area/bound " << worst;
    v.detail = s.str();
  }
  return v;
}

Verdict ac3() {
  Verdict v;
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> len(1, 50), weight(1, 20);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::int64_t> w(len(rng));
    for (auto& x : w) x = weight(rng);
    const auto got = drawpath_lengths(w);
    if (got != drawpath_oracle(w)) fail(v, "oracle mismatch at trial " + std::to_string(trial));
    for (std::size_t i = 1; i < got.size(); ++i)
      if (got[i] > 2 * got[i - 1] || got[i] < got[i - 1] / 2) fail(v, "ratio outside [1/2, 2]");
    const double total = std::accumulate(got.begin(), got.end(), 0.0);
    if (total > 6.0 * double(std::accumulate(w.begin(), w.end(), std::int64_t{0}))) fail(v, "total above 6 sum(w)");
  }
  if (v.ok) v.detail = "1000 weight vectors";
  return v;
}

Verdict ac4() {
  Verdict v;
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> len(1, 60), step(-1, 1), kind(0, 2);
  std::uniform_real_distribution<double> expo(-1.0, 1.0);
  std::uniform_int_distribution<int> weight(1, 20);
  int worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> lengths(len(rng));
    const int k = kind(rng);
    if (k == 0) {
      // DrawPath output
      std::vector<std::int64_t> w(lengths.size());
      for (auto& x : w) x = weight(rng);
      lengths = drawpath_lengths(w);
    } else {
      // random walk in log scale; k == 1 hits the ratio endpoints exactly
      double l = 1.0;
      for (auto& x : lengths) {
        x = l;
        l *= k == 1 ? std::pow(2.0, step(rng)) : std::pow(2.0, expo(rng));
      }
    }
    const int ply = exact_ply(ply_disks(line_drawing(lengths))).ply;
    worst = std::max(worst, ply);
    if (ply > 2) fail(v, "trial " + std::to_string(trial) + " has ply " + std::to_string(ply));
  }
  if (v.ok) v.detail = "1000 line 2-drawings, max ply " + std::to_string(worst);
  return v;
}

Verdict ac5(const std::vector<CorpusItem>& corpus) {
  Verdict v;
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    auto set = random_disk_set(rng, 1 + trial % 40, trial % 3 == 0);
    const int exact = exact_ply(set).ply;
    if (candidate_ply(set).ply != exact) fail(v, "random set " + std::to_string(trial) + ": exact != candidate");
    if (sample_ply(set, 2000, trial).ply > exact) fail(v, "sampling above exact");
  }
  for (const auto& item : corpus) {
    const auto disks = ply_disks(item.layout.drawing);
    const int exact = exact_ply(disks).ply;
    if (candidate_ply(disks).ply != exact) fail(v, item.name + ": exact != candidate");
    if (sample_ply(disks, 2000, 1).ply > exact) fail(v, item.name + ": sampling above exact");
  }
  int equal = 0;
  const int sets = 200;
  for (int trial = 0; trial < sets; ++trial) {
    auto set = random_disk_set(rng, 1 + trial % 12, false);
    const int exact = exact_ply(set).ply;
    const int sampled = sample_ply(set, 100000, 1000 + trial).ply;
    if (sampled > exact) fail(v, "sampling above exact");
    equal += sampled == exact;
  }
  if (equal * 100 < 95 * sets) fail(v, "sampling matched exact on only " + std::to_string(equal) + "/" + std::to_string(sets));
  if (v.ok)
    v.detail = "500 random sets and " + std::to_string(corpus.size()) + " layouts agree; sampling exact on " +
               std::to_string(equal) + "/" + std::to_string(sets);
  return v;
}

Verdict ac6() {
  Verdict v;
  const int six = exact_ply(ply_disks(regular_star_layout(6, 1.0))).ply;
  const int seven = exact_ply(ply_disks(regular_star_layout(7, 1.0))).ply;
  if (six != 1) fail(v, "regular 6-star has ply " + std::to_string(six));
  if (seven != 2) fail(v, "regular 7-star has ply " + std::to_string(seven));
  for (int n : {10, 50, 200}) {
    const int p = exact_ply(ply_disks(star_ply2_layout(n, 2.0, kDefaultSpiralAngle))).ply;
    if (p != 2) fail(v, "spiral star " + std::to_string(n) + " has ply " + std::to_string(p));
  }
  if (v.ok) v.detail = "regular 6 -> 1, regular 7 -> 2, spiral 10/50/200 -> 2";
  return v;
}

Verdict ac7() {
  Verdict v;
  std::vector<std::pair<std::string, Drawing>> stars;
  for (int leaves : {1, 6, 7, 12, 50, 200}) stars.emplace_back("regular " + std::to_string(leaves), regular_star_layout(leaves, 1.0));
  for (int leaves : {1, 10, 50, 100, 200, 500}) stars.emplace_back("spiral " + std::to_string(leaves), star_ply2_layout(leaves));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) stars.emplace_back("randomized #" + std::to_string(i), randomized_star(rng, 5 + 10 * i));
  std::vector<std::string> failing;
  for (const auto& [name, d] : stars) {
    const auto c = annulus_census(d);
    // class counts and edge ratio >= 3^(n/(80p)) with p the measured ply
    if (!c.class_counts_ok || !c.literal_ratio_ok) {
      failing.push_back(name);
      std::ostringstream s;
      s << name << ": log3(edge ratio) " << c.log3_edge_ratio << " < n/(80p) " << c.literal_log3_bound
        << " (p=" << c.ply << ")";
      fail(v, s.str());
    }
  }
  if (v.ok)
    v.detail = std::to_string(stars.size()) + " star drawings";
  else {
    v.detail += "; " + std::to_string(failing.size()) + "/" + std::to_string(stars.size()) + " drawings fail:";
    for (const auto& name : failing) v.detail += " [" + name + "]";
  }
  return v;
}

Verdict ac8(const std::vector<CorpusItem>& corpus) {
  Verdict v;
  auto t = complete_kary(3, 6);
  auto radial = radial_layout(t, 0.25, 1.0);
  const auto cert = longest_fd_chain(t, radial);
  const int radial_ply = exact_ply(ply_disks(radial)).ply;
  if (cert.bound != 6) fail(v, "radial chain bound " + std::to_string(cert.bound));
  if (radial_ply < 6) fail(v, "radial exact ply " + std::to_string(radial_ply));
  if (!verify_certificate(t, radial, cert).ok) fail(v, "radial certificate fails its re-check");
  for (const auto& item : corpus) {
    const auto c = longest_fd_chain(item.tree, item.layout.drawing);
    if (!verify_certificate(item.tree, item.layout.drawing, c).ok) fail(v, item.name + ": certificate fails re-check");
    if (c.bound > exact_ply(ply_disks(item.layout.drawing)).ply) fail(v, item.name + ": chain above ply");
  }
  for (int leaves : {6, 7, 50}) {
    const auto s = star(leaves);
    const auto d = star_ply2_layout(s);
    if (longest_fd_chain(s, d).bound > exact_ply(ply_disks(d)).ply) fail(v, "star chain above ply");
  }
  if (v.ok) v.detail = "radial bound 6, exact ply " + std::to_string(radial_ply) + "; chain <= ply on the corpus";
  return v;
}

Verdict ac9() {
  Verdict v;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi), shrink(1e-6, 1.0), first(1.0, 1e4);
  std::uniform_int_distribution<int> count(1, 10);
  for (int trial = 0; trial < 1000; ++trial) {
    const int p = count(rng);
    const double l0 = first(rng);
    Drawing d;
    std::vector<Point> pts{{0, 0}, l0 * unit_vector(angle(rng))};
    for (int i = 1; i <= p; ++i) pts.push_back(pts.back() + (l0 / std::pow(3.0, i) * shrink(rng)) * unit_vector(angle(rng)));
    std::vector<VertexId> ids;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      d.ids.push_back(static_cast<VertexId>(i));
      d.positions.push_back(pts[i]);
      if (i > 0) d.edges.emplace_back(static_cast<int>(i - 1), static_cast<int>(i));
      ids.push_back(static_cast<VertexId>(i));
    }
    if (!check_dominated_path_containment(d, ids)) fail(v, "dominated path " + std::to_string(trial) + " escapes");
  }
  // root 0 at x=0; f3=(0,1), f2=(1,2), f1=(2,3), f0=(3,4) with lengths 1, 4, 6, 28
  const auto t = path_tree(5);
  const auto fig = drawing_for_tree(t, {{0, 0}, {1, 0}, {5, 0}, {11, 0}, {39, 0}});
  const Edge f0{3, 4}, f1{2, 3}, f2{1, 2}, f3{0, 1};
  struct Expect {
    const char* what;
    bool got, want;
  };
  const Expect expectations[] = {
      {"f0 >D f1", dominates(t, fig, f0, f1), true},
      {"f0 >D f3", dominates(t, fig, f0, f3), true},
      {"f2 >D f3", dominates(t, fig, f2, f3), true},
      {"f0 >D f2", dominates(t, fig, f0, f2), false},
      {"f0 >FD f1", first_hand_dominates(t, fig, f0, f1), true},
      {"f0 >FD f3", first_hand_dominates(t, fig, f0, f3), false},
      {"f2 >FD f3", first_hand_dominates(t, fig, f2, f3), true},
  };
  for (const auto& e : expectations)
    if (e.got != e.want) fail(v, std::string("reference path verdict ") + e.what + " is " + (e.got ? "true" : "false"));
  if (v.ok) v.detail = "1000 dominated paths contained; 7 reference path verdicts reproduced";
  return v;
}

}  // namespace

int main() {
  const auto started = std::chrono::steady_clock::now();
  const auto corpus = build_corpus();
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"AC1 log-ply bound", [&] { return ac1(corpus); }},
      {"AC2 area bound", [&] { return ac2(corpus); }},
      {"AC3 DrawPath contract", ac3},
      {"AC4 2-drawing ply", ac4},
      {"AC5 ply oracle equivalence", [&] { return ac5(corpus); }},
      {"AC6 star facts", ac6},
      {"AC7 annulus census", ac7},
      {"AC8 certificate soundness", [&] { return ac8(corpus); }},
      {"AC9 domination geometry", ac9},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", v.ok ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
    std::fflush(stdout);
    failed += !v.ok;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::printf("%d/%zu criteria passed in %.1f s\n", static_cast<int>(criteria.size()) - failed, criteria.size(), seconds);
  return failed == 0 ? 0 : 1;
}
