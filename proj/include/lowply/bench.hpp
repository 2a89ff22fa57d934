#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "lowply/drawing.hpp"
#include "lowply/layout.hpp"
#include "lowply/ply.hpp"
#include "lowply/tree.hpp"

namespace lowply {

enum class BenchFamily { kary, random, star };

inline const char* to_string(BenchFamily f) {
  switch (f) {
    case BenchFamily::kary:
      return "kary";
    case BenchFamily::random:
      return "random";
    case BenchFamily::star:
      return "star";
  }
  return "?";
}

struct BenchOptions {
  BenchFamily family = BenchFamily::kary;
  int k = 5;
  int min_h = 1;
  int max_h = 4;
  int max_n = 0;     // 0: no size cap (random: defaults to 2000, star: 1000)
  int count = 10;    // random instances
  std::uint64_t seed = 1;
  int jobs = 1;
  bool timing = true;
  LayoutConfig layout;
};

struct BenchRecord {
  std::string family;
  std::int64_t n = 0;
  int heavy_height = 0;
  int measured_ply = 0;
  int ply_bound = 0;
  double min_edge = 0.0;
  double normalized_area = 0.0;
  double area_bound = 0.0;
  double wall_time_ms = 0.0;
  bool census_ok = true;  // star family only
  bool plan_ok = true;    // log-ply layouts only
  bool ok = false;
};

/// One benchmark instance: a tree plus how to draw it.
struct BenchInstance {
  BenchFamily family;
  RootedTree tree;
};

inline std::vector<BenchInstance> bench_instances(const BenchOptions& opt) {
  std::vector<BenchInstance> out;
  switch (opt.family) {
    case BenchFamily::kary:
      for (int h = std::max(opt.min_h, 0); h <= opt.max_h; ++h) {
        auto t = complete_kary(opt.k, h);
        if (opt.max_n > 0 && static_cast<int>(t.size()) > opt.max_n) break;
        out.push_back({BenchFamily::kary, std::move(t)});
      }
      break;
    case BenchFamily::random: {
      const int cap = opt.max_n > 0 ? opt.max_n : 2000;
      const int max_degree = sector_capacity(opt.layout.mode) + 2;
      std::mt19937_64 rng(opt.seed);
      std::uniform_int_distribution<int> size(2, std::max(2, cap));
      for (int i = 0; i < opt.count; ++i) {
        const int n = size(rng);
        const std::uint64_t tree_seed = rng();
        out.push_back({BenchFamily::random,
                       reroot_for_capacity(random_tree(n, max_degree, tree_seed), opt.layout.mode)});
      }
      break;
    }
    case BenchFamily::star: {
      const int cap = opt.max_n > 0 ? opt.max_n : 1000;
      for (int n : {10, 20, 50, 100, 200, 500, 1000})
        if (n <= cap) out.push_back({BenchFamily::star, star(n - 1)});
      break;
    }
  }
  return out;
}

/// Draws one instance and measures it. Stars use the spiral layout and must
/// pass the annulus census; every other tree uses the log-ply layout and must
/// pass the sector-plan check.
inline BenchRecord run_bench_instance(const BenchInstance& inst, const BenchOptions& opt) {
  const auto started = std::chrono::steady_clock::now();
  BenchRecord r;
  r.family = to_string(inst.family);
  r.n = static_cast<std::int64_t>(inst.tree.size());
  r.heavy_height = decompose(inst.tree).height();
  r.ply_bound = 2 * (r.heavy_height + 1);
  Drawing drawing;
  if (inst.family == BenchFamily::star) {
    drawing = star_ply2_layout(inst.tree);
    r.area_bound = std::numeric_limits<double>::infinity();
    r.census_ok = annulus_census(drawing).bound_ok;
  } else {
    auto layout = layout_logply(inst.tree, opt.layout);
    r.plan_ok = sector_plan_violations(inst.tree, layout).empty();
    drawing = std::move(layout.drawing);
    const double side = 2.0 * opt.layout.inflation * std::pow(opt.layout.base, r.heavy_height) * static_cast<double>(r.n);
    r.area_bound = side * side;
  }
  r.measured_ply = drawing.size() > 1 ? exact_ply(ply_disks(drawing)).ply : 1;
  const auto area = measure_area(drawing);
  r.min_edge = drawing.edges.empty() ? opt.layout.unit : area.min_edge / opt.layout.unit;
  r.normalized_area = area.normalized_area;
  r.ok = r.measured_ply <= r.ply_bound && r.min_edge >= 1.0 && r.normalized_area <= r.area_bound && r.census_ok &&
         r.plan_ok;
  if (opt.timing)
    r.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return r;
}

/// Runs every instance on up to `jobs` threads; records keep instance order.
inline std::vector<BenchRecord> run_bench(const BenchOptions& opt) {
  const auto instances = bench_instances(opt);
  std::vector<BenchRecord> records(instances.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < instances.size(); i = next++) records[i] = run_bench_instance(instances[i], opt);
  };
  const int jobs = std::clamp(opt.jobs, 1, std::max(1, static_cast<int>(instances.size())));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return records;
}

inline constexpr const char* kBenchCsvHeader =
    "family,n,heavy_height,measured_ply,ply_bound,min_edge,normalized_area,area_bound,wall_time_ms,ok";

inline std::string bench_csv(const std::vector<BenchRecord>& records) {
  auto real = [](double v) {
    if (std::isinf(v)) return std::string(v > 0 ? "inf" : "-inf");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::string out = std::string(kBenchCsvHeader) + "\n";
  for (const auto& r : records) {
    out += r.family + "," + std::to_string(r.n) + "," + std::to_string(r.heavy_height) + "," +
           std::to_string(r.measured_ply) + "," + std::to_string(r.ply_bound) + "," + real(r.min_edge) + "," +
           real(r.normalized_area) + "," + real(r.area_bound) + "," + real(r.wall_time_ms) + "," +
           (r.ok ? "true" : "false") + "\n";
  }
  return out;
}

inline nlohmann::json bench_json(const std::vector<BenchRecord>& records) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : records) {
    out.push_back({{"family", r.family},
                   {"n", r.n},
                   {"heavy_height", r.heavy_height},
                   {"measured_ply", r.measured_ply},
                   {"ply_bound", r.ply_bound},
                   {"min_edge", r.min_edge},
                   {"normalized_area", r.normalized_area},
                   {"area_bound", r.area_bound},  // null when unbounded
                   {"wall_time_ms", r.wall_time_ms},
                   {"census_ok", r.census_ok},
                   {"plan_ok", r.plan_ok},
                   {"ok", r.ok}});
  }
  return out;
}

}  // namespace lowply
