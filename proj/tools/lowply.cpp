// lowply: draw trees with low ply, measure ply, certify lower bounds, and run
// the benchmark families.
//
// Exit codes: 0 ok, 2 input/usage error, 3 algorithm precondition, 4 bench
// bound violation or a certificate that fails its re-check.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lowply/lowply.hpp"

namespace {

using namespace lowply;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw IoError("cannot write " + path);
}

RootedTree load_tree(const std::string& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool json = first != std::string::npos && text[first] == '{';
  return parse_tree(text, json ? TreeFormat::json : TreeFormat::edge_list);
}

SectorMode parse_mode(const std::string& s) { return s == "half" ? SectorMode::half_disk : SectorMode::quarter_disk; }

struct DrawArgs {
  std::string in, out, svg, algo = "logply", mode = "quarter";
  double base = 6.0, inflation = kSqrt2, unit = 1.0;
  double ratio = 2.0, angle = kDefaultSpiralAngle, radius = 1.0, shrink = 0.25;
  std::int64_t seed = 0;
  bool svg_disks = false, svg_sectors = false;
};

int cmd_draw(const DrawArgs& a) {
  const RootedTree tree = load_tree(a.in);
  Drawing drawing;
  SectorPlan plan;
  bool have_plan = false;
  if (a.algo == "logply") {
    auto layout = layout_logply(tree, {parse_mode(a.mode), a.base, a.inflation, a.unit});
    drawing = std::move(layout.drawing);
    plan = std::move(layout.plan);
    have_plan = true;
  } else if (a.algo == "star2") {
    drawing = star_ply2_layout(tree, a.ratio, a.angle);
  } else if (a.algo == "regular-star") {
    drawing = regular_star_layout(tree, a.radius);
  } else {
    drawing = radial_layout(tree, a.shrink, a.unit);
  }
  drawing.meta["seed"] = a.seed;
  write_output(a.out, save_drawing(drawing));
  if (!a.svg.empty())
    write_output(a.svg, emit_svg(drawing, {a.svg_disks, a.svg_sectors}, have_plan ? &plan : nullptr));
  return 0;
}

struct PlyArgs {
  std::string in, method = "exact";
  std::int64_t samples = 100000;
  double tol = kDefaultPlyTolerance;
  std::uint64_t seed = 1;
};

int cmd_ply(const PlyArgs& a) {
  const Drawing drawing = load_drawing(read_file(a.in));
  if (auto problems = drawing_violations(drawing); !problems.empty())
    throw ParseError(ParseError::Kind::syntax, "drawing: " + problems.front());
  const PlyDiskSet disks = ply_disks(drawing);
  if (disks.empty()) throw PreconditionError("drawing has no edges, so there are no ply-disks");
  PlyReport report;
  if (a.method == "exact")
    report = exact_ply(disks, a.tol);
  else if (a.method == "candidate")
    report = candidate_ply(disks, a.tol);
  else
    report = sample_ply(disks, a.samples, a.seed, a.tol);
  std::cout << ply_report_to_json(report).dump() << "\n";
  return 0;
}

struct CertifyArgs {
  std::string tree, in;
  bool with_ply = false;
};

int cmd_certify(const CertifyArgs& a) {
  const RootedTree tree = load_tree(a.tree);
  const Drawing drawing = load_drawing(read_file(a.in));
  const auto cert = longest_fd_chain(tree, drawing);
  const auto check = verify_certificate(tree, drawing, cert);
  nlohmann::json out = certificate_to_json(cert);
  out["verified"] = check.ok;
  if (!check.ok) out["reason"] = check.reason;
  if (a.with_ply && drawing.size() > 1) out["exact_ply"] = exact_ply(ply_disks(drawing)).ply;
  std::cout << out.dump() << "\n";
  return check.ok ? 0 : 4;
}

struct BenchArgs {
  std::string family = "kary", report = "csv", out, mode = "quarter";
  int k = 5, min_h = 1, max_h = 4, max_n = 0, count = 10, jobs = 1;
  std::uint64_t seed = 1;
  double base = 6.0, inflation = kSqrt2;
  bool no_timing = false;
};

int cmd_bench(const BenchArgs& a) {
  BenchOptions opt;
  opt.family = a.family == "random" ? BenchFamily::random : a.family == "star" ? BenchFamily::star : BenchFamily::kary;
  opt.k = a.k;
  opt.min_h = a.min_h;
  opt.max_h = a.max_h;
  opt.max_n = a.max_n;
  opt.count = a.count;
  opt.seed = a.seed;
  opt.jobs = a.jobs;
  opt.timing = !a.no_timing;
  opt.layout = {parse_mode(a.mode), a.base, a.inflation, 1.0};
  const auto records = run_bench(opt);
  write_output(a.out, a.report == "json" ? bench_json(records).dump(2) + "\n" : bench_csv(records));
  for (const auto& r : records)
    if (!r.ok) {
      std::cerr << "bound violation: " << r.family << " n=" << r.n << "\n";
      return 4;
    }
  return 0;
}

struct DecomposeArgs {
  std::string in, out;
};

int cmd_decompose(const DecomposeArgs& a) {
  const RootedTree tree = load_tree(a.in);
  const auto hpt = decompose(tree);
  auto j = decomposition_to_json(tree, hpt);
  j["violations"] = validate_decomposition(tree, hpt);
  write_output(a.out, j.dump(2) + "\n");
  return 0;
}

struct GenArgs {
  std::string family = "kary", format = "edge-list", out;
  int k = 3, height = 2, leaves = 6, n = 10, max_degree = 6;
  std::uint64_t seed = 1;
};

int cmd_gen(const GenArgs& a) {
  RootedTree tree;
  if (a.family == "kary")
    tree = complete_kary(a.k, a.height);
  else if (a.family == "star")
    tree = star(a.leaves);
  else if (a.family == "path")
    tree = path_tree(a.n);
  else
    tree = random_tree(a.n, a.max_degree, a.seed);
  write_output(a.out, serialize_tree(tree, a.format == "json" ? TreeFormat::json : TreeFormat::edge_list));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-ply tree drawings: layout, ply measurement, certificates, benchmarks"};
  app.require_subcommand(1);

  DrawArgs draw;
  auto* d = app.add_subcommand("draw", "Draw a tree and write Drawing JSON");
  d->add_option("--in", draw.in, "Tree file (edge list or JSON)")->required();
  d->add_option("--algo", draw.algo, "Layout algorithm")
      ->check(CLI::IsMember({"logply", "star2", "regular-star", "radial"}))
      ->capture_default_str();
  d->add_option("--mode", draw.mode, "Sector mode for logply")->check(CLI::IsMember({"half", "quarter"}))->capture_default_str();
  d->add_option("--base", draw.base, "Geometric base b (>= 6) for logply")->capture_default_str();
  d->add_option("--inflation", draw.inflation, "Sector inflation (>= 1) for logply")->capture_default_str();
  d->add_option("--unit", draw.unit, "Shortest edge length for logply and radial")->capture_default_str();
  d->add_option("--ratio", draw.ratio, "Radius ratio between consecutive star2 leaves (> 1)")->capture_default_str();
  d->add_option("--angle", draw.angle, "Angle step between star2 leaves, radians")->capture_default_str();
  d->add_option("--radius", draw.radius, "Leaf circle radius for regular-star")->capture_default_str();
  d->add_option("--shrink", draw.shrink, "Per-level edge shrink toward the root for radial")->capture_default_str();
  d->add_option("--out", draw.out, "Drawing JSON output (default: stdout)");
  d->add_option("--svg", draw.svg, "Also write an SVG rendering");
  d->add_flag("--svg-disks", draw.svg_disks, "Render ply-disks in the SVG");
  d->add_flag("--svg-sectors", draw.svg_sectors, "Render logply sectors in the SVG");
  d->add_option("--seed", draw.seed, "Seed recorded in the drawing metadata")->capture_default_str();

  PlyArgs ply;
  auto* p = app.add_subcommand("ply", "Compute the ply-number of a drawing");
  p->add_option("--in", ply.in, "Drawing JSON")->required();
  p->add_option("--method", ply.method, "exact, candidate or sample")
      ->check(CLI::IsMember({"exact", "candidate", "sample"}))
      ->capture_default_str();
  p->add_option("--samples", ply.samples, "Sample count for --method sample")->check(CLI::PositiveNumber)->capture_default_str();
  p->add_option("--tol", ply.tol, "Relative tolerance")->check(CLI::NonNegativeNumber)->capture_default_str();
  p->add_option("--seed", ply.seed, "Sampling seed")->capture_default_str();

  CertifyArgs certify;
  auto* c = app.add_subcommand("certify", "Longest first-hand domination chain as a ply lower bound");
  c->add_option("--tree", certify.tree, "Tree file")->required();
  c->add_option("--in", certify.in, "Drawing JSON of that tree")->required();
  c->add_flag("--with-ply", certify.with_ply, "Also report the exact ply");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Run a benchmark family and check its bounds");
  b->add_option("--family", bench.family, "kary, random or star")
      ->check(CLI::IsMember({"kary", "random", "star"}))
      ->capture_default_str();
  b->add_option("--k", bench.k, "Arity for kary")->capture_default_str();
  b->add_option("--min-h", bench.min_h, "Smallest kary height")->capture_default_str();
  b->add_option("--max-h", bench.max_h, "Largest kary height")->capture_default_str();
  b->add_option("--max-n", bench.max_n, "Vertex cap (random: largest n, star: largest n)")->capture_default_str();
  b->add_option("--count", bench.count, "Number of random trees")->capture_default_str();
  b->add_option("--seed", bench.seed, "Seed for random trees")->capture_default_str();
  b->add_option("--report", bench.report, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  b->add_option("--out", bench.out, "Report file (default: stdout)");
  b->add_option("--jobs", bench.jobs, "Parallel instances")->check(CLI::PositiveNumber)->capture_default_str();
  b->add_option("--mode", bench.mode, "Sector mode")->check(CLI::IsMember({"half", "quarter"}))->capture_default_str();
  b->add_option("--base", bench.base, "Geometric base b")->capture_default_str();
  b->add_option("--inflation", bench.inflation, "Sector inflation")->capture_default_str();
  b->add_flag("--no-timing", bench.no_timing, "Report wall_time_ms as 0 for byte-identical reports");

  DecomposeArgs decomp;
  auto* dc = app.add_subcommand("decompose", "Dump the heavy-path decomposition as JSON");
  dc->add_option("--in", decomp.in, "Tree file")->required();
  dc->add_option("--out", decomp.out, "Output file (default: stdout)");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a tree file");
  g->add_option("--family", gen.family, "kary, star, path or random")
      ->check(CLI::IsMember({"kary", "star", "path", "random"}))
      ->capture_default_str();
  g->add_option("--k", gen.k, "Arity for kary")->capture_default_str();
  g->add_option("--height", gen.height, "Height for kary")->capture_default_str();
  g->add_option("--leaves", gen.leaves, "Leaves for star")->capture_default_str();
  g->add_option("--n", gen.n, "Vertices for path and random")->capture_default_str();
  g->add_option("--max-degree", gen.max_degree, "Degree cap for random")->capture_default_str();
  g->add_option("--seed", gen.seed, "Seed for random")->capture_default_str();
  g->add_option("--format", gen.format, "edge-list or json")->check(CLI::IsMember({"edge-list", "json"}))->capture_default_str();
  g->add_option("--out", gen.out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (d->parsed()) return cmd_draw(draw);
    if (p->parsed()) return cmd_ply(ply);
    if (c->parsed()) return cmd_certify(certify);
    if (b->parsed()) return cmd_bench(bench);
    if (dc->parsed()) return cmd_decompose(decomp);
    if (g->parsed()) return cmd_gen(gen);
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ResourceLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    // parse errors, I/O errors, tree/drawing mismatches
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
