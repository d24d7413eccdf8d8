#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bqpmc/core.hpp"
#include "bqpmc/generators.hpp"
#include "bqpmc/hull.hpp"
#include "bqpmc/io.hpp"
#include "bqpmc/oracle.hpp"
#include "bqpmc/pooling.hpp"
#include "bqpmc/separators.hpp"
#include "bqpmc/simplex.hpp"

using namespace bqpmc;

namespace {

struct Options {
  std::string instance, objective = "uniform:-10:10:1", classes, seeds, out, point, pool, mode = "validity",
                        subsets, formulation = "q";
  int y_count = 0;
  std::uint64_t seed = 1;
  double density = 1.0, tol = kViolationTol;
  int rounds = 500;
  bool exact = false, certify = false, relax = false;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string t; std::getline(ss, t, sep);)
    if (!t.empty()) out.push_back(t);
  return out;
}

// "1-10" or "1,4,7"
std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> out;
  for (const auto& part : split(s, ',')) {
    auto dash = part.find('-');
    if (dash == std::string::npos) {
      out.push_back(std::stoull(part));
    } else {
      std::uint64_t a = std::stoull(part.substr(0, dash)), b = std::stoull(part.substr(dash + 1));
      if (b < a) throw std::invalid_argument("bad seed range " + part);
      for (std::uint64_t k = a; k <= b; ++k) out.push_back(k);
    }
  }
  if (out.empty()) throw std::invalid_argument("no seeds given");
  return out;
}

struct UniformSpec {
  double lo = -10, hi = 10;
  std::uint64_t seed = 1;
  bool has_seed = false;
};

std::optional<UniformSpec> parse_uniform(const std::string& s) {
  auto parts = split(s, ':');
  if (parts.empty() || parts[0] != "uniform") return std::nullopt;
  if (parts.size() < 3 || parts.size() > 4) throw std::invalid_argument("objective must be uniform:lo:hi[:seed]");
  UniformSpec u{std::stod(parts[1]), std::stod(parts[2]), 1, parts.size() == 4};
  if (u.has_seed) u.seed = std::stoull(parts[3]);
  return u;
}

std::vector<double> objective_for(const Instance& inst, const std::string& spec, std::optional<std::uint64_t> seed) {
  if (auto u = parse_uniform(spec)) return uniform_objective(inst, u->lo, u->hi, seed.value_or(u->seed));
  RationalPoint p = io::point_from_json(io::read_json_file(spec), inst);
  return to_double(p).values;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty())
    std::cout << text;
  else
    io::write_text_file(o.out, text);
}

std::vector<std::string> class_list(const std::string& s) { return split(s, ','); }

int cmd_gen(const Options& o) {
  auto sizes = parse_subset_sizes(o.subsets);
  if (o.y_count <= 0) throw std::invalid_argument("--y must be positive");
  Instance inst = Instance::from_sizes(sizes, o.y_count);
  if (o.density < 1.0) {
    SplitMix64 rng(o.seed);
    std::vector<std::pair<int, int>> edges;
    for (auto e : inst.edges())
      if (rng.coin(o.density)) edges.push_back(e);
    inst = Instance::from_sizes(sizes, o.y_count, &edges);
  }
  emit(o, io::instance_to_json(inst).dump(2) + "\n");
  return 0;
}

int cmd_solve(const Options& o) {
  Instance inst = io::read_instance(o.instance);
  auto obj = objective_for(inst, o.objective, std::nullopt);
  LpProblem lp = mccormick_relaxation(inst, obj);
  for (const auto& cls : expand_classes(class_list(o.classes)))
    if (cls == "rlt")
      for (auto& c : rlt_inequalities(inst)) lp.constraints.push_back(c);
  std::ostringstream os;
  os.precision(12);
  if (o.exact) {
    auto r = solve_lp_exact(lp);
    os << "status " << status_name(r.status) << "\nlp_value " << r.value.get_str() << " (" << r.value.get_d() << ")\n";
  } else {
    auto r = solve_lp(lp);
    os << "status " << status_name(r.status) << "\nlp_value " << r.value << '\n';
  }
  if (vertex_count(inst) <= (1L << 22)) os << "ip_value " << integer_optimum(inst, obj).value << '\n';
  emit(o, os.str());
  return 0;
}

int cmd_separate(const Options& o) {
  Instance inst = io::read_instance(o.instance);
  Point p = to_double(io::point_from_json(io::read_json_file(o.point), inst));
  std::vector<LinearConstraint> pool;
  for (const auto& cls : expand_classes(class_list(o.classes))) {
    CutBatch b = separate_class(cls, inst, p, o.tol);
    for (std::size_t k = 0; k < b.size(); ++k) {
      pool.push_back(b.cuts[k].with_tag(cls));
      std::cerr << cls << " violation " << b.violations[k] << ": " << b.cuts[k].to_string(inst) << '\n';
    }
  }
  emit(o, io::pool_to_json(pool, inst).dump(2) + "\n");
  return 0;
}

int cmd_loop(const Options& o) {
  Instance inst = io::read_instance(o.instance);
  auto u = parse_uniform(o.objective);
  std::vector<std::optional<std::uint64_t>> seeds;
  if (!o.seeds.empty()) {
    if (!u) throw std::invalid_argument("--seeds needs a uniform objective");
    for (auto s : parse_seeds(o.seeds)) seeds.push_back(s);
  } else {
    seeds.push_back(std::nullopt);
  }
  LoopConfig cfg;
  cfg.tol = o.tol;
  cfg.max_rounds = o.rounds;
  std::string text = loop_csv_header();
  std::vector<LoopReport> reps;
  for (auto s : seeds) {
    auto obj = objective_for(inst, o.objective, s);
    double ip = integer_optimum(inst, obj).value;
    reps.push_back(cutting_loop(inst, obj, class_list(o.classes), ip, cfg));
    std::string seed_text = s ? std::to_string(*s) : (u && u->has_seed ? std::to_string(u->seed) : "-");
    text += loop_csv_rows(reps.back(), o.instance, seed_text);
    std::cerr << "seed " << seed_text << " gap " << reps.back().gap_percent << "%\n";
  }
  text += loop_csv_average_rows(reps, o.instance);
  emit(o, text);
  return 0;
}

int cmd_verify(const Options& o) {
  Instance inst = io::read_instance(o.instance);
  auto pool = io::pool_from_json(io::read_json_file(o.pool), inst);
  std::ostringstream os;
  int bad = 0;
  for (std::size_t k = 0; k < pool.size(); ++k) {
    const auto& c = pool[k];
    if (o.mode == "validity") {
      bool ok;
      std::string slack;
      if (o.exact) {
        auto v = check_validity<Rational>(inst, c, 0.0);
        ok = v.valid;
        slack = v.worst_slack.get_str();
      } else {
        auto v = check_validity<double>(inst, c, 1e-9);
        ok = v.valid;
        slack = std::to_string(v.worst_slack);
      }
      bad += !ok;
      os << k << ' ' << (ok ? "valid" : "INVALID") << " min_slack " << slack << " : " << c.to_string(inst) << '\n';
    } else if (o.mode == "facet") {
      if (!is_valid_exact(inst, c)) {
        ++bad;
        os << k << " INVALID : " << c.to_string(inst) << '\n';
        continue;
      }
      int r = facet_rank(inst, c);
      os << k << " rank " << r << " of " << inst.dim() - 1 << (r == inst.dim() - 1 ? " facet" : " not-facet") << " : "
         << c.to_string(inst) << '\n';
    } else {
      throw std::invalid_argument("--mode must be validity or facet");
    }
  }
  emit(o, os.str());
  return bad ? 1 : 0;
}

int cmd_hull(const Options& o) {
  Instance inst = io::read_instance(o.instance);
  RationalPoint h;
  if (!o.point.empty()) {
    h = io::point_from_json(io::read_json_file(o.point), inst);
  } else {
    SplitMix64 rng(o.seed);
    h = random_hull_point(enumerate_vertices(inst), rng, inst.dim() + 1);
    std::cerr << "point " << io::point_to_json(h, inst).dump() << '\n';
  }
  auto res = certify_membership(inst, h);
  if (res.status != CertifyResult::Status::certified) {
    std::cout << res.message << '\n';
    return res.status == CertifyResult::Status::violated ? 2 : 3;
  }
  auto check = verify_certificate(inst, h, *res.certificate);
  emit(o, certificate_to_text(inst, *res.certificate));
  std::cout << (check.ok ? "verified" : "FAILED " + check.failed) << '\n';
  return check.ok ? 0 : 1;
}

int cmd_pool(const Options& o) {
  auto pi = pooling::instance_from_json(io::read_json_file(o.instance));
  pooling::PoolingModel m;
  if (o.formulation == "q")
    m = pooling::build_q(pi);
  else if (o.formulation == "qcuts")
    m = pooling::build_qcuts(pi);
  else
    throw std::invalid_argument("--formulation must be q or qcuts");
  if (o.out.empty())
    std::cout << pooling::to_lp_text(m);
  else
    pooling::export_lp(m, o.out);
  std::cerr << "variables " << m.num_vars() << " linear_rows " << m.rows.size() << " bilinear_rows " << m.bilinear.size()
            << '\n';
  if (o.relax) {
    auto r = solve_lp(pooling::relaxation(m));
    std::cerr << "relaxation " << status_name(r.status) << ' ' << r.value << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cutting planes for bipartite boolean quadric polytopes with multiple-choice constraints"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen", "write a complete bipartite instance");
  gen->add_option("--subsets", o.subsets, "\"5x5\" or \"1,2,3\"")->required();
  gen->add_option("--y", o.y_count, "number of Y nodes")->required();
  gen->add_option("--seed", o.seed, "edge sampling seed");
  gen->add_option("--density", o.density, "keep each edge with this probability (1 = complete)")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--out", o.out);

  auto* solve = app.add_subcommand("solve", "solve the McCormick (+RLT) relaxation");
  solve->add_option("--instance", o.instance)->required()->check(CLI::ExistingFile);
  solve->add_option("--objective", o.objective, "uniform:lo:hi:seed or a JSON file");
  solve->add_option("--classes", o.classes, "\"rlt\" adds the RLT rows");
  solve->add_flag("--exact", o.exact, "rational arithmetic");
  solve->add_option("--out", o.out);

  auto* sep = app.add_subcommand("separate", "separate a point");
  sep->add_option("--instance", o.instance)->required()->check(CLI::ExistingFile);
  sep->add_option("--point", o.point)->required()->check(CLI::ExistingFile);
  sep->add_option("--classes", o.classes)->required();
  sep->add_option("--tol", o.tol);
  sep->add_option("--out", o.out);

  auto* loop = app.add_subcommand("loop", "cutting-plane loop, CSV report");
  loop->add_option("--instance", o.instance)->required()->check(CLI::ExistingFile);
  loop->add_option("--objective", o.objective);
  loop->add_option("--seeds", o.seeds, "\"1-10\" or \"1,2,5\"; overrides the objective seed");
  loop->add_option("--classes", o.classes, "comma separated; \"lp\" for none, \"all\"");
  loop->add_option("--tol", o.tol);
  loop->add_option("--rounds", o.rounds);
  loop->add_option("--out", o.out);

  auto* verify = app.add_subcommand("verify", "check a constraint pool against the vertices");
  verify->add_option("--instance", o.instance)->required()->check(CLI::ExistingFile);
  verify->add_option("--pool", o.pool)->required()->check(CLI::ExistingFile);
  verify->add_option("--mode", o.mode, "validity or facet");
  verify->add_flag("--exact", o.exact);
  verify->add_option("--out", o.out);

  auto* hull = app.add_subcommand("hull", "certify hull membership with interval sets");
  hull->add_option("--instance", o.instance)->required()->check(CLI::ExistingFile);
  hull->add_option("--point", o.point, "JSON point; omitted: a random point of the hull")->check(CLI::ExistingFile);
  hull->add_option("--seed", o.seed);
  hull->add_flag("--certify", o.certify, "accepted for symmetry; certification is the only action");
  hull->add_option("--out", o.out);

  auto* pool = app.add_subcommand("pool", "build and export a pooling model");
  pool->add_option("--instance", o.instance)->required()->check(CLI::ExistingFile);
  pool->add_option("--formulation", o.formulation, "q or qcuts");
  pool->add_flag("--relax", o.relax, "also solve the relaxation without bilinear rows");
  pool->add_option("--out", o.out);

  CLI11_PARSE(app, argc, argv);
  try {
    if (gen->parsed()) return cmd_gen(o);
    if (solve->parsed()) return cmd_solve(o);
    if (sep->parsed()) return cmd_separate(o);
    if (loop->parsed()) return cmd_loop(o);
    if (verify->parsed()) return cmd_verify(o);
    if (hull->parsed()) return cmd_hull(o);
    if (pool->parsed()) return cmd_pool(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
