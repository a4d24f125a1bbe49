#include "cli_main.hpp"

#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "essclose/io.hpp"
#include "essclose/randomsets.hpp"
#include "essclose/render.hpp"

namespace essclose {

namespace {

Rat parse_rat_flag(const std::string& s, const char* what) {
  try {
    return Rat::parse(s);
  } catch (const std::exception&) {
    throw InputError(std::string("invalid rational for ") + what + ": '" + s + "'");
  }
}

std::vector<Rat> parse_rat_list(const std::string& csv, const char* what) {
  std::vector<Rat> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rat_flag(item, what));
  if (out.empty()) throw InputError(std::string("empty list for ") + what);
  return out;
}

struct ClosureArgs {
  std::string in, out;
  int d = 1;
  bool grid = false;
  int L = 6;
  std::string rho, tau;
};

int cmd_closure(const ClosureArgs& a) {
  SetDocument doc = set_from_json(load_json_file(a.in));
  bool grid_mode = a.grid || std::holds_alternative<DyadicGridSet>(doc);
  if (!grid_mode) {
    const auto& S = std::get<TaggedPieceSet>(doc);
    auto closed = essential_closure_exact(S, a.d);
    save_json_file(a.out, to_json(closed));
    std::cout << "closure: " << S.pieces.size() << " pieces -> " << closed.pieces.size()
              << " pieces (d = " << a.d << ")\n";
    return 0;
  }
  DyadicGridSet A = std::holds_alternative<DyadicGridSet>(doc)
                        ? std::get<DyadicGridSet>(doc)
                        : rasterize(std::get<TaggedPieceSet>(doc), a.L);
  GridClosureParams params;
  params.d = a.d;
  if (!a.rho.empty()) params.rho_schedule = parse_rat_list(a.rho, "--rho");
  if (!a.tau.empty()) params.tau = parse_rat_flag(a.tau, "--tau");
  auto closed = essential_closure_grid(A, params);
  save_json_file(a.out, to_json(closed));
  std::cout << "closure: " << A.cells.size() << " cells -> " << closed.cells.size()
            << " cells (d = " << a.d << ", L = " << A.L << ")\n";
  return 0;
}

struct SupportArgs {
  std::string copula, out;
  bool exact = false, mc = false;
  uint64_t n = 1000000;
  uint64_t seed = 7;
  int L = 6;
  int min_count = 5;
};

int cmd_support(const SupportArgs& a) {
  CopulaSpec C = copula_from_json(load_json_file(a.copula));
  if (a.exact == a.mc) throw InputError("support: choose exactly one of --exact / --mc");
  if (a.exact) {
    auto S = support_exact(C);
    save_json_file(a.out, to_json(S));
    std::cout << "support: " << S.pieces.size() << " pieces (exact)\n";
    return 0;
  }
  auto est = support_estimate(sample_copula(C, a.n, a.seed), a.L, a.min_count);
  save_json_file(a.out, to_json(est.grid));
  std::cout << "support: " << est.grid.cells.size() << " cells (L = " << a.L << ", n = " << a.n
            << ", min count " << a.min_count << ")\n";
  return 0;
}

struct CheckArgs {
  std::string set, conditions = "closedness,hyperplane", report;
};

int cmd_check(const CheckArgs& a) {
  SetDocument doc = set_from_json(load_json_file(a.set));
  bool closedness = false, hyperplane = false;
  {
    std::stringstream ss(a.conditions);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item == "closedness")
        closedness = true;
      else if (item == "hyperplane")
        hyperplane = true;
      else
        throw InputError("unknown condition '" + item + "' (use closedness, hyperplane)");
    }
  }
  json report{{"conditions", json::object()}};
  int violations = 0;
  if (closedness) {
    ClosednessResult res;
    if (std::holds_alternative<TaggedPieceSet>(doc)) {
      res = check_one_essential_closedness(std::get<TaggedPieceSet>(doc));
    } else {
      SupportEstimate est;
      est.grid = std::get<DyadicGridSet>(doc);
      res = check_one_essential_closedness(est);
    }
    report["conditions"]["closedness"] = to_json(res);
    violations += res.closed ? 0 : 1;
    std::cout << "closedness: " << (res.closed ? "pass" : "FAIL") << "\n";
  }
  if (hyperplane) {
    if (!std::holds_alternative<TaggedPieceSet>(doc))
      throw InputError("hyperplane check requires a symbolic set");
    auto v = check_hyperplane_condition(std::get<TaggedPieceSet>(doc));
    report["conditions"]["hyperplane"] = to_json(v);
    violations += static_cast<int>(v.size());
    std::cout << "hyperplane: " << (v.empty() ? "pass" : std::to_string(v.size()) + " violation(s)")
              << "\n";
  }
  if (!a.report.empty()) save_json_file(a.report, report);
  return violations == 0 ? 0 : 1;
}

struct SampleArgs {
  std::string copula, out;
  uint64_t n = 1000;
  uint64_t seed = 7;
};

int cmd_sample(const SampleArgs& a) {
  CopulaSpec C = copula_from_json(load_json_file(a.copula));
  auto cloud = sample_copula(C, a.n, a.seed);
  save_json_file(a.out, to_json(cloud));
  std::cout << "sample: " << cloud.points.size() << " points (seed " << a.seed << ")\n";
  return 0;
}

struct RenderArgs {
  std::string set, out;
  int width = 512, height = 512, stroke = 3;
  std::string proj = "1,2";
};

int cmd_render(const RenderArgs& a) {
  SetDocument doc = set_from_json(load_json_file(a.set));
  RenderConfig cfg;
  cfg.width = a.width;
  cfg.height = a.height;
  cfg.stroke = a.stroke;
  {
    std::stringstream ss(a.proj);
    std::string item;
    int idx = 0;
    while (std::getline(ss, item, ',') && idx < 2) {
      try {
        cfg.proj[static_cast<size_t>(idx++)] = std::stoi(item) - 1;  // 1-based flag
      } catch (const std::exception&) {
        throw InputError("invalid --proj axis '" + item + "'");
      }
    }
    if (idx != 2) throw InputError("--proj needs two axes, e.g. 1,2");
  }
  Canvas canvas = std::holds_alternative<TaggedPieceSet>(doc)
                      ? render(std::get<TaggedPieceSet>(doc), cfg)
                      : render(std::get<DyadicGridSet>(doc), cfg);
  write_pgm(a.out, canvas);
  std::cout << "render: " << a.out << " (" << cfg.width << "x" << cfg.height << ")\n";
  return 0;
}

struct PropsArgs {
  int count = 200;
  uint64_t seed = 1;
  std::string report;
};

int cmd_props(const PropsArgs& a) {
  if (a.count < 1) throw InputError("props: --count >= 1 required");
  static const char* names[7] = {"closure is closed", "nesting e < d", "interior closure",
                                 "monotone",          "union rule",    "empty criterion",
                                 "idempotent"};
  std::array<int, 7> fails{};
  json witnesses = json::array();
  for (int i = 0; i < a.count; ++i) {
    uint64_t s = a.seed + static_cast<uint64_t>(i);
    int k = 1 + static_cast<int>(s % 3);
    TaggedPieceSet A = random_piece_set(s * 7919 + 1, k, 4);
    TaggedPieceSet B = set_union(A, random_piece_set(s * 104729 + 2, k, 2));
    int d = 1 + static_cast<int>(s % static_cast<uint64_t>(k));
    int e = static_cast<int>(s % static_cast<uint64_t>(d));
    PropertyReport rep = check_properties(A, B, d, e);
    for (size_t j = 0; j < 7; ++j) {
      if (!rep.items[j].pass) {
        ++fails[j];
        witnesses.push_back(json{{"seed", s}, {"property", names[j]},
                                 {"witness", rep.items[j].witness}});
      }
    }
  }
  std::printf("%-22s %6s %6s\n", "property", "pass", "fail");
  int total_fails = 0;
  for (size_t j = 0; j < 7; ++j) {
    std::printf("%zu %-20s %6d %6d\n", j + 1, names[j], a.count - fails[j], fails[j]);
    total_fails += fails[j];
  }
  std::printf("%d sets checked, %d counterexample(s)\n", a.count, total_fails);
  if (!a.report.empty())
    save_json_file(a.report, json{{"sets", a.count},
                                  {"counterexamples", total_fails},
                                  {"witnesses", witnesses}});
  return total_fails == 0 ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"essential closures, copula supports, and their checks"};
  app.require_subcommand(1);

  ClosureArgs ca;
  auto* closure = app.add_subcommand("closure", "d-essential closure of a set");
  closure->add_option("--in", ca.in, "input set JSON")->required();
  closure->add_option("--d", ca.d, "target dimension")->required();
  closure->add_flag("--grid", ca.grid, "run the dyadic-grid operator");
  closure->add_option("--L", ca.L, "rasterization level for symbolic input in grid mode");
  closure->add_option("--rho", ca.rho, "window schedule, e.g. 1/8,1/16,1/32");
  closure->add_option("--tau", ca.tau, "measure threshold, e.g. 3/64");
  closure->add_option("--out", ca.out, "output set JSON")->required();

  SupportArgs sa;
  auto* support = app.add_subcommand("support", "support of a copula");
  support->add_option("--copula", sa.copula, "copula JSON")->required();
  support->add_flag("--exact", sa.exact, "symbolic support via the closure formula");
  support->add_flag("--mc", sa.mc, "sampled support estimate");
  support->add_option("--n", sa.n, "sample size");
  support->add_option("--seed", sa.seed, "RNG seed");
  support->add_option("--L", sa.L, "grid level");
  support->add_option("--min-count", sa.min_count, "cell occupancy threshold");
  support->add_option("--out", sa.out, "output set JSON")->required();

  CheckArgs ka;
  auto* check = app.add_subcommand("check", "necessary-condition checks on a set");
  check->add_option("--set", ka.set, "set JSON")->required();
  check->add_option("--conditions", ka.conditions, "comma list: closedness,hyperplane");
  check->add_option("--report", ka.report, "write a JSON report");

  SampleArgs ma;
  auto* sample = app.add_subcommand("sample", "draw from a copula");
  sample->add_option("--copula", ma.copula, "copula JSON")->required();
  sample->add_option("--n", ma.n, "sample size");
  sample->add_option("--seed", ma.seed, "RNG seed");
  sample->add_option("--out", ma.out, "output cloud JSON")->required();

  RenderArgs ra;
  auto* rendercmd = app.add_subcommand("render", "raster a set to a PGM image");
  rendercmd->add_option("--set", ra.set, "set JSON")->required();
  rendercmd->add_option("--out", ra.out, "output PGM path")->required();
  rendercmd->add_option("--width", ra.width, "pixels");
  rendercmd->add_option("--height", ra.height, "pixels");
  rendercmd->add_option("--proj", ra.proj, "axis pair for k = 3, 1-based (default 1,2)");
  rendercmd->add_option("--stroke", ra.stroke, "stroke thickness in pixels");

  PropsArgs pa;
  auto* props = app.add_subcommand("props", "closure property suite over random sets");
  props->add_option("--count", pa.count, "number of random sets");
  props->add_option("--seed", pa.seed, "base seed");
  props->add_option("--report", pa.report, "write a JSON report");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (closure->parsed()) return cmd_closure(ca);
    if (support->parsed()) return cmd_support(sa);
    if (check->parsed()) return cmd_check(ka);
    if (sample->parsed()) return cmd_sample(ma);
    if (rendercmd->parsed()) return cmd_render(ra);
    if (props->parsed()) return cmd_props(pa);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace essclose
