#include "ordertypes/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include "ordertypes/aliases.hpp"
#include "ordertypes/algebra.hpp"
#include "ordertypes/models.hpp"
#include "ordertypes/sdp.hpp"
#include "ordertypes/store.hpp"
#include "ordertypes/two_circles.hpp"

namespace ordertypes::cli {

namespace {

using json = nlohmann::ordered_json;

class DomainFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string db = default_db_path();
  std::string format = "text";
  std::uint64_t seed = 42;
  std::uint64_t trials = 100000;
  int threads = 1;
};

struct Context {
  Config config;
  std::ostream& out;
  std::unique_ptr<OrderTypeStore> store;
  std::unique_ptr<FlagAlgebra> algebra;

  const OrderTypeStore& db() {
    if (!store) {
      if (!std::filesystem::exists(config.db)) {
        throw DomainFailure("database '" + config.db + "' not found; run `enumerate --max-size N` first");
      }
      store = std::make_unique<OrderTypeStore>(store_load(config.db));
    }
    return *store;
  }
  const FlagAlgebra& alg() {
    if (!algebra) algebra = std::make_unique<FlagAlgebra>(db());
    return *algebra;
  }

  void emit(const std::string& command, json result, const std::string& text) {
    if (config.format == "json") {
      json j;
      j["command"] = command;
      j["config"] = {{"db", config.db},
                     {"format", config.format},
                     {"seed", config.seed},
                     {"trials", config.trials},
                     {"threads", config.threads}};
      j["result"] = std::move(result);
      out << j.dump(2) << "\n";
      return;
    }
    out << "# " << command << " db=" << config.db << " seed=" << config.seed << " trials=" << config.trials
        << " threads=" << config.threads << "\n";
    out << text;
    if (!text.empty() && text.back() != '\n') out << "\n";
  }
};

std::string code_label(const OrderTypeStore& store, const CanonicalCode& code) { return describe(store, code); }

json rational_json(const Rational& r) { return to_string(r); }

std::string decimal(const Rational& r, int digits = 10) {
  std::ostringstream s;
  s << std::setprecision(digits) << r.get_d();
  return s.str();
}

AlgebraElement load_element(const OrderTypeStore& store, const std::string& spec) {
  if (std::filesystem::exists(spec)) {
    std::ifstream in(spec);
    std::stringstream buf;
    buf << in.rdbuf();
    return AlgebraElement::from_json(buf.str());
  }
  return AlgebraElement::of(resolve_order_type(store, spec));
}

std::string element_text(const OrderTypeStore& store, const AlgebraElement& e) {
  std::ostringstream s;
  for (const auto& [flag, c] : e.terms()) {
    s << to_string(c) << "\t" << flag.hex();
    if (flag.labels == 0) s << "\t" << code_label(store, flag.as_order_type());
    s << "\n";
  }
  if (e.terms().empty()) s << "0\n";
  return s.str();
}

json element_json(const AlgebraElement& e) { return json::parse(e.to_json()); }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainFailure("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Instance options shared by the sdp subcommands.
struct InstanceSpec {
  std::string target = "convex-4";
  int level = 6;
  std::string roots = "default";
  std::string refute_weights;
  std::string refute_c;
  std::string direction = "at-least";

  void attach(CLI::App* cmd) {
    cmd->add_option("--target", target, "order type whose density is bounded from below");
    cmd->add_option("--level", level, "N: size of the order types in the constraints");
    cmd->add_option("--roots", roots, "root preset: default, level8, or a comma list of root names");
    cmd->add_option("--refute-weights", refute_weights, "comma list of order types for a refutation program");
    cmd->add_option("--refute-c", refute_c, "threshold c of the refutation program");
    cmd->add_option("--direction", direction, "at-least or at-most")->check(CLI::IsMember({"at-least", "at-most"}));
  }

  SdpInstance build(Context& ctx, const std::vector<Chirotope>* roots_override = nullptr) const {
    const auto& store = ctx.db();
    const auto roots = roots_override ? *roots_override : root_preset(store, this->roots, level);
    if (!refute_weights.empty()) {
      if (refute_c.empty()) throw CLI::ValidationError("--refute-c", "required with --refute-weights");
      std::vector<CanonicalCode> weights;
      std::stringstream list(refute_weights);
      for (std::string item; std::getline(list, item, ',');) weights.push_back(resolve_order_type(store, item));
      return feasibility_instance(ctx.alg(), level, weights, parse_rational(refute_c),
                                  direction == "at-least" ? Direction::AtLeast : Direction::AtMost, roots,
                                  ctx.config.threads);
    }
    const auto small = resolve_order_type(store, target);
    return build_instance(ctx.alg(), TargetSpec::density_of(ctx.alg(), small, level), roots, ctx.config.threads);
  }
};

json verification_json(const OrderTypeStore& store, const SdpInstance& inst, const Verification& v) {
  json j;
  j["accepted"] = v.accepted;
  j["bound"] = v.accepted ? rational_json(v.bound) : json(nullptr);
  j["best_bound"] = rational_json(v.best_bound);
  j["best_bound_decimal"] = v.best_bound.get_d();
  if (v.violated) {
    const auto& w = inst.omegas[*v.violated];
    j["violated"] = {{"index", *v.violated}, {"code", w.hex()}, {"name", describe(store, w)}};
  }
  if (!v.reason.empty()) j["reason"] = v.reason;
  return j;
}

}  // namespace

std::string default_db_path() {
  const char* env = std::getenv("ORDERTYPES_DB");
  return env && *env ? env : "otdb.bin";
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Order types, flag algebra densities and semidefinite bounds", "ordertypes"};
  app.fallthrough();
  app.require_subcommand(1);
  Context ctx{Config{}, out, nullptr, nullptr};
  auto& cfg = ctx.config;
  app.add_option("--db", cfg.db, "order type database (default $ORDERTYPES_DB or otdb.bin)");
  app.add_option("--format", cfg.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--seed", cfg.seed, "random seed");
  auto* trials_opt = app.add_option("--trials", cfg.trials, "Monte Carlo trials");
  app.add_option("--threads", cfg.threads, "parallelism degree")->check(CLI::PositiveNumber);

  std::function<void()> action;

  // enumerate
  int max_size = 6;
  std::string strategy = "slabs";
  bool no_snap = false;
  auto* enumerate = app.add_subcommand("enumerate", "build or extend the order type database");
  enumerate->add_option("--max-size", max_size, "largest size to enumerate")->required()->check(CLI::Range(0, 10));
  enumerate->add_option("--strategy", strategy, "slabs or sectors")->check(CLI::IsMember({"slabs", "sectors"}));
  enumerate->add_flag("--no-snap", no_snap, "keep raw cell sample points as witnesses");
  enumerate->callback([&] {
    action = [&] {
      const auto start = std::chrono::steady_clock::now();
      OrderTypeStore store = std::filesystem::exists(cfg.db) ? store_load(cfg.db) : OrderTypeStore::base();
      EnumerateOptions opts;
      opts.strategy = strategy == "slabs" ? SamplingStrategy::Slabs : SamplingStrategy::VertexSectors;
      opts.threads = cfg.threads;
      opts.snap = !no_snap;
      while (store.max_size() < max_size) enumerate_next(store, opts);
      store_save(store, cfg.db);
      json counts = json::array();
      std::ostringstream text;
      for (int n = 0; n <= max_size; ++n) {
        counts.push_back(store.count(n));
        text << "size " << n << ": " << store.count(n) << "\n";
      }
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      ctx.emit("enumerate", {{"max_size", max_size}, {"counts", counts}, {"seconds", secs}}, text.str());
    };
  });

  // density
  std::string small, big, table;
  auto* density = app.add_subcommand("density", "exact density p(small, big), or a full table");
  density->add_option("--small", small, "order type (alias or hex code)");
  density->add_option("--big", big, "order type (alias or hex code)");
  density->add_option("--table", table, "k,m: all densities of size-k types in size-m types");
  density->callback([&] {
    action = [&] {
      const auto& store = ctx.db();
      if (!table.empty()) {
        int k = 0, m = 0;
        char comma = 0;
        std::istringstream in(table);
        if (!(in >> k >> comma >> m) || comma != ',') throw CLI::ValidationError("--table", "expected k,m");
        const auto csv = ctx.alg().density_csv(k, m);
        if (cfg.format == "csv") {
          out << csv;
          return;
        }
        const auto& t = ctx.alg().density_table(k, m);
        json rows = json::array();
        for (std::size_t b = 0; b < t.big_count; ++b) {
          json row = json::array();
          for (std::size_t s = 0; s < t.small_count; ++s) row.push_back(rational_json(t.at(b, s)));
          rows.push_back(row);
        }
        ctx.emit("density", {{"k", k}, {"m", m}, {"table", rows}}, csv);
        return;
      }
      if (small.empty() || big.empty()) throw CLI::ValidationError("density", "--small and --big are required");
      const auto s = resolve_order_type(store, small);
      const auto b = resolve_order_type(store, big);
      const auto v = ctx.alg().density(s, b);
      ctx.emit("density", {{"small", s.hex()}, {"big", b.hex()}, {"value", rational_json(v)}}, to_string(v));
    };
  });

  // split
  std::string w1, w2, whole;
  auto* split = app.add_subcommand("split", "split probability p(w1, w2; big)");
  split->add_option("--w1", w1)->required();
  split->add_option("--w2", w2)->required();
  split->add_option("--big", whole)->required();
  split->callback([&] {
    action = [&] {
      const auto& store = ctx.db();
      const auto a = resolve_order_type(store, w1), b = resolve_order_type(store, w2),
                 c = resolve_order_type(store, whole);
      const auto v = ctx.alg().split_probability(a, b, c);
      ctx.emit("split", {{"w1", a.hex()}, {"w2", b.hex()}, {"big", c.hex()}, {"value", rational_json(v)}},
               to_string(v));
    };
  });

  // lift
  std::string element;
  int level = 0;
  auto* lift = app.add_subcommand("lift", "rewrite an element at a larger level");
  lift->add_option("--element", element, "alias, hex code, or JSON file")->required();
  lift->add_option("--level", level)->required();
  lift->callback([&] {
    action = [&] {
      const auto& store = ctx.db();
      const auto e = ctx.alg().lift(load_element(store, element), level);
      ctx.emit("lift", element_json(e), element_text(store, e));
    };
  });

  // product
  std::string left, right;
  auto* product = app.add_subcommand("product", "algebra product of two elements");
  product->add_option("--a", left)->required();
  product->add_option("--b", right)->required();
  product->callback([&] {
    action = [&] {
      const auto& store = ctx.db();
      const auto e = ctx.alg().product(load_element(store, left), load_element(store, right));
      ctx.emit("product", element_json(e), element_text(store, e));
    };
  });

  // average
  std::string root_name, flag_hex;
  auto* average = app.add_subcommand("average", "averaging operator on a rooted element");
  average->add_option("--element", element, "JSON file of a rooted element");
  average->add_option("--flag", flag_hex, "hex code of a single flag");
  average->callback([&] {
    action = [&] {
      const auto& store = ctx.db();
      AlgebraElement in;
      if (!flag_hex.empty()) {
        in = AlgebraElement::of(FlagCode::from_hex(flag_hex));
      } else if (!element.empty()) {
        in = AlgebraElement::from_json(slurp(element));
      } else {
        throw CLI::ValidationError("average", "--flag or --element is required");
      }
      const auto e = ctx.alg().average(in);
      ctx.emit("average", element_json(e), element_text(store, e));
    };
  });

  // evaluate
  std::string omega;
  auto* evaluate = app.add_subcommand("evaluate", "finite evaluation of an element on an order type");
  evaluate->add_option("--element", element)->required();
  evaluate->add_option("--omega", omega)->required();
  evaluate->callback([&] {
    action = [&] {
      const auto& store = ctx.db();
      const auto w = resolve_order_type(store, omega);
      const auto v = ctx.alg().evaluate(load_element(store, element), w);
      ctx.emit("evaluate", {{"omega", w.hex()}, {"value", rational_json(v)}}, to_string(v));
    };
  });

  // flags
  int flag_size = 0;
  bool list_flags = false;
  auto* flags = app.add_subcommand("flags", "sigma-flags of a root");
  auto* flags_count = flags->add_subcommand("count", "number of flags of a given size");
  flags->require_subcommand(1);
  for (auto* cmd : {flags_count}) {
    cmd->add_option("--root", root_name, "empty, size-1, size-2, or an order type name")->required();
    cmd->add_option("--flag-size", flag_size)->required();
    cmd->add_flag("--list", list_flags, "also list the flag codes");
  }
  flags_count->callback([&] {
    action = [&] {
      const auto& store = ctx.db();
      const auto root = resolve_root(store, root_name);
      const auto& fl = ctx.alg().flags(root, flag_size);
      json codes = json::array();
      std::ostringstream text;
      text << fl.size() << "\n";
      for (const auto& f : fl) {
        codes.push_back(f.hex());
        if (list_flags) text << f.hex() << "\n";
      }
      json result = {{"root", root.sign_string()}, {"flag_size", flag_size}, {"count", fl.size()}};
      if (list_flags) result["flags"] = codes;
      ctx.emit("flags count", result, text.str());
    };
  });

  // sdp
  InstanceSpec spec;
  std::string sdpa_out, cert_path, solution_path, cert_out, denominator = "18446744073709551616";
  bool verbose = false;
  int max_iterations = 200;
  auto* sdp = app.add_subcommand("sdp", "semidefinite bounds");
  sdp->require_subcommand(1);
  auto* sdp_build = sdp->add_subcommand("build", "emit the program in SDPA sparse format");
  auto* sdp_verify = sdp->add_subcommand("verify", "exact check of a certificate");
  auto* sdp_bound = sdp->add_subcommand("bound", "solve (or ingest solver output), round and verify");
  for (auto* cmd : {sdp_build, sdp_verify, sdp_bound}) spec.attach(cmd);
  sdp_build->add_option("--out", sdpa_out, "output .dat-s path (stdout when absent)");
  sdp_verify->add_option("--cert", cert_path, "certificate JSON")->required();
  sdp_bound->add_option("--solution", solution_path, "external solver output in CSDP format");
  sdp_bound->add_option("--cert-out", cert_out, "write the rounded certificate here");
  sdp_bound->add_option("--denominator", denominator, "rounding denominator");
  sdp_bound->add_option("--max-iterations", max_iterations);
  sdp_bound->add_flag("--verbose", verbose);
  sdp_build->callback([&] {
    action = [&] {
      const auto inst = spec.build(ctx);
      json sizes = json::array();
      for (const auto& b : inst.blocks) sizes.push_back(b.basis.size());
      if (sdpa_out.empty()) {
        if (cfg.format == "json") {
          ctx.emit("sdp build", {{"sdpa", sdpa_string(inst)}, {"block_sizes", sizes}}, "");
        } else {
          emit_sdpa(inst, out);
        }
        return;
      }
      std::ofstream f(sdpa_out);
      if (!f) throw DomainFailure("cannot write '" + sdpa_out + "'");
      emit_sdpa(inst, f);
      std::ostringstream text;
      text << "wrote " << sdpa_out << ": " << inst.omegas.size() << " constraints, blocks";
      for (const auto& b : inst.blocks) text << ' ' << b.basis.size();
      text << ", shift " << to_string(inst.shift) << "\n";
      ctx.emit("sdp build",
               {{"path", sdpa_out},
                {"constraints", inst.omegas.size()},
                {"block_sizes", sizes},
                {"shift", rational_json(inst.shift)}},
               text.str());
    };
  });
  sdp_verify->callback([&] {
    action = [&] {
      const auto cert = Certificate::from_json(slurp(cert_path));
      const auto inst = spec.build(ctx, &cert.roots);
      const auto v = verify_certificate(inst, cert);
      const auto& store = ctx.db();
      std::ostringstream text;
      if (v.accepted) {
        text << "accepted: b = " << to_string(v.bound) << " (" << decimal(v.bound) << ")\n";
      } else {
        text << "rejected: " << v.reason;
        if (v.violated) {
          const auto& w = inst.omegas[*v.violated];
          text << " at omega #" << *v.violated << " " << w.hex() << " (" << describe(store, w) << ")";
        }
        text << "\n";
      }
      ctx.emit("sdp verify", verification_json(store, inst, v), text.str());
      if (!v.accepted) throw DomainFailure("certificate rejected");
    };
  });
  sdp_bound->callback([&] {
    action = [&] {
      const auto inst = spec.build(ctx);
      SolverSolution solution;
      double solver_b = 0;
      int iterations = 0;
      bool converged = true;
      if (!solution_path.empty()) {
        std::ifstream in(solution_path);
        if (!in) throw DomainFailure("cannot read '" + solution_path + "'");
        solution = parse_solution(in, inst);
      } else {
        SolverOptions opts;
        opts.verbose = verbose;
        opts.max_iterations = max_iterations;
        auto result = solve(inst, opts);
        solution = std::move(result.solution);
        solver_b = result.b;
        iterations = result.iterations;
        converged = result.converged;
      }
      IngestOptions io;
      io.denominator = Integer(denominator);
      const auto report = ingest_solution(inst, solution, io);
      const auto v = verify_certificate(inst, report.certificate);
      if (!cert_out.empty()) {
        std::ofstream f(cert_out);
        f << report.certificate.to_json() << "\n";
      }
      const auto& store = ctx.db();
      json result = verification_json(store, inst, v);
      result["solver_b"] = solution_path.empty() ? solver_b : report.solver_b;
      result["iterations"] = iterations;
      result["converged"] = converged;
      result["degraded"] = report.degraded;
      if (!cert_out.empty()) result["certificate"] = cert_out;
      std::ostringstream text;
      text << "solver b = " << std::setprecision(10) << (solution_path.empty() ? solver_b : report.solver_b)
           << "\n";
      if (v.accepted) {
        text << "certified b = " << to_string(v.bound) << " (" << decimal(v.bound) << ")\n";
      } else {
        text << "rounded certificate rejected: " << v.reason << "\n";
      }
      ctx.emit("sdp bound", result, text.str());
      if (!v.accepted) throw DomainFailure("rounded certificate rejected");
    };
  });

  // estimate
  std::string model_spec = "two-circles-limit";
  auto* estimate = app.add_subcommand("estimate", "Monte Carlo density of an order type under a measure");
  estimate->add_option("--model", model_spec,
                       "two-circles[:t[:inner]], two-circles-limit, cantor[:a,b], square, polygon:k, words[:depth]");
  estimate->add_option("--omega", omega)->required();
  estimate->callback([&] {
    action = [&] {
      const auto& store = ctx.db();
      const auto model = parse_model(model_spec);
      const auto w = resolve_order_type(store, omega);
      MonteCarloOptions mc;
      mc.threads = cfg.threads;
      const auto e = estimate_density(model, w, cfg.trials, cfg.seed, mc);
      if (cfg.format == "csv") {
        out << "model,omega,trials,seed,successes,mean,ci95_low,ci95_high\n"
            << model_name(model) << ',' << w.hex() << ',' << e.trials << ',' << e.seed << ',' << e.successes << ','
            << std::setprecision(10) << e.mean << ',' << e.lower << ',' << e.upper << "\n";
        return;
      }
      std::ostringstream text;
      text << std::setprecision(8) << e.mean << " [" << e.lower << ", " << e.upper << "]\n";
      ctx.emit("estimate", json::parse(e.to_json(model_name(model), w.hex())), text.str());
    };
  });

  // experiment two-circles
  int points = 2500;
  std::string t_text = "1/100", inner_share = "1/2";
  auto* experiment = app.add_subcommand("experiment", "empirical experiments");
  experiment->require_subcommand(1);
  auto* two_circles = experiment->add_subcommand("two-circles", "hull statistics of two-circle samples");
  two_circles->add_option("--n", points, "number of points N")->check(CLI::PositiveNumber);
  two_circles->add_option("--t", t_text, "inner radius; 0 for the t -> 0 regime");
  two_circles->add_option("--inner-share", inner_share, "mass of the inner circle");
  two_circles->callback([&] {
    action = [&] {
      const int runs = trials_opt->count() ? static_cast<int>(cfg.trials) : 100;
      const auto rep = two_circles_experiment(points, parse_rational(t_text), runs, cfg.seed,
                                              parse_rational(inner_share), cfg.threads);
      if (cfg.format == "csv") {
        out << "trial,hull,hull_fraction,covering_edges\n";
        for (std::size_t i = 0; i < rep.trials.size(); ++i) {
          const auto& tr = rep.trials[i];
          out << i << ',' << tr.hull << ',' << tr.hull_fraction << ',' << tr.covering_edges << "\n";
        }
        return;
      }
      std::ostringstream text;
      text << "hull fraction in [0.49, 0.51]: " << rep.in_band(0.49, 0.51) << " / " << rep.trials.size() << "\n"
           << "median covering edges: " << rep.median_covering() << "\n";
      ctx.emit("experiment two-circles", json::parse(rep.to_json()), text.str());
    };
  });

  // crosscheck cantor-words
  std::string a_text = "1/4", b_text = "1/16";
  auto* crosscheck = app.add_subcommand("crosscheck", "model cross-checks");
  crosscheck->require_subcommand(1);
  auto* cantor_words = crosscheck->add_subcommand("cantor-words", "Cantor rectangles against binary words");
  cantor_words->add_option("--a", a_text);
  cantor_words->add_option("--b", b_text);
  cantor_words->add_option("--omega", omega)->required();
  cantor_words->callback([&] {
    action = [&] {
      const auto& store = ctx.db();
      const auto w = resolve_order_type(store, omega);
      MonteCarloOptions mc;
      mc.threads = cfg.threads;
      const auto r = cantor_vs_words(parse_rational(a_text), parse_rational(b_text), w, cfg.trials, cfg.seed, mc);
      std::ostringstream text;
      text << std::setprecision(6) << "cantor " << r.cantor.mean << " [" << r.cantor.lower << ", " << r.cantor.upper
           << "]\nwords  " << r.words.mean << " [" << r.words.lower << ", " << r.words.upper << "]\n"
           << (r.agree ? "agree" : "disagree") << "\n";
      ctx.emit("crosscheck cantor-words",
               {{"a", a_text},
                {"b", b_text},
                {"omega", w.hex()},
                {"cantor", json::parse(r.cantor.to_json("cantor:" + a_text + "," + b_text, w.hex()))},
                {"words", json::parse(r.words.to_json("words:64", mirror(w).hex()))},
                {"agree", r.agree}},
               text.str());
    };
  });

  // cup-prob
  int s = 4;
  auto* cup = app.add_subcommand("cup-prob", "probability that s random words form a cup");
  cup->add_option("--s", s)->required()->check(CLI::Range(3, 60));
  cup->callback([&] {
    action = [&] {
      const auto f = exact_cup_probability(s);
      json result = {{"s", s}, {"exact", rational_json(f)}};
      std::ostringstream text;
      text << to_string(f) << "\n";
      if (trials_opt->count()) {
        MonteCarloOptions mc;
        mc.threads = cfg.threads;
        const auto e = estimate_cup_probability(s, cfg.trials, cfg.seed, 64, mc);
        result["estimate"] = json::parse(e.to_json("words:64", "cup-" + std::to_string(s)));
        text << std::setprecision(8) << e.mean << " [" << e.lower << ", " << e.upper << "]\n";
      }
      ctx.emit("cup-prob", result, text.str());
    };
  });

  try {
    std::vector<const char*> argv{"ordertypes"};
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  }
  try {
    if (action) action();
    return 0;
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace ordertypes::cli
