#include "netcs/cli.hpp"

#include "netcs/bench.hpp"
#include "netcs/design.hpp"
#include "netcs/errors.hpp"
#include "netcs/io.hpp"
#include "netcs/structure_inference.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <optional>

namespace netcs {

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::string out;
  double tol = kDefaultRankTol;
};

// Writes to --out when given, otherwise to stdout.
void emit(const Globals& g, std::ostream& out, const std::string& text) {
  if (g.out.empty())
    out << text;
  else
    write_file(g.out, text);
}

std::vector<int> to_zero_based(const std::vector<int>& one_based, int p) {
  std::vector<int> out;
  for (int i : one_based) {
    if (i < 1 || i > p) throw ParameterError("state index " + std::to_string(i) + " out of range");
    out.push_back(i - 1);
  }
  return out;
}

std::vector<Strategy> parse_strategies(const std::vector<std::string>& names) {
  std::vector<Strategy> out;
  for (const auto& n : names) out.push_back(strategy_from_string(n));
  return out;
}

Network load_network(const std::string& path, int ring) {
  if (ring > 0) return ring_network(ring);
  if (path.empty()) throw ParameterError("give --network <file> or --ring <p>");
  try {
    return network_from_json(Json::parse(read_file(path)));
  } catch (const Json::parse_error& e) {
    throw ParameterError(std::string("network JSON: ") + e.what());
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse network reconstruction from steady-state experiments", "netcs"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--out", g.out, "output file or directory");
  app.add_option("--tol", g.tol, "rank tolerance sigma_min/sigma_max")->check(CLI::PositiveNumber);

  // generate
  auto* gen = app.add_subcommand("generate", "random or ring network as JSON");
  int gen_ring = 0, gen_p = 20, gen_k = 2;
  double gen_gain = 0.5;
  gen->add_option("--ring", gen_ring, "ring network with p states");
  gen->add_option("--p", gen_p, "number of states");
  gen->add_option("--k", gen_k, "maximum in-degree");
  gen->add_option("--gain-bound", gen_gain, "bound on steady-state gains");

  // simulate
  auto* sim = app.add_subcommand("simulate", "steady-state data set from a network and plans");
  std::string sim_network, sim_plans;
  int sim_ring = 0;
  sim->add_option("--network", sim_network, "network JSON");
  sim->add_option("--ring", sim_ring, "use ring_network(p)");
  sim->add_option("--plans", sim_plans, "plan JSON {\"plans\":[{\"inputs\":[...],\"magnitudes\":[...]}]}")
      ->required();

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "recover Q and P from a data set");
  std::string rec_data, rec_method = "l0";
  int rec_k = 1;
  rec->add_option("--data", rec_data, "directory with Y.csv, U.csv [, plans.json]")->required();
  rec->add_option("--k", rec_k, "sparsity level")->required();
  rec->add_option("--method", rec_method, "l0 or bp");

  // infer-structure
  auto* inf = app.add_subcommand("infer-structure", "particular solution and constraint pattern");
  std::string inf_network;
  int inf_ring = 0;
  std::vector<int> inf_perturbed;
  inf->add_option("--network", inf_network, "network JSON");
  inf->add_option("--ring", inf_ring, "use ring_network(p)");
  inf->add_option("--perturbed", inf_perturbed, "perturbed states (1-based)")
      ->required()
      ->delimiter(',');

  // design
  auto* des = app.add_subcommand("design", "iterative experiment design until uniqueness");
  std::string des_network, des_strategy = "targeted";
  int des_ring = 0, des_l = 1, des_k = 1, des_max_m = 0;
  des->add_option("--network", des_network, "network JSON");
  des->add_option("--ring", des_ring, "use ring_network(p)");
  des->add_option("--strategy", des_strategy, "random, biased or targeted");
  des->add_option("--l", des_l, "inputs per experiment");
  des->add_option("--k", des_k, "sparsity level");
  des->add_option("--max-m", des_max_m, "experiment budget (default 8p)");

  // benches
  int b_p = 20, b_k = 2, b_trials = 100;
  bool b_fast = false;
  std::vector<std::string> b_strategies{"random", "biased", "targeted"};
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--p", b_p, "number of states");
    sub->add_option("--k", b_k, "maximum in-degree");
    sub->add_option("--trials", b_trials, "number of random networks");
    sub->add_flag("--fast", b_fast, "p = 10, 25 trials");
  };
  auto* bu = app.add_subcommand("bench-uniqueness", "mean experiments to a unique solution");
  add_common(bu);
  std::vector<int> bu_l;
  bu->add_option("--strategies", b_strategies)->delimiter(',');
  bu->add_option("--l", bu_l, "inputs per experiment (default 1..p)")->delimiter(',');

  auto* bc = app.add_subcommand("bench-coherence", "mean sensing-matrix coherence vs gain");
  add_common(bc);
  std::vector<double> bc_gains{0.5, 1.0, 2.0};
  int bc_max_m = 0, bc_inputs = 4;
  bc->add_option("--gain-bounds", bc_gains)->delimiter(',');
  bc->add_option("--max-m", bc_max_m, "largest number of experiments (default p)");
  bc->add_option("--inputs", bc_inputs, "inputs per experiment");

  auto* bb = app.add_subcommand("bench-bp", "basis pursuit success rate");
  add_common(bb);
  int bb_l = 4;
  bb->add_option("--strategies", b_strategies)->delimiter(',');
  bb->add_option("--l", bb_l, "inputs per experiment");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code != 0) {
      err << app.help();
      return 1;
    }
    return 0;
  }

  try {
    Tolerances tol;
    tol.rank = g.tol;
    if (b_fast) {
      b_p = 10;
      b_trials = 25;
    }

    if (*gen) {
      const Network net = gen_ring > 0 ? ring_network(gen_ring)
                                       : random_network(gen_p, gen_k, gen_gain, g.seed);
      emit(g, out, network_to_json(net).dump(2) + "\n");
    } else if (*sim) {
      const Network net = load_network(sim_network, sim_ring);
      const DataSet data = simulate(net, plans_from_json(Json::parse(read_file(sim_plans))));
      if (g.out.empty()) {
        out << "# Y\n" << matrix_to_csv(data.Y) << "# U\n" << matrix_to_csv(data.U);
      } else {
        save_dataset(data, g.out);
      }
    } else if (*rec) {
      const DataSet data = load_dataset(rec_data);
      const Reconstruction r = reconstruct_network(data, rec_k, method_from_string(rec_method), tol);
      Json report = Json::array();
      for (const auto& row : r.rows) report.push_back(to_json(row));
      if (g.out.empty()) {
        out << "# Qhat\n" << matrix_to_csv(r.Qhat) << "# Phat\n" << matrix_to_csv(r.Phat);
        out << report.dump(2) << "\n";
      } else {
        const std::filesystem::path dir = g.out;
        write_file(dir / "Qhat.csv", matrix_to_csv(r.Qhat));
        write_file(dir / "Phat.csv", matrix_to_csv(r.Phat));
        write_file(dir / "report.json", report.dump(2) + "\n");
      }
    } else if (*inf) {
      const Network net = load_network(inf_network, inf_ring);
      const SteadyGains gains = steady_gains(net);
      const Partition part = Partition::from_perturbed(net.p, to_zero_based(inf_perturbed, net.p));
      const ParticularSolution ps = particular_solution(gains.Q0, gains.P0, part);
      const StructurePattern qhat = StructurePattern::from_matrix(ps.Qhat);
      const StructurePattern qc = constraint_matrix(qhat, part);
      if (g.out.empty()) {
        out << "Qhat:\n" << qhat.grid() << "Qc:\n" << qc.grid();
      } else {
        const std::filesystem::path dir = g.out;
        write_file(dir / "qhat.txt", qhat.grid());
        write_file(dir / "qc.txt", qc.grid());
        write_file(dir / "structure.json",
                   Json{{"qhat", to_json(qhat)}, {"qc", to_json(qc)}}.dump(2) + "\n");
      }
    } else if (*des) {
      const Network net = load_network(des_network, des_ring);
      const int max_m = des_max_m > 0 ? des_max_m : 8 * net.p;
      const DesignOutcome r = run_until_unique(net, strategy_from_string(des_strategy), des_l,
                                               des_k, max_m, g.seed, tol.rank);
      emit(g, out, history_jsonl(r.final_state));
      err << (r.unique ? "unique after " : "budget exhausted after ") << r.m_required
          << " experiments\n";
    } else if (*bu) {
      if (bu_l.empty())
        for (int l = 1; l <= b_p; ++l) bu_l.push_back(l);
      emit(g, out, uniqueness_csv(bench_uniqueness(b_p, b_k, b_trials,
                                                   parse_strategies(b_strategies), bu_l, g.seed)));
    } else if (*bc) {
      emit(g, out, coherence_csv(bench_coherence(b_p, b_k, bc_gains, b_trials, g.seed, bc_max_m,
                                                 bc_inputs)));
    } else if (*bb) {
      emit(g, out, bp_csv(bench_bp(b_p, b_k, bb_l, b_trials, parse_strategies(b_strategies),
                                   g.seed)));
    }
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace netcs
