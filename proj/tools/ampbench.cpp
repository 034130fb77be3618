// ampbench: closed-form quantum amplification limits and their numerical
// verification, as a batch command-line tool. Subcommands:
//   closed-form  evaluate the closed-form fidelities at one (g, lambda)
//   simulate     run a truncated Fock-space channel on a coherent input
//   norms        operator norm and cross norm of the score operator
//   mc           Monte-Carlo estimates of the protocol fidelities
//   sweep        grids of closed-form quantities, CSV or JSON
//   verify       named verification suites (exit 1 on any failing check)
// Exit codes: 0 success, 1 check failure, 2 usage or domain error.

#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ampbench/a_operator.hpp"
#include "ampbench/channels.hpp"
#include "ampbench/closed_forms.hpp"
#include "ampbench/fock.hpp"
#include "ampbench/montecarlo.hpp"
#include "ampbench/sweep.hpp"
#include "ampbench/verify.hpp"

namespace {

using namespace ampbench;

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out_path);
  if (!file) throw std::runtime_error("cannot open output path: " + out_path);
  file << text;
  if (!file) throw std::runtime_error("failed writing output path: " + out_path);
}

ResultRow row(double g, double lambda, const std::string& quantity,
              double value, const std::string& meta) {
  return ResultRow{round12(g), round12(lambda), quantity, round12(value), meta};
}

struct CommonFlags {
  double g = 2.0;
  double lambda = 3.0;
  std::string format = "csv";
  std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--g", flags.g, "target amplitude gain");
  cmd->add_option("--lambda", flags.lambda, "prior inverse variance (1/V)");
  cmd->add_option("--format", flags.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", flags.out, "write output to this path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum limits and classical benchmarks for coherent-state "
               "amplification"};
  app.require_subcommand(1);

  // ----- closed-form -----
  CommonFlags cf;
  double cf_r = -1.0, cf_x = -1.0;
  int cf_cutoff = -1;
  CLI::App* closed = app.add_subcommand(
      "closed-form", "closed-form fidelities at one (g, lambda)");
  add_common(closed, cf);
  closed->add_option("--r", cf_r, "also evaluate the squeezer at this r");
  closed->add_option("--x", cf_x, "also evaluate the score-operator norm at this x");
  closed->add_option("--N", cf_cutoff, "also evaluate the heralding filter at this cutoff");

  // ----- simulate -----
  CommonFlags sim;
  std::string sim_channel = "squeezer";
  double sim_r = 0.5, sim_eta = 0.8, sim_x = 1.0;
  int sim_cutoff = 10, sim_dim = 40, sim_anc = 0;
  double alpha_re = 0.5, alpha_im = 0.0;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "run a truncated Fock-space channel on a coherent input");
  add_common(simulate, sim);
  simulate->add_option("--channel", sim_channel, "squeezer | attenuator | filter | mp")
      ->check(CLI::IsMember({"squeezer", "attenuator", "filter", "mp"}));
  simulate->add_option("--r", sim_r, "squeezing parameter");
  simulate->add_option("--eta", sim_eta, "attenuation (amplitude) parameter");
  simulate->add_option("--x", sim_x, "filter coefficient base");
  simulate->add_option("--N", sim_cutoff, "filter cutoff");
  simulate->add_option("--dim", sim_dim, "system truncation dimension");
  simulate->add_option("--anc-dim", sim_anc, "ancilla truncation dimension (default: dim)");
  simulate->add_option("--alpha-re", alpha_re, "Re of the input amplitude");
  simulate->add_option("--alpha-im", alpha_im, "Im of the input amplitude");

  // ----- norms -----
  CommonFlags nm;
  double nm_x = -1.0, nm_tol = 1e-3;
  int nm_dim = 40, nm_restarts = 20;
  CLI::App* norms = app.add_subcommand(
      "norms", "operator norm and cross norm of the score operator");
  add_common(norms, nm);
  norms->add_option("--x", nm_x, "thermal parameter (default: optimal for (g, lambda))");
  norms->add_option("--dim", nm_dim, "truncation for the cross-norm ascent");
  norms->add_option("--tol", nm_tol, "relative tolerance for the adaptive norm");
  norms->add_option("--restarts", nm_restarts, "cross-norm restarts");

  // ----- mc -----
  CommonFlags mc;
  double mc_r = -1.0;
  long mc_samples = 1000000;
  std::uint64_t mc_seed = 42;
  CLI::App* mc_cmd = app.add_subcommand(
      "mc", "Monte-Carlo estimates of the protocol fidelities");
  add_common(mc_cmd, mc);
  mc_cmd->add_option("--r", mc_r, "also estimate the squeezer at this r");
  mc_cmd->add_option("--samples", mc_samples, "sample count (>= 1000)");
  mc_cmd->add_option("--seed", mc_seed, "RNG seed");

  // ----- sweep -----
  std::vector<double> sweep_g{2.0};
  std::vector<double> sweep_lambda{0.0, 1.0, 2.0, 3.0, 5.0};
  std::vector<std::string> sweep_quantities{"f_det", "f_prob", "cft", "norm_gap"};
  std::string sweep_format = "csv", sweep_out;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "grid of closed-form quantities over (g, lambda)");
  sweep->add_option("--g", sweep_g, "gain values")->delimiter(',');
  sweep->add_option("--lambda", sweep_lambda, "lambda values")->delimiter(',');
  sweep->add_option("--quantities", sweep_quantities,
                    "subset of f_det,f_prob,cft,norm_gap")
      ->delimiter(',');
  sweep->add_option("--format", sweep_format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--out", sweep_out, "write output to this path");

  // ----- verify -----
  std::string verify_suite_name = "all";
  double verify_tol = 0.0;
  std::uint64_t verify_seed = 42;
  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", verify_suite_name,
                     "closed-forms | squeezer | a-operator | filters | "
                     "mp-equivalence | montecarlo | all");
  verify->add_option("--tol", verify_tol, "override per-check tolerances");
  verify->add_option("--seed", verify_seed, "seed for stochastic checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message / help text
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (closed->parsed()) {
      std::vector<ResultRow> rows;
      const OptimalSqueezer det = optimal_squeezer(cf.g, cf.lambda);
      rows.push_back(row(cf.g, cf.lambda, "f_det", det.fidelity,
                         "r_opt=" + format12(det.r)));
      rows.push_back(row(cf.g, cf.lambda, "f_prob",
                         probabilistic_fidelity(cf.g, cf.lambda), "exact"));
      rows.push_back(row(cf.g, cf.lambda, "cft",
                         classical_fidelity_threshold(cf.g, cf.lambda), "exact"));
      if (cf_r >= 0.0)
        rows.push_back(row(cf.g, cf.lambda, "f_squeezer_r",
                           squeezer_fidelity(cf.g, cf.lambda, cf_r),
                           "r=" + format12(cf_r)));
      if (cf_x > 0.0)
        rows.push_back(row(cf.g, cf.lambda, "a_norm_closed",
                           a_norm_closed(cf.g, cf.lambda, cf_x),
                           "x=" + format12(cf_x)));
      if (cf_cutoff >= 0) {
        const double x = cf_x > 0.0 ? cf_x : filter_base(cf.g, cf.lambda);
        const FilterResult fr =
            filter_fidelity_exact(cf.g, cf.lambda, x, cf_cutoff);
        rows.push_back(row(cf.g, cf.lambda, "filter_fidelity",
                           fr.conditional_fidelity,
                           "x=" + format12(x) + " N=" + std::to_string(cf_cutoff)));
        rows.push_back(row(cf.g, cf.lambda, "filter_success", fr.success_probability,
                           "x=" + format12(x) + " N=" + std::to_string(cf_cutoff)));
      }
      write_output(emit(rows, cf.format), cf.out);
      return 0;
    }

    if (simulate->parsed()) {
      const int anc = sim_anc > 0 ? sim_anc : sim_dim;
      const Complex alpha(alpha_re, alpha_im);
      const FockDim dim(sim_dim);
      const Vector a = coherent_state(alpha, dim).amplitudes;
      const FockOperator input{a * a.adjoint(), true};
      std::vector<ResultRow> rows;
      std::ostringstream meta;
      meta << "alpha=" << format12(alpha_re) << "+" << format12(alpha_im)
           << "i dim=" << sim_dim << " anc=" << anc;
      if (sim_channel == "squeezer") {
        const FockOperator out = apply_squeezer(input, sim_r, FockDim(anc));
        const Vector target = coherent_state(sim.g * alpha, dim).amplitudes;
        const double fid = (target.adjoint() * out.matrix * target)(0, 0).real();
        rows.push_back(row(sim.g, sim.lambda, "squeezer_fidelity_sim", fid,
                           meta.str() + " r=" + format12(sim_r)));
        rows.push_back(row(sim.g, sim.lambda, "squeezer_fidelity_pointwise",
                           squeezer_fidelity_pointwise(sim.g, sim_r, alpha),
                           "r=" + format12(sim_r)));
        rows.push_back(row(sim.g, sim.lambda, "output_trace", out.trace(), meta.str()));
      } else if (sim_channel == "attenuator") {
        const FockOperator out = apply_attenuator(input, sim_eta);
        const Vector target = coherent_state(sim_eta * alpha, dim).amplitudes;
        const double fid = (target.adjoint() * out.matrix * target)(0, 0).real();
        rows.push_back(row(sim.g, sim.lambda, "attenuator_fidelity_sim", fid,
                           meta.str() + " eta=" + format12(sim_eta)));
        rows.push_back(row(sim.g, sim.lambda, "output_trace", out.trace(), meta.str()));
      } else if (sim_channel == "filter") {
        const FilterOutcome fo = apply_filter(input, sim_x, sim_cutoff);
        rows.push_back(row(sim.g, sim.lambda, "filter_success_on_input",
                           fo.success_probability,
                           meta.str() + " x=" + format12(sim_x) +
                               " N=" + std::to_string(sim_cutoff)));
        const FilterResult fr =
            filter_fidelity_exact(sim.g, sim.lambda, sim_x, sim_cutoff);
        rows.push_back(row(sim.g, sim.lambda, "filter_fidelity",
                           fr.conditional_fidelity,
                           "x=" + format12(sim_x) + " N=" + std::to_string(sim_cutoff)));
      } else {  // mp
        const double c = sim.g / (1.0 + sim.lambda);
        const FockOperator out = heterodyne_measure_prepare(alpha, c, dim);
        const Vector target = coherent_state(sim.g * alpha, dim).amplitudes;
        const double fid = (target.adjoint() * out.matrix * target)(0, 0).real();
        rows.push_back(row(sim.g, sim.lambda, "mp_fidelity_sim", fid,
                           meta.str() + " c=" + format12(c)));
        rows.push_back(row(sim.g, sim.lambda, "output_trace", out.trace(), meta.str()));
      }
      write_output(emit(rows, sim.format), sim.out);
      return 0;
    }

    if (norms->parsed()) {
      const double x = nm_x > 0.0 ? nm_x : optimal_thermal_x(nm.g, nm.lambda);
      std::vector<ResultRow> rows;
      rows.push_back(row(nm.g, nm.lambda, "a_norm_closed",
                         a_norm_closed(nm.g, nm.lambda, x), "x=" + format12(x)));
      const NormEstimate est = operator_norm_numeric(nm.g, nm.lambda, x, nm_tol);
      rows.push_back(row(nm.g, nm.lambda, "a_norm_numeric", est.value,
                         "x=" + format12(x) + " dims=" + std::to_string(est.dim_used) +
                             (est.truncation_warning ? " TRUNCATION-WARNING" : "")));
      const AOperatorSpec spec{nm.g, nm.lambda, x, FockDim(nm_dim), FockDim(nm_dim)};
      const TwoModeOperator a = build_a(spec);
      const CrossNormResult cn = cross_norm_numeric(a, nm_restarts);
      rows.push_back(row(nm.g, nm.lambda, "cross_norm_lower_bound", cn.value,
                         "x=" + format12(x) + " dims=" + std::to_string(nm_dim) +
                             " restarts=" + std::to_string(cn.restarts_used) +
                             " (ascent lower bound)"));
      const CrossNormResult ct = cross_norm_numeric(partial_transpose(a), nm_restarts);
      rows.push_back(row(nm.g, nm.lambda, "cross_norm_pt_lower_bound", ct.value,
                         "x=" + format12(x) + " dims=" + std::to_string(nm_dim) +
                             " restarts=" + std::to_string(ct.restarts_used) +
                             " (ascent lower bound)"));
      write_output(emit(rows, nm.format), nm.out);
      return 0;
    }

    if (mc_cmd->parsed()) {
      std::vector<ResultRow> rows;
      const Estimate est = mc_cft(mc.g, mc.lambda, mc_samples, mc_seed);
      std::ostringstream meta;
      meta << "stderr=" << format12(est.stderror) << " n=" << est.n_samples
           << " seed=" << est.seed;
      rows.push_back(row(mc.g, mc.lambda, "mc_cft", est.mean, meta.str()));
      rows.push_back(row(mc.g, mc.lambda, "cft",
                         classical_fidelity_threshold(mc.g, mc.lambda), "exact"));
      if (mc_r >= 0.0) {
        const Estimate sq = mc_squeezer(mc.g, mc.lambda, mc_r, mc_samples, mc_seed);
        std::ostringstream m2;
        m2 << "r=" << format12(mc_r) << " stderr=" << format12(sq.stderror)
           << " n=" << sq.n_samples << " seed=" << sq.seed;
        rows.push_back(row(mc.g, mc.lambda, "mc_squeezer", sq.mean, m2.str()));
        rows.push_back(row(mc.g, mc.lambda, "f_squeezer_r",
                           squeezer_fidelity(mc.g, mc.lambda, mc_r),
                           "r=" + format12(mc_r)));
      }
      write_output(emit(rows, mc.format), mc.out);
      return 0;
    }

    if (sweep->parsed()) {
      SweepConfig config{sweep_g, sweep_lambda, sweep_quantities, sweep_format};
      write_output(emit(run_sweep(config), sweep_format), sweep_out);
      return 0;
    }

    if (verify->parsed()) {
      const VerifyOptions opts{verify_tol, verify_seed};
      const std::vector<VerifyReport> reports =
          verify_suite(verify_suite_name, opts);
      bool all_passed = true;
      for (const VerifyReport& r : reports) {
        all_passed = all_passed && r.passed;
        std::printf("[%s] %-70s computed=%.6g target=%.6g tol=%.2g%s (%.3fs)%s%s\n",
                    r.passed ? "PASS" : "FAIL", r.check.c_str(), r.computed,
                    r.target, r.tolerance, r.relative ? " (rel)" : "",
                    r.runtime_s, r.note.empty() ? "" : " | ",
                    r.note.c_str());
      }
      std::printf("%zu checks, %s\n", reports.size(),
                  all_passed ? "all passed" : "FAILURES PRESENT");
      return all_passed ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
