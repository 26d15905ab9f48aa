// Command-line front end. Every computation is a subcommand with CSV or JSON
// output; runs are pure functions of their flags and seed, so repeated
// invocations produce identical bytes.
//
// Exit codes: 0 success, 2 input/parse error, 3 precondition or range error,
// 4 solver non-convergence.
//
// The dense state-space cap (default 2^24 entries) can be overridden with the
// THINVAR_MAX_DENSE environment variable.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "thinvar/asep.hpp"
#include "thinvar/io.hpp"
#include "thinvar/profile.hpp"
#include "thinvar/sampling.hpp"
#include "thinvar/spin_chain.hpp"
#include "thinvar/thinning.hpp"

using namespace thinvar;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Shared CSV sink: stdout by default, --out redirects to a file.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw input_error("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void write_metadata(std::ostream& os, const std::string& command_line) {
  os << "# " << command_line << "\n";
}

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

std::vector<std::size_t> parse_size_list(const std::string& csv) {
  std::vector<std::size_t> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(static_cast<std::size_t>(std::stoul(tok)));
    } catch (const std::exception&) {
      throw input_error("cannot parse integer list entry \"" + tok + "\"");
    }
  }
  if (out.empty()) throw input_error("empty integer list");
  return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw input_error("cannot parse number list entry \"" + tok + "\"");
    }
  }
  if (out.empty()) throw input_error("empty number list");
  return out;
}

std::string config_string(const Alphabet& alphabet, const std::vector<std::size_t>& config) {
  std::string s;
  for (std::size_t c : config) s += alphabet.symbols()[c];
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thinning-invariant triangular arrays: construction, spin chains, exclusion"};
  app.require_subcommand(1);
  std::string command_line = join_args(argc, argv);

  // ---- thin -------------------------------------------------------------
  auto* thin_cmd = app.add_subcommand("thin", "apply the thinning transition to a stored array");
  std::string thin_in, thin_out;
  std::size_t thin_k = 1;
  thin_cmd->add_option("--in", thin_in, "joint measure JSON file")->required();
  thin_cmd->add_option("--k", thin_k, "target coordinate count")->required();
  thin_cmd->add_option("--out", thin_out, "output JSON file")->required();

  // ---- build ------------------------------------------------------------
  auto* build_cmd = app.add_subcommand("build", "build the n-coordinate array of a profile");
  std::vector<std::string> build_profiles;
  std::string build_out, build_mix;
  std::size_t build_n = 1;
  build_cmd->add_option("--profile", build_profiles, "profile JSON file (repeat to mix)")
      ->required();
  build_cmd->add_option("--n", build_n, "number of coordinates")->required();
  build_cmd->add_option("--mix", build_mix, "mixture weights, comma separated");
  build_cmd->add_option("--out", build_out, "output JSON file")->required();

  // ---- check ------------------------------------------------------------
  auto* check_cmd = app.add_subcommand("check", "verify thinning invariance of a profile family");
  std::string check_profile, check_out;
  std::size_t check_K = 5;
  double check_tol = 1e-12;
  check_cmd->add_option("--profile", check_profile, "profile JSON file")->required();
  check_cmd->add_option("--K", check_K, "largest row to build");
  check_cmd->add_option("--tol", check_tol, "total-variation tolerance");
  check_cmd->add_option("--out", check_out, "CSV output file (default stdout)");

  // ---- spin -------------------------------------------------------------
  auto* spin_cmd = app.add_subcommand("spin", "inhomogeneous-field pair spin chain");
  spin_cmd->require_subcommand(1);
  double spin_b = 0.0, spin_beta = 1.0;
  std::size_t spin_N = 8, spin_Nmax = 12;
  std::string spin_out;
  spin_cmd->add_option("--b", spin_b, "field strength");
  spin_cmd->add_option("--beta", spin_beta, "inverse temperature");
  spin_cmd->add_option("--N", spin_N, "system size");
  spin_cmd->add_option("--Nmax", spin_Nmax, "largest system size");
  spin_cmd->add_option("--out", spin_out, "CSV output file (default stdout)");
  // fallthrough lets shared flags appear after the nested subcommand name
  auto* spin_gibbs = spin_cmd->add_subcommand("gibbs", "exact Gibbs state and log partition");
  auto* spin_pressure = spin_cmd->add_subcommand("pressure", "log partition per site vs N");
  auto* spin_subadd = spin_cmd->add_subcommand("subadd", "subadditivity gaps of the log partition");
  auto* spin_ground = spin_cmd->add_subcommand("ground", "exhaustive ground states");
  auto* spin_phase = spin_cmd->add_subcommand("phase", "analytic ground-profile classification");
  for (auto* sub : {spin_gibbs, spin_pressure, spin_subadd, spin_ground, spin_phase})
    sub->fallthrough();

  // ---- asep -------------------------------------------------------------
  auto* asep_cmd = app.add_subcommand("asep", "mean-field asymmetric exclusion");
  asep_cmd->require_subcommand(1);
  double asep_q = 0.75, asep_rho = 0.5, asep_step = 0.01;
  std::size_t asep_N = 8, asep_n = 4;
  std::string asep_out, asep_Nlist = "6,8,10,12";
  asep_cmd->add_option("--q", asep_q, "jump bias in (1/2, 1]");
  asep_cmd->add_option("--rho", asep_rho, "particle density");
  asep_cmd->add_option("--N", asep_N, "site count");
  asep_cmd->add_option("--n", asep_n, "particle count");
  asep_cmd->add_option("--step", asep_step, "output grid step");
  asep_cmd->add_option("--Nlist", asep_Nlist, "comma-separated site counts for compare");
  asep_cmd->add_option("--out", asep_out, "CSV output file (default stdout)");
  auto* asep_stationary = asep_cmd->add_subcommand("stationary", "stationary sector measure");
  auto* asep_profile = asep_cmd->add_subcommand("profile", "limiting density profile");
  auto* asep_compare = asep_cmd->add_subcommand("compare", "finite-N densities vs the profile");
  auto* asep_figure1 = asep_cmd->add_subcommand("figure1", "density profiles over a q sweep");
  for (auto* sub : {asep_stationary, asep_profile, asep_compare, asep_figure1})
    sub->fallthrough();

  // ---- sample -----------------------------------------------------------
  auto* sample_cmd = app.add_subcommand("sample", "seeded Monte Carlo checks");
  sample_cmd->require_subcommand(1);
  std::uint64_t sample_seed = 1;
  std::size_t sample_samples = 100000, sample_n = 5;
  std::string sample_out, sample_profile_path, sample_nlist = "20,50,100,200";
  sample_cmd->add_option("--seed", sample_seed, "RNG seed");
  sample_cmd->add_option("--samples", sample_samples, "sample count");
  sample_cmd->add_option("--n", sample_n, "coordinate count");
  sample_cmd->add_option("--nlist", sample_nlist, "row sizes for the LLN sweep");
  sample_cmd->add_option("--profile", sample_profile_path,
                         "profile JSON file (default: kink at 1/2)");
  sample_cmd->add_option("--out", sample_out, "output file (default stdout)");
  auto* sample_lln = sample_cmd->add_subcommand("lln", "block-product law of large numbers");
  auto* sample_moments = sample_cmd->add_subcommand("moments", "order-statistic moments");
  auto* sample_joint = sample_cmd->add_subcommand("joint", "empirical joint law of a profile");
  for (auto* sub : {sample_lln, sample_moments, sample_joint}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*thin_cmd) {
      JointMeasure mu = read_joint_measure(thin_in);
      write_joint_measure(thin_to(mu, thin_k), thin_out);
    } else if (*build_cmd) {
      std::vector<double> mix(build_profiles.size(), 1.0 / double(build_profiles.size()));
      if (!build_mix.empty()) {
        mix = parse_double_list(build_mix);
        if (mix.size() != build_profiles.size())
          throw input_error("need one mixture weight per profile");
      }
      std::vector<double> weights;
      Alphabet alphabet({"0"});
      bool first = true;
      for (std::size_t i = 0; i < build_profiles.size(); ++i) {
        JointMeasure mu = build_joint(read_profile(build_profiles[i]), build_n);
        if (first) {
          alphabet = mu.alphabet();
          weights.assign(mu.size(), 0.0);
          first = false;
        } else if (mu.alphabet() != alphabet) {
          throw input_error("mixed profiles must share one alphabet");
        }
        for (std::size_t idx = 0; idx < mu.size(); ++idx)
          weights[idx] += mix[i] * mu.weight(idx);
      }
      write_joint_measure(JointMeasure(alphabet, build_n, std::move(weights)), build_out);
    } else if (*check_cmd) {
      PiecewiseProfile profile = read_profile(check_profile);
      std::vector<JointMeasure> family;
      for (std::size_t n = 1; n <= check_K; ++n) family.push_back(build_joint(profile, n));
      InvarianceReport report = check_thinning_invariance(family, check_tol);
      Output out(check_out);
      write_metadata(out.stream(), command_line);
      out.stream() << "k,max_tv_error\n";
      for (const auto& [k, err] : report.per_level_errors)
        out.stream() << k << "," << fmt(err) << "\n";
      out.stream() << "# max_tv_error = " << fmt(report.max_tv_error) << ", tol = "
                   << fmt(check_tol) << ", " << (report.pass ? "PASS" : "FAIL") << "\n";
    } else if (*spin_cmd) {
      Interaction phi = cw_interaction(spin_b);
      Output out(spin_out);
      std::ostream& os = out.stream();
      write_metadata(os, command_line);
      if (*spin_gibbs) {
        GibbsSolution g = gibbs(phi, spin_N, spin_beta);
        os << "# omega = " << fmt(g.log_partition) << "\n";
        os << "config,weight\n";
        for (std::size_t idx = 0; idx < g.measure.size(); ++idx)
          os << config_string(phi.alphabet(), g.measure.decode(idx)) << ","
             << fmt(g.measure.weight(idx)) << "\n";
      } else if (*spin_pressure) {
        os << "N,omega,omega_over_N\n";
        for (const auto& p : pressure_sequence(phi, spin_beta, spin_Nmax))
          os << p.N << "," << fmt(p.omega) << "," << fmt(p.omega_over_N) << "\n";
      } else if (*spin_subadd) {
        SubadditivityReport report = subadditivity_sweep(phi, spin_beta, spin_Nmax);
        os << "N1,N2,gap\n";
        for (const auto& e : report.entries)
          os << e.N1 << "," << e.N2 << "," << fmt(e.gap) << "\n";
        os << "# max_gap = " << fmt(report.max_gap) << ", max_lower_bound_violation = "
           << fmt(report.max_lower_bound_violation) << "\n";
      } else if (*spin_ground) {
        GroundReport report = ground_states_exhaustive(phi, spin_N);
        os << "# ground_energy = " << fmt(report.energy) << ", degeneracy = "
           << report.degeneracy << "\n";
        os << "config,energy\n";
        for (const auto& sigma : report.minimizers)
          os << config_string(phi.alphabet(), sigma) << "," << fmt(report.energy) << "\n";
      } else if (*spin_phase) {
        GroundProfileReport report = cw_ground_profile(spin_b);
        switch (report.kind) {
          case GroundProfileKind::two_constant:
            os << "# b < 1: two constant ground profiles (all minus, all plus)\n";
            break;
          case GroundProfileKind::unique_kink:
            os << "# b > 1: unique kink ground profile with interface at 1/2\n";
            break;
          case GroundProfileKind::continuum_of_kinks:
            os << "# b = 1: continuum of kink ground profiles, one per mean magnetization\n";
            break;
        }
        os << "# optimal_value = " << fmt(report.optimal_value) << "\n";
        os << "magnetization,interface\n";
        for (std::size_t i = 0; i < report.optimal_magnetizations.size(); ++i) {
          double mbar = report.optimal_magnetizations[i];
          os << fmt(mbar) << "," << fmt((1.0 - mbar) / 2.0) << "\n";
        }
      }
    } else if (*asep_cmd) {
      Output out(asep_out);
      std::ostream& os = out.stream();
      write_metadata(os, command_line);
      if (*asep_stationary) {
        SectorMeasure sm = stationary_measure(AsepModel(asep_N, asep_q), asep_n);
        os << "# residual_inf = " << fmt(sm.residual_inf) << "\n";
        os << "config,weight\n";
        for (std::size_t i = 0; i < sm.configs.size(); ++i) {
          std::string bits;
          for (std::size_t x = 1; x <= sm.N; ++x)
            bits += (sm.configs[i] >> (x - 1) & 1u) ? '1' : '0';
          os << bits << "," << fmt(sm.weights[i]) << "\n";
        }
      } else if (*asep_profile) {
        os << "t,u,phi\n";
        for (double t = 0.0; t <= 1.0 + 1e-12; t += asep_step) {
          double tc = std::min(t, 1.0);
          os << fmt(tc) << "," << fmt(closed_form_u(tc, asep_q, asep_rho)) << ","
             << fmt(closed_form_phi(tc, asep_q, asep_rho)) << "\n";
        }
      } else if (*asep_compare) {
        auto runs = finite_n_profile_comparison(asep_q, asep_rho, parse_size_list(asep_Nlist));
        os << "N,x,empirical,closed_form,abs_err,l1_error\n";
        for (const auto& run : runs)
          for (std::size_t x = 1; x <= run.N; ++x)
            os << run.N << "," << x << "," << fmt(run.empirical[x - 1]) << ","
               << fmt(run.closed_form[x - 1]) << ","
               << fmt(std::abs(run.empirical[x - 1] - run.closed_form[x - 1])) << ","
               << fmt(run.l1_error) << "\n";
      } else if (*asep_figure1) {
        os << "# assumption: density rho = " << fmt(asep_rho)
           << " (0.5 unless overridden with --rho)\n";
        std::vector<double> qs;
        for (int i = 0; i < 19; ++i) qs.push_back(0.525 + 0.025 * i);
        os << "t";
        for (double q : qs) os << ",phi_q=" << fmt(q);
        os << "\n";
        for (double t = 0.0; t <= 1.0 + 1e-12; t += asep_step) {
          double tc = std::min(t, 1.0);
          os << fmt(tc);
          for (double q : qs) os << "," << fmt(closed_form_phi(tc, q, asep_rho));
          os << "\n";
        }
      }
    } else if (*sample_cmd) {
      PiecewiseProfile profile =
          sample_profile_path.empty() ? kink_profile(0.5) : read_profile(sample_profile_path);
      if (*sample_lln) {
        // two halves, each paired with the indicator of one boundary symbol
        std::size_t m = profile.alphabet().size();
        std::vector<std::pair<double, double>> intervals{{0.0, 0.5}, {0.5, 1.0}};
        std::vector<double> f_first(m, 0.0), f_last(m, 0.0);
        f_first.front() = 1.0;
        f_last.back() = 1.0;
        std::vector<std::vector<double>> functions{f_first, f_last};
        auto rows = lln_check(profile, intervals, functions, parse_size_list(sample_nlist),
                              sample_samples, sample_seed);
        Output out(sample_out);
        write_metadata(out.stream(), command_line);
        out.stream() << "# seed = " << sample_seed << "\n";
        out.stream() << "n,estimate,stderr,closed_form,gap\n";
        for (const auto& row : rows)
          out.stream() << row.n << "," << fmt(row.estimate) << "," << fmt(row.stderr_) << ","
                       << fmt(row.closed_form) << "," << fmt(row.gap) << "\n";
      } else if (*sample_moments) {
        auto rows = moment_report(sample_n, sample_samples, sample_seed);
        Output out(sample_out);
        write_metadata(out.stream(), command_line);
        out.stream() << "# seed = " << sample_seed << "\n";
        out.stream() << "n,j,k,empirical,stderr,exact,z_score\n";
        for (const auto& row : rows)
          out.stream() << sample_n << "," << row.j << "," << row.k << ","
                       << fmt(row.empirical) << "," << fmt(row.stderr_) << ","
                       << fmt(row.exact) << "," << fmt(row.z_score) << "\n";
      } else if (*sample_joint) {
        JointMeasure target = build_joint(profile, sample_n);
        std::vector<double> counts(target.size(), 0.0);
        for (std::size_t s = 0; s < sample_samples; ++s) {
          SplitMix64 rng = SplitMix64::stream(sample_seed, s);
          counts[target.encode(sample_config(profile, sample_n, rng))] += 1.0;
        }
        for (double& c : counts) c /= static_cast<double>(sample_samples);
        JointMeasure empirical(profile.alphabet(), sample_n, std::move(counts));
        if (sample_out.empty()) throw input_error("sample joint requires --out");
        write_joint_measure(empirical, sample_out);
        std::cout << "# seed = " << sample_seed
                  << ", tv_to_exact = " << fmt(tv_distance(empirical, target)) << "\n";
      }
    }
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const precondition_error& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return 3;
  } catch (const solver_error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
