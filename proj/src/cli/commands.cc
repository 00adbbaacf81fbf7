#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "osr/cli.h"
#include "report.h"

namespace osr::cli {

namespace {

struct Options {
  std::string file;
  std::string k_list;
  int k_max = 8;
  std::optional<double> target;
  double tol = 1e-8;
  int q_max = 24;
  long long budget_words = Budgets{}.words;
  std::optional<long long> budget_dim;
  std::string format = "structured";
  std::uint64_t seed = 0;
  std::string methods = "all";
};

class UsageError : public Error {
 public:
  using Error::Error;
};

std::vector<int> ParseKList(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      const int k = std::stoi(item, &used);
      if (used != item.size() || k < 1) throw std::invalid_argument(item);
      out.push_back(k);
    } catch (const std::exception&) {
      throw UsageError("--k: invalid entry \"" + item + "\"");
    }
  }
  if (out.empty()) throw UsageError("--k: empty list");
  return out;
}

Budgets MakeBudgets(const Options& opt) {
  Budgets b;
  b.words = opt.budget_words;
  if (opt.budget_dim) {
    b.kron_dim = *opt.budget_dim;
    b.sym_dim = *opt.budget_dim;
  }
  return b;
}

Json BudgetsJson(const Budgets& b) {
  return {{"words", b.words}, {"kron_dim", b.kron_dim}, {"sym_dim", b.sym_dim}};
}

struct Outcome {
  Json config = Json::object();
  Json results = Json::object();
  std::vector<std::string> warnings;
  int exit_code = kExitOk;
  std::string error;
};

Outcome RunOsr(const TupleFile& in, const Options& opt) {
  Outcome out;
  const std::vector<int> ks = ParseKList(opt.k_list.empty() ? "1,2,4,8" : opt.k_list);
  const Budgets budgets = MakeBudgets(opt);
  SpectralOptions spectral;
  spectral.cluster_tol = opt.tol;
  out.config = {{"k", ks}, {"tol", opt.tol}, {"budgets", BudgetsJson(budgets)}};

  const MatrixTuple& x = in.tuple;
  const Superoperator t = BuildT(x);
  const double rho_t = SpectralRadius(t.mat());
  const MaximalSpectrum ms = ComputeMaximalSpectrum(t, spectral);
  for (const auto& w : ms.warnings) out.warnings.push_back(w);
  Json gelfand = Json::array();
  for (int k : ks) {
    Json row = {{"k", k}, {"power", GelfandSeqPower(x, k)}};
    try {
      row["words"] = GelfandSeqWords(x, k, budgets);
    } catch (const ResourceError& e) {
      row["words"] = nullptr;
      row["words_skipped"] = e.what();
    }
    gelfand.push_back(std::move(row));
  }
  out.results = {{"osr", std::sqrt(rho_t)},
                 {"rho_t", rho_t},
                 {"maximal_spectrum", ToJson(ms)},
                 {"gelfand", std::move(gelfand)}};
  return out;
}

Json SkippedRow(std::string_view method, int k, const std::string& reason) {
  return {{"method", std::string(method)},
          {"k", k},
          {"skipped", true},
          {"reason", reason}};
}

Outcome RunJsr(const TupleFile& in, const Options& opt, bool sym_only) {
  Outcome out;
  const std::vector<int> ks = ParseKList(opt.k_list.empty() ? "1,2" : opt.k_list);
  const Budgets budgets = MakeBudgets(opt);
  const MatrixTuple& x = in.tuple;

  std::vector<std::string> methods;
  if (sym_only) {
    methods = {"sym"};
  } else if (opt.methods == "all") {
    methods = {"words", "osr", "kron", "sym"};
  } else {
    std::stringstream ss(opt.methods);
    std::string m;
    while (std::getline(ss, m, ',')) {
      if (m != "words" && m != "osr" && m != "kron" && m != "sym") {
        throw UsageError("--methods: unknown method \"" + m + "\"");
      }
      methods.push_back(m);
    }
  }
  out.config = {{"k", ks},
                {"k_max", opt.k_max},
                {"methods", methods},
                {"budgets", BudgetsJson(budgets)}};

  const bool want_sym =
      std::find(methods.begin(), methods.end(), "sym") != methods.end();
  if (want_sym && !x.IsReal()) {
    out.warnings.push_back("symmetric-lift guarantee stated for real matrices");
  }

  Json rows = Json::array();
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  auto add = [&](const JsrBracket& b) {
    rows.push_back(ToJson(b));
    if (!b.heuristic) {
      lower = std::max(lower, b.lower);
      upper = std::min(upper, b.upper);
    }
  };
  Json bases = Json::array();
  Json perm_checks = Json::array();
  for (const auto& m : methods) {
    if (m == "words") {
      try {
        add(JsrBracketWords(x, opt.k_max, budgets));
      } catch (const ResourceError& e) {
        rows.push_back(SkippedRow("words", opt.k_max, e.what()));
      }
    } else if (m == "osr") {
      add(JsrBracketOsr(x));
    } else {
      for (int k : ks) {
        try {
          add(m == "kron" ? JsrBracketKron(x, k, budgets)
                          : JsrBracketSym(x, k, budgets));
        } catch (const ResourceError& e) {
          rows.push_back(
              SkippedRow(m == "kron" ? "kron_lift" : "sym_lift", k, e.what()));
          continue;
        }
        if (!sym_only) continue;
        const MonomialBasis basis(x.n(), 2 * k);
        bases.push_back({{"k", k},
                         {"degree", 2 * k},
                         {"dim", basis.size()},
                         {"exponents", basis.exponents()}});
        // A transposition and a cyclic shift of the tensor factors.
        std::vector<int> swap(2 * k), cycle(2 * k);
        std::iota(swap.begin(), swap.end(), 0);
        std::swap(swap[0], swap[1]);
        for (int p = 0; p < 2 * k; ++p) cycle[p] = (p + 1) % (2 * k);
        for (const auto& sigma : {swap, cycle}) {
          try {
            const double res = PermCommutationResidual(x, sigma, budgets);
            perm_checks.push_back(
                {{"sigma", sigma},
                 {"residual", res},
                 {"passed", res <= 1e-10},
                 {"top_sign", TopEigenvectorPermutationSign(x, sigma, budgets)}});
          } catch (const ResourceError& e) {
            perm_checks.push_back(
                {{"sigma", sigma}, {"skipped", true}, {"reason", e.what()}});
          }
        }
      }
    }
  }
  out.results = {{"brackets", std::move(rows)}};
  if (upper < std::numeric_limits<double>::infinity()) {
    out.results["combined"] = {{"lower", lower}, {"upper", upper}};
  }
  if (sym_only) {
    out.results["bases"] = std::move(bases);
    out.results["perm_checks"] = std::move(perm_checks);
  }
  return out;
}

Outcome RunCertify(const TupleFile& in, const Options& opt) {
  Outcome out;
  const MatrixTuple& x = in.tuple;
  const double osr = OuterSpectralRadius(x);
  const double target = opt.target.value_or(1.0);
  out.config = {{"target", opt.target ? Json(*opt.target) : Json(nullptr)},
                {"tol", opt.tol},
                {"seed", opt.seed}};
  if (!(osr < target)) {
    out.results = {{"status", "precondition_failed"},
                   {"osr", osr},
                   {"target", target}};
    out.exit_code = kExitDomain;
    out.error = "osr = " + FormatNumber(osr) + " is not below the target " +
                FormatNumber(target);
    return out;
  }
  const LyapunovCertificate cert =
      opt.target ? ComputeSimilarityCertificate(x, target)
                 : ComputeLyapunovCertificate(x);

  // Randomized spot check of the Stein identity on the scaled tuple.
  const MatrixTuple scaled = x.Scaled(1.0 / cert.scale);
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  ComplexVector v(x.n());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(normal(rng), normal(rng));
  ComplexMatrix r = cert.l - ComplexMatrix::Identity(x.n(), x.n());
  for (const auto& m : scaled) r -= m * cert.l * m.adjoint();
  const double spot = std::abs(v.dot(r * v)) / v.squaredNorm();

  const double l_norm = SpectralNorm(cert.l);
  const bool residual_ok = cert.residual <= opt.tol * (1.0 + l_norm);
  const bool row_norm_ok = cert.row_norm < target;
  out.results = ToJson(cert);
  out.results["osr"] = osr;
  out.results["target"] = target;
  out.results["spot_check"] = {{"seed", opt.seed}, {"residual", spot}};
  out.results["contracts"] = {{"residual_ok", residual_ok},
                              {"row_norm_ok", row_norm_ok}};
  out.results["status"] = residual_ok && row_norm_ok ? "certified" : "failed";
  if (!(residual_ok && row_norm_ok)) {
    out.exit_code = kExitNumerical;
    out.error = "certificate contracts do not hold";
  }
  return out;
}

Outcome RunDynamics(const TupleFile& in, const Options& opt) {
  Outcome out;
  DynamicsConfig config;
  config.q_max = opt.q_max;
  config.ideal_tol = opt.tol;
  out.config = {{"q_max", config.q_max},
                {"phase_tol", config.phase_tol},
                {"n_terms", config.n_terms},
                {"cesaro_tol", config.cesaro_tol},
                {"kraus_tol", config.kraus_tol},
                {"ideal_tol", config.ideal_tol},
                {"dichotomy_tol", config.dichotomy_tol},
                {"crosscheck_tol", config.crosscheck_tol},
                {"rank_tol", config.rank_tol}};
  const DynamicsReport report = AnalyzeDynamics(in.tuple, config);
  out.results = ToJson(report);
  out.warnings = report.warnings;
  if (report.t_hat_rank == 1) {
    try {
      out.results["pf_conjugation"] = ToJson(ComputePfConjugation(in.tuple, config));
    } catch (const NumericalError& e) {
      out.results["pf_conjugation"] = {{"error", e.what()}};
    }
  }
  return out;
}

std::string_view ErrorType(int code) {
  switch (code) {
    case kExitUsage:
      return "usage";
    case kExitDomain:
      return "domain";
    case kExitNumerical:
      return "numerical";
  }
  return "ok";
}

}  // namespace

CliResult RunCli(const std::vector<std::string>& args) {
  CliResult result;
  Options opt;
  CLI::App app{"Outer spectral radius toolkit"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--k", opt.k_list, "Comma separated list of k values");
  app.add_option("--k-max", opt.k_max, "Longest word for the enumeration bracket")
      ->check(CLI::PositiveNumber);
  app.add_option("--target", opt.target, "Row norm target for certify");
  app.add_option("--tol", opt.tol, "Tolerance (see README for its use per command)");
  app.add_option("--q-max", opt.q_max, "Largest enumerated phase order")
      ->check(CLI::PositiveNumber);
  app.add_option("--budget-words", opt.budget_words, "Word enumeration budget");
  app.add_option("--budget-dim", opt.budget_dim, "Lift dimension budget");
  app.add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"human", "structured"}));
  app.add_option("--seed", opt.seed, "Seed for randomized spot checks");
  app.add_option("--methods", opt.methods, "all or a list of words,osr,kron,sym");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"osr", "Outer spectral radius, maximal spectrum, Gelfand sequences"},
      {"jsr", "Joint spectral radius brackets"},
      {"certify", "Lyapunov / similarity certificate"},
      {"dynamics", "Asymptotic dynamics of the induced CP map"},
      {"symlift", "Symmetric lift brackets with basis dump"},
  };
  for (const auto& [name, help] : commands) {
    app.add_subcommand(name, help)
        ->add_option("file", opt.file, "Tuple document")
        ->required();
  }

  std::ostringstream out_stream, err_stream;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out_stream, err_stream);
    result.exit_code = code == 0 ? kExitOk : kExitUsage;
    result.output = out_stream.str();
    result.error = err_stream.str();
    return result;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  const auto start = std::chrono::steady_clock::now();
  std::optional<TupleFile> input;
  Outcome outcome;
  try {
    input = LoadTupleFile(opt.file);
    if (command == "osr") {
      outcome = RunOsr(*input, opt);
    } else if (command == "jsr") {
      outcome = RunJsr(*input, opt, false);
    } else if (command == "symlift") {
      outcome = RunJsr(*input, opt, true);
    } else if (command == "certify") {
      outcome = RunCertify(*input, opt);
    } else {
      outcome = RunDynamics(*input, opt);
    }
  } catch (const UsageError& e) {
    outcome.exit_code = kExitUsage;
    outcome.error = e.what();
  } catch (const ParseError& e) {
    outcome.exit_code = kExitUsage;
    outcome.error = e.what();
  } catch (const DimensionError& e) {
    outcome.exit_code = kExitUsage;
    outcome.error = e.what();
  } catch (const DomainError& e) {
    outcome.exit_code = kExitDomain;
    outcome.error = e.what();
  } catch (const ResourceError& e) {
    outcome.exit_code = kExitDomain;
    outcome.error = e.what();
  } catch (const NumericalError& e) {
    outcome.exit_code = kExitNumerical;
    outcome.error = e.what();
  }
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();

  Json report;
  report["command"] = command;
  if (input) {
    report["input_digest"] = input->digest;
    report["input"] = {{"name", input->name ? Json(*input->name) : Json(nullptr)},
                       {"n", input->tuple.n()},
                       {"d", input->tuple.d()}};
  }
  report["config"] = outcome.config;
  report["results"] = outcome.results;
  report["warnings"] = outcome.warnings;
  if (outcome.exit_code != kExitOk) {
    report["error"] = {{"type", std::string(ErrorType(outcome.exit_code))},
                       {"message", outcome.error}};
  }
  report["timings"] = {{"total_ms", ms}};

  result.exit_code = outcome.exit_code;
  result.output =
      opt.format == "human" ? RenderHuman(report) : report.dump(2) + "\n";
  if (!outcome.error.empty()) result.error = "error: " + outcome.error + "\n";
  return result;
}

}  // namespace osr::cli
