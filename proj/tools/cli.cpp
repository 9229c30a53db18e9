#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lyapdisp/catalog.hpp"
#include "lyapdisp/digitsum.hpp"
#include "lyapdisp/gle.hpp"
#include "lyapdisp/mcsim.hpp"
#include "lyapdisp/regroup.hpp"
#include "lyapdisp/report_io.hpp"

namespace lyapdisp::cli {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string family;
  std::size_t max_len = 0;
  std::optional<double> tol;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> trials;
  std::vector<double> ts;
  std::optional<unsigned> jmax;
  std::size_t k = 64;
  std::uint64_t a = 3, b = 0;
  std::uint64_t n_check = 4096;
  std::string json_path;
  std::string csv_path;
  unsigned threads = 0;
};

struct Io {
  std::ostream& out;
  std::ostream& err;
};

void emit(const std::string& path, const std::string& content, Io io) {
  if (path.empty()) return;
  if (path == "-") {
    io.out << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::InvalidArgument, "cannot open " + path + " for writing");
  f << content;
  if (!f) throw Error(Errc::InvalidArgument, "failed writing " + path);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json header(const char* kind) { return {{"schema_version", kSchemaVersion}, {"kind", kind}}; }

std::string g17(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

MatrixFamily resolve_family(const Flags& f, bool required = true) {
  if (f.family.empty()) {
    if (required) throw UsageError("--family is required");
    return {};
  }
  try {
    return get_family(f.family);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

std::size_t max_len_for(const Flags& f, const MatrixFamily& fam) {
  const std::size_t len = f.max_len ? f.max_len : default_max_len(fam.q);
  if (len < 8 || len > 48) throw UsageError("--max-len must lie in [8, 48]");
  return len;
}

// Text mode prints a summary unless a machine format goes to stdout.
bool quiet(const Flags& f) { return f.json_path == "-" || f.csv_path == "-"; }

std::ostream& line(std::ostream& os, const std::string& label, double v) {
  return os << std::left << std::setw(22) << label << std::setprecision(16) << v << '\n';
}

// --------------------------------------------------------------------------

int cmd_catalog(const Flags& f, Io io) {
  if (!f.family.empty()) {
    const MatrixFamily fam = resolve_family(f);
    const std::string doc = family_to_json(fam);
    if (!quiet(f)) io.out << doc;
    emit(f.json_path, doc, io);
    return kOk;
  }
  json j = header("catalog");
  j["families"] = json::array();
  std::ostringstream csv;
  csv << "name,aliases,q,dim\n";
  for (const auto& fam : builtin_families()) {
    std::string aliases;
    for (const auto& a : fam.aliases) aliases += (aliases.empty() ? "" : ";") + a;
    j["families"].push_back(
        {{"name", fam.name}, {"aliases", fam.aliases}, {"q", fam.q}, {"dim", fam.dim()}});
    csv << fam.name << ',' << aliases << ',' << fam.q << ',' << fam.dim() << '\n';
    if (!quiet(f))
      io.out << std::left << std::setw(6) << fam.name << " q=" << fam.q << " dim=" << fam.dim()
             << "  " << aliases << '\n';
  }
  emit(f.json_path, dump(j), io);
  emit(f.csv_path, csv.str(), io);
  return kOk;
}

int cmd_exponents(const Flags& f, Io io) {
  const MatrixFamily fam = resolve_family(f);
  ExponentOptions opts;
  opts.max_len = max_len_for(f, fam);
  opts.l_samples = f.ts;
  opts.parallel.threads = f.threads;
  const ExponentReport r = exponents(fam, opts);
  if (!quiet(f)) {
    io.out << "family " << r.family << " (q=" << r.q << ", max_len=" << r.max_len << ")\n";
    line(io.out, "lambda", r.lambda.accelerated);
    line(io.out, "kappa", r.kappa.accelerated);
    line(io.out, "mu", r.mu.accelerated);
    line(io.out, "sigma2", r.sigma2);
    line(io.out, "sigma2/ln2", r.sigma2 / std::log(2.0));
    line(io.out, "sigma2 error", r.sigma2_error);
    if (r.replica_l2) line(io.out, "L(2)/ln2", std::log(*r.replica_l2) / std::log(2.0));
    for (const auto& s : r.l_samples) line(io.out, "L(" + g17(s.t) + ")", s.value);
  }
  emit(f.json_path, to_json(r), io);
  if (!f.csv_path.empty()) {
    ParallelOptions par{f.threads};
    emit(f.csv_path, moment_series_csv(accumulate_moments(fam, opts.max_len, par)), io);
  }
  return kOk;
}

int cmd_lt(const Flags& f, Io io) {
  const MatrixFamily fam = resolve_family(f);
  if (f.ts.empty()) throw UsageError("lt needs at least one --t");
  const std::size_t len = max_len_for(f, fam);
  LOptions lo;
  if (f.tol) {
    if (!(*f.tol > 0.0)) throw UsageError("--tol must be positive");
    lo.tol = *f.tol;
  }
  const PowerSlabs slabs =
      accumulate_power_slabs(fam.factorization(), f.ts, len, ParallelOptions{f.threads});
  json j = header("generalized_exponent");
  j["family"] = fam.name;
  j["max_len"] = len;
  j["samples"] = json::array();
  std::ostringstream csv;
  csv << "t,L,truncation_error\n";
  for (std::size_t i = 0; i < f.ts.size(); ++i) {
    const LResult r = L_from_slabs(slabs, i, len, lo);
    j["samples"].push_back({{"t", f.ts[i]}, {"L", r.value}, {"truncation_error", r.truncation_error}});
    csv << g17(f.ts[i]) << ',' << g17(r.value) << ',' << g17(r.truncation_error) << '\n';
    if (!quiet(f)) {
      line(io.out, "L(" + g17(f.ts[i]) + ")", r.value);
      line(io.out, "  exp L", std::exp(r.value));
      line(io.out, "  truncation error", r.truncation_error);
    }
  }
  emit(f.json_path, dump(j), io);
  emit(f.csv_path, csv.str(), io);
  return kOk;
}

int cmd_replica(const Flags& f, Io io) {
  const MatrixFamily fam = resolve_family(f);
  std::vector<unsigned> ts;
  for (const double t : f.ts) {
    if (t < 1 || t > 8 || t != std::floor(t)) throw UsageError("replica needs integer --t in [1, 8]");
    ts.push_back(static_cast<unsigned>(t));
  }
  if (ts.empty()) ts = {1, 2};
  json j = header("replica");
  j["family"] = fam.name;
  j["samples"] = json::array();
  std::ostringstream csv;
  csv << "t,rho,L\n";
  for (const unsigned t : ts) {
    const double rho = replica_exponent(fam, t);
    j["samples"].push_back({{"t", t}, {"rho", rho}, {"L", std::log(rho)}});
    csv << t << ',' << g17(rho) << ',' << g17(std::log(rho)) << '\n';
    if (!quiet(f)) {
      line(io.out, "exp L(" + std::to_string(t) + ")", rho);
      line(io.out, "  L/ln2", std::log(rho) / std::log(2.0));
    }
  }
  emit(f.json_path, dump(j), io);
  emit(f.csv_path, csv.str(), io);
  return kOk;
}

int cmd_simulate(const Flags& f, Io io) {
  SimConfig c;
  c.family = resolve_family(f);
  c.k = f.k;
  c.trials = f.trials.value_or(10000);
  c.seed = f.seed;
  c.threads = f.threads;
  c.keep_log_norms = !f.csv_path.empty();
  if (c.k < 1 || c.k > (1u << 20)) throw UsageError("--k must lie in [1, 2^20]");
  if (c.trials < 2) throw UsageError("--trials must be at least 2");
  if (f.ts.size() > 1) throw UsageError("simulate takes at most one --t");
  if (!f.ts.empty() && !(std::abs(f.ts[0]) <= 4.0)) throw UsageError("--t must satisfy |t| <= 4");
  const SimResult r = f.ts.empty() ? simulate(c) : simulate_moment(c, f.ts[0]);
  if (!quiet(f)) {
    io.out << "family " << c.family.name << " k=" << r.k << " trials=" << r.trials
           << " degenerate=" << r.degenerate << '\n';
    line(io.out, "lambda_hat", r.lambda_hat);
    line(io.out, "  se", r.lambda_se);
    line(io.out, "sigma2_hat", r.sigma2_hat);
    line(io.out, "  se", r.sigma2_se);
    if (r.t) {
      line(io.out, "L_hat(" + g17(*r.t) + ")", r.growth);
      line(io.out, "  se", r.growth_se);
    }
  }
  emit(f.json_path, to_json(r), io);
  emit(f.csv_path, log_norms_csv(r), io);
  return kOk;
}

int cmd_regroup_check(const Flags& f, Io io) {
  std::vector<double> ts = f.ts.empty() ? std::vector<double>{0.0, 0.5, 1.0, 2.0} : f.ts;
  constexpr double kTol = 1e-8;
  const RegroupedQuadrinomial rq = regroup_quadrinomial();
  std::vector<VerifyRow> rows;
  for (int i = 1; i <= 2; ++i)
    for (int jj = 1; jj <= 2; ++jj) {
      VerifyRow row;
      // k = 16 lies beyond the range the constructor checks.
      row.quantity = "corner(" + std::to_string(i) + "," + std::to_string(jj) + ") at k=16";
      const Rational exact = regroup_corner(rq, i, jj, 16);
      Rational pattern = rq.coeff[i - 1][jj - 1];
      for (int p = 0; p < 16; ++p) pattern *= rq.ratio[i - 1][jj - 1];
      row.computed = exact.convert_to<double>();
      row.reference = pattern.convert_to<double>();
      row.tol = 0.0;
      row.pass = exact == pattern;
      rows.push_back(row);
    }
  for (const double t : ts) {
    VerifyRow row;
    row.quantity = "L(" + g17(t) + ") vs ln((2^t+1)/2)";
    row.computed = quadrinomial_regroup_L(t);
    row.reference = std::log((std::exp2(t) + 1.0) / 2.0);
    row.tol = kTol;
    row.pass = std::abs(row.computed - row.reference) <= kTol;
    rows.push_back(row);
  }
  bool all = true;
  std::ostringstream csv;
  csv << "quantity,computed,reference,tol,pass\n";
  for (const auto& r : rows) {
    all = all && r.pass;
    csv << '"' << r.quantity << "\"," << g17(r.computed) << ',' << g17(r.reference) << ','
        << g17(r.tol) << ',' << (r.pass ? "PASS" : "FAIL") << '\n';
    if (!quiet(f))
      io.out << (r.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(34) << r.quantity
             << std::setprecision(16) << r.computed << "  ref " << r.reference << '\n';
  }
  emit(f.json_path, to_json(rows, "quadrinomial"), io);
  emit(f.csv_path, csv.str(), io);
  return all ? kOk : kVerificationFailure;
}

int cmd_fluctuation(Fluctuation kind, const Flags& f, Io io) {
  const unsigned jmax = f.jmax.value_or(24);
  if (jmax < 2 || jmax > 36) throw UsageError("--jmax must lie in [2, 36]");
  const FluctuationScan s = scan_fluctuation(kind, std::uint64_t{1} << jmax);
  if (!quiet(f)) {
    io.out << to_string(kind) << " over 2 <= n <= 2^" << jmax << '\n';
    line(io.out, "inf", s.inf) << "  at n = " << s.inf_n << '\n';
    line(io.out, "sup", s.sup) << "  at n = " << s.sup_n << '\n';
    line(io.out, "mean", s.mean);
    io.out << "bound violations      " << s.bound_violations << '\n';
  }
  emit(f.json_path, to_json(s), io);
  if (!f.csv_path.empty())
    emit(f.csv_path, samples_csv(fluctuation_statistics(kind, jmax, jmax, 4096).samples), io);
  return kOk;
}

int cmd_dispersion(const Flags& f, Io io) {
  const MatrixFamily fam = resolve_family(f);
  const unsigned jmax = f.jmax.value_or(20);
  if (jmax < 10 || jmax > 28) throw UsageError("--jmax must lie in [10, 28]");
  ExponentOptions opts;
  opts.max_len = max_len_for(f, fam);
  opts.parallel.threads = f.threads;
  const DispersionParams p = dispersion_params(fam, opts);
  json j = header("dispersion_report");
  j["family"] = fam.name;
  j["analytic"] = json::parse(to_json(p, fam.name));
  if (!quiet(f)) {
    io.out << "family " << fam.name << '\n';
    line(io.out, "avg = L(2)/ln2", p.avg);
    line(io.out, "typ = sigma2/ln2", p.typ);
  }
  std::optional<EmpiricalDispersion> emp;
  if (fam.polynomial_mask) {
    emp = empirical_dispersion(fam, jmax);
    j["empirical"] = json::parse(to_json(*emp, fam.name));
    if (!quiet(f)) {
      line(io.out, "avg slope (j<=" + std::to_string(jmax) + ")", emp->avg_slope);
      line(io.out, "typ slope (j<=" + std::to_string(jmax) + ")", emp->typ_slope);
    }
  }
  emit(f.json_path, dump(j), io);
  if (!f.csv_path.empty()) {
    if (!emp) throw Error(Errc::InvalidArgument, "family has no counting polynomial for CSV rows");
    emit(f.csv_path, dispersion_csv(*emp), io);
  }
  return kOk;
}

int cmd_digits(const Flags& f, Io io) {
  const unsigned j = f.jmax.value_or(24);
  if (j < 4 || j > 40) throw UsageError("--jmax must lie in [4, 40]");
  if (f.a == 0) throw UsageError("--a must be positive");
  const std::uint64_t n = f.trials.value_or(1000000);
  if (n < 2) throw UsageError("--trials must be at least 2");
  const DigitComparison c = digit_distribution_compare(f.a, f.b, j, n, f.seed);
  if (!quiet(f)) {
    io.out << "#(N) vs #(" << f.a << "N+" << f.b << "), N < 2^" << j << ", " << c.samples
           << " samples\n";
    line(io.out, "mean", c.reference.mean) << "  vs " << c.shifted.mean << '\n';
    line(io.out, "variance", c.reference.variance) << "  vs " << c.shifted.variance << '\n';
    line(io.out, "normal cdf distance", c.reference.normal_cdf_distance)
        << "  vs " << c.shifted.normal_cdf_distance << '\n';
    line(io.out, "two-sample distance", c.cdf_distance);
  }
  emit(f.json_path, to_json(c), io);
  return kOk;
}

int cmd_fit(const Flags& f, Io io) {
  const MatrixFamily fam = resolve_family(f);
  if (f.n_check < 16 || f.n_check > kMaxRowCount) throw UsageError("--n-check must lie in [16, 2^18]");
  const LinearRepresentation rep = fit_linear_representation(fam, f.n_check);
  if (!quiet(f)) {
    io.out << "family " << fam.name << ": " << to_string(rep.order) << ", exact for n < "
           << rep.validated_below << "\nu =";
    for (Eigen::Index i = 0; i < rep.u.size(); ++i) io.out << ' ' << format_rational(rep.u(i));
    io.out << "\nv =";
    for (Eigen::Index i = 0; i < rep.v.size(); ++i) io.out << ' ' << format_rational(rep.v(i));
    io.out << '\n';
  }
  emit(f.json_path, to_json(rep, fam.name), io);
  return kOk;
}

int cmd_verify(const Flags& f, Io io) {
  std::vector<MatrixFamily> fams;
  if (f.family.empty())
    fams = builtin_families();
  else
    fams.push_back(resolve_family(f));
  for (const auto& fam : fams) max_len_for(f, fam);

  bool all = true;
  json suite = header("verify_suite");
  suite["families"] = json::array();
  std::ostringstream csv;
  csv << "family,quantity,computed,reference,tol,pass\n";
  for (const auto& fam : fams) {
    ExponentOptions opts;
    opts.max_len = max_len_for(f, fam);
    opts.parallel.threads = f.threads;
    const auto rows = verify_constants(fam, exponents(fam, opts));
    suite["families"].push_back(json::parse(to_json(rows, fam.name)));
    if (!quiet(f)) io.out << "== " << fam.name << " (max_len " << opts.max_len << ")\n";
    for (const auto& r : rows) {
      all = all && r.pass;
      csv << fam.name << ",\"" << r.quantity << "\"," << g17(r.computed) << ','
          << g17(r.reference) << ',' << g17(r.tol) << ',' << (r.pass ? "PASS" : "FAIL") << '\n';
      if (!quiet(f))
        io.out << (r.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(44) << r.quantity
               << std::setprecision(16) << std::setw(24) << r.computed << "tol " << r.tol << '\n';
    }
  }
  suite["pass"] = all;
  emit(f.json_path, fams.size() == 1 ? dump(suite["families"][0]) : dump(suite), io);
  emit(f.csv_path, csv.str(), io);
  if (!quiet(f)) io.out << (all ? "all rows pass\n" : "verification FAILED\n");
  return all ? kOk : kVerificationFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lyapunov exponents and dispersion of random binary-digit matrix products",
               "lyapdisp"};
  app.require_subcommand(1, 1);
  Flags f;

  auto family = [&](CLI::App* s) {
    s->add_option("--family", f.family, "built-in name or alias, or @path.json");
  };
  auto max_len = [&](CLI::App* s) {
    s->add_option("--max-len", f.max_len, "longest sentinel-free word (default 36, or 30 when q >= 3)");
  };
  auto threads = [&](CLI::App* s) {
    s->add_option("--threads", f.threads, "worker cap (default: hardware concurrency)");
  };
  auto outputs = [&](CLI::App* s, bool csv) {
    s->add_option("--json", f.json_path, "write the JSON report to this path ('-' for stdout)");
    if (csv) s->add_option("--csv", f.csv_path, "write CSV rows to this path ('-' for stdout)");
  };
  auto ts = [&](CLI::App* s, const char* help) { s->add_option("--t", f.ts, help); };

  auto* catalog = app.add_subcommand("catalog", "list built-in families, or dump one as JSON");
  family(catalog);
  outputs(catalog, true);

  auto* exps = app.add_subcommand("exponents", "lambda, kappa, mu, sigma2 from the corner series");
  family(exps);
  max_len(exps);
  threads(exps);
  ts(exps, "also report L(t) at these t");
  outputs(exps, true);

  auto* lt = app.add_subcommand("lt", "generalized exponent L(t) from F(s, t) = 1");
  family(lt);
  max_len(lt);
  threads(lt);
  ts(lt, "exponents t (repeatable)");
  lt->add_option("--tol", f.tol, "root tolerance in s (default 1e-12)");
  outputs(lt, true);

  auto* replica = app.add_subcommand("replica", "exp L(t) for integer t via Kronecker powers");
  family(replica);
  ts(replica, "integer t (default 1 and 2)");
  outputs(replica, true);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo estimates from random products");
  family(sim);
  threads(sim);
  sim->add_option("--k", f.k, "product length (default 64)");
  sim->add_option("--trials", f.trials, "number of products (default 10000)");
  sim->add_option("--seed", f.seed, "Philox key (default 1)");
  ts(sim, "also estimate L(t) for this t");
  outputs(sim, true);

  auto* regroup = app.add_subcommand("regroup-check", "quadrinomial regrouping against ln((2^t+1)/2)");
  ts(regroup, "t values (default 0 0.5 1 2)");
  outputs(regroup, true);

  CLI::App* fluct[2];
  fluct[0] = app.add_subcommand("phi", "scan of the digit-sum fluctuation Phi");
  fluct[1] = app.add_subcommand("psi", "scan of the 2^#(k) fluctuation Psi");
  for (auto* s : fluct) {
    s->add_option("--jmax", f.jmax, "scan every n <= 2^jmax (default 24)");
    outputs(s, true);
  }

  auto* disp = app.add_subcommand("dispersion", "analytic and empirical dispersion parameters");
  family(disp);
  max_len(disp);
  threads(disp);
  disp->add_option("--jmax", f.jmax, "top octave of the empirical fit (default 20)");
  outputs(disp, true);

  auto* digits = app.add_subcommand("digits", "distribution of #(aN+b) against #(N)");
  digits->add_option("--a", f.a, "multiplier (default 3)");
  digits->add_option("--b", f.b, "offset (default 0)");
  digits->add_option("--jmax", f.jmax, "N uniform below 2^jmax (default 24)");
  digits->add_option("--trials", f.trials, "samples (default 10^6)");
  digits->add_option("--seed", f.seed, "Philox key (default 1)");
  outputs(digits, false);

  auto* fit = app.add_subcommand("fit", "linear representation of the odd-coefficient counts");
  family(fit);
  fit->add_option("--n-check", f.n_check, "validate every count below this (default 4096)");
  outputs(fit, false);

  auto* verify = app.add_subcommand("verify", "compare against the reference constants");
  family(verify);
  max_len(verify);
  threads(verify);
  outputs(verify, true);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  }

  const Io io{out, err};
  try {
    if (*catalog) return cmd_catalog(f, io);
    if (*exps) return cmd_exponents(f, io);
    if (*lt) return cmd_lt(f, io);
    if (*replica) return cmd_replica(f, io);
    if (*sim) return cmd_simulate(f, io);
    if (*regroup) return cmd_regroup_check(f, io);
    if (*fluct[0]) return cmd_fluctuation(Fluctuation::Phi, f, io);
    if (*fluct[1]) return cmd_fluctuation(Fluctuation::Psi, f, io);
    if (*disp) return cmd_dispersion(f, io);
    if (*digits) return cmd_digits(f, io);
    if (*fit) return cmd_fit(f, io);
    if (*verify) return cmd_verify(f, io);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kComputationError;
  }
  return kUsageError;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace lyapdisp::cli
