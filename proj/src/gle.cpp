#include "lyapdisp/gle.hpp"

#include <cmath>
#include <tuple>

#include "lyapdisp/detail/parallel_fold.hpp"

namespace lyapdisp {

using detail::CompensatedSum;

namespace {

struct MomentAcc {
  std::vector<std::uint64_t> words;
  std::vector<CompensatedSum> log_sum, log_sq_sum;
  std::uint64_t skipped = 0;
};

struct PowerAcc {
  std::vector<std::vector<CompensatedSum>> sums;  // [t][len]
  std::uint64_t skipped = 0;
};

std::vector<double> cumulative(const std::vector<MomentSlab>& slabs, double MomentSlab::*field,
                               double prefactor) {
  std::vector<double> out;
  out.reserve(slabs.size());
  CompensatedSum acc;
  for (const auto& s : slabs) {
    acc.add(s.*field);
    out.push_back(prefactor * acc.value());
  }
  return out;
}

}  // namespace

Rational moment_prefactor(unsigned q) {
  if (q == 0) throw Error(Errc::InvalidArgument, "q must be >= 1");
  const Integer p = Integer(1) << q;
  return Rational(Integer(1), Integer(2 * p * (p - 1)));
}

Rational sigma2_prefactor(unsigned q) {
  if (q == 0) throw Error(Errc::InvalidArgument, "q must be >= 1");
  const Integer p = Integer(1) << q;
  const Integer num = 2 * (2 * p * p - (3 + q) * p + 1);
  return Rational(1) + Rational(num, Integer(p - 1));
}

std::vector<double> MomentSeries::cumulative_lambda() const {
  return cumulative(slabs, &MomentSlab::lambda, to_double(moment_prefactor(q)));
}
std::vector<double> MomentSeries::cumulative_kappa() const {
  return cumulative(slabs, &MomentSlab::kappa, to_double(moment_prefactor(q)));
}
std::vector<double> MomentSeries::cumulative_mu() const {
  return cumulative(slabs, &MomentSlab::mu, to_double(moment_prefactor(q)));
}

MomentSeries accumulate_moments(const SentinelFactorization& fact, std::size_t max_len,
                                const ParallelOptions& par) {
  const IntegerSentinel image = integer_image(fact);
  auto make = [&] {
    MomentAcc a;
    a.words.assign(max_len + 1, 0);
    a.log_sum.resize(max_len + 1);
    a.log_sq_sum.resize(max_len + 1);
    return a;
  };
  auto visit = [](MomentAcc& acc, std::span<const std::uint8_t> word, const auto& corner) {
    const std::size_t len = word.size();
    ++acc.words[len];
    if (corner.is_zero()) {
      ++acc.skipped;
      return;
    }
    const double l = corner.log_abs();
    acc.log_sum[len].add(l);
    acc.log_sq_sum[len].add(l * l);
  };
  const auto parts =
      detail::partitioned_fold<MomentAcc>(image, max_len, par.threads, make, visit);

  MomentSeries series;
  series.q = fact.q;
  series.slabs.resize(max_len + 1);
  for (std::size_t len = 0; len <= max_len; ++len) {
    CompensatedSum ls, lsq;
    std::uint64_t words = 0;
    for (const auto& p : parts) {
      ls.add(p.log_sum[len]);
      lsq.add(p.log_sq_sum[len]);
      words += p.words[len];
    }
    MomentSlab& slab = series.slabs[len];
    slab.words = words;
    slab.lambda = std::ldexp(ls.value(), -static_cast<int>(len));
    slab.kappa = static_cast<double>(fact.q + len) * slab.lambda;
    slab.mu = std::ldexp(lsq.value(), -static_cast<int>(len));
  }
  for (const auto& p : parts) series.skipped_words += p.skipped;
  return series;
}

double sigma2_from_moments(double lambda, double kappa, double mu, unsigned q) {
  const double c = to_double(sigma2_prefactor(q));
  return c * lambda * lambda - 2.0 * lambda * kappa + mu;
}

std::size_t default_max_len(unsigned q) { return q <= 2 ? 36 : 30; }

SeriesEstimate accelerate(const std::vector<double>& cum, bool on) {
  SeriesEstimate e;
  if (cum.empty()) return e;
  e.raw = cum.back();
  e.accelerated = e.raw;
  if (cum.size() >= 2) e.error = std::abs(cum[cum.size() - 1] - cum[cum.size() - 2]);
  if (on && cum.size() >= 3) {
    const WynnResult w = wynn_epsilon(cum);
    e.accelerated = w.estimate;
    e.error = w.error_est;
    e.depth = w.depth;
  }
  return e;
}

double replica_exponent(const MatrixFamily& family, unsigned t, Eigen::Index cap) {
  if (t == 0) throw Error(Errc::InvalidArgument, "replica exponent needs t >= 1");
  const FloatMatrix d0 = to_float(family.d0);
  const FloatMatrix d1 = to_float(family.d1);
  const FloatMatrix a = 0.5 * (kronecker_power(d0, t, cap) + kronecker_power(d1, t, cap));
  return spectral_radius(a);
}

ExponentReport exponents(const MatrixFamily& family, const ExponentOptions& opts) {
  const SentinelFactorization fact = family.factorization();
  const std::size_t max_len = opts.max_len ? opts.max_len : default_max_len(family.q);
  const MomentSeries series = accumulate_moments(fact, max_len, opts.parallel);

  ExponentReport r;
  r.family = family.name;
  r.q = family.q;
  r.max_len = max_len;
  r.accelerated = opts.accelerate;
  r.lambda = accelerate(series.cumulative_lambda(), opts.accelerate);
  r.kappa = accelerate(series.cumulative_kappa(), opts.accelerate);
  r.mu = accelerate(series.cumulative_mu(), opts.accelerate);
  const double lam = r.lambda.accelerated, kap = r.kappa.accelerated;
  r.sigma2 = sigma2_from_moments(lam, kap, r.mu.accelerated, family.q);
  const double c = to_double(sigma2_prefactor(family.q));
  r.sigma2_error = std::abs(2.0 * c * lam - 2.0 * kap) * r.lambda.error +
                   2.0 * std::abs(lam) * r.kappa.error + r.mu.error;
  r.skipped_words = series.skipped_words;
  for (const auto& s : series.slabs) r.words_visited += s.words;

  if (!opts.l_samples.empty()) {
    const PowerSlabs ps = accumulate_power_slabs(fact, opts.l_samples, max_len, opts.parallel);
    LOptions lo;
    lo.accelerate = opts.accelerate;
    for (std::size_t i = 0; i < ps.ts.size(); ++i)
      r.l_samples.push_back({ps.ts[i], L_from_slabs(ps, i, max_len, lo).value});
  }
  if (opts.replica) {
    const Eigen::Index m = family.dim();
    if (m * m <= kDefaultKroneckerCap) {
      r.replica_l1 = replica_exponent(family, 1);
      r.replica_l2 = replica_exponent(family, 2);
    }
  }
  return r;
}

PowerSlabs accumulate_power_slabs(const SentinelFactorization& fact, std::vector<double> ts,
                                  std::size_t max_len, const ParallelOptions& par) {
  const IntegerSentinel image = integer_image(fact);
  const std::size_t nt = ts.size();
  auto make = [&] {
    PowerAcc a;
    a.sums.assign(nt, std::vector<CompensatedSum>(max_len + 1));
    return a;
  };
  auto visit = [&ts, nt](PowerAcc& acc, std::span<const std::uint8_t> word, const auto& corner) {
    if (corner.is_zero()) {
      ++acc.skipped;
      return;
    }
    const double l = corner.log_abs();
    for (std::size_t i = 0; i < nt; ++i) acc.sums[i][word.size()].add(std::exp(ts[i] * l));
  };
  const auto parts =
      detail::partitioned_fold<PowerAcc>(image, max_len, par.threads, make, visit);

  PowerSlabs out;
  out.q = fact.q;
  out.ts = std::move(ts);
  out.slabs.assign(nt, std::vector<double>(max_len + 1, 0.0));
  for (std::size_t i = 0; i < nt; ++i) {
    for (std::size_t len = 0; len <= max_len; ++len) {
      CompensatedSum s;
      for (const auto& p : parts) s.add(p.sums[i][len]);
      const double v = s.value();
      if (!std::isfinite(v))
        throw Error(Errc::Overflow, "|corner|^t overflows at length " + std::to_string(len) +
                                        " for t = " + std::to_string(out.ts[i]));
      out.slabs[i][len] = v;
    }
  }
  for (const auto& p : parts) out.skipped_words += p.skipped;
  return out;
}

namespace {

/// Partial sums P_0..P_len of F(s, t).
std::vector<double> F_partials(const PowerSlabs& slabs, std::size_t t_index, double s,
                               std::size_t len) {
  const auto& g = slabs.slabs.at(t_index);
  const double log_r = std::log(s / 2.0);
  std::vector<double> out;
  out.reserve(len + 1);
  CompensatedSum acc;
  for (std::size_t l = 0; l <= len; ++l) {
    const double term = std::exp(static_cast<double>(l + slabs.q) * log_r) * g[l];
    if (!std::isfinite(term)) throw Error(Errc::Overflow, "F(s, t) term overflows");
    acc.add(term);
    out.push_back(acc.value());
  }
  return out;
}

double truncated_F(const std::vector<double>& g, unsigned q, double s, std::size_t len) {
  // Horner in r = s/2: r^q (g_0 + r (g_1 + ...)).
  const double r = s / 2.0;
  double acc = 0.0;
  for (std::size_t l = len + 1; l-- > 0;) acc = acc * r + g[l];
  return acc * std::pow(r, static_cast<double>(q));
}

/// Root of the truncation of F(., t) at length n on (0, 2).
double truncated_root(const std::vector<double>& g, unsigned q, std::size_t n, double tol) {
  double lo = 0.0, hi = 2.0;
  if (truncated_F(g, q, hi, n) < 1.0)
    throw Error(Errc::NoBracket, "F(2, t) < 1 at truncation length " + std::to_string(n));
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (truncated_F(g, q, mid, n) < 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Accelerated F(s, t) at truncation length len.
double accelerated_F(const PowerSlabs& slabs, std::size_t t_index, double s, std::size_t len) {
  return wynn_epsilon(F_partials(slabs, t_index, s, len)).estimate;
}

/// -ln s(t). Without acceleration s is the root of the truncated F. With
/// acceleration the truncated root (which lies above the true one) brackets
/// the root of the Wynn-accelerated F from above, and the bracket is extended
/// downward until the accelerated F drops below 1.
double L_at(const PowerSlabs& slabs, std::size_t t_index, std::size_t len, bool accel) {
  const auto& g = slabs.slabs.at(t_index);
  const double s_raw = truncated_root(g, slabs.q, len, 0.0);
  // F(1, 0) = 1 exactly for every family, so L(0) = 0 needs no extrapolation.
  if (accel && slabs.ts.at(t_index) == 0.0) return 0.0;
  if (!accel) return -std::log(s_raw);
  auto f = [&](double s) { return accelerated_F(slabs, t_index, s, len) - 1.0; };
  double hi = s_raw;
  if (!(f(hi) >= 0.0)) return -std::log(s_raw);
  double lo = hi;
  for (double step = 1e-6; step < 1.0; step *= 4.0) {
    lo = std::max(hi * (1.0 - step), 0.5 * hi);
    if (f(lo) < 0.0) break;
    if (lo == 0.5 * hi) throw Error(Errc::NoBracket, "accelerated F(s, t) has no bracket");
  }
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return -std::log(0.5 * (lo + hi));
}

}  // namespace

FValue F_eval(const PowerSlabs& slabs, std::size_t t_index, double s, std::size_t len,
              bool accel) {
  if (!(s > 0.0)) throw Error(Errc::InvalidArgument, "F_eval needs s > 0");
  if (len > slabs.max_len()) throw Error(Errc::InvalidArgument, "F_eval beyond slab length");
  const std::vector<double> partials = F_partials(slabs, t_index, s, len);
  FValue f;
  f.raw = partials.back();
  const double last = len == 0 ? partials[0] : partials[len] - partials[len - 1];
  f.tail_ratio = f.raw != 0.0 ? std::abs(last / f.raw) : 0.0;
  f.value = (accel && partials.size() >= 3) ? wynn_epsilon(partials).estimate : f.raw;
  return f;
}

FValue F_eval(const MatrixFamily& family, double s, double t, std::size_t max_len, bool accel) {
  const PowerSlabs slabs = accumulate_power_slabs(family.factorization(), {t}, max_len);
  return F_eval(slabs, 0, s, max_len, accel);
}

LResult L_from_slabs(const PowerSlabs& slabs, std::size_t t_index, std::size_t max_len,
                     const LOptions& opts) {
  if (!(opts.tol > 0.0)) throw Error(Errc::InvalidArgument, "L_of_t needs tol > 0");
  if (max_len > slabs.max_len()) throw Error(Errc::InvalidArgument, "L_of_t beyond slab length");
  if (max_len < opts.check_offset + 3)
    throw Error(Errc::InvalidArgument, "L_of_t needs max_len >= " +
                                           std::to_string(opts.check_offset + 3));
  // Bisection runs to machine precision; tol only governs the acceptance checks.
  LResult r;
  r.value = L_at(slabs, t_index, max_len, opts.accelerate);
  r.at_check_len = L_at(slabs, t_index, max_len - opts.check_offset, opts.accelerate);
  r.truncation_error = std::abs(r.value - r.at_check_len);
  const double limit = opts.truncation_tol.value_or(10.0 * opts.tol);
  if (!(r.truncation_error <= limit))
    throw Error(Errc::TruncationUnstable,
                "L(t) differs by " + std::to_string(r.truncation_error) + " between lengths " +
                    std::to_string(max_len - opts.check_offset) + " and " +
                    std::to_string(max_len));
  return r;
}

double L_of_t(const MatrixFamily& family, double t, std::size_t max_len, const LOptions& opts) {
  const PowerSlabs slabs = accumulate_power_slabs(family.factorization(), {t}, max_len);
  return L_from_slabs(slabs, 0, max_len, opts).value;
}

DispersionParams dispersion_params(const MatrixFamily& family, const ExponentOptions& opts) {
  ExponentOptions o = opts;
  o.replica = true;
  const ExponentReport r = exponents(family, o);
  DispersionParams d;
  const double ln2 = std::log(2.0);
  const double xi = r.replica_l2 ? *r.replica_l2 : replica_exponent(family, 2);
  d.avg = std::log(xi) / ln2;
  d.typ = r.sigma2 / ln2;
  d.typ_error = r.sigma2_error / ln2;
  return d;
}

DerivativeCheck derivative_check(const MatrixFamily& family, std::size_t max_len, double h,
                                 const ParallelOptions& par) {
  const PowerSlabs slabs =
      accumulate_power_slabs(family.factorization(), {-h, 0.0, h}, max_len, par);
  auto diffs = [&](std::size_t len) {
    const double lm = L_at(slabs, 0, len, true);
    const double l0 = L_at(slabs, 1, len, true);
    const double lp = L_at(slabs, 2, len, true);
    return std::pair{(lp - lm) / (2.0 * h), (lp - 2.0 * l0 + lm) / (h * h)};
  };
  DerivativeCheck d;
  d.h = h;
  std::tie(d.lambda_fd, d.sigma2_fd) = diffs(max_len);
  std::tie(d.lambda_fd_check, d.sigma2_fd_check) = diffs(max_len - 4);
  d.truncation_error =
      std::max(std::abs(d.lambda_fd - d.lambda_fd_check), std::abs(d.sigma2_fd - d.sigma2_fd_check));
  return d;
}

double lambda_from_F(const MatrixFamily& family, std::size_t max_len, double h,
                     const ParallelOptions& par) {
  const PowerSlabs slabs = accumulate_power_slabs(family.factorization(), {-h, 0.0, h}, max_len, par);
  const double ft = (F_eval(slabs, 2, 1.0, max_len).value - F_eval(slabs, 0, 1.0, max_len).value) /
                    (2.0 * h);
  const double fs =
      (F_eval(slabs, 1, 1.0 + h, max_len).value - F_eval(slabs, 1, 1.0 - h, max_len).value) /
      (2.0 * h);
  return ft / fs;
}

}  // namespace lyapdisp
