#include "lyapdisp/mcsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "lyapdisp/detail/parallel_fold.hpp"

namespace lyapdisp {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

constexpr double kRescaleHi = 0x1p100, kRescaleLo = 0x1p-100;

double inf_norm_of(const FloatMatrix& p) { return p.cwiseAbs().rowwise().sum().maxCoeff(); }

/// Key stream reserved for bootstrap resampling.
constexpr std::uint64_t kBootstrapStream = 0xB0075712A9ull << 20;

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, ctr[0], hi0, lo0);
    mulhilo(kM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

Philox4x32::Philox4x32(std::uint64_t seed, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      ctr_{0, 0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

Philox4x32::result_type Philox4x32::operator()() {
  if (used_ == 4) {
    buf_ = block(ctr_, key_);
    if (++ctr_[0] == 0) ++ctr_[1];
    used_ = 0;
  }
  return buf_[used_++];
}

std::vector<std::uint8_t> trial_digits(std::uint64_t seed, std::uint64_t index, std::size_t k) {
  Philox4x32 rng(seed, index);
  std::vector<std::uint8_t> digits(k);
  std::uint32_t word = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (i % 32 == 0) word = rng();
    digits[i] = static_cast<std::uint8_t>((word >> (i % 32)) & 1u);
  }
  return digits;
}

double log_norm_product(const FloatMatrix& d0, const FloatMatrix& d1,
                        const std::vector<std::uint8_t>& digits) {
  FloatMatrix p = FloatMatrix::Identity(d0.rows(), d0.cols());
  FloatMatrix tmp(d0.rows(), d0.cols());
  double log_scale = 0.0;
  for (const std::uint8_t z : digits) {
    tmp.noalias() = p * (z ? d1 : d0);
    p.swap(tmp);
    const double n = inf_norm_of(p);
    if (n == 0.0) return -std::numeric_limits<double>::infinity();
    if (n > kRescaleHi || n < kRescaleLo) {
      p /= n;
      log_scale += std::log(n);
    }
  }
  return log_scale + std::log(inf_norm_of(p));
}

SimResult simulate(const SimConfig& config) {
  if (config.k < 1) throw Error(Errc::InvalidArgument, "simulation needs k >= 1");
  if (config.trials < 2) throw Error(Errc::InvalidArgument, "simulation needs trials >= 2");
  validate_family(config.family);
  const FloatMatrix d0 = to_float(config.family.d0);
  const FloatMatrix d1 = to_float(config.family.d1);

  std::vector<double> logs(config.trials);
  constexpr std::uint64_t kChunk = 4096;
  const std::uint64_t chunks = (config.trials + kChunk - 1) / kChunk;
  auto run_chunk = [&](std::uint64_t c) {
    const std::uint64_t end = std::min(config.trials, (c + 1) * kChunk);
    for (std::uint64_t i = c * kChunk; i < end; ++i)
      logs[i] = log_norm_product(d0, d1, trial_digits(config.seed, i, config.k));
  };
  const unsigned n_threads = static_cast<unsigned>(
      std::min<std::uint64_t>(detail::resolve_threads(config.threads), chunks));
  if (n_threads <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n_threads; ++w)
      pool.emplace_back([&] {
        for (std::uint64_t c; (c = next.fetch_add(1)) < chunks;) run_chunk(c);
      });
    for (auto& th : pool) th.join();
  }

  SimResult r;
  r.k = config.k;
  r.trials = config.trials;
  detail::CompensatedSum sum;
  std::uint64_t n = 0;
  for (double& x : logs) {
    if (std::isinf(x)) {
      ++r.degenerate;
      x = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    sum.add(x);
    ++n;
  }
  if (n < 2)
    throw Error(Errc::DegenerateProduct, "fewer than two trials gave a nonzero product");
  r.mean = sum.value() / static_cast<double>(n);
  detail::CompensatedSum m2, m4;
  for (const double x : logs) {
    if (std::isnan(x)) continue;
    const double d = x - r.mean;
    m2.add(d * d);
    m4.add(d * d * d * d);
  }
  const double nd = static_cast<double>(n);
  r.variance = m2.value() / (nd - 1.0);
  const double kd = static_cast<double>(config.k);
  r.lambda_hat = r.mean / kd;
  r.lambda_se = std::sqrt(r.variance / nd) / kd;
  r.sigma2_hat = r.variance / kd;
  const double mu4 = m4.value() / nd;
  const double var_of_var = std::max(0.0, (mu4 - r.variance * r.variance * (nd - 3.0) / (nd - 1.0)) / nd);
  r.sigma2_se = std::sqrt(var_of_var) / kd;
  if (config.keep_log_norms) r.log_norms = std::move(logs);
  return r;
}

namespace {

/// (1/k) ln( (1/n) sum e^{t x_i} ) over the given indices.
double growth_of(const std::vector<double>& logs, const std::vector<std::uint64_t>& idx, double t,
                 double k) {
  double top = -std::numeric_limits<double>::infinity();
  for (const auto i : idx) top = std::max(top, t * logs[i]);
  detail::CompensatedSum s;
  for (const auto i : idx) s.add(std::exp(t * logs[i] - top));
  return (top + std::log(s.value() / static_cast<double>(idx.size()))) / k;
}

}  // namespace

SimResult simulate_moment(const SimConfig& config, double t, unsigned bootstrap) {
  if (!(std::abs(t) <= 4.0)) throw Error(Errc::InvalidArgument, "moment simulation needs |t| <= 4");
  SimConfig c = config;
  c.keep_log_norms = true;
  SimResult r = simulate(c);
  r.t = t;
  if (t == 0.0) {
    r.growth = 0.0;
    r.growth_se = 0.0;
  } else {
    std::vector<std::uint64_t> idx;
    for (std::uint64_t i = 0; i < r.log_norms.size(); ++i)
      if (!std::isnan(r.log_norms[i])) idx.push_back(i);
    const double kd = static_cast<double>(r.k);
    r.growth = growth_of(r.log_norms, idx, t, kd);
    if (bootstrap >= 2) {
      Philox4x32 rng(config.seed, kBootstrapStream);
      std::vector<std::uint64_t> sample(idx.size());
      detail::CompensatedSum s1, s2;
      for (unsigned b = 0; b < bootstrap; ++b) {
        for (auto& v : sample) {
          const std::uint64_t u = (static_cast<std::uint64_t>(rng()) << 32) | rng();
          v = idx[u % idx.size()];
        }
        const double g = growth_of(r.log_norms, sample, t, kd);
        s1.add(g);
        s2.add(g * g);
      }
      const double bd = bootstrap;
      const double m = s1.value() / bd;
      r.growth_se = std::sqrt(std::max(0.0, (s2.value() / bd - m * m) * bd / (bd - 1.0)));
    }
  }
  if (!config.keep_log_norms) r.log_norms.clear();
  return r;
}

}  // namespace lyapdisp
