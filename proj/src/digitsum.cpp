#include "lyapdisp/digitsum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <set>

#include "lyapdisp/detail/parallel_fold.hpp"
#include "lyapdisp/mcsim.hpp"

namespace lyapdisp {

using detail::CompensatedSum;

std::string to_string(UInt128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

unsigned digit_sum(std::uint64_t n) { return static_cast<unsigned>(std::popcount(n)); }

// Both sums run over the digits of n from the top: for the prefix m,
//   S(2m + b)  = 2 S(m) + m + b #(m)
//   Sf(2m + b) = 3 Sf(m) + b 2^{#(m)}.
UInt128 summatory_digit_sum(std::uint64_t n) {
  UInt128 s = 0;
  std::uint64_t m = 0;
  unsigned ones = 0;
  for (int bit = 63 - std::countl_zero(n | 1); bit >= 0 && n != 0; --bit) {
    const unsigned b = (n >> bit) & 1u;
    s = 2 * s + m + (b ? ones : 0);
    m = 2 * m + b;
    ones += b;
  }
  return s;
}

UInt128 summatory_f(std::uint64_t n) {
  UInt128 s = 0;
  unsigned ones = 0;
  for (int bit = 63 - std::countl_zero(n | 1); bit >= 0 && n != 0; --bit) {
    const unsigned b = (n >> bit) & 1u;
    s = 3 * s + (b ? UInt128(1) << ones : 0);
    ones += b;
  }
  return s;
}

const char* to_string(Fluctuation kind) { return kind == Fluctuation::Phi ? "phi" : "psi"; }

namespace {

constexpr long double kLog2Of3 = 1.584962500721156181453738943947816508759814407692481060455L;

unsigned floor_log2(std::uint64_t n) { return 63u - static_cast<unsigned>(std::countl_zero(n)); }

void check_argument(std::uint64_t n) {
  if (n == 0 || n >> 63) throw Error(Errc::InvalidArgument, "fluctuation needs 1 <= n < 2^63");
}

UInt128 pow3(unsigned j) {
  UInt128 p = 1;
  for (unsigned i = 0; i < j; ++i) p *= 3;
  return p;
}

long double to_ld(UInt128 v) { return static_cast<long double>(v); }

/// x(n) = log2(n / 2^j) in [0, 1).
double frac_log2(std::uint64_t n, unsigned j) {
  return static_cast<double>(std::log2(std::ldexp(static_cast<long double>(n), -static_cast<int>(j))));
}

double phi_value(UInt128 s, std::uint64_t n, unsigned j, double x) {
  // (2 S - j n) / (2 n): exact numerator, one rounding each side.
  const __int128 num = static_cast<__int128>(2 * s) - static_cast<__int128>(j) * n;
  const long double rational = static_cast<long double>(num) / (2.0L * static_cast<long double>(n));
  return static_cast<double>(rational - 0.5L * x);
}

double psi_value(UInt128 sf, unsigned j, double x) {
  const long double ratio = to_ld(sf) / to_ld(pow3(j));
  return static_cast<double>(ratio / std::exp2(static_cast<long double>(x) * kLog2Of3));
}

FluctuationSample sample_from(Fluctuation kind, std::uint64_t n, UInt128 sum) {
  const unsigned j = floor_log2(n);
  FluctuationSample s;
  s.n = n;
  s.x = frac_log2(n, j);
  s.value = kind == Fluctuation::Phi ? phi_value(sum, n, j, s.x) : psi_value(sum, j, s.x);
  return s;
}

bool within_bounds(Fluctuation kind, double v) {
  return kind == Fluctuation::Phi ? v <= 0.0 : (v > 0.0 && v <= 1.0);
}

}  // namespace

FluctuationSample phi(std::uint64_t n) {
  check_argument(n);
  return sample_from(Fluctuation::Phi, n, summatory_digit_sum(n));
}

FluctuationSample psi(std::uint64_t n) {
  check_argument(n);
  return sample_from(Fluctuation::Psi, n, summatory_f(n));
}

FluctuationSample fluctuation(Fluctuation kind, std::uint64_t n) {
  return kind == Fluctuation::Phi ? phi(n) : psi(n);
}

Rational phi_rational_part(std::uint64_t n) {
  check_argument(n);
  const unsigned j = floor_log2(n);
  const Integer s(to_string(summatory_digit_sum(n)));
  return Rational(2 * s - Integer(j) * n, Integer(2) * n);
}

Rational psi_rational_part(std::uint64_t n) {
  check_argument(n);
  const unsigned j = floor_log2(n);
  return Rational(Integer(to_string(summatory_f(n))), Integer(to_string(pow3(j))));
}

FluctuationScan scan_fluctuation(Fluctuation kind, std::uint64_t n_max) {
  if (n_max < 2 || n_max >> 40) throw Error(Errc::InvalidArgument, "scan needs 2 <= n_max <= 2^40");
  FluctuationScan r;
  r.kind = kind;
  r.n_max = n_max;
  r.inf = std::numeric_limits<double>::infinity();
  r.sup = -std::numeric_limits<double>::infinity();
  // Top complete octave [2^k, 2^{k+1}] inside [2, n_max].
  const unsigned k = floor_log2(n_max) - 1;
  const std::uint64_t lo = std::uint64_t{1} << k, hi = lo << 1;
  CompensatedSum integral;
  double prev_value = 0.0;

  UInt128 sum = kind == Fluctuation::Phi ? 0 : 1;  // S(1) = 0, Sf(1) = 1
  for (std::uint64_t n = 2; n <= n_max; ++n) {
    const std::uint64_t m = n - 1;
    sum += kind == Fluctuation::Phi ? UInt128(std::popcount(m)) : UInt128(1) << std::popcount(m);
    const FluctuationSample s = sample_from(kind, n, sum);
    if (s.value < r.inf) {
      r.inf = s.value;
      r.inf_n = n;
    }
    if (s.value > r.sup) {
      r.sup = s.value;
      r.sup_n = n;
    }
    if (!within_bounds(kind, s.value)) {
      if (r.bound_violations++ == 0) r.first_violation = n;
    }
    if (n > lo && n <= hi) {
      const double dx = std::log1p(1.0 / static_cast<double>(m)) / std::numbers::ln2;
      integral.add(0.5 * dx * (prev_value + s.value));
    }
    prev_value = s.value;
  }
  r.mean = integral.value();
  return r;
}

FluctuationStatistics fluctuation_statistics(Fluctuation kind, unsigned j_min, unsigned j_max,
                                             unsigned samples_per_octave, unsigned bins) {
  if (j_max > 40 || j_min > j_max || samples_per_octave == 0 || bins == 0)
    throw Error(Errc::InvalidArgument, "statistics need j_min <= j_max <= 40 and positive counts");
  std::set<std::uint64_t> ns;
  for (unsigned j = j_min; j <= j_max; ++j) {
    for (unsigned i = 0; i < samples_per_octave; ++i) {
      const double e = static_cast<double>(i) / samples_per_octave;
      auto n = static_cast<std::uint64_t>(std::floor(std::ldexp(std::exp2(e), static_cast<int>(j))));
      n = std::clamp<std::uint64_t>(n, std::uint64_t{1} << j, (std::uint64_t{2} << j) - 1);
      ns.insert(n);
    }
  }
  FluctuationStatistics st;
  st.kind = kind;
  for (const auto n : ns) st.samples.push_back(fluctuation(kind, n));
  std::sort(st.samples.begin(), st.samples.end(),
            [](const auto& a, const auto& b) { return a.x < b.x || (a.x == b.x && a.n < b.n); });

  const std::size_t m = st.samples.size();
  std::vector<double> weight(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double prev = i == 0 ? st.samples[m - 1].x - 1.0 : st.samples[i - 1].x;
    const double next = i + 1 == m ? st.samples[0].x + 1.0 : st.samples[i + 1].x;
    weight[i] = m == 1 ? 1.0 : 0.5 * (next - prev);
  }
  CompensatedSum mean, total;
  st.inf = std::numeric_limits<double>::infinity();
  st.sup = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    mean.add(weight[i] * st.samples[i].value);
    total.add(weight[i]);
    st.inf = std::min(st.inf, st.samples[i].value);
    st.sup = std::max(st.sup, st.samples[i].value);
  }
  st.mean = mean.value() / total.value();

  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](auto a, auto b) { return st.samples[a].value < st.samples[b].value; });
  for (const double p : {0.0, 1.0, 5.0, 10.0, 25.0, 50.0, 75.0, 90.0, 95.0, 99.0, 100.0}) {
    const double target = p / 100.0 * total.value();
    double cum = 0.0;
    double value = st.samples[order.back()].value;
    for (const auto i : order) {
      cum += weight[i];
      if (cum >= target) {
        value = st.samples[i].value;
        break;
      }
    }
    st.percentiles.push_back({p, value});
  }

  const double width = (st.sup - st.inf) / bins;
  st.histogram.resize(bins);
  for (unsigned b = 0; b < bins; ++b) {
    st.histogram[b].lo = st.inf + b * width;
    st.histogram[b].hi = b + 1 == bins ? st.sup : st.inf + (b + 1) * width;
  }
  for (std::size_t i = 0; i < m; ++i) {
    unsigned b = width > 0.0 ? static_cast<unsigned>((st.samples[i].value - st.inf) / width) : 0;
    b = std::min(b, bins - 1);
    st.histogram[b].mass += weight[i] / total.value();
  }
  return st;
}

// ---------------------------------------------------------------------------
// GF(2) polynomials

namespace {

void trim(std::vector<std::uint64_t>& w) {
  while (!w.empty() && w.back() == 0) w.pop_back();
}

/// out ^= in << shift, for `len` words of `in`.
void xor_shifted(std::uint64_t* out, const std::uint64_t* in, std::size_t len, std::size_t shift) {
  const std::size_t ws = shift / 64, bs = shift % 64;
  if (bs == 0) {
    for (std::size_t i = 0; i < len; ++i) out[i + ws] ^= in[i];
    return;
  }
  for (std::size_t i = 0; i < len; ++i) {
    out[i + ws] ^= in[i] << bs;
    out[i + ws + 1] ^= in[i] >> (64 - bs);
  }
}

}  // namespace

Gf2Poly Gf2Poly::from_mask(std::uint64_t mask) {
  Gf2Poly p;
  if (mask) p.words.push_back(mask);
  return p;
}

long Gf2Poly::degree() const {
  if (words.empty()) return -1;
  return static_cast<long>(64 * (words.size() - 1)) + 63 - std::countl_zero(words.back());
}

bool Gf2Poly::coefficient(std::size_t i) const {
  return i / 64 < words.size() && ((words[i / 64] >> (i % 64)) & 1u);
}

std::size_t Gf2Poly::popcount() const {
  std::size_t c = 0;
  for (const auto w : words) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

Gf2Poly Gf2Poly::operator*(const Gf2Poly& other) const {
  Gf2Poly out;
  if (words.empty() || other.words.empty()) return out;
  out.words.assign(words.size() + other.words.size() + 1, 0);
  for (long k = 0; k <= other.degree(); ++k)
    if (other.coefficient(static_cast<std::size_t>(k)))
      xor_shifted(out.words.data(), words.data(), words.size(), static_cast<std::size_t>(k));
  trim(out.words);
  return out;
}

bool operator==(const Gf2Poly& a, const Gf2Poly& b) {
  auto x = a.words, y = b.words;
  trim(x);
  trim(y);
  return x == y;
}

std::vector<std::uint64_t> gf2_row_counts(const Gf2Poly& poly, std::uint64_t n_max) {
  if (n_max > kMaxRowCount) throw Error(Errc::InvalidArgument, "gf2_row_counts needs n_max <= 2^18");
  const long d = poly.degree();
  if (d < 0) throw Error(Errc::InvalidArgument, "gf2_row_counts needs a nonzero polynomial");
  std::vector<std::size_t> shifts;
  for (long k = 0; k <= d; ++k)
    if (poly.coefficient(static_cast<std::size_t>(k))) shifts.push_back(static_cast<std::size_t>(k));

  const std::size_t capacity = (static_cast<std::size_t>(d) * n_max) / 64 + 3;
  std::vector<std::uint64_t> row(capacity, 0), next(capacity, 0);
  row[0] = 1;
  std::vector<std::uint64_t> counts;
  counts.reserve(n_max + 1);
  for (std::uint64_t n = 0;; ++n) {
    const std::size_t len = (static_cast<std::size_t>(d) * n) / 64 + 1;
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < len; ++i) c += static_cast<std::uint64_t>(std::popcount(row[i]));
    counts.push_back(c);
    if (n == n_max) break;
    const std::size_t out_len = std::min(capacity, len + static_cast<std::size_t>(d) / 64 + 2);
    std::fill(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(out_len), 0);
    for (const auto k : shifts) xor_shifted(next.data(), row.data(), len, k);
    row.swap(next);
  }
  return counts;
}

// ---------------------------------------------------------------------------
// Linear representations

const char* to_string(DigitOrder order) {
  return order == DigitOrder::MsbFirst ? "msb-first" : "lsb-first";
}

namespace {

std::vector<std::uint8_t> digits_of(std::uint64_t n, DigitOrder order) {
  std::vector<std::uint8_t> z;
  for (; n != 0; n >>= 1) z.push_back(static_cast<std::uint8_t>(n & 1u));
  if (order == DigitOrder::MsbFirst) std::reverse(z.begin(), z.end());
  return z;
}

/// For n < count: LSB-first gives w(n) = D_{z(n)} v, MSB-first gives
/// r(n) = u^T D_{z(n)}; both satisfy x(n) = step_b x(n >> 1) with b = n & 1.
template <typename Scalar>
std::vector<Vector<Scalar>> known_vectors(const Matrix<Scalar>& d0, const Matrix<Scalar>& d1,
                                          const Vector<Scalar>& seed, DigitOrder order,
                                          std::uint64_t count) {
  std::vector<Vector<Scalar>> x;
  x.reserve(count);
  if (count == 0) return x;
  x.push_back(seed);
  for (std::uint64_t n = 1; n < count; ++n) {
    const Matrix<Scalar>& d = (n & 1u) ? d1 : d0;
    const Vector<Scalar>& parent = x[n >> 1];
    if (order == DigitOrder::LsbFirst)
      x.push_back(d * parent);
    else
      x.push_back(d.transpose() * parent);
  }
  return x;
}

struct FitAttempt {
  std::optional<LinearRepresentation> rep;
  std::string failure;
};

FitAttempt try_order(const RationalMatrix& d0, const RationalMatrix& d1,
                     std::span<const std::uint64_t> counts, DigitOrder order) {
  const Eigen::Index m = d0.rows();
  const RationalMatrix shifted = d0 - identity<Rational>(m);
  const RationalMatrix fixed = null_space<Rational>(order == DigitOrder::LsbFirst
                                                        ? shifted
                                                        : RationalMatrix(shifted.transpose()));
  if (fixed.cols() != 1)
    return {std::nullopt, std::to_string(fixed.cols()) + "-dimensional fixed space of D0"};
  const RationalVector seed = fixed.col(0);
  const auto x = known_vectors<Rational>(d0, d1, seed, order, counts.size());

  const auto eqs = std::min<std::uint64_t>(counts.size(), 4 * static_cast<std::uint64_t>(m * m));
  RationalMatrix a(static_cast<Eigen::Index>(eqs), m);
  RationalVector rhs(static_cast<Eigen::Index>(eqs));
  for (std::uint64_t n = 0; n < eqs; ++n) {
    a.row(static_cast<Eigen::Index>(n)) = x[n].transpose();
    rhs(static_cast<Eigen::Index>(n)) = Rational(counts[n]);
  }
  const auto sol = solve_exact<Rational>(a, rhs, true);
  if (!sol) return {std::nullopt, "no exact solution from the first " + std::to_string(eqs) + " counts"};
  for (std::uint64_t n = 0; n < counts.size(); ++n) {
    if (x[n].dot(*sol) != Rational(counts[n]))
      return {std::nullopt, "first mismatch at n = " + std::to_string(n)};
  }
  LinearRepresentation rep;
  rep.order = order;
  rep.u = order == DigitOrder::LsbFirst ? *sol : seed;
  rep.v = order == DigitOrder::LsbFirst ? seed : *sol;
  rep.validated_below = counts.size();
  return {rep, {}};
}

}  // namespace

Rational representation_value(const LinearRepresentation& rep, const RationalMatrix& d0,
                              const RationalMatrix& d1, std::uint64_t n) {
  const auto z = digits_of(n, rep.order);
  const RationalMatrix p = word_product(d0, d1, z);
  return rep.u.dot(p * rep.v);
}

LinearRepresentation fit_linear_representation(const RationalMatrix& d0, const RationalMatrix& d1,
                                               std::span<const std::uint64_t> counts) {
  if (d0.rows() != d0.cols() || d1.rows() != d0.rows() || d1.cols() != d0.cols())
    throw Error(Errc::DimensionMismatch, "fit needs two square matrices of equal size");
  const auto m = static_cast<std::uint64_t>(d0.rows());
  if (counts.size() < 2 * m * m)
    throw Error(Errc::InvalidArgument, "fit needs at least 2 dim^2 counts");
  std::string report;
  for (const DigitOrder order : {DigitOrder::LsbFirst, DigitOrder::MsbFirst}) {
    FitAttempt a = try_order(d0, d1, counts, order);
    if (a.rep) return *a.rep;
    report += std::string(report.empty() ? "" : "; ") + to_string(order) + ": " + a.failure;
  }
  throw Error(Errc::NoRepresentationFound, report);
}

LinearRepresentation fit_linear_representation(const MatrixFamily& family, std::uint64_t n_check) {
  if (family.polynomial_mask == 0)
    throw Error(Errc::InvalidArgument, "family " + family.name + " has no polynomial");
  if (n_check == 0) throw Error(Errc::InvalidArgument, "fit needs n_check >= 1");
  const auto counts = gf2_row_counts(Gf2Poly::from_mask(family.polynomial_mask), n_check - 1);
  return fit_linear_representation(family.d0, family.d1, counts);
}

std::vector<double> representation_counts(const LinearRepresentation& rep,
                                          const MatrixFamily& family, unsigned j) {
  if (j > 28) throw Error(Errc::InvalidArgument, "representation_counts needs j <= 28");
  const FloatMatrix d0 = to_float(family.d0), d1 = to_float(family.d1);
  const Eigen::VectorXd u = to_float(RationalMatrix(rep.u)), v = to_float(RationalMatrix(rep.v));
  const bool lsb = rep.order == DigitOrder::LsbFirst;
  const Eigen::VectorXd& seed = lsb ? v : u;
  const Eigen::VectorXd& other = lsb ? u : v;
  const std::uint64_t total = std::uint64_t{1} << j;
  std::vector<double> counts(total);
  counts[0] = seed.dot(other);
  // Keep the vectors of one octave at a time.
  std::vector<Eigen::VectorXd> level{seed};  // n in [2^{k-1}, 2^k), starting with n = 0
  std::uint64_t level_start = 0;
  for (unsigned k = 1; k <= j; ++k) {
    const std::uint64_t start = std::uint64_t{1} << (k - 1), end = start << 1;
    std::vector<Eigen::VectorXd> next;
    next.reserve(end - start);
    for (std::uint64_t n = start; n < end; ++n) {
      const std::uint64_t parent = n >> 1;
      const Eigen::VectorXd& p = parent == 0 ? seed : level[parent - level_start];
      const FloatMatrix& d = (n & 1u) ? d1 : d0;
      next.push_back(lsb ? Eigen::VectorXd(d * p) : Eigen::VectorXd(d.transpose() * p));
      counts[n] = next.back().dot(other);
    }
    level.swap(next);
    level_start = start;
  }
  return counts;
}

EmpiricalDispersion empirical_dispersion(const MatrixFamily& family, unsigned j_max,
                                         unsigned j_min) {
  if (j_min < 1 || j_min >= j_max || j_max > 28)
    throw Error(Errc::InvalidArgument, "empirical_dispersion needs 1 <= j_min < j_max <= 28");
  const auto m = static_cast<std::uint64_t>(family.dim());
  const LinearRepresentation rep =
      fit_linear_representation(family, std::max<std::uint64_t>(4096, 2 * m * m));
  const std::vector<double> counts = representation_counts(rep, family, j_max);
  std::vector<double> logs(counts.size());
  for (std::size_t n = 0; n < counts.size(); ++n) {
    if (!(counts[n] >= 1.0))
      throw Error(Errc::InvariantViolation, "count below 1 at n = " + std::to_string(n));
    logs[n] = std::log(counts[n]);
  }
  auto mean_var = [](const std::vector<double>& xs, std::uint64_t len) {
    CompensatedSum s;
    for (std::uint64_t i = 0; i < len; ++i) s.add(xs[i]);
    const double mean = s.value() / static_cast<double>(len);
    CompensatedSum q;
    for (std::uint64_t i = 0; i < len; ++i) q.add((xs[i] - mean) * (xs[i] - mean));
    return std::pair{mean, q.value() / static_cast<double>(len)};
  };
  EmpiricalDispersion out;
  out.order = rep.order;
  for (unsigned j = j_min; j <= j_max; ++j) {
    const std::uint64_t len = std::uint64_t{1} << j;
    OctaveRow row;
    row.j = j;
    std::tie(row.mean, row.var) = mean_var(counts, len);
    row.var_ln = mean_var(logs, len).second;
    const double ln_n = j * std::numbers::ln2;
    row.avg_ratio = std::log(row.var) / ln_n;
    row.typ_ratio = row.var_ln / ln_n;
    out.octaves.push_back(row);
  }
  auto slope = [&](auto field) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = static_cast<double>(out.octaves.size());
    for (const auto& r : out.octaves) {
      const double x = r.j * std::numbers::ln2, y = field(r);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
  };
  out.avg_slope = slope([](const OctaveRow& r) { return std::log(r.var); });
  out.typ_slope = slope([](const OctaveRow& r) { return r.var_ln; });
  return out;
}

// ---------------------------------------------------------------------------
// Digit distributions

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

DigitMoments moments_of(const std::vector<std::uint64_t>& hist, std::uint64_t total, unsigned j) {
  const double c = j / 2.0, s = std::sqrt(j / 4.0);
  DigitMoments dm;
  const double nt = static_cast<double>(total);
  for (std::size_t k = 0; k < hist.size(); ++k) dm.mean += hist[k] / nt * ((k - c) / s);
  double m2 = 0.0, m3 = 0.0;
  for (std::size_t k = 0; k < hist.size(); ++k) {
    const double d = (k - c) / s - dm.mean;
    m2 += hist[k] / nt * d * d;
    m3 += hist[k] / nt * d * d * d;
  }
  dm.variance = m2;
  dm.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  double cum = 0.0;
  dm.normal_cdf_distance = normal_cdf((-0.5 - c) / s);  // P(# <= -1) = 0
  for (std::size_t k = 0; k < hist.size(); ++k) {
    cum += hist[k] / nt;
    dm.normal_cdf_distance =
        std::max(dm.normal_cdf_distance, std::abs(cum - normal_cdf((k + 0.5 - c) / s)));
  }
  return dm;
}

}  // namespace

DigitComparison digit_distribution_compare(std::uint64_t a, std::uint64_t b, unsigned j,
                                           std::uint64_t n_samples, std::uint64_t seed) {
  if (a == 0 || b >= a) throw Error(Errc::InvalidArgument, "need 0 <= b < a");
  if (j == 0 || j + std::bit_width(a) > 63)
    throw Error(Errc::InvalidArgument, "need j >= 1 and a 2^j < 2^63");
  if (n_samples == 0) throw Error(Errc::InvalidArgument, "need at least one sample");
  DigitComparison r;
  r.a = a;
  r.b = b;
  r.j = j;
  std::vector<std::uint64_t> h_ref(66, 0), h_shift(66, 0);
  const std::uint64_t range = std::uint64_t{1} << j;
  auto record = [&](std::uint64_t n) {
    ++h_ref[digit_sum(n)];
    ++h_shift[digit_sum(a * n + b)];
  };
  if (n_samples >= range) {
    for (std::uint64_t n = 0; n < range; ++n) record(n);
    r.samples = range;
  } else {
    Philox4x32 rng(seed, 0);
    for (std::uint64_t i = 0; i < n_samples; ++i) {
      const std::uint64_t u = (static_cast<std::uint64_t>(rng()) << 32) | rng();
      record(u >> (64 - j));
    }
    r.samples = n_samples;
  }
  r.reference = moments_of(h_ref, r.samples, j);
  r.shifted = moments_of(h_shift, r.samples, j);
  double ca = 0.0, cb = 0.0;
  for (std::size_t k = 0; k < h_ref.size(); ++k) {
    ca += static_cast<double>(h_ref[k]) / r.samples;
    cb += static_cast<double>(h_shift[k]) / r.samples;
    r.cdf_distance = std::max(r.cdf_distance, std::abs(ca - cb));
  }
  return r;
}

}  // namespace lyapdisp
