#include "lyapdisp/exactmat.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

namespace lyapdisp {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::DimensionCap: return "DimensionCap";
    case Errc::RankNotOne: return "RankNotOne";
    case Errc::ZeroMatrix: return "ZeroMatrix";
    case Errc::Singular: return "Singular";
    case Errc::NonConvergence: return "NonConvergence";
    case Errc::NotIdempotentSimilar: return "NotIdempotentSimilar";
    case Errc::DegenerateSequence: return "DegenerateSequence";
    case Errc::Overflow: return "Overflow";
    case Errc::NoBracket: return "NoBracket";
    case Errc::NoRoot: return "NoRoot";
    case Errc::TruncationUnstable: return "TruncationUnstable";
    case Errc::UnknownFamily: return "UnknownFamily";
    case Errc::InvariantViolation: return "InvariantViolation";
    case Errc::ParseError: return "ParseError";
    case Errc::DegenerateProduct: return "DegenerateProduct";
    case Errc::NoRepresentationFound: return "NoRepresentationFound";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

Integer parse_integer(std::string_view text, std::string_view whole) {
  std::size_t start = (!text.empty() && (text[0] == '-' || text[0] == '+')) ? 1 : 0;
  if (start == text.size() ||
      !std::all_of(text.begin() + start, text.end(),
                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw Error(Errc::ParseError, "not a rational: '" + std::string(whole) + "'");
  std::string digits(text);
  if (digits[0] == '+') digits.erase(0, 1);
  return Integer(digits);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto trimmed = text;
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front())))
    trimmed.remove_prefix(1);
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back())))
    trimmed.remove_suffix(1);
  const auto slash = trimmed.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(trimmed, text));
  const Integer num = parse_integer(trimmed.substr(0, slash), text);
  const Integer den = parse_integer(trimmed.substr(slash + 1), text);
  if (den == 0) throw Error(Errc::ParseError, "zero denominator in '" + std::string(text) + "'");
  // The two-integer constructor canonicalizes.
  return Rational(num, den);
}

std::string format_rational(const Rational& r) {
  const Integer num = mp::numerator(r);
  const Integer den = mp::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

FloatMatrix to_float(const RationalMatrix& a) {
  FloatMatrix out(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out(i, j) = to_double(a(i, j));
  return out;
}

double spectral_radius(const FloatMatrix& a, const SpectralOptions& opts) {
  if (a.rows() != a.cols()) throw Error(Errc::DimensionMismatch, "spectral_radius: not square");
  if (!(opts.tol > 0.0)) throw Error(Errc::InvalidArgument, "spectral_radius: tol must be > 0");
  const Eigen::Index n = a.rows();
  // Iterating with A + I keeps the Perron root strictly dominant even when A
  // is periodic; the Rayleigh quotient is taken against A itself.
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  x /= x.norm();
  double previous = std::numeric_limits<double>::quiet_NaN();
  for (long it = 0; it < opts.max_iterations; ++it) {
    const Eigen::VectorXd ax = a * x;
    const double rayleigh = x.dot(ax);
    if (std::abs(rayleigh - previous) < opts.tol) return std::abs(rayleigh);
    previous = rayleigh;
    Eigen::VectorXd next = ax + x;
    const double norm = next.norm();
    if (norm == 0.0) return 0.0;
    x = next / norm;
  }
  throw Error(Errc::NonConvergence,
              "spectral_radius: no convergence after " + std::to_string(opts.max_iterations));
}

double poly_eval(std::span<const std::int64_t> coeffs, double x) {
  long double acc = 0.0L;
  for (auto c : coeffs) acc = acc * x + static_cast<long double>(c);
  return static_cast<double>(acc);
}

double poly_derivative(std::span<const std::int64_t> coeffs, double x) {
  long double acc = 0.0L;
  const std::size_t degree = coeffs.empty() ? 0 : coeffs.size() - 1;
  for (std::size_t i = 0; i < degree; ++i)
    acc = acc * x + static_cast<long double>(coeffs[i]) * static_cast<long double>(degree - i);
  return static_cast<double>(acc);
}

double poly_root_residual(std::span<const std::int64_t> coeffs, double x) {
  const double value = poly_eval(coeffs, x);
  const double slope = poly_derivative(coeffs, x);
  if (slope == 0.0) return value == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(value) / std::abs(slope);
}

}  // namespace lyapdisp
