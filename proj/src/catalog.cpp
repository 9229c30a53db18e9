#include "lyapdisp/catalog.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "lyapdisp/gle.hpp"

namespace lyapdisp {

namespace {

RationalMatrix mat(Eigen::Index dim, std::string_view entries) {
  RationalMatrix out(dim, dim);
  std::istringstream in{std::string(entries)};
  std::string tok;
  Eigen::Index k = 0;
  while (in >> tok) {
    if (k >= dim * dim) throw Error(Errc::InvalidArgument, "too many matrix entries");
    out(k / dim, k % dim) = parse_rational(tok);
    ++k;
  }
  if (k != dim * dim) throw Error(Errc::InvalidArgument, "too few matrix entries");
  return out;
}

ReferenceValue ref(std::string printed, double tol, std::string source,
                   std::optional<double> value = std::nullopt) {
  ReferenceValue r;
  r.value = value ? *value : std::stod(printed);
  r.printed = std::move(printed);
  r.tol = tol;
  r.source = std::move(source);
  return r;
}

std::vector<MatrixFamily> make_builtins() {
  std::vector<MatrixFamily> out;

  {
    MatrixFamily f;
    f.name = "g1";
    f.aliases = {"binomial", "binomials"};
    f.q = 1;
    f.d0 = mat(1, "1");
    f.d1 = mat(1, "2");
    f.d0_prime = mat(1, "1");
    f.d1_prime = mat(1, "2");
    f.polynomial_mask = 0b11;
    auto& r = f.reference;
    r.lambda = ref("0.3465735902799726547086160", 1e-10, "published, ln(2)/2");
    r.kappa = ref("2ln(2)", 1e-10, "published", 2.0 * std::log(2.0));
    r.mu = ref("(3/2)ln(2)^2", 1e-10, "published", 1.5 * std::log(2.0) * std::log(2.0));
    r.sigma2 = ref("0.1201132534795503561667756", 1e-10, "published, ln(2)^2/4");
    r.avg = ref("1.3219280948873623478703194", 1e-8, "published, ln(5/2)/ln(2)");
    r.typ = ref("0.1732867951399863273543080", 1e-10, "published, ln(2)/4");
    r.minpoly = {2, -5};
    r.minpoly_source = "e^{L(2)} = 5/2";
    out.push_back(std::move(f));
  }
  {
    MatrixFamily f;
    f.name = "g2";
    f.aliases = {"trinomial-I", "trinomials-I", "h2"};
    f.q = 1;
    f.d0 = mat(2, "1 2  0 0");
    f.d1 = mat(2, "1 2  1 0");
    f.d0_prime = mat(2, "1 0  0 0");
    f.d1_prime = mat(2, "3 -4  1 -2");
    f.polynomial_mask = 0b111;
    auto& r = f.reference;
    r.lambda = ref("0.4299474333424527201146970", 1e-8, "published");
    r.sigma2 = ref("0.1211367118847285164803949", 1e-7, "published");
    r.avg = ref("1.4924205743549514375202537", 1e-8, "published");
    r.typ = ref("0.1747633335056929866262498", 1e-7, "published");
    r.minpoly = {1, -2, -3, 2};
    r.minpoly_source = "published";
    out.push_back(std::move(f));
  }
  {
    MatrixFamily f;
    f.name = "g3";
    f.aliases = {"quadrinomial", "quadrinomials"};
    f.q = 2;
    f.d0 = mat(3, "1 2 0  0 0 1  0 0 0");
    f.d1 = mat(3, "0 0 0  2 0 0  0 1 2");
    f.d0_prime = mat(3, "1 0 0  0 0 0  0 1 0");
    f.d1_prime = mat(3, "4 -4 -6  0 2 1  2 -4 -4");
    f.polynomial_mask = 0b1111;
    auto& r = f.reference;
    r.lambda = ref("ln(2)/2", 1e-6, "published", std::log(2.0) / 2.0);
    r.sigma2 = ref("0.12011325", 1e-6, "published");
    r.avg = ref("1.3219280948873623478703194", 1e-8, "published, e^{L(2)} = 5/2");
    r.typ = ref("ln(2)/4", 1e-6, "published conjecture, proved via regrouping", std::log(2.0) / 4.0);
    r.minpoly = {2, -5};
    r.minpoly_source = "e^{L(2)} = 5/2";
    out.push_back(std::move(f));
  }
  {
    MatrixFamily f;
    f.name = "h3";
    f.aliases = {"trinomial-II", "trinomials-II"};
    f.q = 2;
    f.d0 = mat(4, "1 2 1 0  0 0 1 1  0 0 0 0  0 0 0 0");
    f.d1 = mat(4, "1 1 1 0  1 0 0 1  0 1 0 0  0 0 1 1");
    f.d0_prime = mat(4, "1 0 0 0  0 0 0 0  0 1 0 0  0 0 0 0");
    f.d1_prime = mat(4, "3 -6 -2 4  0 1 1 0  1 -3 -2 2  0 1 0 0");
    f.polynomial_mask = 0b1011;
    auto& r = f.reference;
    r.lambda = ref("0.45454538229305", 1e-6, "published");
    r.sigma2 = ref("0.12497319", 1e-5, "published");
    r.avg = ref("1.5459492845008943975543991", 1e-8, "published");
    r.typ = ref("0.18029820", 1e-5, "published");
    r.minpoly = {16, -40, -36, 22, 76, 7, -19, -19, 0, 2, 1};
    r.minpoly_source = "published";
    out.push_back(std::move(f));
  }
  {
    MatrixFamily f;
    f.name = "g4";
    f.aliases = {"quintinomial", "quintinomials"};
    f.q = 2;
    f.d0 = mat(4, "1 1 2 0  0 0 0 0  0 1 0 2  0 0 0 0");
    f.d1 = mat(4, "0 1 2 0  1 0 0 0  1 0 0 2  0 1 0 0");
    f.d0_prime = mat(4, "1 0 0 0  0 0 0 0  0 1 0 0  0 0 0 0");
    f.d1_prime = mat(4, "5 -10 -8 4  1 -1 -2 -2  1 -3 -2 4  0 1 0 -2");
    f.polynomial_mask = 0b11111;
    auto& r = f.reference;
    r.lambda = ref("0.504253705692", 1e-6, "published");
    r.sigma2 = ref("0.11406217", 1e-5, "published");
    r.avg = ref("1.6534827473445406557431504", 1e-8, "published");
    r.typ = ref("0.16455692", 1e-5, "published");
    r.minpoly = {4, -8, -21, 14, -28, 126, 65, 68, 48, -56, -32};
    r.minpoly_source = "published";
    out.push_back(std::move(f));
  }
  {
    MatrixFamily f;
    f.name = "h4";
    f.aliases = {"trinomial-III", "trinomials-III"};
    f.q = 2;
    f.d0 = mat(8,
               "1 0 2 0 1 2 1 1  0 0 0 0 0 0 0 0  0 1 0 2 1 0 1 1  0 0 0 0 0 0 0 0 "
               "0 0 0 0 0 0 0 0  0 0 0 0 0 0 0 0  0 0 0 0 0 0 0 0  0 0 0 0 0 0 0 0");
    f.d1 = mat(8,
               "1 0 1 0 0 1 0 0  1 0 0 0 0 0 0 0  0 1 0 1 1 0 0 1  0 1 0 0 0 0 0 0 "
               "0 0 1 0 0 0 0 1  0 0 0 1 0 0 1 0  0 0 0 0 1 0 0 0  0 0 0 0 0 1 1 0");
    f.d0_prime = mat(8,
                     "1 0 0 0 0 0 0 0  0 0 0 0 0 0 0 0  0 1 0 0 0 0 0 0  0 0 0 0 0 0 0 0 "
                     "0 0 0 0 0 0 0 0  0 0 0 0 0 0 0 0  0 0 0 0 0 0 0 0  0 0 0 0 0 0 0 0");
    f.d1_prime = mat(8,
                     "3 0 -2 -8 -4 -2 -4 -4  1 0 -1 -4 -2 -1 -2 -2  0 1 0 -1 0 0 -1 0 "
                     "0 1 0 -2 -1 0 -1 -1  0 0 1 0 0 0 0 1  0 0 0 1 0 0 1 0 "
                     "0 0 0 0 1 0 0 0  0 0 0 0 0 1 1 0");
    f.polynomial_mask = 0b10011;
    auto& r = f.reference;
    r.lambda = ref("0.45759385431410", 1e-6, "published");
    r.sigma2 = ref("0.13055386", 1e-5, "published");
    r.avg = ref("1.5707744868006419128591802", 1e-8, "published");
    r.typ = ref("0.18834940", 1e-5, "published");
    r.minpoly = {32, -80, -8, -60, -232, 240, 44, 9, 11, -54, -4, 3, 1, 2};
    r.minpoly_source = "published";
    out.push_back(std::move(f));
  }
  {
    MatrixFamily f;
    f.name = "g5";
    f.aliases = {"sextinomial", "sextinomials"};
    f.q = 3;
    f.d0 = mat(6,
               "1 1 2 2 0 0  0 0 0 0 0 0  0 1 0 0 1 1  0 0 0 0 0 0  0 0 0 0 0 0  0 0 0 0 1 0");
    f.d1 = mat(6,
               "0 0 0 0 0 0  2 2 0 0 0 0  0 0 0 0 0 0  0 0 1 1 2 2  0 0 0 1 0 0  0 0 0 0 0 0");
    f.d0_prime = mat(6,
                     "1 0 0 0 0 0  0 0 0 0 0 0  0 1 0 0 0 0  0 0 1 0 0 0  0 0 0 0 0 0 "
                     "0 0 0 0 0 0");
    f.d1_prime = mat(6,
                     "6 -8 -8 -10 -4 -6  0 0 0 0 0 1  2 -4 -4 -4 0 -3  0 0 0 0 0 0 "
                     "2 -4 -4 -4 0 -3  0 2 2 1 -2 1");
    f.polynomial_mask = 0b111111;
    auto& r = f.reference;
    r.lambda = ref("0.5344481528", 1e-5, "published");
    r.sigma2 = ref("0.0965", 5e-4, "published");
    r.avg = ref("1.6903750759639444915537652", 1e-8, "published");
    r.typ = ref("0.1392", 1e-3, "published");
    r.minpoly = {128, -640, 416, 1008, 416, -28, -3112, -2572, 346, 1887, 511, 144};
    r.minpoly_source = "published";
    out.push_back(std::move(f));
  }
  {
    MatrixFamily f;
    f.name = "g6";
    f.aliases = {"septinomial", "septinomials"};
    f.q = 3;
    f.d0 = mat(6,
               "1 0 1 2 0 0  0 0 0 0 0 0  0 0 0 0 1 2  0 2 1 0 1 0  0 0 0 0 0 0  0 0 0 0 0 0");
    f.d1 = mat(6,
               "0 0 0 2 1 0  1 0 0 0 0 0  1 0 0 0 0 2  0 2 1 0 0 0  0 0 1 0 0 0  0 0 0 0 1 0");
    f.d0_prime = mat(6,
                     "1 0 0 0 0 0  0 0 0 0 0 0  0 1 0 0 0 0  0 0 1 0 0 0  0 0 0 0 0 0 "
                     "0 0 0 0 0 0");
    f.d1_prime = mat(6,
                     "7 -36 -28 -24 4 -4  0 0 1 0 1/2 -2  3/2 -8 -8 -6 1/2 1 "
                     "0 0 1 0 -1/2 1  2 -12 -10 -8 1 0  1 -6 -6 -4 1 0");
    f.polynomial_mask = 0b1111111;
    auto& r = f.reference;
    r.lambda = ref("0.53765282", 1e-5, "published");
    r.sigma2 = ref("0.1082", 5e-4, "published");
    r.avg = ref("1.7258729504941114967801068", 1e-8, "published");
    r.typ = ref("0.1561", 1e-3, "published");
    r.minpoly = {8,     -4,   -18,    -335,  34,     474,   4072, 302,
                 -3119, -16848, -1056, 7321, 29681, 910,  -6690, -22628,
                 -152,  1936,  6112,  0,     -128,  -512};
    r.minpoly_source = "published";
    out.push_back(std::move(f));
  }
  for (const auto& f : out) validate_family(f);
  return out;
}

std::vector<std::string> json_entries(const RationalMatrix& m) {
  std::vector<std::string> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(format_rational(m(i, j)));
  return out;
}

RationalMatrix matrix_from_json(const nlohmann::json& node, Eigen::Index dim,
                                const std::string& field) {
  if (!node.is_array())
    throw Error(Errc::ParseError, "field '" + field + "': expected array of \"p/q\" strings");
  if (static_cast<Eigen::Index>(node.size()) != dim * dim)
    throw Error(Errc::ParseError, "field '" + field + "': expected " +
                                      std::to_string(dim * dim) + " entries, got " +
                                      std::to_string(node.size()));
  RationalMatrix out(dim, dim);
  for (Eigen::Index k = 0; k < dim * dim; ++k) {
    const auto& e = node[static_cast<std::size_t>(k)];
    if (!e.is_string())
      throw Error(Errc::ParseError, "field '" + field + "' entry " + std::to_string(k) +
                                        ": entries must be strings");
    try {
      out(k / dim, k % dim) = parse_rational(e.get<std::string>());
    } catch (const Error& err) {
      throw Error(Errc::ParseError,
                  "field '" + field + "' entry " + std::to_string(k) + ": " + err.what());
    }
  }
  return out;
}

double parse_reference_number(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw Error(Errc::ParseError, "reference value '" + text + "' is not a number");
  return v;
}

bool is_plain_number(const std::string& text) {
  try {
    parse_reference_number(text);
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::optional<ReferenceValue> reference_from_json(const nlohmann::json& node, const char* key) {
  if (!node.contains(key)) return std::nullopt;
  const auto& v = node.at(key);
  ReferenceValue r;
  if (v.at("value").is_string()) {
    r.value = parse_reference_number(v.at("value").get<std::string>());
    r.printed = v.value("printed", v.at("value").get<std::string>());
  } else {
    r.value = v.at("value").get<double>();
    r.printed = v.value("printed", std::to_string(r.value));
  }
  r.tol = v.value("tol", 0.0);
  r.source = v.value("source", std::string("file"));
  return r;
}

// Symbolic references ("ln(2)/4") keep their text under "printed".
void reference_to_json(nlohmann::json& node, const char* key,
                       const std::optional<ReferenceValue>& r) {
  if (!r) return;
  if (is_plain_number(r->printed)) {
    node[key] = {{"value", r->printed}, {"tol", r->tol}, {"source", r->source}};
  } else {
    std::ostringstream os;
    os << std::setprecision(17) << r->value;
    node[key] = {{"value", os.str()}, {"printed", r->printed}, {"tol", r->tol}, {"source", r->source}};
  }
}

}  // namespace

SentinelFactorization MatrixFamily::factorization() const {
  return sentinel_factorization(d0, d1, q, name);
}

void validate_family(const MatrixFamily& family) {
  const auto fail = [&](const std::string& check, const std::string& detail) {
    throw Error(Errc::InvariantViolation, check + ": family '" + family.name + "': " + detail);
  };
  if (family.q == 0) fail("q", "q must be >= 1");
  if (family.d0.rows() == 0 || family.d0.rows() != family.d0.cols() ||
      family.d1.rows() != family.d1.cols() || family.d0.rows() != family.d1.rows())
    fail("dimension", "D0 and D1 must be square of equal nonzero size");
  for (const auto* m : {&family.d0, &family.d1})
    for (Eigen::Index i = 0; i < m->rows(); ++i)
      for (Eigen::Index j = 0; j < m->cols(); ++j)
        if ((*m)(i, j) < 0) fail("nonnegative", "negative entry");
  const RationalMatrix sentinel = mat_pow(family.d0, family.q);
  if (exact_rank(sentinel) != 1)
    fail("rank", "rank(D0^q) = " + std::to_string(exact_rank(sentinel)));
  if (sentinel.trace() != 1) fail("trace", "trace(D0^q) = " + format_rational(sentinel.trace()));
  for (const auto* p : {&family.d0_prime, &family.d1_prime})
    if (*p && ((*p)->rows() != family.dim() || (*p)->cols() != family.dim()))
      fail("dimension", "reference D' matrix has the wrong size");
}

const std::vector<MatrixFamily>& builtin_families() {
  static const std::vector<MatrixFamily> families = make_builtins();
  return families;
}

std::vector<std::string> builtin_family_names() {
  std::vector<std::string> out;
  for (const auto& f : builtin_families()) out.push_back(f.name);
  return out;
}

MatrixFamily get_family(std::string_view name) {
  if (!name.empty() && name.front() == '@') return load_family_file(std::string(name.substr(1)));
  for (const auto& f : builtin_families()) {
    if (f.name == name) return f;
    for (const auto& a : f.aliases)
      if (a == name) return f;
  }
  throw Error(Errc::UnknownFamily, "no family named '" + std::string(name) + "'");
}

MatrixFamily load_family_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open family file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_family_json(buf.str());
}

MatrixFamily parse_family_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::ParseError, e.what());
  }
  MatrixFamily f;
  try {
    f.name = j.at("name").get<std::string>();
    const auto q = j.at("q").get<long long>();
    const auto dim = j.at("dim").get<long long>();
    if (q < 1) throw Error(Errc::ParseError, "field 'q': must be >= 1");
    if (dim < 1 || dim > 64) throw Error(Errc::ParseError, "field 'dim': must be in [1, 64]");
    f.q = static_cast<unsigned>(q);
    f.d0 = matrix_from_json(j.at("D0"), dim, "D0");
    f.d1 = matrix_from_json(j.at("D1"), dim, "D1");
    if (j.contains("D0_prime")) f.d0_prime = matrix_from_json(j.at("D0_prime"), dim, "D0_prime");
    if (j.contains("D1_prime")) f.d1_prime = matrix_from_json(j.at("D1_prime"), dim, "D1_prime");
    f.polynomial_mask = j.value("polynomial_mask", std::uint64_t{0});
    if (j.contains("reference")) {
      const auto& r = j.at("reference");
      f.reference.lambda = reference_from_json(r, "lambda");
      f.reference.kappa = reference_from_json(r, "kappa");
      f.reference.mu = reference_from_json(r, "mu");
      f.reference.sigma2 = reference_from_json(r, "sigma2");
      f.reference.avg = reference_from_json(r, "avg");
      f.reference.typ = reference_from_json(r, "typ");
      if (r.contains("minpoly")) f.reference.minpoly = r.at("minpoly").get<std::vector<std::int64_t>>();
      f.reference.minpoly_source = r.value("minpoly_source", std::string());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
  validate_family(f);
  return f;
}

std::string family_to_json(const MatrixFamily& family) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["name"] = family.name;
  j["q"] = family.q;
  j["dim"] = family.dim();
  j["D0"] = json_entries(family.d0);
  j["D1"] = json_entries(family.d1);
  if (family.d0_prime) j["D0_prime"] = json_entries(*family.d0_prime);
  if (family.d1_prime) j["D1_prime"] = json_entries(*family.d1_prime);
  j["polynomial_mask"] = family.polynomial_mask;
  nlohmann::json r = nlohmann::json::object();
  reference_to_json(r, "lambda", family.reference.lambda);
  reference_to_json(r, "kappa", family.reference.kappa);
  reference_to_json(r, "mu", family.reference.mu);
  reference_to_json(r, "sigma2", family.reference.sigma2);
  reference_to_json(r, "avg", family.reference.avg);
  reference_to_json(r, "typ", family.reference.typ);
  if (!family.reference.minpoly.empty()) {
    r["minpoly"] = family.reference.minpoly;
    r["minpoly_source"] = family.reference.minpoly_source;
  }
  j["reference"] = r;
  return j.dump(2);
}

std::vector<VerifyRow> verify_constants(const MatrixFamily& family, const ExponentReport& report) {
  std::vector<VerifyRow> rows;
  const auto& ref = family.reference;
  auto add = [&](const std::string& quantity, double computed, double err,
                 const std::optional<ReferenceValue>& r) {
    if (!r) return;
    VerifyRow row;
    row.quantity = quantity + " vs " + r->printed;
    row.computed = computed;
    row.reference = r->value;
    row.tol = std::max(r->tol, 10.0 * err);
    row.pass = std::isfinite(computed) && std::abs(computed - r->value) <= row.tol;
    rows.push_back(row);
  };
  const double ln2 = std::log(2.0);
  add("lambda", report.lambda.accelerated, report.lambda.error, ref.lambda);
  add("kappa", report.kappa.accelerated, report.kappa.error, ref.kappa);
  add("mu", report.mu.accelerated, report.mu.error, ref.mu);
  add("sigma2", report.sigma2, report.sigma2_error, ref.sigma2);
  add("sigma2/ln2", report.sigma2 / ln2, report.sigma2_error / ln2, ref.typ);
  if (report.replica_l2) add("L(2)/ln2", std::log(*report.replica_l2) / ln2, 0.0, ref.avg);
  if (report.replica_l2 && !ref.minpoly.empty()) {
    VerifyRow row;
    row.quantity = "minpoly residual |p(xi)|/|p'(xi)|";
    row.computed = poly_root_residual(ref.minpoly, *report.replica_l2);
    row.reference = 0.0;
    row.tol = 1e-8;
    row.pass = row.computed < row.tol;
    rows.push_back(row);
  }
  {
    VerifyRow row;
    row.quantity = "skipped zero-corner words";
    row.computed = static_cast<double>(report.skipped_words);
    row.reference = 0.0;
    row.tol = 0.0;
    row.pass = report.skipped_words == 0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lyapdisp
