#include "lyapdisp/report_io.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace lyapdisp {

using nlohmann::json;

namespace {

json base(const char* kind) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = kind;
  return j;
}

json estimate(const SeriesEstimate& e) {
  return {{"raw", e.raw}, {"accel", e.accelerated}, {"err", e.error}, {"depth", e.depth}};
}

/// NaN and infinities are not JSON numbers.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string g17(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string to_json(const ExponentReport& r) {
  json j = base("exponents");
  j["family"] = r.family;
  j["q"] = r.q;
  j["max_len"] = r.max_len;
  j["accelerated"] = r.accelerated;
  j["lambda"] = estimate(r.lambda);
  j["kappa"] = estimate(r.kappa);
  j["mu"] = estimate(r.mu);
  j["sigma2"] = {{"value", r.sigma2}, {"err", r.sigma2_error}};
  j["L_samples"] = json::array();
  for (const auto& s : r.l_samples) j["L_samples"].push_back({{"t", s.t}, {"L", s.value}});
  j["replica"] = json::array();
  if (r.replica_l1) j["replica"].push_back({{"t", 1}, {"value", *r.replica_l1}});
  if (r.replica_l2) j["replica"].push_back({{"t", 2}, {"value", *r.replica_l2}});
  j["skipped_words"] = r.skipped_words;
  j["words_visited"] = r.words_visited;
  return dump(j);
}

std::string to_json(const SimResult& r) {
  json j = base("simulation");
  j["k"] = r.k;
  j["trials"] = r.trials;
  j["degenerate"] = r.degenerate;
  j["mean_log_norm"] = r.mean;
  j["var_log_norm"] = r.variance;
  j["lambda_hat"] = {{"value", r.lambda_hat}, {"se", r.lambda_se}};
  j["sigma2_hat"] = {{"value", r.sigma2_hat}, {"se", r.sigma2_se}};
  if (r.t) j["moment"] = {{"t", *r.t}, {"growth", r.growth}, {"se", r.growth_se}};
  return dump(j);
}

std::string to_json(const std::vector<VerifyRow>& rows, const std::string& family) {
  json j = base("verify");
  j["family"] = family;
  bool all = true;
  j["rows"] = json::array();
  for (const auto& r : rows) {
    j["rows"].push_back({{"quantity", r.quantity},
                         {"computed", number(r.computed)},
                         {"reference", number(r.reference)},
                         {"tol", r.tol},
                         {"pass", r.pass}});
    all = all && r.pass;
  }
  j["pass"] = all;
  return dump(j);
}

std::string to_json(const FluctuationScan& s) {
  json j = base("fluctuation_scan");
  j["function"] = to_string(s.kind);
  j["n_max"] = s.n_max;
  j["inf"] = {{"value", s.inf}, {"n", s.inf_n}};
  j["sup"] = {{"value", s.sup}, {"n", s.sup_n}};
  j["mean"] = s.mean;
  j["bound_violations"] = s.bound_violations;
  if (s.bound_violations) j["first_violation"] = s.first_violation;
  return dump(j);
}

std::string to_json(const FluctuationStatistics& s) {
  json j = base("fluctuation_statistics");
  j["function"] = to_string(s.kind);
  j["samples"] = s.samples.size();
  j["inf"] = s.inf;
  j["sup"] = s.sup;
  j["mean"] = s.mean;
  j["percentiles"] = json::array();
  for (const auto& p : s.percentiles) j["percentiles"].push_back({{"p", p.p}, {"value", p.value}});
  return dump(j);
}

std::string to_json(const EmpiricalDispersion& d, const std::string& family) {
  json j = base("empirical_dispersion");
  j["family"] = family;
  j["digit_order"] = to_string(d.order);
  j["avg_slope"] = d.avg_slope;
  j["typ_slope"] = d.typ_slope;
  j["octaves"] = json::array();
  for (const auto& r : d.octaves)
    j["octaves"].push_back({{"j", r.j},
                            {"mean", r.mean},
                            {"var", r.var},
                            {"var_ln", r.var_ln},
                            {"avg_ratio", r.avg_ratio},
                            {"typ_ratio", r.typ_ratio}});
  return dump(j);
}

std::string to_json(const DigitComparison& c) {
  json j = base("digit_comparison");
  j["a"] = c.a;
  j["b"] = c.b;
  j["j"] = c.j;
  j["samples"] = c.samples;
  auto moments = [](const DigitMoments& m) {
    return json{{"mean", m.mean},
                {"variance", m.variance},
                {"skewness", m.skewness},
                {"normal_cdf_distance", m.normal_cdf_distance}};
  };
  j["reference"] = moments(c.reference);
  j["shifted"] = moments(c.shifted);
  j["cdf_distance"] = c.cdf_distance;
  return dump(j);
}

std::string to_json(const LinearRepresentation& rep, const std::string& family) {
  json j = base("linear_representation");
  j["family"] = family;
  j["digit_order"] = to_string(rep.order);
  j["u"] = json::array();
  j["v"] = json::array();
  for (Eigen::Index i = 0; i < rep.u.size(); ++i) j["u"].push_back(format_rational(rep.u(i)));
  for (Eigen::Index i = 0; i < rep.v.size(); ++i) j["v"].push_back(format_rational(rep.v(i)));
  j["validated_below"] = rep.validated_below;
  return dump(j);
}

std::string to_json(const DispersionParams& d, const std::string& family) {
  json j = base("dispersion");
  j["family"] = family;
  j["avg"] = d.avg;
  j["typ"] = {{"value", d.typ}, {"err", d.typ_error}};
  return dump(j);
}

std::string moment_series_csv(const MomentSeries& s) {
  std::ostringstream os;
  os << "len,words,Slambda,Skappa,Smu\n";
  for (std::size_t l = 0; l < s.slabs.size(); ++l) {
    const auto& x = s.slabs[l];
    os << l << ',' << x.words << ',' << g17(x.lambda) << ',' << g17(x.kappa) << ',' << g17(x.mu)
       << '\n';
  }
  return os.str();
}

std::string log_norms_csv(const SimResult& r) {
  std::ostringstream os;
  os << "trial,log_norm\n";
  for (std::size_t i = 0; i < r.log_norms.size(); ++i) os << i << ',' << g17(r.log_norms[i]) << '\n';
  return os.str();
}

std::string samples_csv(const std::vector<FluctuationSample>& samples) {
  std::ostringstream os;
  os << "n,x,value\n";
  for (const auto& s : samples) os << s.n << ',' << g17(s.x) << ',' << g17(s.value) << '\n';
  return os.str();
}

std::string histogram_csv(const std::vector<HistogramBin>& bins) {
  std::ostringstream os;
  os << "bin_lo,bin_hi,mass\n";
  for (const auto& b : bins) os << g17(b.lo) << ',' << g17(b.hi) << ',' << g17(b.mass) << '\n';
  return os.str();
}

std::string dispersion_csv(const EmpiricalDispersion& d) {
  std::ostringstream os;
  os << "j,mean,var,var_ln,avg_ratio,typ_ratio\n";
  for (const auto& r : d.octaves)
    os << r.j << ',' << g17(r.mean) << ',' << g17(r.var) << ',' << g17(r.var_ln) << ','
       << g17(r.avg_ratio) << ',' << g17(r.typ_ratio) << '\n';
  return os.str();
}

}  // namespace lyapdisp
