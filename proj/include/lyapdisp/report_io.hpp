#pragma once

// JSON and CSV renderings of every report. JSON documents carry
// "schema_version"; CSV headers are fixed.

#include <string>
#include <vector>

#include "lyapdisp/digitsum.hpp"
#include "lyapdisp/gle.hpp"
#include "lyapdisp/mcsim.hpp"

namespace lyapdisp {

inline constexpr int kSchemaVersion = 1;

std::string to_json(const ExponentReport& r);
std::string to_json(const SimResult& r);
std::string to_json(const std::vector<VerifyRow>& rows, const std::string& family);
std::string to_json(const FluctuationScan& s);
std::string to_json(const FluctuationStatistics& s);
std::string to_json(const EmpiricalDispersion& d, const std::string& family);
std::string to_json(const DigitComparison& c);
std::string to_json(const LinearRepresentation& rep, const std::string& family);
std::string to_json(const DispersionParams& d, const std::string& family);

/// len,words,Slambda,Skappa,Smu (per-length slabs, no prefactor)
std::string moment_series_csv(const MomentSeries& s);
/// trial,log_norm
std::string log_norms_csv(const SimResult& r);
/// n,x,value
std::string samples_csv(const std::vector<FluctuationSample>& samples);
/// bin_lo,bin_hi,mass
std::string histogram_csv(const std::vector<HistogramBin>& bins);
/// j,mean,var,var_ln,avg_ratio,typ_ratio
std::string dispersion_csv(const EmpiricalDispersion& d);

}  // namespace lyapdisp
