#pragma once

// Text renderings of samples and analysis results. Numbers are written in
// shortest round-trip form, so equal inputs give byte-identical text.

#include <string>
#include <vector>

#include "sphgrf/analysis.hpp"
#include "sphgrf/covariance.hpp"
#include "sphgrf/sampler.hpp"

namespace sgrf {

/// Shortest decimal that round-trips; "inf", "-inf" or "nan" otherwise.
std::string format_real(double x);

/// Header `replicate,point_id,value`, or `replicate,point_id,time,value` when
/// the sample has a time grid.
std::string sample_csv(const FieldSample& sample);
std::string sample_sidecar_json(const FieldSample& sample, const std::string& model_hash);

/// Header `v,measured,predicted,ratio,bound,degree`.
std::string ratio_series_csv(const RatioSeries& series);
std::string ratio_series_json(const RatioSeries& series, const std::string& kind, double constant);

std::string regularity_report_json(const RegularityReport& report);
std::string dudley_report_json(const DudleyReport& report);
std::string integrability_report_json(const IntegrabilityReport& report, double gamma);
std::string moment_report_json(const MomentReport& report, int n, double gamma);
/// Header `lag,vhat,in_window`.
std::string variogram_csv(const VariogramReport& report);
std::string variogram_json(const VariogramReport& report);

/// Header `i,j,value`; the full symmetric matrix in row order.
std::string covariance_csv(const Eigen::MatrixXd& matrix);

}  // namespace sgrf
