#pragma once

#include <json.hpp>
#include <string>

#include "cutset/region.hpp"
#include "cutset/simulator.hpp"
#include "cutset/types_discrete.hpp"
#include "cutset/types_gaussian.hpp"

namespace cutset {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kToolVersion = "cutset 1.0.0";

// 64-bit FNV-1a content digest, hex encoded
std::string fnv1a_digest(const std::string& bytes);

// display rounding: 9 significant digits (internal math stays full precision)
double sig9(double v);
double nats_display(double v, bool bits);

Json report_header(const std::string& command);
Json verdict_json(const MembershipVerdict& v, bool bits);
Json discrete_certificate_json(const DiscreteCertificate& c, const std::vector<double>& n_samples,
                               bool bits);
Json gaussian_certificate_json(const GaussianCertificate& c, const std::vector<double>& n_samples,
                               bool bits);
Json sim_report_json(const SimReport& report);

std::string sim_report_csv(const SimReport& report);

}  // namespace cutset
