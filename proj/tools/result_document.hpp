#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairalloc/bc.hpp"
#include "fairalloc/mac.hpp"
#include "fairalloc/maxmin.hpp"

namespace fairalloc::cli {

inline constexpr const char* tool_version = "1.0.0";
inline constexpr double ln2 = 0.6931471805599453;

// Round to 12 significant digits before serialization; the rounded double
// then prints as its shortest round-trip form, so documents are byte-stable.
double round_sig(double v);
nlohmann::json number(double v);
nlohmann::json number_list(const std::vector<double>& values);

// Echo of the channel the command solved.
struct channel_echo {
  std::string kind;  // mac_scalar | mac_vector | bc
  std::vector<double> powers;               // mac
  double noise_scalar = 0.0;                // mac
  std::vector<std::vector<double>> signatures;  // mac_vector, one row per user
  std::vector<double> noise_list;           // bc
  double total_power = 0.0;                 // bc
};

nlohmann::json mac_document(const channel_echo& echo, const std::string& criterion,
                            const std::string& mode,
                            const maxmin::allocation_result& result,
                            double sum_capacity, bool with_timestamp);

nlohmann::json bc_document(const channel_echo& echo, const std::string& criterion,
                           const bc::bc_allocation& result, double sum_capacity,
                           bool with_timestamp);

std::string csv_document(const nlohmann::json& doc);

nlohmann::json error_document(const std::string& type, const std::string& message);

}  // namespace fairalloc::cli
