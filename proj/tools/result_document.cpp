#include "result_document.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <sstream>

namespace fairalloc::cli {

double round_sig(double v) {
  if (v == 0.0 || !std::isfinite(v)) return v;
  const int exponent = (int)std::floor(std::log10(std::fabs(v)));
  const double scale = std::pow(10.0, 11 - exponent);
  return std::round(v * scale) / scale;
}

nlohmann::json number(double v) { return round_sig(v); }

nlohmann::json number_list(const std::vector<double>& values) {
  nlohmann::json out = nlohmann::json::array();
  for (double v : values) out.push_back(round_sig(v));
  return out;
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json bits(const std::vector<double>& nats) {
  nlohmann::json out = nlohmann::json::array();
  for (double v : nats) out.push_back(round_sig(v / ln2));
  return out;
}

nlohmann::json chain_as_lists(const std::vector<mask_t>& chain) {
  nlohmann::json out = nlohmann::json::array();
  for (mask_t s : chain) {
    nlohmann::json members = nlohmann::json::array();
    for (int i = 0; i < 32; ++i)
      if (contains(s, i)) members.push_back(i);
    out.push_back(members);
  }
  return out;
}

nlohmann::json echo_json(const channel_echo& echo) {
  nlohmann::json input;
  input["kind"] = echo.kind;
  if (echo.kind == "bc") {
    input["noise"] = number_list(echo.noise_list);
    input["total_power"] = number(echo.total_power);
  } else {
    input["powers"] = number_list(echo.powers);
    input["noise"] = number(echo.noise_scalar);
    if (echo.kind == "mac_vector") {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& row : echo.signatures) rows.push_back(number_list(row));
      input["signatures"] = rows;
    }
  }
  return input;
}

}  // namespace

nlohmann::json mac_document(const channel_echo& echo, const std::string& criterion,
                            const std::string& mode,
                            const maxmin::allocation_result& result,
                            double sum_capacity, bool with_timestamp) {
  nlohmann::json doc;
  doc["version"] = tool_version;
  if (with_timestamp) doc["timestamp"] = utc_timestamp();
  doc["input"] = echo_json(echo);
  doc["criterion"] = criterion;
  doc["mode"] = mode;
  doc["rates"] = number_list(result.rates);
  doc["rates_bits"] = bits(result.rates);
  doc["sum_rate"] = number(result.sum_rate);
  doc["efficiency"] = number(result.sum_rate / sum_capacity);
  if (result.disagreement) doc["disagreement"] = number_list(*result.disagreement);
  doc["bottleneck_chain"] = chain_as_lists(result.bottleneck_chain);
  doc["diagnostics"] = {{"levels", (int)result.bottleneck_chain.size()},
                        {"residual", number(std::fabs(result.sum_rate - sum_capacity))}};
  return doc;
}

nlohmann::json bc_document(const channel_echo& echo, const std::string& criterion,
                           const bc::bc_allocation& result, double sum_capacity,
                           bool with_timestamp) {
  double sum_rate = 0.0;
  for (double r : result.rates) sum_rate += r;
  nlohmann::json doc;
  doc["version"] = tool_version;
  if (with_timestamp) doc["timestamp"] = utc_timestamp();
  doc["input"] = echo_json(echo);
  doc["criterion"] = criterion;
  doc["rates"] = number_list(result.rates);
  doc["rates_bits"] = bits(result.rates);
  doc["sum_rate"] = number(sum_rate);
  doc["efficiency"] = number(sum_rate / sum_capacity);
  if (result.disagreement) doc["disagreement"] = number_list(*result.disagreement);
  doc["powers"] = number_list(result.powers);
  doc["sinr"] = number_list(result.sinr);
  doc["x"] = number_list(result.x);
  // The common SINR exists only at the symmetric point; elsewhere it is NaN.
  if (std::isfinite(result.gamma)) doc["gamma"] = number(result.gamma);
  doc["diagnostics"] = {{"iterations", result.iterations}, {"residual", number(result.residual)}};
  return doc;
}

std::string csv_document(const nlohmann::json& doc) {
  std::ostringstream header, row;
  header << "criterion,kind,sum_rate,efficiency";
  row << doc["criterion"].get<std::string>() << ',' << doc["input"]["kind"].get<std::string>()
      << ',' << doc["sum_rate"].dump() << ',' << doc["efficiency"].dump();
  const auto& rates = doc["rates"];
  for (int i = 0; i < (int)rates.size(); ++i) {
    header << ",rate_" << i + 1;
    row << ',' << rates[i].dump();
  }
  return header.str() + "\n" + row.str() + "\n";
}

nlohmann::json error_document(const std::string& type, const std::string& message) {
  return {{"error", {{"type", type}, {"message", message}}}};
}

}  // namespace fairalloc::cli
