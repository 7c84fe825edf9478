#include "bsc/report.hpp"

#include <chrono>

#include "bsc/sha256.hpp"

namespace bsc {

nlohmann::ordered_json make_report(const std::string& command, const std::string& input_path,
                                   const std::string& input_bytes) {
  nlohmann::ordered_json rep;
  rep["schema"] = kReportSchema;
  rep["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  rep["command"] = command;
  rep["input"] = {{"path", input_path}, {"sha256", sha256_hex(input_bytes)}};
  rep["findings"] = nlohmann::ordered_json::object();
  rep["timing"] = nlohmann::ordered_json::object();
  return rep;
}

std::string render_report(const nlohmann::ordered_json& rep) { return rep.dump(2) + "\n"; }

nlohmann::ordered_json strip_timing(nlohmann::ordered_json rep) {
  rep.erase("timing");
  return rep;
}

}  // namespace bsc
