#pragma once

// Independent re-verification of reports and paving certificates. Every
// number is recomputed from the raw input embedded in the file; nothing
// stored in the file is trusted except the combinatorial choices
// (partitions) being certified.

#include <string>
#include <vector>

#include "json.hpp"

namespace tripave {

enum class VerifyStatus { kPass = 0, kFail = 1, kInputError = 2 };

struct VerifyResult {
  VerifyStatus status = VerifyStatus::kPass;
  std::vector<std::string> findings;

  int ExitCode() const { return static_cast<int>(status); }
};

VerifyResult VerifyReport(const nlohmann::ordered_json& report, double tolerance);
// Certificates must embed the paved matrix under "matrix".
VerifyResult VerifyCertificate(const nlohmann::ordered_json& cert, double tolerance);
// Dispatches on the "kind" field.
VerifyResult VerifyDocument(const nlohmann::ordered_json& doc, double tolerance);

}  // namespace tripave
