#pragma once

#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "cmrs/complete_mapping.hpp"
#include "cmrs/kotzig.hpp"
#include "cmrs/mrs.hpp"
#include "cmrs/zerosum.hpp"

namespace cmrs {

/// Existence verdict together with the instance it answers.
struct VerdictRecord {
  GroupSpec group;
  std::size_t a = 0, b = 0, c = 0;
  Existence status = Existence::Unknown;
  std::string rule;
  std::optional<std::string> witness_path;
};

using Certificate = std::variant<ZeroSumPartition, CmPartitionCertificate, KotzigArraySet, IntKotzigArray,
                                 RectangleSet, VerdictRecord>;

/// "partition", "cm_partition", "kas", "int_kotzig", "mrs" or "verdict".
std::string kind_of(const Certificate& c);

nlohmann::json to_json(const Certificate& c);
/// The kind is recognised from the keys (phi, arrays, entries, rects,
/// status, classes). Throws ParseError on anything malformed.
Certificate from_json(const nlohmann::json& j);

/// Compact JSON with sorted keys and a trailing newline.
std::string serialize(const Certificate& c);
Certificate parse_certificate(const std::string& text);

/// First violated constraint of the certificate, or nullopt. Verdicts are
/// checked by recomputing the decision.
std::optional<std::string> check_certificate(const Certificate& c);

VerdictRecord make_verdict(const GroupSpec& g, std::size_t a, std::size_t b, std::size_t c);

}  // namespace cmrs
