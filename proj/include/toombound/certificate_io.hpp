#pragma once

#include <optional>
#include <string_view>

#include "toombound/certificate.hpp"
#include "toombound/json_io.hpp"
#include "toombound/peierls.hpp"

namespace toombound {

/// {"entries":[{"v":[..],"mu":"p/q","obstacle":[[..],..]},..], "epsilon":"p/q", ...}
json certificate_to_json(const DriftCertificate& cert);

struct ParsedCertificate {
  DriftCertificate certificate;
  /// Present when the file embeds the family it was certified against.
  std::optional<UpdateFamily> family;
};

/// Reads a certificate. Derived fields (epsilon, r_const, rho, union_a)
/// are recomputed from the entries unless the file states them, in which
/// case the stated values are kept so validate() can compare.
ParsedCertificate parse_certificate(std::string_view text);

json bound_value_to_json(const BoundValue& v);
json bound_report_to_json(const BoundReport& rep);
json validation_to_json(const ValidationReport& rep);

}  // namespace toombound
