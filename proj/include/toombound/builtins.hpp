#pragma once

#include <optional>
#include <string>
#include <vector>

#include "toombound/certificate.hpp"
#include "toombound/family.hpp"

namespace toombound::builtins {

/// Discrete-time bootstrap percolation in the plane:
/// {{(1,0),(0,1)}, {(-1,-1),(0,1)}, {(-1,-1),(1,0)}}.
UpdateFamily dtbp();

/// Zero sets of the north-east-center majority rule: every pair from
/// {o, (1,0), (0,1)}. A site becomes 0 when one of its zero sets is all 0.
std::vector<SiteSet> nec_zero_sets();

/// NEC lifted to a 3-dimensional bootstrap family: each zero set Z becomes
/// Z x {-1}.
UpdateFamily nec_lift();

/// The linearly equivalent form {U x {-1} : U a DTBP rule}.
UpdateFamily nec_lift_prime();

/// Integer map T (columns (2,1,0), (1,2,0), (1,1,1)) carrying nec_lift onto
/// nec_lift_prime.
Site apply_t(const Site& s);

/// v = (1,1), (-2,1), (1,-2); mu = 1; witnesses {(1,0),(0,1)},
/// {(-1,-1),(0,1)}, {(-1,-1),(1,0)}. epsilon = 1, R = 6.
DriftCertificate dtbp_certificate();

/// The same certificate with every direction and site extended by a third
/// coordinate (0 for directions, -1 for sites); valid for nec_lift_prime.
DriftCertificate nec_lift_prime_certificate();

/// "dtbp", "nec-lift", "nec-lift-prime" (with or without the "builtin:" prefix).
std::optional<UpdateFamily> family_by_name(const std::string& name);
std::vector<std::string> family_names();

}  // namespace toombound::builtins
