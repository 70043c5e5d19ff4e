#include "toombound/contours.hpp"
#include "toombound/dynamics.hpp"

namespace toombound {

namespace {

// o in [zeros]? Closure on an all-ones box is contained in the true closure,
// so a positive answer is exact; the box grows while infection reaches its rim.
bool origin_infected(const SiteSet& zeros, const UpdateFamily& family) {
  const int d = family.dimension();
  Coord reach = 1;
  for (const Site& s : family.support()) reach = std::max(reach, s.max_norm());
  Coord radius = reach;
  for (const Site& z : zeros) radius = std::max(radius, z.max_norm() + reach);
  for (int round = 0; round < 4; ++round, radius *= 2) {
    const std::vector<int> extents(static_cast<std::size_t>(d), static_cast<int>(2 * radius + 1));
    Site lower(d);
    for (int k = 0; k < d; ++k) lower[k] = -radius;
    LatticeState st(extents, Boundary::AllOnes, lower);
    for (const Site& z : zeros) st.set_zero(z);
    const LatticeState out = closure(st, family);
    if (out.zero(Site::origin(d))) return true;
    bool rim = false;
    for (const Site& s : out.zero_sites()) rim = rim || s.max_norm() > radius - reach;
    if (!rim) return false;
  }
  return false;
}

}  // namespace

PresenceResult presence_search(const SiteSet& zeros_in, const UpdateFamily& family, const DriftCertificate& cert,
                               int m_max, std::size_t max_contours) {
  const SiteSet zeros = canonical(zeros_in);
  for (const Site& z : zeros) {
    if (z.dim() != cert.dimension()) throw DimensionMismatch("zero site " + z.str() + " has wrong dimension");
  }
  if (!origin_infected(zeros, family)) {
    throw PreconditionError("the origin is not in the closure of the zero set; no contour is claimed");
  }
  // Endpoints of a present contour lie in the zero set, so restricting the
  // enumeration to those endpoints loses none of the present contours. The
  // canonical order puts smaller m first, so m is raised one at a time and
  // the search stops at the first level holding a present contour.
  PresenceResult res;
  res.exhaustive = true;
  for (int m = 0; m <= m_max && !res.contour; ++m) {
    EnumerationOptions opts;
    opts.m_max = m;
    opts.max_contours = max_contours;
    opts.allowed_endpoints = zeros;
    const EnumerationResult en = enumerate(cert, opts);
    for (const ShatteredContour& sc : en.contours) {
      if (sc.m() == m && is_present(sc, zeros)) {
        res.contour = sc;
        break;
      }
    }
    if (en.truncated) {
      res.truncated = true;
      res.exhaustive = false;
      if (!res.contour) {
        res.report = "not found: " + en.truncation_report;
        return res;
      }
    }
  }
  if (res.contour) {
    res.report = "present contour with m=" + std::to_string(res.contour->m()) + ", n=" + std::to_string(res.contour->n());
  } else {
    res.report = "not found within m_max=" + std::to_string(m_max) + " (inconclusive)";
  }
  return res;
}

}  // namespace toombound
