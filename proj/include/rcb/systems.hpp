#pragma once

// Linear systems as bookkeeping data: a divisor class together with a
// multiplicity assignment at labeled points. Multiplicities may go negative
// in the middle of a transform chain (the class need not stay effective);
// such systems are flagged rather than rejected.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rcb/checked.hpp"
#include "rcb/surface.hpp"

namespace rcb {

struct LinearSystemSpec {
  DivisorClass cls;
  std::map<PointLabel, std::int64_t> mults;

  std::int64_t mult(const PointLabel& l) const {
    auto it = mults.find(l);
    return it == mults.end() ? 0 : it->second;
  }

  const SurfaceModel& surface() const { return cls.surface(); }

  bool has_negative_mult() const {
    for (const auto& [l, m] : mults)
      if (m < 0) return true;
    return false;
  }

  void validate() const {
    for (const auto& [l, m] : mults) {
      (void)m;
      if (!surface().has_mult_label(l))
        throw ValidationError("multiplicity assigned to unknown label '" + l + "' on " +
                              surface().describe());
    }
  }

  friend bool operator==(const LinearSystemSpec&, const LinearSystemSpec&) = default;
};

// A plane system in classical coordinates: degree, multiplicity at p0,
// multiplicities at other labeled points.
struct PlaneSystem {
  std::int64_t degree = 0;
  std::int64_t p0 = 0;
  std::map<PointLabel, std::int64_t> mults;

  std::int64_t mult(const PointLabel& l) const {
    auto it = mults.find(l);
    return it == mults.end() ? 0 : it->second;
  }

  void validate() const {
    for (const auto& [l, m] : mults) {
      (void)m;
      if (l == kP0Label)
        throw ValidationError("use the p0 field, not a 'p0' entry in mults");
      if (l.empty()) throw ValidationError("empty point label");
    }
  }

  friend bool operator==(const PlaneSystem&, const PlaneSystem&) = default;
};

inline PlaneSystem to_plane_system(const LinearSystemSpec& sys) {
  if (!sys.surface().is_plane())
    throw ValidationError("system is on " + sys.surface().describe() + ", not the plane");
  PlaneSystem ps;
  ps.degree = sys.cls.coord(0);
  ps.p0 = sys.mult(kP0Label);
  for (const auto& [l, m] : sys.mults) {
    if (l != kP0Label) ps.mults[l] = m;
  }
  return ps;
}

inline LinearSystemSpec from_plane_system(const PlaneSystem& ps) {
  ps.validate();
  std::vector<PointLabel> marks;
  for (const auto& [l, m] : ps.mults) {
    (void)m;
    marks.push_back(l);
  }
  SurfaceModel s = SurfaceModel::plane(marks);
  LinearSystemSpec sys{DivisorClass(s, {ps.degree}), ps.mults};
  if (ps.p0 != 0) sys.mults[kP0Label] = ps.p0;
  return sys;
}

struct LatticeInvariants {
  std::int64_t self_intersection = 0;
  std::int64_t k_pairing = 0;

  friend bool operator==(const LatticeInvariants&, const LatticeInvariants&) = default;
};

// Invariants of the system computed on its full blow-up: blow up every
// label carrying a nonzero multiplicity (p0 included on plane models) and
// take the strict-transform class. These are constant along every transform
// chain and back every per-step consistency certificate.
inline LatticeInvariants lattice_invariants(const LinearSystemSpec& sys) {
  std::vector<PointLabel> pts;
  std::vector<std::int64_t> ms;
  for (const auto& [l, m] : sys.mults) {
    if (m == 0) continue;
    pts.push_back(l);
    ms.push_back(m);
  }
  SurfaceModel blown = sys.surface().blow_up(pts);
  std::vector<std::int64_t> coords = sys.cls.coords();
  for (std::int64_t m : ms) coords.push_back(checked_neg(m));
  DivisorClass strict(blown, std::move(coords));
  return {intersect(strict, strict), intersect(strict, canonical_class(blown))};
}

// Data-quality flags used in traces and in structured output.
inline std::vector<std::string> system_flags(const LinearSystemSpec& sys) {
  std::vector<std::string> flags;
  if (sys.has_negative_mult()) flags.push_back("non-effective: negative multiplicity");
  if (sys.surface().is_plane()) {
    if (sys.cls.coord(0) < 1) flags.push_back("non-effective: plane degree below 1");
    if (sys.cls.coord(0) >= 1 && sys.mult(kP0Label) == sys.cls.coord(0))
      flags.push_back("degenerate: p0 multiplicity equals the degree (line pencil through p0)");
  }
  return flags;
}

}  // namespace rcb
