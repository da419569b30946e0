#pragma once

// Actions of birational maps on linear systems: the standard Cremona
// transformation, de Jonquieres transformations, elementary transformations
// of ruled surfaces, and the two contraction moves (F_1 -> plane, blow-up of
// F_e -> F_e).
//
// Every action is computed twice: once by the closed-form multiplicity
// formulas and once through the lattice factorization (blow up the
// participating points, move the class by an isometry or a basis change,
// contract). The two results must agree coordinate for coordinate;
// disagreement raises InternalCheckError.
//
// Label conventions. Transform outputs reuse input labels: after a Cremona
// centered at {A,B,C} the label A carries the multiplicity at the image of
// the line BC, i.e. d - m_B - m_C. After a de Jonquieres transformation the
// label of a simple base point q carries the multiplicity at the image of
// the line through p0 and q, i.e. d - m_{p0} - m_q. A contracted fiber's
// image gets a fresh derived label (the center's label with a prime
// appended) unless an explicit name is supplied.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rcb/systems.hpp"

namespace rcb {

enum class StepKind {
  Cremona,
  DeJonquieres,
  ElementaryTransform,
  BlowDownF1,
  BlowDownToHirzebruch,
};

enum class StepDirection { Forward, Inverse };

struct BirationalStep {
  StepKind kind;
  StepDirection direction = StepDirection::Forward;

  // Cremona: exactly 3 centers. DeJonquieres: the 2g-2 simple points.
  // ElementaryTransform: the single center. BlowDownToHirzebruch inverse:
  // the points to blow up.
  std::vector<PointLabel> centers;

  // DeJonquieres degree g >= 2.
  std::int64_t degree = 0;

  // ElementaryTransform: name for the contracted-fiber image. Defaults to
  // the center's label with a prime appended.
  std::optional<PointLabel> created_label;

  // ElementaryTransform inverse bookkeeping: a center absent from the
  // surface is marked on the fly with this C0 flag (undoing a forward step
  // whose created point was dropped or never materialized here).
  bool center_on_c0 = false;

  // LiftToF1 (BlowDownF1 inverse): marks to restore that the forward
  // contraction dropped (zero-multiplicity points on C0).
  std::vector<MarkedPoint> restore_marks;

  static BirationalStep cremona(std::array<PointLabel, 3> c) {
    BirationalStep s{StepKind::Cremona};
    s.centers.assign(c.begin(), c.end());
    return s;
  }
  static BirationalStep dejonquieres(std::int64_t g, std::vector<PointLabel> simple) {
    BirationalStep s{StepKind::DeJonquieres};
    s.degree = g;
    s.centers = std::move(simple);
    return s;
  }
  static BirationalStep elementary(PointLabel center,
                                   std::optional<PointLabel> created = std::nullopt) {
    BirationalStep s{StepKind::ElementaryTransform};
    s.centers = {std::move(center)};
    s.created_label = std::move(created);
    return s;
  }
  static BirationalStep blow_down_f1() { return BirationalStep{StepKind::BlowDownF1}; }
  static BirationalStep blow_down_to_hirzebruch() {
    return BirationalStep{StepKind::BlowDownToHirzebruch};
  }
};

struct TransformChain {
  std::vector<BirationalStep> steps;
};

struct StepRecord {
  BirationalStep step;
  LinearSystemSpec input;
  LinearSystemSpec output;
  std::vector<std::string> flags;
  LatticeInvariants input_invariants;
  LatticeInvariants output_invariants;
  bool invariants_preserved = false;
};

struct ChainTrace {
  std::vector<StepRecord> records;

  bool all_invariants_preserved() const {
    for (const auto& r : records)
      if (!r.invariants_preserved) return false;
    return true;
  }
};

namespace detail {

inline PointLabel derived_label(const SurfaceModel& s, const PointLabel& base) {
  PointLabel l = base + "'";
  while (s.has_mark(l) ||
         std::find(s.blown_up().begin(), s.blown_up().end(), l) != s.blown_up().end() ||
         l == kP0Label)
    l += "'";
  return l;
}

inline void require_plane(const LinearSystemSpec& sys, const char* op) {
  if (!sys.surface().is_plane())
    throw ValidationError(std::string(op) + " acts on plane systems, got " +
                          sys.surface().describe());
}

inline void require_hirzebruch(const LinearSystemSpec& sys, const char* op) {
  if (!sys.surface().is_hirzebruch())
    throw ValidationError(std::string(op) + " acts on F_e systems, got " +
                          sys.surface().describe());
}

inline void check_routes_agree(const LinearSystemSpec& a, const LinearSystemSpec& b,
                               const char* op) {
  if (!(a == b))
    throw InternalCheckError(std::string("formula and lattice routes disagree in ") + op);
}

}  // namespace detail

namespace lattice {

// Cremona as the Weyl reflection in r = H - E_A - E_B - E_C on the plane
// blown up at every label in sight. One inner product drives all the
// coordinate changes.
inline LinearSystemSpec cremona_via_reflection(const LinearSystemSpec& sys,
                                               const std::array<PointLabel, 3>& centers) {
  std::vector<PointLabel> all;
  all.push_back(kP0Label);
  for (const auto& m : sys.surface().marks()) all.push_back(m.label);
  SurfaceModel blown = sys.surface().blow_up(all);

  std::vector<std::int64_t> cv(blown.rank(), 0);
  cv[0] = sys.cls.coord(0);
  for (std::size_t i = 0; i < all.size(); ++i) cv[1 + i] = checked_neg(sys.mult(all[i]));
  DivisorClass c(blown, cv);

  std::vector<std::int64_t> rv(blown.rank(), 0);
  rv[0] = 1;
  for (const auto& ctr : centers) rv[blown.exceptional_index(ctr)] = -1;
  DivisorClass r(blown, rv);
  if (intersect(r, r) != -2 || intersect(r, canonical_class(blown)) != 0)
    throw InternalCheckError("Cremona root class fails its lattice identities");

  DivisorClass image = c + r.scaled(intersect(c, r));

  LinearSystemSpec out{DivisorClass(sys.surface(), {image.coord(0)}), {}};
  for (std::size_t i = 0; i < all.size(); ++i) {
    const std::int64_t m = checked_neg(image.coord(1 + i));
    const bool is_center = std::find(centers.begin(), centers.end(), all[i]) != centers.end();
    if (m != 0 || is_center || sys.mults.count(all[i])) out.mults[all[i]] = m;
  }
  return out;
}

}  // namespace lattice

// Standard Cremona transformation centered at three distinct labeled
// points. Degree 2d - m1 - m2 - m3; each center label picks up d - m_j -
// m_k; everything else is untouched. Applying it twice is the identity.
inline LinearSystemSpec cremona(const LinearSystemSpec& sys,
                                const std::array<PointLabel, 3>& centers) {
  detail::require_plane(sys, "cremona");
  sys.validate();
  for (std::size_t i = 0; i < 3; ++i) {
    if (!sys.surface().has_mult_label(centers[i]))
      throw ValidationError("Cremona center '" + centers[i] + "' is not a point of the surface");
    for (std::size_t j = i + 1; j < 3; ++j)
      if (centers[i] == centers[j])
        throw ValidationError("Cremona centers must be distinct (duplicate '" + centers[i] + "')");
  }

  const std::int64_t d = sys.cls.coord(0);
  const std::int64_t m1 = sys.mult(centers[0]);
  const std::int64_t m2 = sys.mult(centers[1]);
  const std::int64_t m3 = sys.mult(centers[2]);

  LinearSystemSpec out = sys;
  out.cls = DivisorClass(
      sys.surface(),
      {checked_sub(checked_mul(2, d), checked_add(m1, checked_add(m2, m3)))});
  out.mults[centers[0]] = checked_sub(d, checked_add(m2, m3));
  out.mults[centers[1]] = checked_sub(d, checked_add(m1, m3));
  out.mults[centers[2]] = checked_sub(d, checked_add(m1, m2));

  detail::check_routes_agree(out, lattice::cremona_via_reflection(sys, centers), "cremona");
  return out;
}

// --- elementary transformation core -----------------------------------

namespace detail {

struct ElmResult {
  LinearSystemSpec sys;
  PointLabel created;
};

// Blow up the center, contract the strict transform of the fiber through
// it. Centers off C0 send F_e to F_{|e-1|}; centers on C0 (only reachable
// through inverse chain steps) send F_e to F_{e+1}. The image of the
// contracted fiber becomes a new marked point carrying (class.F) - m_c; it
// lands on the new C0 exactly when the center was off C0 and e >= 2.
inline ElmResult elm_core(const LinearSystemSpec& sys, const PointLabel& center,
                          std::optional<PointLabel> created_name, bool allow_on_c0) {
  require_hirzebruch(sys, "elementary transform");
  sys.validate();
  const SurfaceModel& s = sys.surface();
  if (!s.has_mark(center))
    throw ValidationError("elementary-transform center '" + center + "' is not marked");
  const bool on_c0 = s.mark_on_c0(center);
  if (on_c0 && !allow_on_c0)
    throw UnsupportedError("elementary transform centered on C0 is not supported");

  const std::int64_t e = s.e();
  const std::int64_t x = sys.cls.coord(0);
  const std::int64_t y = sys.cls.coord(1);
  const std::int64_t mc = sys.mult(center);

  const std::int64_t e_out = on_c0 ? checked_add(e, 1) : (e >= 1 ? e - 1 : 1);

  // Route A: closed form.
  std::int64_t y_a;
  if (!on_c0 && e >= 1) {
    y_a = checked_sub(y, mc);
  } else {
    y_a = checked_sub(checked_add(y, x), mc);
  }
  const std::int64_t created_mult_a = checked_sub(x, mc);

  // Route B: the rank-3 lattice of the blow-up at the center. The section
  // class v = C0 + alpha*F - E_c downstairs is pinned by orthogonality to
  // the contracted (-1)-curve F - E_c and by its self-intersection -e_out;
  // the output coordinates are inner products against (v, F) and F - E_c.
  {
    SurfaceModel z = s.blow_up({center});
    DivisorClass strict(z, {x, y, checked_neg(mc)});
    DivisorClass fiber(z, {0, 1, 0});
    DivisorClass gamma(z, {0, 1, -1});  // F - E_c, the curve being contracted
    if (intersect(gamma, gamma) != -1 || intersect(gamma, canonical_class(z)) != -1)
      throw InternalCheckError("contracted fiber class is not a (-1)-class");
    const std::int64_t two_alpha = checked_sub(checked_add(e, 1), e_out);
    if (two_alpha % 2 != 0) throw InternalCheckError("elementary transform parity broken");
    DivisorClass section(z, {1, two_alpha / 2, -1});
    if (intersect(section, gamma) != 0 || intersect(section, section) != checked_neg(e_out) ||
        intersect(section, fiber) != 1)
      throw InternalCheckError("pulled-back section class fails its identities");

    const std::int64_t x_b = intersect(strict, fiber);
    const std::int64_t y_b =
        checked_add(intersect(strict, section), checked_mul(e_out, x_b));
    const std::int64_t created_mult_b = intersect(strict, gamma);
    if (x_b != x || y_b != y_a || created_mult_b != created_mult_a)
      throw InternalCheckError("formula and lattice routes disagree in elementary transform");
  }

  const PointLabel created =
      created_name ? *created_name : derived_label(s, center);
  const bool created_on_c0 = !on_c0 && e >= 2;

  SurfaceModel s_out = SurfaceModel::hirzebruch(e_out);
  for (const auto& m : s.marks()) {
    if (m.label == center) continue;
    s_out = s_out.with_mark(m);
  }
  if (s_out.has_mark(created))
    throw ValidationError("created label '" + created + "' already exists on the surface");
  s_out = s_out.with_mark({created, created_on_c0});

  LinearSystemSpec out{DivisorClass(s_out, {x, y_a}), {}};
  for (const auto& [l, m] : sys.mults) {
    if (l != center) out.mults[l] = m;
  }
  out.mults[created] = created_mult_a;
  return {std::move(out), created};
}

}  // namespace detail

// Elementary transformation of an F_e system at a marked point off C0.
// Requires class.F even (the systems tracked here have class.F = 2a) and
// multiplicity at the center at most class.F.
inline LinearSystemSpec elementary_transform(const LinearSystemSpec& sys,
                                             const PointLabel& center) {
  detail::require_hirzebruch(sys, "elementary transform");
  const std::int64_t x = sys.cls.coord(0);
  if (x % 2 != 0)
    throw ValidationError("elementary transform expects even fiber degree (class.F = 2a)");
  if (sys.mult(center) > x)
    throw ValidationError("center multiplicity exceeds the fiber degree 2a");
  return detail::elm_core(sys, center, std::nullopt, /*allow_on_c0=*/false).sys;
}

// Contract the (-1)-section of F_1 to p0. For x C0 + y F the image has
// degree y and multiplicity y - x at p0, so degree minus p0-multiplicity
// always equals class.F. Zero-multiplicity marks on C0 are absorbed into
// p0 and dropped; nonzero ones cannot be attributed and are an error.
inline LinearSystemSpec blow_down_f1(const LinearSystemSpec& sys,
                                     std::vector<MarkedPoint>* dropped = nullptr) {
  detail::require_hirzebruch(sys, "blow-down of F_1");
  sys.validate();
  if (sys.surface().e() != 1)
    throw ValidationError("blow-down to the plane starts from F_1, got " +
                          sys.surface().describe());
  const std::int64_t x = sys.cls.coord(0);
  const std::int64_t y = sys.cls.coord(1);

  // Route B: the H = C0 + F, E = C0 basis change; degree and p0
  // multiplicity are the H and E coordinates of the same class.
  DivisorClass in_blowup = to_blowup_basis(sys.cls);
  const std::int64_t degree_b = in_blowup.coord(0);
  const std::int64_t p0_mult_b = checked_neg(in_blowup.coord(1));

  const std::int64_t degree = y;
  const std::int64_t p0_mult = checked_sub(y, x);
  if (degree != degree_b || p0_mult != p0_mult_b)
    throw InternalCheckError("formula and lattice routes disagree in blow-down of F_1");

  SurfaceModel plane = SurfaceModel::plane();
  for (const auto& m : sys.surface().marks()) {
    if (m.on_c0) {
      if (sys.mult(m.label) != 0)
        throw UnsupportedError("marked point '" + m.label +
                               "' lies on the contracted section with nonzero multiplicity");
      if (dropped) dropped->push_back(m);
      continue;
    }
    plane = plane.with_mark({m.label, false});
  }
  LinearSystemSpec out{DivisorClass(plane, {degree}), {}};
  for (const auto& [l, m] : sys.mults) {
    if (sys.surface().mark_on_c0(l)) continue;
    out.mults[l] = m;
  }
  out.mults[kP0Label] = p0_mult;
  return out;
}

// Blow up p0 on a plane system: the inverse of blow_down_f1. The strict
// transform of (degree d, p0-mult m0) is (d - m0) C0 + d F on F_1.
inline LinearSystemSpec lift_to_f1(const LinearSystemSpec& sys,
                                   const std::vector<MarkedPoint>& restore_marks = {}) {
  detail::require_plane(sys, "lift to F_1");
  sys.validate();
  const std::int64_t d = sys.cls.coord(0);
  const std::int64_t m0 = sys.mult(kP0Label);
  SurfaceModel f1 = SurfaceModel::hirzebruch(1);
  for (const auto& m : sys.surface().marks()) f1 = f1.with_mark({m.label, false});
  for (const auto& m : restore_marks) f1 = f1.with_mark(m);
  LinearSystemSpec out{DivisorClass(f1, {checked_sub(d, m0), d}), {}};
  for (const auto& [l, m] : sys.mults) {
    if (l == kP0Label) continue;
    out.mults[l] = m;
  }
  for (const auto& m : restore_marks) out.mults[m.label] = 0;
  return out;
}

// De Jonquieres transformation of degree g: the plane map whose net has
// multiplicity g-1 at p0 and the 2g-2 given simple base points. With
// m0 = mult(p0):
//   degree:        g d - (g-1) m0 - sum m_i
//   p0:            (g-1) d - (g-2) m0 - sum m_i
//   simple point:  d - m0 - m_i
// Degree minus the p0 multiplicity is invariant (the map preserves the
// pencil of lines through p0).
namespace lattice {

// Independent route: a de Jonquieres transformation is fiberwise for the
// p0-pencil, so it factors as blow-up of p0, one elementary transformation
// per simple base point, and contraction of the section. The contracted
// fiber through q is the line through p0 and q, which is exactly where the
// label convention comes from.
inline LinearSystemSpec dejonquieres_via_f1(const LinearSystemSpec& sys, std::int64_t g,
                                            const std::vector<PointLabel>& simple) {
  (void)g;
  LinearSystemSpec cur = lift_to_f1(sys);
  std::map<PointLabel, PointLabel> image_of;
  for (const auto& q : simple) {
    auto r = detail::elm_core(cur, q, std::nullopt, /*allow_on_c0=*/false);
    cur = std::move(r.sys);
    image_of[q] = r.created;
  }
  LinearSystemSpec plane_out = blow_down_f1(cur);

  // Rename the contracted-fiber images back to the original labels.
  SurfaceModel out_surface = SurfaceModel::plane();
  for (const auto& m : sys.surface().marks()) out_surface = out_surface.with_mark(m);
  LinearSystemSpec out{DivisorClass(out_surface, {plane_out.cls.coord(0)}), {}};
  for (const auto& [l, m] : plane_out.mults) {
    PointLabel name = l;
    for (const auto& [orig, im] : image_of) {
      if (im == l) {
        name = orig;
        break;
      }
    }
    out.mults[name] = m;
  }
  return out;
}

}  // namespace lattice

inline LinearSystemSpec dejonquieres(const LinearSystemSpec& sys, std::int64_t g,
                                     const std::vector<PointLabel>& simple) {
  detail::require_plane(sys, "de Jonquieres transform");
  sys.validate();
  if (g < 2) throw ValidationError("de Jonquieres degree must be at least 2");
  if (static_cast<std::int64_t>(simple.size()) != checked_sub(checked_mul(2, g), 2))
    throw ValidationError("a degree-" + std::to_string(g) + " de Jonquieres transform needs " +
                          std::to_string(2 * g - 2) + " simple points, got " +
                          std::to_string(simple.size()));
  std::set<PointLabel> distinct(simple.begin(), simple.end());
  if (distinct.size() != simple.size())
    throw ValidationError("de Jonquieres simple points must be distinct");
  if (distinct.count(kP0Label))
    throw ValidationError("p0 cannot be a simple base point of a de Jonquieres transform");
  for (const auto& q : simple) {
    if (!sys.surface().has_mark(q))
      throw ValidationError("simple point '" + q + "' is not marked on the surface");
  }

  const std::int64_t d = sys.cls.coord(0);
  const std::int64_t m0 = sys.mult(kP0Label);
  std::int64_t msum = 0;
  for (const auto& q : simple) msum = checked_add(msum, sys.mult(q));

  LinearSystemSpec out = sys;
  out.cls = DivisorClass(
      sys.surface(),
      {checked_sub(checked_sub(checked_mul(g, d), checked_mul(checked_sub(g, 1), m0)), msum)});
  out.mults[kP0Label] = checked_sub(
      checked_sub(checked_mul(checked_sub(g, 1), d), checked_mul(checked_sub(g, 2), m0)), msum);
  for (const auto& q : simple)
    out.mults[q] = checked_sub(checked_sub(d, m0), sys.mult(q));

  detail::check_routes_agree(out, lattice::dejonquieres_via_f1(sys, g, simple),
                             "de Jonquieres transform");
  return out;
}

// Contract the exceptional curves of a blown-up ruled surface. Defined for
// classes of the shape -aK_S + dF: the image is -aK_{F_e} + dF with
// multiplicity a recorded at every blown-up point.
inline LinearSystemSpec blow_down_to_hirzebruch(const LinearSystemSpec& sys) {
  sys.validate();
  const SurfaceModel& s = sys.surface();
  if (s.base() != BaseKind::Hirzebruch || !s.is_blowup())
    throw ValidationError("blow-down to F_e starts from a blow-up of F_e, got " + s.describe());
  const std::int64_t x = sys.cls.coord(0);
  if (x % 2 != 0)
    throw ValidationError("class is not of the form -aK_S + dF (odd fiber degree)");
  const std::int64_t a = x / 2;
  for (std::size_t i = s.base_rank(); i < s.rank(); ++i) {
    if (sys.cls.coord(i) != checked_neg(a))
      throw ValidationError("class is not of the form -aK_S + dF (exceptional coordinate " +
                            std::to_string(sys.cls.coord(i)) + ", expected " +
                            std::to_string(-a) + ")");
  }

  SurfaceModel fe = SurfaceModel::hirzebruch(s.e());
  for (const auto& m : s.marks()) fe = fe.with_mark(m);
  for (const auto& l : s.blown_up()) fe = fe.with_mark({l, false});

  LinearSystemSpec out{DivisorClass(fe, {x, sys.cls.coord(1)}), sys.mults};
  for (const auto& l : s.blown_up()) out.mults[l] = a;

  // Consistency: re-embedding the output at the blown-up points must give
  // back the input class exactly.
  {
    SurfaceModel back = fe.blow_up(s.blown_up());
    std::vector<std::int64_t> cv = {x, sys.cls.coord(1)};
    for (std::size_t i = 0; i < s.blown_up().size(); ++i) cv.push_back(checked_neg(a));
    if (!(back == s) || cv != sys.cls.coords())
      throw InternalCheckError("blow-down/blow-up round trip broke the class");
  }
  return out;
}

// Blow up marked points of an F_e system (the inverse of the contraction
// above): the strict transform subtracts each point's multiplicity on its
// exceptional curve.
inline LinearSystemSpec blow_up_marked_points(const LinearSystemSpec& sys,
                                              const std::vector<PointLabel>& pts) {
  detail::require_hirzebruch(sys, "blow-up of marked points");
  sys.validate();
  std::vector<std::int64_t> coords = sys.cls.coords();
  SurfaceModel s = sys.surface();
  for (const auto& l : pts) {
    if (!s.has_mark(l)) throw ValidationError("cannot blow up unmarked label '" + l + "'");
    coords.push_back(checked_neg(sys.mult(l)));
  }
  s = s.blow_up(pts);
  LinearSystemSpec out{DivisorClass(s, std::move(coords)), {}};
  for (const auto& [l, m] : sys.mults) {
    if (std::find(pts.begin(), pts.end(), l) == pts.end()) out.mults[l] = m;
  }
  return out;
}

// --- chains ------------------------------------------------------------

namespace detail {

inline LinearSystemSpec apply_step(const BirationalStep& step, const LinearSystemSpec& sys,
                                   std::vector<std::string>* flags) {
  switch (step.kind) {
    case StepKind::Cremona: {
      if (step.centers.size() != 3)
        throw ValidationError("Cremona step needs exactly 3 centers");
      // An involution: forward and inverse coincide.
      return cremona(sys, {step.centers[0], step.centers[1], step.centers[2]});
    }
    case StepKind::DeJonquieres: {
      // The multiplicity action is involutive at fixed labels, so the
      // inverse applies the same formulas.
      return dejonquieres(sys, step.degree, step.centers);
    }
    case StepKind::ElementaryTransform: {
      if (step.centers.size() != 1)
        throw ValidationError("elementary-transform step needs exactly 1 center");
      LinearSystemSpec cur = sys;
      if (step.direction == StepDirection::Inverse) {
        if (!cur.surface().has_mark(step.centers[0])) {
          // Undo of a forward step whose created point is not marked here:
          // marking a fresh point (with the recorded C0 flag) is free.
          SurfaceModel s = cur.surface().with_mark({step.centers[0], step.center_on_c0});
          cur = LinearSystemSpec{DivisorClass(s, cur.cls.coords()), cur.mults};
          cur.mults[step.centers[0]] = 0;
        }
        return elm_core(cur, step.centers[0], step.created_label, /*allow_on_c0=*/true).sys;
      }
      const std::int64_t x = cur.cls.coord(0);
      if (x % 2 != 0)
        throw ValidationError("elementary transform expects even fiber degree (class.F = 2a)");
      if (cur.mult(step.centers[0]) > x)
        throw ValidationError("center multiplicity exceeds the fiber degree 2a");
      return elm_core(cur, step.centers[0], step.created_label, /*allow_on_c0=*/false).sys;
    }
    case StepKind::BlowDownF1: {
      if (step.direction == StepDirection::Inverse)
        return lift_to_f1(sys, step.restore_marks);
      std::vector<MarkedPoint> dropped;
      LinearSystemSpec out = blow_down_f1(sys, &dropped);
      if (flags) {
        for (const auto& m : dropped)
          flags->push_back("dropped zero-multiplicity mark '" + m.label +
                           "' on the contracted section");
      }
      return out;
    }
    case StepKind::BlowDownToHirzebruch: {
      if (step.direction == StepDirection::Inverse)
        return blow_up_marked_points(sys, step.centers);
      return blow_down_to_hirzebruch(sys);
    }
  }
  throw ValidationError("unknown step kind");
}

}  // namespace detail

// Apply a chain step by step. Each record carries both systems, data flags,
// and the lattice invariants (self-intersection and canonical pairing of
// the tracked class on its full blow-up); the invariants must match across
// every step.
inline std::pair<LinearSystemSpec, ChainTrace> apply_chain(const TransformChain& chain,
                                                           const LinearSystemSpec& sys) {
  LinearSystemSpec cur = sys;
  ChainTrace trace;
  for (const auto& step : chain.steps) {
    StepRecord rec{step, cur, cur, {}, {}, {}, false};
    rec.input_invariants = lattice_invariants(cur);
    LinearSystemSpec next = detail::apply_step(step, cur, &rec.flags);
    rec.output = next;
    rec.output_invariants = lattice_invariants(next);
    rec.invariants_preserved = rec.input_invariants == rec.output_invariants;
    if (!rec.invariants_preserved)
      throw InternalCheckError("chain step broke the lattice invariants of the tracked class");
    for (const auto& f : system_flags(next)) rec.flags.push_back(f);
    trace.records.push_back(std::move(rec));
    cur = std::move(next);
  }
  return {cur, trace};
}

// Build the step list undoing an applied chain, using the trace to bind
// created labels and dropped marks. Applying it to the chain's output
// reproduces the input exactly, labels included.
inline TransformChain invert_chain(const ChainTrace& trace) {
  TransformChain inv;
  for (auto it = trace.records.rbegin(); it != trace.records.rend(); ++it) {
    const BirationalStep& f = it->step;
    BirationalStep b = f;
    switch (f.kind) {
      case StepKind::Cremona:
      case StepKind::DeJonquieres:
        break;  // involutive actions
      case StepKind::ElementaryTransform: {
        const PointLabel& center = f.centers[0];
        PointLabel created;
        // The created label is the single mark of the output that the input
        // lacks.
        for (const auto& m : it->output.surface().marks()) {
          if (!it->input.surface().has_mark(m.label)) {
            created = m.label;
            break;
          }
        }
        b.centers = {created};
        b.created_label = center;
        // Permissive mode: the rebound center may lie on C0.
        b.direction = StepDirection::Inverse;
        b.center_on_c0 = it->output.surface().mark_on_c0(created);
        break;
      }
      case StepKind::BlowDownF1: {
        if (f.direction == StepDirection::Forward) {
          b.direction = StepDirection::Inverse;
          b.restore_marks.clear();
          for (const auto& m : it->input.surface().marks()) {
            if (m.on_c0) b.restore_marks.push_back(m);
          }
        } else {
          b.direction = StepDirection::Forward;
          b.restore_marks.clear();
        }
        break;
      }
      case StepKind::BlowDownToHirzebruch: {
        if (f.direction == StepDirection::Forward) {
          b.direction = StepDirection::Inverse;
          b.centers = it->input.surface().blown_up();
        } else {
          b.direction = StepDirection::Forward;
          b.centers.clear();
        }
        break;
      }
    }
    inv.steps.push_back(std::move(b));
  }
  return inv;
}

// The composite map F_e -> plane: one elementary transformation per point
// of Xprime (walking e down to 1, or 0 up to 1), contraction of F_1's
// section to p0, then a de Jonquieres transformation of degree k+1 centered
// at the images of X \ Xprime (omitted when k = 0). |X| = |e-1| + 2k. The
// resulting plane system does not depend on the choice of Xprime, up to the
// labeling of multiplicities.
inline TransformChain chi_map(std::int64_t e, const std::vector<PointLabel>& X,
                              const std::vector<PointLabel>& Xprime) {
  if (e < 0) throw ValidationError("Hirzebruch parameter e must be non-negative");
  const std::int64_t abs_e1 = e >= 1 ? e - 1 : 1;
  if (static_cast<std::int64_t>(Xprime.size()) != abs_e1)
    throw ValidationError("chi needs |e-1| = " + std::to_string(abs_e1) +
                          " elementary-transform centers, got " + std::to_string(Xprime.size()));
  const std::int64_t rest = static_cast<std::int64_t>(X.size()) - abs_e1;
  if (rest < 0 || rest % 2 != 0)
    throw ValidationError("chi needs |X| = |e-1| + 2k, got |X| = " + std::to_string(X.size()));
  const std::int64_t k = rest / 2;
  std::vector<PointLabel> simple;
  for (const auto& x : X) {
    if (std::find(Xprime.begin(), Xprime.end(), x) == Xprime.end()) simple.push_back(x);
  }
  if (static_cast<std::int64_t>(simple.size()) != 2 * k)
    throw ValidationError("Xprime must be a subset of X");

  TransformChain chain;
  for (const auto& x : Xprime) chain.steps.push_back(BirationalStep::elementary(x));
  chain.steps.push_back(BirationalStep::blow_down_f1());
  if (k >= 1) chain.steps.push_back(BirationalStep::dejonquieres(k + 1, simple));
  return chain;
}

}  // namespace rcb
