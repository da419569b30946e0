#pragma once

// End-to-end replays of the two multi-step computations the calculus is
// built around, with full audit traces:
//
//  * the four-step Cremona reduction that turns the pencil of singular
//    quartics into the degree-11 pencil with seven 4-fold points and a
//    triple point at p0;
//
//  * the class-chase lifting that plane pencil back through a de
//    Jonquieres transformation, F_1, a string of elementary
//    transformations, and the blow-up of the conic-bundle surface. The
//    chase runs inverse-first from the plane pencil (the only fully
//    pinned-down object) and reports the lattice-derived fiber constant
//    27 + 4e next to the textual value 36 + 4e; the assertions bind only
//    to the per-step consistency certificates.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rcb/birational.hpp"
#include "rcb/linsys.hpp"
#include "rcb/oracle.hpp"
#include "rcb/systems.hpp"

namespace rcb {

struct Prop41Row {
  std::int64_t degree = 0;
  std::array<std::int64_t, 8> mults{};

  friend bool operator==(const Prop41Row&, const Prop41Row&) = default;
};

struct Prop41Result {
  std::array<PointLabel, 8> labels;
  std::vector<Prop41Row> rows;  // initial system plus one row per Cremona step
  ChainTrace trace;
  std::int64_t final_expected_dim = 0;
  std::int64_t final_genus = 0;
};

// The fixed schedule: start from the quartic pencil and apply four standard
// Cremona transformations. The row data (degree plus multiplicities in
// column order z1..t2) is the artifact's golden table.
inline Prop41Result replay_prop41() {
  Prop41Result res;
  res.labels = {"z1", "z2", "z3", "w1", "w2", "w3", "t1", "t2"};

  SurfaceModel plane = SurfaceModel::plane(
      std::vector<PointLabel>(res.labels.begin(), res.labels.end()));
  LinearSystemSpec sys{DivisorClass(plane, {4}),
                       {{"z1", 0},
                        {"z2", 2},
                        {"z3", 2},
                        {"w1", 2},
                        {"w2", 1},
                        {"w3", 1},
                        {"t1", 1},
                        {"t2", 1}}};

  TransformChain chain;
  chain.steps.push_back(BirationalStep::cremona({"z1", "w2", "w3"}));
  chain.steps.push_back(BirationalStep::cremona({"z2", "t1", "t2"}));
  chain.steps.push_back(BirationalStep::cremona({"z1", "z3", "w1"}));
  chain.steps.push_back(BirationalStep::cremona({"w2", "w3", "t1"}));

  auto row_of = [&](const LinearSystemSpec& s) {
    Prop41Row row;
    row.degree = s.cls.coord(0);
    for (std::size_t i = 0; i < 8; ++i) row.mults[i] = s.mult(res.labels[i]);
    return row;
  };

  res.rows.push_back(row_of(sys));
  auto [final_sys, trace] = apply_chain(chain, sys);
  for (const auto& rec : trace.records) res.rows.push_back(row_of(rec.output));
  res.trace = std::move(trace);

  // The final row read as a plane system: the mult-3 column plays the p0
  // role (t2 is the point the pencil's triple point lands on).
  PlaneSystem pencil;
  pencil.degree = final_sys.cls.coord(0);
  pencil.p0 = final_sys.mult("t2");
  for (std::size_t i = 0; i < 7; ++i) pencil.mults[res.labels[i]] = final_sys.mult(res.labels[i]);
  res.final_expected_dim = expected_dim(pencil);
  res.final_genus = genus(pencil);
  return res;
}

inline std::string render_prop41_text(const Prop41Result& res) {
  std::string out = "deg |";
  for (const auto& l : res.labels) out += " " + l;
  out += "\n";
  for (const auto& row : res.rows) {
    out += std::to_string(row.degree) + " |";
    for (std::int64_t m : row.mults) out += " " + std::to_string(m);
    out += "\n";
  }
  return out;
}

struct TheoremChaseSpec {
  std::int64_t e = 1;
  std::int64_t delta = 7;  // number of blown-up points on the surface, <= 7
  std::int64_t a = 4;
};

struct ChaseCertificate {
  std::string step;
  std::int64_t fiber_in = 0;   // class.F on ruled models, degree - mult(p0) on the plane
  std::int64_t fiber_out = 0;
  bool fiber_ok = false;
  bool self_intersection_ok = false;
  bool k_pairing_ok = false;

  bool green() const { return fiber_ok && self_intersection_ok && k_pairing_ok; }
};

struct TheoremChaseReport {
  TheoremChaseSpec spec;
  std::int64_t sections = 0;  // e + 7 marked sections feeding the transform centers
  std::int64_t k = 0;
  std::int64_t g = 0;  // de Jonquieres degree k+1
  PlaneSystem plane_target;
  PlaneSystem intermediate_plane;  // after undoing the de Jonquieres step
  std::int64_t lattice_d = 0;      // 27 + 4e
  std::int64_t paper_d = 0;        // the recorded textual constant 36 + 4e
  std::int64_t paper_formula_d = 0;  // solve of d + 3 - a(e - 1 + 2k) = 11
  LinearSystemSpec final_system;
  ChainTrace trace;
  std::vector<ChaseCertificate> certificates;
  bool all_green = false;
  bool roundtrip_ok = false;
  std::vector<std::string> notes;
};

namespace detail {

inline std::int64_t fiber_degree(const LinearSystemSpec& sys) {
  if (sys.surface().base() == BaseKind::Plane)
    return checked_sub(sys.cls.coord(0), sys.mult(kP0Label));
  return sys.cls.coord(0);
}

inline std::string step_name(const BirationalStep& s) {
  std::string name;
  switch (s.kind) {
    case StepKind::Cremona: name = "cremona"; break;
    case StepKind::DeJonquieres: name = "dejonquieres(" + std::to_string(s.degree) + ")"; break;
    case StepKind::ElementaryTransform: name = "elementary_transform(" + s.centers[0] + ")"; break;
    case StepKind::BlowDownF1: name = "blow_down_f1"; break;
    case StepKind::BlowDownToHirzebruch: name = "blow_down_to_hirzebruch"; break;
  }
  if (s.direction == StepDirection::Inverse) name += " [inverse]";
  return name;
}

}  // namespace detail

// Lift the plane pencil (11; p0 -> 3, seven 4-fold points) back to the
// conic-bundle surface over F_e. The de Jonquieres degree is pinned by the
// section count s = e + 7 together with |X| = |e-1| + 2k: k = 4 for e >= 1
// and k = 3 for e = 0, which makes the lattice fiber constant uniformly
// 27 + 4e.
inline TheoremChaseReport theorem_chase(const TheoremChaseSpec& spec) {
  if (spec.e < 0) throw ValidationError("chase parameter e must be non-negative");
  if (spec.delta < 0 || spec.delta > 7)
    throw ValidationError("chase hypothesis requires 0 <= delta <= 7");
  if (spec.a != 4)
    throw ValidationError("the chase targets the degree-11 pencil, which is specific to a = 4");

  TheoremChaseReport rep;
  rep.spec = spec;
  const std::int64_t e = spec.e;
  const std::int64_t abs_e1 = e >= 1 ? e - 1 : 1;
  rep.sections = e + 7;
  const std::int64_t two_k = rep.sections - abs_e1;
  rep.k = two_k / 2;
  rep.g = rep.k + 1;

  // The plane target carries the seven 4-fold points and the 2k fresh
  // simple points of the de Jonquieres transform (multiplicity 0 there).
  std::vector<PointLabel> y_labels, x_labels;
  for (std::int64_t i = 1; i <= 7; ++i) y_labels.push_back("y" + std::to_string(i));
  for (std::int64_t i = 1; i <= two_k; ++i) x_labels.push_back("x" + std::to_string(i));

  std::vector<PointLabel> marks = y_labels;
  marks.insert(marks.end(), x_labels.begin(), x_labels.end());
  // For e = 0 the single elementary transform runs downward (F_1 to F_0);
  // its leftover fiber-image point stays off C0 and survives the final
  // contraction as a zero-multiplicity plane mark, so the target carries it.
  if (e == 0) marks.push_back("u1");
  SurfaceModel plane = SurfaceModel::plane(marks);
  LinearSystemSpec target{DivisorClass(plane, {11}), {}};
  target.mults[kP0Label] = 3;
  for (const auto& l : y_labels) target.mults[l] = 4;
  for (const auto& l : x_labels) target.mults[l] = 0;
  if (e == 0) target.mults["u1"] = 0;
  rep.plane_target = to_plane_system(target);

  TransformChain inverse_chain;
  {
    BirationalStep dej = BirationalStep::dejonquieres(rep.g, x_labels);
    dej.direction = StepDirection::Inverse;
    inverse_chain.steps.push_back(std::move(dej));

    BirationalStep lift = BirationalStep::blow_down_f1();
    lift.direction = StepDirection::Inverse;
    inverse_chain.steps.push_back(std::move(lift));

    for (std::int64_t i = 1; i <= abs_e1; ++i) {
      BirationalStep elm = BirationalStep::elementary("u" + std::to_string(i),
                                                      "xp" + std::to_string(i));
      elm.direction = StepDirection::Inverse;
      elm.center_on_c0 = e >= 2;  // walking e upward transforms on C0
      inverse_chain.steps.push_back(std::move(elm));
    }

    if (spec.delta > 0) {
      BirationalStep lift_s = BirationalStep::blow_down_to_hirzebruch();
      lift_s.direction = StepDirection::Inverse;
      for (std::int64_t i = 1; i <= spec.delta; ++i)
        lift_s.centers.push_back("y" + std::to_string(i));
      inverse_chain.steps.push_back(std::move(lift_s));
    }
  }

  auto [final_sys, trace] = apply_chain(inverse_chain, target);
  rep.final_system = final_sys;
  rep.intermediate_plane = to_plane_system(trace.records[0].output);

  // Read d from the final class -aK + dF (y-coordinate minus a(e+2)).
  const std::int64_t a = spec.a;
  rep.lattice_d = checked_sub(final_sys.cls.coord(1), checked_mul(a, checked_add(e, 2)));
  rep.paper_d = checked_add(36, checked_mul(4, e));
  rep.paper_formula_d =
      checked_add(8, checked_mul(a, checked_add(checked_sub(e, 1), checked_mul(2, rep.k))));

  for (const auto& rec : trace.records) {
    ChaseCertificate cert;
    cert.step = detail::step_name(rec.step);
    cert.fiber_in = detail::fiber_degree(rec.input);
    cert.fiber_out = detail::fiber_degree(rec.output);
    cert.fiber_ok = cert.fiber_in == checked_mul(2, a) && cert.fiber_out == checked_mul(2, a);
    cert.self_intersection_ok =
        rec.input_invariants.self_intersection == rec.output_invariants.self_intersection;
    cert.k_pairing_ok = rec.input_invariants.k_pairing == rec.output_invariants.k_pairing;
    rep.certificates.push_back(cert);
  }
  rep.all_green = true;
  for (const auto& c : rep.certificates) rep.all_green = rep.all_green && c.green();

  // Forward consistency: undoing the inverse chain must land exactly on the
  // plane target, labels included.
  auto [back, fwd_trace] = apply_chain(invert_chain(trace), final_sys);
  (void)fwd_trace;
  rep.roundtrip_ok = back == target;

  rep.trace = std::move(trace);
  rep.notes.push_back("the triple point of the plane pencil is identified with p0 (the table's "
                      "final column); this identification is a modeling choice");
  rep.notes.push_back("de Jonquieres degree follows k+1 with |X| = |e-1| + 2k and s = e + 7 "
                      "sections; at e = 0 this gives degree 4 and an intermediate plane system "
                      "(35; p0->27, six 8-fold points)");
  rep.notes.push_back("assertions bind to the per-step certificates, not to either headline "
                      "fiber constant");
  return rep;
}

struct PencilSeedResult {
  std::uint64_t seed = 0;
  bool dagger = false;
  bool generality_clear = false;
  std::int64_t dimension = -2;
};

struct PencilReport {
  std::int64_t e = 0;
  std::int64_t delta = 0;
  std::uint64_t modulus = kDefaultModulus;
  std::vector<PencilSeedResult> per_seed;
  bool hypotheses_met = false;  // dagger and generality on every run
  std::int64_t dimension = -2;  // minimum over runs with hypotheses met
  bool dimension_ok = false;    // equals 1
  bool pass = false;
  std::vector<std::string> notes;
};

namespace detail {

inline PencilSeedResult pencil_run(const PointConfig& pc, std::uint64_t seed) {
  PencilSeedResult r;
  r.seed = seed;
  r.dagger = check_dagger(pc);
  r.generality_clear = generality_report(pc).all_clear();
  InterpolationProblem prob;
  prob.degree = 11;
  prob.modulus = pc.modulus;
  prob.seed = seed;
  prob.conditions.emplace_back(p0_point(), 3);
  for (const auto& q : *pc.coords) prob.conditions.emplace_back(q, 4);
  r.dimension = actual_dim(prob);
  return r;
}

}  // namespace detail

// Check the degree-11 pencil numerically: sample seven general points per
// seed, confirm the generality hypotheses, and ask the oracle for the
// dimension (expected: 1). The parameters e and delta only describe which
// bundle the pencil came from; the plane computation is the same for all.
inline PencilReport verify_pencil_property(std::int64_t e, std::int64_t delta,
                                           const std::vector<std::uint64_t>& seeds,
                                           std::uint64_t modulus = kDefaultModulus) {
  if (delta < 0 || delta > 7) throw ValidationError("pencil hypothesis requires 0 <= delta <= 7");
  if (seeds.empty()) throw ValidationError("pencil verification needs at least one seed");
  PencilReport rep;
  rep.e = e;
  rep.delta = delta;
  rep.modulus = modulus;
  rep.hypotheses_met = true;
  for (std::uint64_t seed : seeds) {
    PointConfig pc = sample_general_points(7, seed, modulus);
    rep.per_seed.push_back(detail::pencil_run(pc, seed));
    const auto& r = rep.per_seed.back();
    rep.hypotheses_met = rep.hypotheses_met && r.dagger && r.generality_clear;
    if (rep.dimension == -2 || r.dimension < rep.dimension) rep.dimension = r.dimension;
  }
  rep.dimension_ok = rep.dimension == 1;
  rep.pass = rep.hypotheses_met && rep.dimension_ok;
  rep.notes.push_back("the plane pencil model is shared by every (e, delta) within hypothesis");
  return rep;
}

// Same check against an explicit configuration. Degenerate configurations
// report "hypotheses not met" and make no claim about the dimension.
inline PencilReport verify_pencil_with_points(const PointConfig& pc) {
  pc.validate();
  if (!pc.coords) throw ValidationError("pencil verification needs explicit coordinates");
  if (pc.size() != 7) throw ValidationError("the pencil check takes exactly 7 points");
  PencilReport rep;
  rep.modulus = pc.modulus;
  rep.per_seed.push_back(detail::pencil_run(pc, 0));
  const auto& r = rep.per_seed.back();
  rep.hypotheses_met = r.dagger && r.generality_clear;
  rep.dimension = r.dimension;
  rep.dimension_ok = rep.dimension == 1;
  rep.pass = rep.hypotheses_met && rep.dimension_ok;
  if (!rep.hypotheses_met)
    rep.notes.push_back("hypotheses not met: the configuration is degenerate, no dimension "
                        "claim is made");
  return rep;
}

}  // namespace rcb
