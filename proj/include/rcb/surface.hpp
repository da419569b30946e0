#pragma once

// Marked rational surfaces and exact Picard-lattice arithmetic.
//
// A SurfaceModel is the plane, a Hirzebruch surface F_e, or either of those
// blown up at an ordered list of labeled points. Divisor classes are integer
// vectors in the model's basis:
//   plane:       (H, E_1, ..., E_n)
//   Hirzebruch:  (C0, F, E_1, ..., E_n)
// with H^2 = 1, C0^2 = -e, F^2 = 0, C0.F = 1, E_i^2 = -1 and all E_i
// orthogonal to the base lattice and to each other.
//
// Besides the blown-up points a model carries "marked" points: labeled
// points on the surface that multiplicity assignments may reference. Marked
// points on ruled models record whether they sit on C0; user-constructed
// marks must be off C0, but transform steps may create marks on it.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "rcb/checked.hpp"
#include "rcb/errors.hpp"

namespace rcb {

using PointLabel = std::string;

// The contraction target of F_1's (-1)-section; reserved on plane models.
inline const PointLabel kP0Label = "p0";

enum class BaseKind { Plane, Hirzebruch };

struct MarkedPoint {
  PointLabel label;
  bool on_c0 = false;

  friend bool operator==(const MarkedPoint&, const MarkedPoint&) = default;
};

class SurfaceModel {
 public:
  static SurfaceModel plane(std::vector<PointLabel> marks = {}) {
    SurfaceModel s;
    s.base_ = BaseKind::Plane;
    for (auto& l : marks) s.marks_.push_back({std::move(l), false});
    s.normalize();
    s.validate();
    return s;
  }

  static SurfaceModel hirzebruch(std::int64_t e, std::vector<PointLabel> marks = {}) {
    if (e < 0) throw ValidationError("Hirzebruch parameter e must be non-negative");
    SurfaceModel s;
    s.base_ = BaseKind::Hirzebruch;
    s.e_ = e;
    for (auto& l : marks) s.marks_.push_back({std::move(l), false});
    s.normalize();
    s.validate();
    return s;
  }

  BaseKind base() const { return base_; }
  std::int64_t e() const { return e_; }
  const std::vector<PointLabel>& blown_up() const { return blown_up_; }
  const std::vector<MarkedPoint>& marks() const { return marks_; }

  bool is_plane() const { return base_ == BaseKind::Plane && blown_up_.empty(); }
  bool is_hirzebruch() const { return base_ == BaseKind::Hirzebruch && blown_up_.empty(); }
  bool is_blowup() const { return !blown_up_.empty(); }

  std::size_t rank() const {
    return (base_ == BaseKind::Plane ? 1u : 2u) + blown_up_.size();
  }

  bool has_mark(const PointLabel& l) const {
    return std::find_if(marks_.begin(), marks_.end(),
                        [&](const MarkedPoint& m) { return m.label == l; }) != marks_.end();
  }

  bool mark_on_c0(const PointLabel& l) const {
    for (const auto& m : marks_)
      if (m.label == l) return m.on_c0;
    throw ValidationError("no marked point labeled '" + l + "'");
  }

  // Labels a multiplicity assignment may use: marked points, plus p0 on
  // plane models (implicitly present, never listed among the marks).
  bool has_mult_label(const PointLabel& l) const {
    if (base_ == BaseKind::Plane && l == kP0Label) return true;
    return has_mark(l);
  }

  // Index of a blown-up label's exceptional coordinate within coords().
  std::size_t exceptional_index(const PointLabel& l) const {
    for (std::size_t i = 0; i < blown_up_.size(); ++i) {
      if (blown_up_[i] == l) return base_rank() + i;
    }
    throw ValidationError("no exceptional coordinate for label '" + l + "'");
  }

  std::size_t base_rank() const { return base_ == BaseKind::Plane ? 1u : 2u; }

  // Blow up points. Each label must be an existing mark (which is consumed),
  // or p0 on a plane model; fresh labels are also accepted since marking a
  // general point is always possible.
  SurfaceModel blow_up(const std::vector<PointLabel>& pts) const {
    SurfaceModel s = *this;
    for (const auto& l : pts) {
      if (l == kP0Label && s.base_ != BaseKind::Plane)
        throw ValidationError("label 'p0' is reserved for plane models");
      auto it = std::find_if(s.marks_.begin(), s.marks_.end(),
                             [&](const MarkedPoint& m) { return m.label == l; });
      if (it != s.marks_.end()) s.marks_.erase(it);
      s.blown_up_.push_back(l);
    }
    s.validate();
    return s;
  }

  SurfaceModel with_mark(MarkedPoint m) const {
    SurfaceModel s = *this;
    if (s.base_ == BaseKind::Plane && m.on_c0)
      throw ValidationError("plane marks carry no C0 flag");
    s.marks_.push_back(std::move(m));
    s.normalize();
    s.validate();
    return s;
  }

  SurfaceModel without_mark(const PointLabel& l) const {
    SurfaceModel s = *this;
    auto it = std::find_if(s.marks_.begin(), s.marks_.end(),
                           [&](const MarkedPoint& m) { return m.label == l; });
    if (it == s.marks_.end()) throw ValidationError("no marked point labeled '" + l + "'");
    s.marks_.erase(it);
    return s;
  }

  std::string describe() const {
    std::string base = base_ == BaseKind::Plane ? "P2" : ("F" + std::to_string(e_));
    if (blown_up_.empty()) return base;
    return "Bl_" + std::to_string(blown_up_.size()) + "(" + base + ")";
  }

  friend bool operator==(const SurfaceModel&, const SurfaceModel&) = default;

 private:
  SurfaceModel() = default;

  // Marked points form an unordered set; storing them sorted makes model
  // equality and serialization independent of construction history. The
  // blow-up list stays in its given order (it fixes the coordinate basis).
  void normalize() {
    std::sort(marks_.begin(), marks_.end(),
              [](const MarkedPoint& a, const MarkedPoint& b) { return a.label < b.label; });
  }

  void validate() const {
    std::vector<PointLabel> seen;
    auto check = [&](const PointLabel& l) {
      if (l.empty()) throw ValidationError("empty point label");
      if (std::find(seen.begin(), seen.end(), l) != seen.end())
        throw ValidationError("duplicate point label '" + l + "'");
      seen.push_back(l);
    };
    for (const auto& m : marks_) {
      if (m.label == kP0Label)
        throw ValidationError("label 'p0' is reserved and cannot be marked");
      check(m.label);
    }
    for (const auto& l : blown_up_) {
      if (l == kP0Label && base_ != BaseKind::Plane)
        throw ValidationError("label 'p0' is reserved for plane models");
      check(l);
    }
  }

  BaseKind base_ = BaseKind::Plane;
  std::int64_t e_ = 0;
  std::vector<PointLabel> blown_up_;
  std::vector<MarkedPoint> marks_;
};

class DivisorClass {
 public:
  DivisorClass(SurfaceModel surface, std::vector<std::int64_t> coords)
      : surface_(std::move(surface)), coords_(std::move(coords)) {
    if (coords_.size() != surface_.rank())
      throw ValidationError("divisor class has " + std::to_string(coords_.size()) +
                            " coordinates on a rank-" + std::to_string(surface_.rank()) +
                            " lattice");
  }

  const SurfaceModel& surface() const { return surface_; }
  const std::vector<std::int64_t>& coords() const { return coords_; }
  std::int64_t coord(std::size_t i) const { return coords_.at(i); }

  DivisorClass operator+(const DivisorClass& o) const {
    require_same_surface(o);
    std::vector<std::int64_t> c(coords_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = checked_add(coords_[i], o.coords_[i]);
    return DivisorClass(surface_, std::move(c));
  }

  DivisorClass operator-(const DivisorClass& o) const {
    require_same_surface(o);
    std::vector<std::int64_t> c(coords_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = checked_sub(coords_[i], o.coords_[i]);
    return DivisorClass(surface_, std::move(c));
  }

  DivisorClass scaled(std::int64_t k) const {
    std::vector<std::int64_t> c(coords_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = checked_mul(coords_[i], k);
    return DivisorClass(surface_, std::move(c));
  }

  void require_same_surface(const DivisorClass& o) const {
    if (!(surface_ == o.surface_))
      throw ModelMismatchError("divisor classes live on different surface models (" +
                               surface_.describe() + " vs " + o.surface_.describe() + ")");
  }

  friend bool operator==(const DivisorClass&, const DivisorClass&) = default;

 private:
  SurfaceModel surface_;
  std::vector<std::int64_t> coords_;
};

// The standard intersection pairing. Symmetric and bilinear.
inline std::int64_t intersect(const DivisorClass& c1, const DivisorClass& c2) {
  c1.require_same_surface(c2);
  const SurfaceModel& s = c1.surface();
  const auto& a = c1.coords();
  const auto& b = c2.coords();
  std::int64_t total = 0;
  if (s.base() == BaseKind::Plane) {
    total = checked_mul(a[0], b[0]);  // H.H = 1
  } else {
    // C0^2 = -e, C0.F = 1, F^2 = 0
    total = checked_neg(checked_mul(s.e(), checked_mul(a[0], b[0])));
    total = checked_add(total, checked_mul(a[0], b[1]));
    total = checked_add(total, checked_mul(a[1], b[0]));
  }
  for (std::size_t i = s.base_rank(); i < a.size(); ++i) {
    total = checked_sub(total, checked_mul(a[i], b[i]));  // E_i^2 = -1
  }
  return total;
}

inline DivisorClass canonical_class(const SurfaceModel& s) {
  std::vector<std::int64_t> c(s.rank(), 0);
  if (s.base() == BaseKind::Plane) {
    c[0] = -3;
  } else {
    c[0] = -2;
    c[1] = -(s.e() + 2);
  }
  // K_S = mu^* K_base + sum E_i
  for (std::size_t i = s.base_rank(); i < c.size(); ++i) c[i] = 1;
  return DivisorClass(s, std::move(c));
}

inline std::int64_t self_intersection(const DivisorClass& c) { return intersect(c, c); }

// The surface underlying to_blowup_basis: F_1 and its blow-ups are
// re-coordinatized over the plane blown up at p0 (and the same points).
inline SurfaceModel to_blowup_surface(const SurfaceModel& s) {
  if (s.base() != BaseKind::Hirzebruch || s.e() != 1)
    throw UnsupportedError("blow-up basis is defined for F_1-based models only");
  SurfaceModel out = SurfaceModel::plane().blow_up({kP0Label});
  for (const auto& l : s.blown_up()) out = out.blow_up({l});
  for (const auto& m : s.marks()) out = out.with_mark({m.label, false});
  return out;
}

// Isometric re-coordinatization of an F_1-based class over the blown-up
// plane, via H = C0 + F and E_{p0} = C0. Intersection numbers and the
// canonical class are preserved exactly.
inline DivisorClass to_blowup_basis(const DivisorClass& c) {
  const SurfaceModel out = to_blowup_surface(c.surface());
  const auto& v = c.coords();
  std::vector<std::int64_t> w(v.size());
  // x C0 + y F  =  y H + (x - y) E_{p0}
  w[0] = v[1];
  w[1] = checked_sub(v[0], v[1]);
  for (std::size_t i = 2; i < v.size(); ++i) w[i] = v[i];
  return DivisorClass(out, std::move(w));
}

}  // namespace rcb
