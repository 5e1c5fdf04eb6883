#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "knotscope/codes.hpp"

namespace knotscope {

/// One crossing in PD form. legs are arc labels in counterclockwise order,
/// starting at the incoming under-strand; legs[0] -> legs[2] is the
/// under-strand and legs[1], legs[3] carry the over-strand. A positive
/// crossing has the over-strand running legs[3] -> legs[1].
struct Crossing {
  std::array<int, 4> legs{};
  int sign = 1;

  int over_in() const noexcept { return sign > 0 ? legs[3] : legs[1]; }
  int over_out() const noexcept { return sign > 0 ? legs[1] : legs[3]; }

  friend bool operator==(const Crossing&, const Crossing&) = default;
};

/// A slot of a crossing: crossing index and leg position 0..3.
struct Dart {
  int crossing = 0;
  int position = 0;
  friend bool operator==(const Dart&, const Dart&) = default;
};

/// Planar single-component knot diagram. Arcs are labelled 0..2c-1 in
/// traversal order: arc k leaves the crossing where arc k-1 enters.
class Diagram {
public:
  Diagram() = default; // 0-crossing unknot
  explicit Diagram(std::vector<Crossing> crossings);

  const std::vector<Crossing>& crossings() const noexcept { return crossings_; }
  int crossing_count() const noexcept { return static_cast<int>(crossings_.size()); }
  int arc_count() const noexcept { return 2 * crossing_count(); }
  int writhe() const noexcept;

  // The other slot holding the same arc.
  Dart other_end(Dart d) const;
  // Slot where arc k is outgoing / incoming.
  Dart arc_tail(int arc) const;
  Dart arc_head(int arc) const;

  // Visit sequence: entry k is the crossing where arc k starts, flagged
  // over/under and carrying the crossing sign.
  GaussCode gauss() const;

  // Cycles of the face permutation (x, p) -> (y, q + 1), where (y, q) is the
  // far end of the arc leaving leg p of crossing x.
  std::vector<std::vector<Dart>> faces() const;
  int face_count() const;

  // "X[a,b,c,d] ..." with signs, for diagnostics.
  std::string pd_string() const;

  friend bool operator==(const Diagram&, const Diagram&) = default;

private:
  std::vector<Crossing> crossings_;
  std::vector<Dart> tail_;
  std::vector<Dart> head_;
};

/// Proper two-colouring of the faces of a diagram.
struct CheckerboardColoring {
  std::vector<std::vector<Dart>> faces;
  std::vector<int> color;          // per face, 0 or 1
  std::vector<std::vector<int>> face_of; // face_of[crossing][position]
  int white = 0;                   // colour class used as white regions

  int count(int which) const;
  // Face entered through the corner between positions p and p + 1.
  int corner_face(int crossing, int p) const { return face_of[crossing][(p + 1) % 4]; }
};

// Realise a Gauss code as a planar diagram. Throws NonRealizable when no
// planar embedding exists. The result is determined up to reflection of the
// projection sphere (i.e. possibly the mirror image).
Diagram realize(const GaussCode& gauss);
inline Diagram realize(const DTCode& code) { return realize(dt_to_gauss(code)); }

// Canonical DT code of the diagram's traversal.
DTCode extract_dt(const Diagram& d);

// Crossing change at every crossing.
Diagram mirror(const Diagram& d);

CheckerboardColoring checkerboard(const Diagram& d);

/// Builder for diagrams described geometrically: crossings with four legs in
/// counterclockwise order, strands passing leg i <-> leg i + 2, joined by
/// wires. Used by the family generators.
class PlanarBuilder {
public:
  // over_02: whether the strand through legs 0 and 2 is the over-strand.
  int add_crossing(bool over_02);
  // Named endpoint not attached to any crossing (joined through wires only).
  int add_point();
  int leg(int crossing, int position) const { return crossing_base_.at(crossing) + position; }
  void wire(int a, int b);

  // Orients the single component and labels arcs. Throws NotAKnot when the
  // wires form more than one component.
  Diagram build() const;

private:
  std::vector<bool> over_02_;
  std::vector<int> crossing_base_;
  int point_count_ = 0;
  std::vector<std::pair<int, int>> wires_;
};

} // namespace knotscope
