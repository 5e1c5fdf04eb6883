#include <algorithm>
#include <numeric>
#include <optional>
#include <queue>
#include <sstream>

#include "knotscope/diagram.hpp"
#include "knotscope/error.hpp"

namespace knotscope {

// ---------------------------------------------------------------- Diagram

Diagram::Diagram(std::vector<Crossing> crossings) : crossings_(std::move(crossings)) {
  const int c = crossing_count();
  const int n = 2 * c;
  auto label_ok = [n](int a) { return a >= 0 && a < n; };
  auto next = [n](int a) { return (a + 1) % n; };
  tail_.assign(static_cast<std::size_t>(n), Dart{-1, -1});
  head_.assign(static_cast<std::size_t>(n), Dart{-1, -1});
  for (int x = 0; x < c; ++x) {
    const Crossing& cr = crossings_[x];
    if (cr.sign != 1 && cr.sign != -1)
      fail(ErrorCode::InvalidDiagram, "crossing " + std::to_string(x) + " has sign other than +-1");
    for (int a : cr.legs)
      if (!label_ok(a))
        fail(ErrorCode::InvalidDiagram, "arc label " + std::to_string(a) + " out of range");
    if (cr.legs[2] != next(cr.legs[0]))
      fail(ErrorCode::InvalidDiagram,
           "crossing " + std::to_string(x) + ": under-strand arcs are not consecutive");
    if (cr.over_out() != next(cr.over_in()))
      fail(ErrorCode::InvalidDiagram,
           "crossing " + std::to_string(x) + ": over-strand arcs disagree with the sign");
    int over_in_pos = cr.sign > 0 ? 3 : 1;
    int over_out_pos = cr.sign > 0 ? 1 : 3;
    auto place = [&](std::vector<Dart>& slots, int arc, int pos) {
      auto& slot = slots[arc];
      if (slot.crossing != -1)
        fail(ErrorCode::InvalidDiagram, "arc " + std::to_string(arc) + " is used twice");
      slot = Dart{x, pos};
    };
    place(head_, cr.legs[0], 0);
    place(tail_, cr.legs[2], 2);
    place(head_, cr.over_in(), over_in_pos);
    place(tail_, cr.over_out(), over_out_pos);
  }
  if (c > 0 && face_count() != c + 2)
    fail(ErrorCode::InvalidDiagram, "diagram is not planar: " + std::to_string(face_count()) +
                                        " faces for " + std::to_string(c) + " crossings");
}

int Diagram::writhe() const noexcept {
  int w = 0;
  for (const auto& cr : crossings_)
    w += cr.sign;
  return w;
}

Dart Diagram::arc_tail(int arc) const { return tail_.at(static_cast<std::size_t>(arc)); }
Dart Diagram::arc_head(int arc) const { return head_.at(static_cast<std::size_t>(arc)); }

Dart Diagram::other_end(Dart d) const {
  int arc = crossings_.at(static_cast<std::size_t>(d.crossing)).legs.at(static_cast<std::size_t>(d.position));
  Dart t = arc_tail(arc);
  return t == d ? arc_head(arc) : t;
}

GaussCode Diagram::gauss() const {
  std::vector<GaussEntry> entries;
  entries.reserve(tail_.size());
  for (const Dart& t : tail_) {
    const Crossing& cr = crossings_[t.crossing];
    entries.push_back(GaussEntry{t.crossing + 1, t.position % 2 == 1, cr.sign});
  }
  return GaussCode(std::move(entries));
}

std::vector<std::vector<Dart>> Diagram::faces() const {
  const int c = crossing_count();
  if (c == 0)
    return {{}};
  std::vector<std::vector<Dart>> out;
  std::vector<char> seen(static_cast<std::size_t>(4 * c), 0);
  for (int x = 0; x < c; ++x) {
    for (int p = 0; p < 4; ++p) {
      if (seen[4 * x + p])
        continue;
      std::vector<Dart> face;
      Dart d{x, p};
      while (!seen[4 * d.crossing + d.position]) {
        seen[4 * d.crossing + d.position] = 1;
        face.push_back(d);
        Dart far = other_end(d);
        d = Dart{far.crossing, (far.position + 1) % 4};
      }
      out.push_back(std::move(face));
    }
  }
  return out;
}

int Diagram::face_count() const { return static_cast<int>(faces().size()); }

std::string Diagram::pd_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < crossings_.size(); ++i) {
    const auto& l = crossings_[i].legs;
    os << (i ? " " : "") << "X" << (crossings_[i].sign > 0 ? "+" : "-") << "[" << l[0] << ","
       << l[1] << "," << l[2] << "," << l[3] << "]";
  }
  return os.str();
}

// ------------------------------------------------------------ operations

DTCode extract_dt(const Diagram& d) { return canonical_dt(d.gauss()); }

Diagram mirror(const Diagram& d) {
  std::vector<Crossing> out;
  out.reserve(d.crossings().size());
  for (const auto& cr : d.crossings()) {
    const auto& l = cr.legs;
    if (cr.sign > 0)
      out.push_back(Crossing{{l[3], l[0], l[1], l[2]}, -1});
    else
      out.push_back(Crossing{{l[1], l[2], l[3], l[0]}, 1});
  }
  return Diagram(std::move(out));
}

int CheckerboardColoring::count(int which) const {
  return static_cast<int>(std::count(color.begin(), color.end(), which));
}

CheckerboardColoring checkerboard(const Diagram& d) {
  CheckerboardColoring out;
  out.faces = d.faces();
  const int c = d.crossing_count();
  out.color.assign(out.faces.size(), -1);
  if (c == 0) {
    out.color[0] = 0;
    return out;
  }
  out.face_of.assign(static_cast<std::size_t>(c), std::vector<int>(4, -1));
  for (std::size_t f = 0; f < out.faces.size(); ++f)
    for (const Dart& dart : out.faces[f])
      out.face_of[dart.crossing][dart.position] =
          static_cast<int>(f);

  // Each arc separates the face entered after its head from the face
  // entered after its tail.
  std::vector<std::vector<int>> adj(out.faces.size());
  for (int arc = 0; arc < d.arc_count(); ++arc) {
    Dart t = d.arc_tail(arc);
    Dart h = d.arc_head(arc);
    int f1 = out.face_of[h.crossing][(h.position + 1) % 4];
    int f2 = out.face_of[t.crossing][(t.position + 1) % 4];
    if (f1 == f2)
      fail(ErrorCode::InvalidDiagram, "arc " + std::to_string(arc) + " has the same face on both sides");
    adj[f1].push_back(f2);
    adj[f2].push_back(f1);
  }
  std::queue<int> bfs;
  out.color[0] = 0;
  bfs.push(0);
  while (!bfs.empty()) {
    int f = bfs.front();
    bfs.pop();
    for (int g : adj[f]) {
      auto& cg = out.color[g];
      if (cg == -1) {
        cg = 1 - out.color[f];
        bfs.push(g);
      } else if (cg == out.color[f]) {
        fail(ErrorCode::InvalidDiagram, "faces admit no checkerboard colouring");
      }
    }
  }
  if (std::find(out.color.begin(), out.color.end(), -1) != out.color.end())
    fail(ErrorCode::InvalidDiagram, "face adjacency graph is disconnected");
  out.white = out.count(1) < out.count(0) ? 1 : 0;
  return out;
}

// ------------------------------------------------------------ realize

namespace {

// Partial drawing of the curve as a rotation system. Vertices 0..c-1 are the
// crossings, c is the tail (start point) and c+1 the moving head. Edge e has
// darts 2e (leaving its source) and 2e+1 (leaving its target).
struct Embedding {
  std::vector<std::array<int, 2>> ends;
  std::vector<std::vector<int>> rot;

  int origin(int dart) const { return ends[dart / 2][dart & 1]; }

  std::vector<int> face_labels() const {
    std::vector<int> pos(ends.size() * 2, 0);
    for (const auto& r : rot)
      for (std::size_t i = 0; i < r.size(); ++i)
        pos[r[i]] = static_cast<int>(i);
    std::vector<int> face(ends.size() * 2, -1);
    int next_label = 0;
    for (std::size_t start = 0; start < face.size(); ++start) {
      if (face[start] != -1)
        continue;
      int d = static_cast<int>(start);
      while (face[d] == -1) {
        face[d] = next_label;
        int back = d ^ 1;
        const auto& r = rot[origin(back)];
        d = r[(static_cast<std::size_t>(pos[static_cast<std::size_t>(back)]) + 1) % r.size()];
      }
      ++next_label;
    }
    return face;
  }
};

class Realizer {
public:
  explicit Realizer(const GaussCode& gauss) : gauss_(gauss), c_(gauss.crossings()) {
    first_visit_.assign(static_cast<std::size_t>(c_), -1);
    second_visit_.assign(static_cast<std::size_t>(c_), -1);
    auto entries = gauss.entries();
    for (int k = 0; k < 2 * c_; ++k) {
      int x = entries[k].crossing - 1;
      (first_visit_[x] == -1 ? first_visit_ : second_visit_)[x] = k;
    }
  }

  std::optional<Embedding> run() {
    Embedding e;
    e.ends.push_back({c_, c_ + 1});
    e.rot.assign(static_cast<std::size_t>(c_) + 2, {});
    e.rot[c_] = {0};
    e.rot[static_cast<std::size_t>(c_) + 1] = {1};
    return step(std::move(e), 0);
  }

private:
  std::optional<Embedding> step(Embedding e, int k) {
    const int n = 2 * c_;
    const int head = c_ + 1;
    if (k == n) {
      auto face = e.face_labels();
      if (face[2 * n + 1] != face[0])
        return std::nullopt;
      return e;
    }
    const int x = gauss_.entries()[k].crossing - 1;
    const int in = 2 * k + 1;
    const int out = 2 * (k + 1);
    auto extend = [&](Embedding& s, std::vector<int> rot_x) {
      s.ends[k][1] = x;
      s.ends.push_back({x, head});
      s.rot[x] = std::move(rot_x);
      s.rot[head] = {out + 1};
    };
    if (first_visit_[x] == k) {
      extend(e, {in, out});
      return step(std::move(e), k + 1);
    }
    auto face = e.face_labels();
    const int head_face = face[in];
    const auto& r = e.rot[x];
    const int p = r[0];
    const int q = r[1];
    // Corner p -> q belongs to the face containing q, and vice versa.
    if (face[q] == head_face) {
      Embedding s = e;
      extend(s, {p, in, q, out});
      if (auto done = step(std::move(s), k + 1))
        return done;
    }
    if (face[p] == head_face) {
      extend(e, {p, out, q, in});
      if (auto done = step(std::move(e), k + 1))
        return done;
    }
    return std::nullopt;
  }

  const GaussCode& gauss_;
  int c_;
  std::vector<int> first_visit_;
  std::vector<int> second_visit_;
};

} // namespace

Diagram realize(const GaussCode& gauss) {
  const int c = gauss.crossings();
  if (c == 0)
    return Diagram();
  Realizer realizer(gauss);
  auto embedding = realizer.run();
  if (!embedding)
    fail(ErrorCode::NonRealizable, "Gauss code " + gauss.str() + " has no planar realisation");

  const int n = 2 * c;
  auto arc_of_edge = [n](int edge) { return edge == 0 ? n - 1 : edge - 1; };
  std::vector<int> under_visit(static_cast<std::size_t>(c), -1);
  std::vector<int> over_visit(static_cast<std::size_t>(c), -1);
  for (int k = 0; k < n; ++k) {
    const auto& entry = gauss.entries()[k];
    (entry.over ? over_visit : under_visit)[entry.crossing - 1] = k;
  }
  std::vector<Crossing> crossings(static_cast<std::size_t>(c));
  for (int x = 0; x < c; ++x) {
    const auto& r = embedding->rot[x];
    const int under_in = 2 * under_visit[x] + 1;
    const int over_out = 2 * (over_visit[x] + 1);
    auto start = static_cast<std::size_t>(std::find(r.begin(), r.end(), under_in) - r.begin());
    Crossing cr;
    for (std::size_t i = 0; i < 4; ++i) {
      int dart = r[(start + i) % 4];
      cr.legs[i] = arc_of_edge(dart / 2);
      if (dart == over_out)
        cr.sign = i == 1 ? 1 : -1;
    }
    crossings[x] = cr;
  }
  return Diagram(std::move(crossings));
}

// ---------------------------------------------------------- PlanarBuilder

int PlanarBuilder::add_crossing(bool over_02) {
  over_02_.push_back(over_02);
  crossing_base_.push_back(point_count_);
  point_count_ += 4;
  return static_cast<int>(over_02_.size()) - 1;
}

int PlanarBuilder::add_point() { return point_count_++; }

void PlanarBuilder::wire(int a, int b) {
  if (a < 0 || b < 0 || a >= point_count_ || b >= point_count_)
    fail(ErrorCode::InvalidArgument, "wire endpoint out of range");
  wires_.emplace_back(a, b);
}

Diagram PlanarBuilder::build() const {
  std::vector<int> parent(static_cast<std::size_t>(point_count_));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[static_cast<std::size_t>(a)]];
      a = parent[a];
    }
    return a;
  };
  for (auto [a, b] : wires_)
    parent[find(a)] = find(b);

  const int c = static_cast<int>(over_02_.size());
  std::vector<bool> is_leg(static_cast<std::size_t>(point_count_), false);
  for (int x = 0; x < c; ++x)
    for (int p = 0; p < 4; ++p)
      is_leg[leg(x, p)] = true;
  std::vector<std::vector<int>> members(static_cast<std::size_t>(point_count_));
  for (int a = 0; a < point_count_; ++a)
    if (is_leg[a])
      members[find(a)].push_back(a);
  int free_loops = 0;
  std::vector<char> root_seen(static_cast<std::size_t>(point_count_), 0);
  for (int a = 0; a < point_count_; ++a) {
    int root = find(a);
    if (root_seen[root])
      continue;
    root_seen[root] = 1;
    auto sz = members[root].size();
    if (sz == 0)
      ++free_loops;
    else if (sz != 2)
      fail(ErrorCode::InvalidArgument, "wire class joins " + std::to_string(sz) + " legs");
  }
  if (c == 0) {
    if (free_loops != 1)
      fail(ErrorCode::NotAKnot, "construction has " + std::to_string(free_loops) + " components");
    return Diagram();
  }
  if (free_loops > 0)
    fail(ErrorCode::NotAKnot, "construction contains a crossing-free component");

  // partner[point] = leg at the other end of its wire class.
  std::vector<int> partner(static_cast<std::size_t>(point_count_), -1);
  for (const auto& m : members)
    if (m.size() == 2) {
      partner[m[0]] = m[1];
      partner[m[1]] = m[0];
    }

  const int n = 2 * c;
  std::vector<std::array<int, 4>> arc_at(static_cast<std::size_t>(c), {-1, -1, -1, -1});
  std::vector<std::array<bool, 4>> incoming(static_cast<std::size_t>(c));
  int x = 0;
  int p = 0;
  for (int arc = 0; arc < n; ++arc) {
    int far = partner[leg(x, p)];
    int y = 0;
    while (y + 1 < c && crossing_base_[static_cast<std::size_t>(y) + 1] <= far)
      ++y;
    int q = far - crossing_base_[y];
    if (arc_at[x][p] != -1)
      fail(ErrorCode::NotAKnot, "construction has more than one component");
    arc_at[x][p] = arc;
    incoming[x][p] = false;
    arc_at[y][q] = arc;
    incoming[y][q] = true;
    x = y;
    p = (q + 2) % 4;
  }
  if (x != 0 || p != 0)
    fail(ErrorCode::NotAKnot, "construction has more than one component");
  for (const auto& a : arc_at)
    for (int v : a)
      if (v == -1)
        fail(ErrorCode::NotAKnot, "construction has more than one component");

  std::vector<Crossing> crossings(static_cast<std::size_t>(c));
  for (int k = 0; k < c; ++k) {
    const bool over_02 = over_02_[k];
    int under_in = -1;
    for (int pos = over_02 ? 1 : 0; pos < 4; pos += 2)
      if (incoming[k][pos])
        under_in = pos;
    Crossing cr;
    for (int i = 0; i < 4; ++i)
      cr.legs[i] = arc_at[k][(under_in + i) % 4];
    // Over-strand leaves at relative position 1 for a positive crossing.
    bool out_at_1 = !incoming[k][(under_in + 1) % 4];
    cr.sign = out_at_1 ? 1 : -1;
    crossings[k] = cr;
  }
  return Diagram(std::move(crossings));
}

} // namespace knotscope
