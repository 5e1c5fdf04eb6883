#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <sstream>

#include "knotscope/error.hpp"
#include "knotscope/invariants.hpp"

namespace knotscope {

namespace {

// -A^2 - A^-2, the value of a removable loop.
const LaurentPoly& loop_value() {
  static const LaurentPoly delta = LaurentPoly::monomial(-1, 2) + LaurentPoly::monomial(-1, -2);
  return delta;
}

const LaurentPoly& loop_power(int k) {
  static const std::array<LaurentPoly, 5> powers = [] {
    std::array<LaurentPoly, 5> p;
    p[0] = LaurentPoly(1);
    for (std::size_t i = 1; i < p.size(); ++i)
      p[i] = p[i - 1] * loop_value();
    return p;
  }();
  return powers.at(static_cast<std::size_t>(k));
}

// Smoothing pairs of leg positions: A joins (0,1),(2,3); B joins (0,3),(1,2).
constexpr std::array<std::array<int, 4>, 2> kSmoothing = {{{1, 0, 3, 2}, {3, 2, 1, 0}}};

std::vector<int> contraction_order(const Diagram& d) {
  const int c = d.crossing_count();
  const auto& xs = d.crossings();
  std::vector<int> order;
  std::vector<bool> done(static_cast<std::size_t>(c), false);
  std::vector<int> ends_seen(static_cast<std::size_t>(d.arc_count()), 0);
  for (int step = 0; step < c; ++step) {
    int best = -1;
    int best_score = -1;
    for (int x = 0; x < c; ++x) {
      if (done[x])
        continue;
      int score = 0;
      for (int a : xs[x].legs)
        score += ends_seen[a] == 1 ? 1 : 0;
      if (score > best_score) {
        best = x;
        best_score = score;
      }
    }
    done[best] = true;
    order.push_back(best);
    for (int a : xs[best].legs)
      ends_seen[a]++;
  }
  return order;
}

} // namespace

LaurentPoly kauffman_bracket(const Diagram& d) {
  const int c = d.crossing_count();
  if (c == 0)
    return LaurentPoly(1);

  // A state pairs up the open arcs (arcs with exactly one end contracted):
  // key[i] is the partner of open[i] through the contracted region.
  using State = std::vector<int>;
  std::vector<int> open;
  std::map<State, LaurentPoly> states;
  states.emplace(State{}, LaurentPoly(1));

  for (int x : contraction_order(d)) {
    const auto& legs = d.crossings()[x].legs;
    enum class Leg { Internal, Closing, Opening };
    std::array<Leg, 4> kind{};
    std::array<int, 4> twin{-1, -1, -1, -1};
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j)
        if (j != i && legs[j] == legs[i])
          twin[i] = j;
      if (twin[i] >= 0)
        kind[i] = Leg::Internal;
      else if (std::binary_search(open.begin(), open.end(), legs[i]))
        kind[i] = Leg::Closing;
      else
        kind[i] = Leg::Opening;
    }
    std::vector<int> next_open;
    for (int a : open)
      if (std::find(legs.begin(), legs.end(), a) == legs.end())
        next_open.push_back(a);
    for (int i = 0; i < 4; ++i)
      if (kind[i] == Leg::Opening)
        next_open.push_back(legs[i]);
    std::sort(next_open.begin(), next_open.end());
    if (static_cast<int>(next_open.size()) > kContractionMaxFrontier)
      fail(ErrorCode::BudgetExceeded, "bracket contraction frontier of " +
                                          std::to_string(next_open.size()) + " arcs exceeds " +
                                          std::to_string(kContractionMaxFrontier));
    auto index_in = [](const std::vector<int>& v, int a) {
      return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), a) - v.begin());
    };

    std::map<State, LaurentPoly> next_states;
    for (const auto& [key, poly] : states) {
      auto partner = [&](int arc) { return key[index_in(open, arc)]; };
      // Through-connection of each port along its arc: another port (>= 0)
      // or a terminal open arc encoded as -(arc + 1).
      std::array<int, 4> via{};
      for (int i = 0; i < 4; ++i) {
        if (kind[i] == Leg::Internal) {
          via[i] = twin[i];
        } else if (kind[i] == Leg::Opening) {
          via[i] = -(legs[i] + 1);
        } else {
          int m = partner(legs[i]);
          int port = -1;
          for (int j = 0; j < 4; ++j)
            if (j != i && kind[j] == Leg::Closing && legs[j] == m)
              port = j;
          via[i] = port >= 0 ? port : -(m + 1);
        }
      }
      for (int s = 0; s < 2; ++s) {
        const auto& smooth = kSmoothing[s];
        std::array<bool, 4> used{};
        std::vector<std::pair<int, int>> joins;
        int loops = 0;
        // Paths start at a port whose arc side is a terminal.
        for (int i = 0; i < 4; ++i) {
          if (used[i] || via[i] >= 0)
            continue;
          int start_terminal = -via[i] - 1;
          int port = i;
          int end_terminal = -1;
          while (true) {
            used[port] = true;
            int other = smooth[port];
            used[other] = true;
            if (via[other] < 0) {
              end_terminal = -via[other] - 1;
              break;
            }
            port = via[other];
          }
          joins.emplace_back(start_terminal, end_terminal);
        }
        for (int i = 0; i < 4; ++i) {
          if (used[i])
            continue;
          int port = i;
          while (!used[port]) {
            used[port] = true;
            int other = smooth[port];
            used[other] = true;
            port = via[other];
          }
          ++loops;
        }
        State next(next_open.size(), -1);
        for (std::size_t k = 0; k < next_open.size(); ++k) {
          int a = next_open[k];
          if (std::binary_search(open.begin(), open.end(), a))
            next[k] = partner(a);
        }
        for (auto [u, v] : joins) {
          next[index_in(next_open, u)] = v;
          next[index_in(next_open, v)] = u;
        }
        LaurentPoly term = poly.shifted(s == 0 ? 1 : -1);
        if (loops > 0)
          term *= loop_power(loops);
        auto [it, inserted] = next_states.try_emplace(std::move(next), term);
        if (!inserted) {
          it->second += term;
        }
      }
    }
    for (auto it = next_states.begin(); it != next_states.end();) {
      if (it->second.is_zero())
        it = next_states.erase(it);
      else
        ++it;
    }
    states = std::move(next_states);
    open = std::move(next_open);
  }
  if (!open.empty())
    fail(ErrorCode::InvalidDiagram, "bracket contraction left open arcs");
  auto it = states.find(State{});
  if (it == states.end())
    return LaurentPoly();
  return it->second.divided_exactly(loop_value());
}

LaurentPoly kauffman_bracket_states(const Diagram& d) {
  const int c = d.crossing_count();
  if (c == 0)
    return LaurentPoly(1);
  if (c > kStateSumMaxCrossings)
    fail(ErrorCode::BudgetExceeded, std::to_string(c) + " crossings exceeds the state-sum cap of " +
                                        std::to_string(kStateSumMaxCrossings));
  const int arcs = d.arc_count();
  // counts[a - b + c][loops]
  std::vector<std::vector<long long>> counts(static_cast<std::size_t>(2 * c + 1),
                                             std::vector<long long>(static_cast<std::size_t>(arcs + 1), 0));
  std::vector<int> parent(static_cast<std::size_t>(arcs));
  auto find = [&](int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  const auto& xs = d.crossings();
  const unsigned long long total = 1ULL << c;
  for (unsigned long long mask = 0; mask < total; ++mask) {
    std::iota(parent.begin(), parent.end(), 0);
    int components = arcs;
    int b_count = 0;
    for (int x = 0; x < c; ++x) {
      const auto& l = xs[x].legs;
      bool b = (mask >> x) & 1ULL;
      b_count += b ? 1 : 0;
      std::array<std::pair<int, int>, 2> pairs =
          b ? std::array<std::pair<int, int>, 2>{{{l[0], l[3]}, {l[1], l[2]}}}
            : std::array<std::pair<int, int>, 2>{{{l[0], l[1]}, {l[2], l[3]}}};
      for (auto [u, v] : pairs) {
        int ru = find(u);
        int rv = find(v);
        if (ru != rv) {
          parent[ru] = rv;
          --components;
        }
      }
    }
    counts[c - 2 * b_count + c][components]++;
  }
  LaurentPoly out;
  for (int e = 0; e <= 2 * c; ++e)
    for (int loops = 1; loops <= arcs; ++loops)
      if (long long n = counts[e][loops]; n != 0)
        out += LaurentPoly::monomial(BigInt(n), e - c) * loop_value().pow(static_cast<unsigned>(loops - 1));
  return out;
}

BigInt jones_det_from_bracket(const LaurentPoly& bracket) {
  CycInt norm = bracket.evaluate_at_zeta().norm();
  if (!norm.is_integer())
    fail(ErrorCode::NonSquareNorm, "bracket value at zeta has non-rational norm " + norm.str());
  auto root = exact_sqrt(norm[0]);
  if (!root)
    fail(ErrorCode::NonSquareNorm, "norm " + norm[0].str() + " is not a perfect square");
  return *root;
}

BigInt jones_det(const Diagram& d) { return jones_det_from_bracket(kauffman_bracket(d)); }

IntMatrix goeritz_matrix(const Diagram& d) {
  const int c = d.crossing_count();
  if (c == 0)
    fail(ErrorCode::InvalidArgument, "Goeritz matrix needs at least one crossing");
  CheckerboardColoring col = checkerboard(d);
  std::vector<int> index(col.faces.size(), -1);
  int w = 0;
  for (std::size_t f = 0; f < col.faces.size(); ++f)
    if (col.color[f] == col.white)
      index[f] = w++;
  IntMatrix g(static_cast<std::size_t>(w), static_cast<std::size_t>(w));
  for (std::size_t f = 0; f < col.faces.size(); ++f)
    if (index[f] >= 0) {
      g.row_labels()[index[f]] = "F" + std::to_string(f);
      g.col_labels()[index[f]] = "F" + std::to_string(f);
    }
  for (int x = 0; x < c; ++x) {
    // A-corners sit between legs (1,2) and (3,0).
    int r1 = 0;
    int r2 = 0;
    int eta = 0;
    if (col.color[col.corner_face(x, 1)] == col.white) {
      r1 = index[col.corner_face(x, 1)];
      r2 = index[col.corner_face(x, 3)];
      eta = 1;
    } else {
      r1 = index[col.corner_face(x, 0)];
      r2 = index[col.corner_face(x, 2)];
      eta = -1;
    }
    if (r1 < 0 || r2 < 0)
      fail(ErrorCode::InvalidDiagram, "checkerboard corners inconsistent at crossing " + std::to_string(x));
    if (r1 == r2)
      continue; // nugatory crossing
    auto i = static_cast<std::size_t>(r1);
    auto j = static_cast<std::size_t>(r2);
    g.at(i, j) -= eta;
    g.at(j, i) -= eta;
    g.at(i, i) += eta;
    g.at(j, j) += eta;
  }
  return g;
}

BigInt goeritz_det(const Diagram& d) {
  if (d.crossing_count() == 0)
    return 1;
  IntMatrix g = goeritz_matrix(d);
  BigInt det = g.minor(g.rows() - 1, g.cols() - 1).determinant();
  return det < 0 ? BigInt(-det) : det;
}

IntMatrix alexander_matrix(const Diagram& d) {
  const int c = d.crossing_count();
  if (c == 0)
    fail(ErrorCode::InvalidArgument, "Alexander matrix needs at least one crossing");
  std::vector<int> parent(static_cast<std::size_t>(d.arc_count()));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  for (const auto& cr : d.crossings())
    parent[find(cr.legs[1])] = find(cr.legs[3]);
  std::vector<int> column(static_cast<std::size_t>(d.arc_count()), -1);
  int generators = 0;
  for (int a = 0; a < d.arc_count(); ++a) {
    int r = find(a);
    if (column[r] == -1)
      column[r] = generators++;
  }
  if (generators != c)
    fail(ErrorCode::InvalidDiagram, "Wirtinger presentation has " + std::to_string(generators) +
                                        " generators for " + std::to_string(c) + " crossings");
  IntMatrix m(static_cast<std::size_t>(c), static_cast<std::size_t>(c));
  for (int a = 0; a < d.arc_count(); ++a)
    m.col_labels()[column[find(a)]] += (m.col_labels()[column[find(a)]].empty() ? "" : "+") + std::to_string(a);
  for (int x = 0; x < c; ++x) {
    const auto& cr = d.crossings()[x];
    auto row = static_cast<std::size_t>(x);
    m.row_labels()[row] = "X" + std::to_string(x);
    // Fox derivatives at t = -1: over-arc 1 - t = 2, under-arcs t = -1 and -1.
    m.at(row, column[find(cr.legs[1])]) += 2;
    m.at(row, column[find(cr.legs[0])]) -= 1;
    m.at(row, column[find(cr.legs[2])]) -= 1;
  }
  return m;
}

BigInt alexander_det(const Diagram& d) {
  if (d.crossing_count() == 0)
    return 1;
  IntMatrix m = alexander_matrix(d);
  BigInt det = m.minor(m.rows() - 1, m.cols() - 1).determinant();
  return det < 0 ? BigInt(-det) : det;
}

bool DeterminantRoutes::agree() const {
  return goeritz == alexander && (!jones || *jones == goeritz);
}

std::string DeterminantRoutes::str() const {
  std::ostringstream os;
  os << "goeritz=" << goeritz << " alexander=" << alexander << " jones=";
  if (jones)
    os << *jones;
  else
    os << "skipped";
  return os.str();
}

DeterminantRoutes determinant_routes(const Diagram& d) {
  DeterminantRoutes r;
  r.goeritz = goeritz_det(d);
  r.alexander = alexander_det(d);
  try {
    r.jones = jones_det(d);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::BudgetExceeded)
      throw;
  }
  return r;
}

DisagreementError::DisagreementError(DeterminantRoutes routes)
    : Error(ErrorCode::Disagreement, "determinant routes disagree: " + routes.str()),
      routes_(std::move(routes)) {}

BigInt determinant(const Diagram& d) {
  DeterminantRoutes r = determinant_routes(d);
  if (!r.agree())
    throw DisagreementError(r);
  return r.goeritz;
}

} // namespace knotscope
