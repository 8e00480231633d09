#pragma once

// HEX boards: the rhombus board with its path-following winner, and the
// d-dimensional board H(n,d) with the completely-colored simplex chain.

#include "hexatope/linalg.hpp"
#include "hexatope/rational.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/bron_kerbosch_all_cliques.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hexatope {

enum class Tile : std::uint8_t { Grey = 0, White = 1, Black = 2 };

inline Tile opponent(Tile t) { return t == Tile::White ? Tile::Black : Tile::White; }

inline const char* to_string(Tile t) {
  switch (t) {
    case Tile::White: return "White";
    case Tile::Black: return "Black";
    default: return "Grey";
  }
}

inline char tile_char(Tile t) { return t == Tile::White ? 'W' : t == Tile::Black ? 'B' : '.'; }

struct Cell {
  int r = 0;
  int c = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

inline constexpr std::array<std::pair<int, int>, 6> kHexStencil{
    {{-1, 0}, {1, 0}, {0, -1}, {0, 1}, {1, -1}, {-1, 1}}};

/// Rows × cols rhombus. White owns the left/right sides (columns −1 and cols),
/// Black owns the top/bottom sides (rows −1 and rows).
struct HexBoard {
  int rows = 0;
  int cols = 0;

  HexBoard() = default;
  HexBoard(int r, int c) : rows(r), cols(c) {
    if (r < 1 || c < 1) throw std::invalid_argument("board needs at least one row and column");
  }

  int tiles() const { return rows * cols; }
  bool inside(int r, int c) const { return r >= 0 && r < rows && c >= 0 && c < cols; }
  int index(int r, int c) const { return r * cols + c; }
  Cell cell(int i) const { return {i / cols, i % cols}; }

  std::vector<int> neighbors(int i) const {
    std::vector<int> out;
    const Cell x = cell(i);
    for (auto [dr, dc] : kHexStencil)
      if (inside(x.r + dr, x.c + dc)) out.push_back(index(x.r + dr, x.c + dc));
    return out;
  }

  bool adjacent(Cell a, Cell b) const {
    for (auto [dr, dc] : kHexStencil)
      if (a.r + dr == b.r && a.c + dc == b.c) return true;
    return false;
  }

  /// Color of a cell in the padded grid [−1,rows]×[−1,cols], border cells included.
  Tile padded_color(const std::vector<Tile>& tiles, int r, int c) const {
    if (inside(r, c)) return tiles[index(r, c)];
    if (c == -1) return Tile::White;
    if (r == rows) return Tile::Black;
    if (c == cols) return Tile::White;
    return Tile::Black;
  }
};

using Coloring = std::vector<Tile>;

struct WinResult {
  Tile winner = Tile::Grey;
  std::vector<Cell> path;  // winning chain of interior tiles, border to border
  std::size_t steps = 0;   // edges traversed by the separating path
};

/// BFS winner for a possibly partial coloring; nullopt while nobody has connected.
inline std::optional<std::pair<Tile, std::vector<Cell>>> connected_winner(const HexBoard& b,
                                                                          const Coloring& tiles) {
  for (Tile player : {Tile::White, Tile::Black}) {
    std::vector<int> parent(b.tiles(), -2);
    std::deque<int> queue;
    for (int k = 0; k < (player == Tile::White ? b.rows : b.cols); ++k) {
      const int i = player == Tile::White ? b.index(k, 0) : b.index(0, k);
      if (tiles[i] == player) {
        parent[i] = -1;
        queue.push_back(i);
      }
    }
    while (!queue.empty()) {
      const int i = queue.front();
      queue.pop_front();
      const Cell x = b.cell(i);
      if ((player == Tile::White && x.c == b.cols - 1) || (player == Tile::Black && x.r == b.rows - 1)) {
        std::vector<Cell> path;
        for (int j = i; j >= 0; j = parent[j]) path.push_back(b.cell(j));
        std::reverse(path.begin(), path.end());
        return std::make_pair(player, path);
      }
      for (int j : b.neighbors(i))
        if (parent[j] == -2 && tiles[j] == player) {
          parent[j] = i;
          queue.push_back(j);
        }
    }
  }
  return std::nullopt;
}

namespace detail {

struct Tri {
  int r, c, kind;  // kind 0: {(r,c),(r,c+1),(r+1,c)}, kind 1: {(r,c+1),(r+1,c),(r+1,c+1)}
  std::array<Cell, 3> vertices() const {
    if (kind == 0) return {Cell{r, c}, Cell{r, c + 1}, Cell{r + 1, c}};
    return {Cell{r, c + 1}, Cell{r + 1, c}, Cell{r + 1, c + 1}};
  }
  bool has(Cell x) const {
    for (Cell v : vertices())
      if (v == x) return true;
    return false;
  }
  friend bool operator==(const Tri&, const Tri&) = default;
};

}  // namespace detail

/// Follows the white/black separating path from the lower-left corner until it leaves the board.
inline WinResult winner_2d(const HexBoard& b, const Coloring& tiles) {
  if (static_cast<int>(tiles.size()) != b.tiles()) throw std::invalid_argument("coloring size mismatch");
  for (Tile t : tiles)
    if (t == Tile::Grey) throw std::invalid_argument("winner_2d needs a full coloring");
  auto color = [&](Cell x) { return b.padded_color(tiles, x.r, x.c); };
  auto cell_ok = [&](int r, int c) { return r >= -1 && r <= b.rows - 1 && c >= -1 && c <= b.cols - 1; };
  auto other_triangle = [&](const detail::Tri& from, Cell p, Cell q) -> std::optional<detail::Tri> {
    for (int r = std::min(p.r, q.r) - 1; r <= std::max(p.r, q.r); ++r)
      for (int c = std::min(p.c, q.c) - 1; c <= std::max(p.c, q.c); ++c)
        for (int kind = 0; kind < 2; ++kind) {
          detail::Tri t{r, c, kind};
          if (!cell_ok(r, c) || t == from) continue;
          if (t.has(p) && t.has(q)) return t;
        }
    return std::nullopt;
  };

  // Entry edge: (rows,−1) is White (left side), (rows,0) is Black (bottom side).
  Cell white{b.rows, -1}, black{b.rows, 0};
  detail::Tri cur{b.rows - 1, -1, 1};
  std::vector<Cell> white_side{white}, black_side{black};
  std::set<std::pair<Cell, Cell>> seen_edges{{white, black}};
  std::size_t steps = 0;
  for (;;) {
    Cell third{};
    for (Cell v : cur.vertices())
      if (!(v == white) && !(v == black)) third = v;
    if (color(third) == Tile::White) {
      white = third;
      white_side.push_back(third);
    } else {
      black = third;
      black_side.push_back(third);
    }
    ++steps;
    if (!seen_edges.insert({white, black}).second) throw std::logic_error("separating path revisited an edge");
    auto next = other_triangle(cur, white, black);
    if (!next) break;
    cur = *next;
  }

  WinResult res;
  res.steps = steps;
  // The exit edge is on the outer boundary: bottom-right means a white left-right chain,
  // top-left a black bottom-top chain.
  const bool white_won = white.c == b.cols && black.r == b.rows;
  const bool black_won = black.r == -1 && white.c == -1;
  if (white_won == black_won) throw std::logic_error("separating path left through an unexpected edge");
  res.winner = white_won ? Tile::White : Tile::Black;
  const auto& side = white_won ? white_side : black_side;

  // Shortest winning path using only the tiles that border the separating path.
  std::set<Cell> chain;
  for (Cell x : side)
    if (b.inside(x.r, x.c)) chain.insert(x);
  std::map<Cell, Cell> parent;
  std::deque<Cell> queue;
  auto at_start = [&](Cell x) { return white_won ? x.c == 0 : x.r == b.rows - 1; };
  auto at_goal = [&](Cell x) { return white_won ? x.c == b.cols - 1 : x.r == 0; };
  for (Cell x : chain)
    if (at_start(x)) {
      parent[x] = x;
      queue.push_back(x);
    }
  while (!queue.empty()) {
    Cell x = queue.front();
    queue.pop_front();
    if (at_goal(x)) {
      for (Cell y = x;; y = parent[y]) {
        res.path.push_back(y);
        if (parent[y] == y) break;
      }
      break;
    }
    for (auto [dr, dc] : kHexStencil) {
      Cell y{x.r + dr, x.c + dc};
      if (chain.count(y) && !parent.count(y)) {
        parent[y] = x;
        queue.push_back(y);
      }
    }
  }
  if (res.path.empty()) throw std::logic_error("chain beside the separating path is not connected");

  auto bfs = connected_winner(b, tiles);
  if (!bfs || bfs->first != res.winner) throw std::logic_error("path-following and connectivity disagree");
  return res;
}

inline std::string format_board(const HexBoard& b, const Coloring& tiles) {
  std::ostringstream out;
  out << "hex " << b.rows << " " << b.cols << "\n";
  for (int r = 0; r < b.rows; ++r) {
    for (int c = 0; c < b.cols; ++c) out << tile_char(tiles[b.index(r, c)]);
    out << "\n";
  }
  return out.str();
}

inline std::pair<HexBoard, Coloring> parse_board(std::istream& in) {
  std::string word;
  int rows = 0, cols = 0;
  if (!(in >> word >> rows >> cols) || word != "hex") throw std::invalid_argument("board file must start with 'hex m n'");
  HexBoard b(rows, cols);
  Coloring tiles(b.tiles(), Tile::Grey);
  for (int r = 0; r < rows; ++r) {
    std::string line;
    if (!(in >> line) || static_cast<int>(line.size()) != cols) throw std::invalid_argument("board row has wrong length");
    for (int c = 0; c < cols; ++c) {
      switch (line[c]) {
        case 'W': tiles[b.index(r, c)] = Tile::White; break;
        case 'B': tiles[b.index(r, c)] = Tile::Black; break;
        case '.': break;
        default: throw std::invalid_argument("board cells must be W, B or .");
      }
    }
  }
  return {b, tiles};
}

inline std::pair<HexBoard, Coloring> parse_board(const std::string& text) {
  std::istringstream in(text);
  return parse_board(in);
}

// ---------------------------------------------------------------------------
// d-dimensional board

using Point = std::vector<int>;

/// H(n,d) on {−1,…,n+1}^d with interior {0,…,n}^d; colors are 1..d, 0 = uncolored.
class DBoard {
 public:
  DBoard(int n, int d) : n_(n), d_(d) {
    if (n < 0 || d < 1) throw std::invalid_argument("need n >= 0 and d >= 1");
    side_ = n + 3;
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(side_);
    if (total > (std::size_t{1} << 26)) throw std::invalid_argument("board too large");
    total_ = total;
  }

  int n() const { return n_; }
  int d() const { return d_; }
  std::size_t vertex_count() const { return total_; }

  std::size_t interior_count() const {
    std::size_t c = 1;
    for (int i = 0; i < d_; ++i) c *= static_cast<std::size_t>(n_ + 1);
    return c;
  }

  bool in_cube(const Point& v) const {
    for (int x : v)
      if (x < -1 || x > n_ + 1) return false;
    return true;
  }
  bool is_interior(const Point& v) const {
    for (int x : v)
      if (x < 0 || x > n_) return false;
    return true;
  }

  std::size_t index(const Point& v) const {
    std::size_t k = 0;
    for (int i = d_ - 1; i >= 0; --i) k = k * static_cast<std::size_t>(side_) + static_cast<std::size_t>(v[i] + 1);
    return k;
  }
  Point point(std::size_t k) const {
    Point v(d_);
    for (int i = 0; i < d_; ++i) {
      v[i] = static_cast<int>(k % static_cast<std::size_t>(side_)) - 1;
      k /= static_cast<std::size_t>(side_);
    }
    return v;
  }

  /// Preassigned boundary color.
  int kappa(const Point& v) const {
    for (int i = 0; i < d_; ++i)
      if (v[i] == -1) return i + 1;
    for (int i = 0; i < d_; ++i)
      if (v[i] == n_ + 1) return i + 1;
    throw std::invalid_argument("kappa is only defined on boundary vertices");
  }

  static bool adjacent(const Point& a, const Point& b) {
    bool up = true, down = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const int diff = a[i] - b[i];
      if (diff != 0 && diff != 1) up = false;
      if (diff != 0 && diff != -1) down = false;
    }
    return up || down;
  }

  std::vector<Point> interior_points() const {
    std::vector<Point> out;
    for (std::size_t k = 0; k < total_; ++k) {
      Point v = point(k);
      if (is_interior(v)) out.push_back(std::move(v));
    }
    return out;
  }

 private:
  int n_, d_, side_ = 0;
  std::size_t total_ = 0;
};

class DColoring {
 public:
  explicit DColoring(const DBoard& b) : board_(b), colors_(b.vertex_count(), 0) {
    for (std::size_t k = 0; k < colors_.size(); ++k) {
      Point v = b.point(k);
      if (!b.is_interior(v)) colors_[k] = static_cast<std::uint8_t>(b.kappa(v));
    }
  }

  const DBoard& board() const { return board_; }

  int color(const Point& v) const { return colors_[board_.index(v)]; }

  void set(const Point& v, int c) {
    if (!board_.is_interior(v)) throw std::invalid_argument("boundary colors are fixed");
    if (c < 1 || c > board_.d()) throw std::invalid_argument("color out of range");
    colors_[board_.index(v)] = static_cast<std::uint8_t>(c);
  }

  void clear(const Point& v) {
    if (!board_.is_interior(v)) throw std::invalid_argument("boundary colors are fixed");
    colors_[board_.index(v)] = 0;
  }

  bool complete() const {
    return std::none_of(colors_.begin(), colors_.end(), [](std::uint8_t c) { return c == 0; });
  }

  /// Colors i for which some i-colored path joins {x_i = −1} to {x_i = n+1}.
  std::vector<int> winners_by_search() const {
    std::vector<int> out;
    const int d = board_.d(), n = board_.n();
    for (int i = 1; i <= d; ++i) {
      std::vector<bool> seen(colors_.size(), false);
      std::deque<std::size_t> queue;
      for (std::size_t k = 0; k < colors_.size(); ++k)
        if (colors_[k] == i && board_.point(k)[i - 1] == -1) {
          seen[k] = true;
          queue.push_back(k);
        }
      bool won = false;
      while (!queue.empty() && !won) {
        Point v = board_.point(queue.front());
        queue.pop_front();
        if (v[i - 1] == n + 1) won = true;
        for_each_neighbor(v, [&](const Point& w) {
          const std::size_t kw = board_.index(w);
          if (!seen[kw] && colors_[kw] == i) {
            seen[kw] = true;
            queue.push_back(kw);
          }
        });
      }
      if (won) out.push_back(i);
    }
    return out;
  }

  template <typename Fn>
  void for_each_neighbor(const Point& v, Fn&& fn) const {
    const int d = board_.d();
    for (std::uint32_t s = 1; s < (std::uint32_t{1} << d); ++s)
      for (int sign : {1, -1}) {
        Point w = v;
        for (int i = 0; i < d; ++i)
          if (s >> i & 1U) w[i] += sign;
        if (board_.in_cube(w)) fn(w);
      }
  }

 private:
  DBoard board_;
  std::vector<std::uint8_t> colors_;
};

/// Kuhn simplex: p_0 = base, p_k = p_{k−1} + e_{perm[k−1]}.
struct KuhnSimplex {
  Point base;
  std::vector<int> perm;

  std::vector<Point> vertices() const {
    std::vector<Point> out{base};
    for (int axis : perm) {
      Point p = out.back();
      ++p[axis];
      out.push_back(std::move(p));
    }
    return out;
  }

  /// The simplex sharing all vertices but p_k.
  KuhnSimplex pivot(std::size_t k) const {
    KuhnSimplex s = *this;
    const std::size_t d = perm.size();
    if (k == 0) {
      ++s.base[perm[0]];
      std::rotate(s.perm.begin(), s.perm.begin() + 1, s.perm.end());
    } else if (k == d) {
      --s.base[perm[d - 1]];
      std::rotate(s.perm.begin(), s.perm.end() - 1, s.perm.end());
    } else {
      std::swap(s.perm[k - 1], s.perm[k]);
    }
    return s;
  }

  friend auto operator<=>(const KuhnSimplex&, const KuhnSimplex&) = default;
};

struct DWinResult {
  int winner = 0;                    // color 1..d
  std::vector<Point> path;           // winner-colored, from {x_i = −1} to {x_i = n+1}
  std::vector<KuhnSimplex> chain;    // completely colored simplices, starting at Δ_0
  int exit_hyperplane = 0;           // i with the final facet in {x_i = n+1}
};

inline DWinResult winner_ddim(const DColoring& col) {
  if (!col.complete()) throw std::invalid_argument("every interior vertex must be colored");
  const DBoard& b = col.board();
  const int d = b.d(), n = b.n();
  KuhnSimplex cur{Point(d, -1), std::vector<int>(d)};
  std::iota(cur.perm.begin(), cur.perm.end(), 0);

  DWinResult res;
  std::set<KuhnSimplex> visited;
  std::size_t entered_opposite = static_cast<std::size_t>(d);  // Δ_0 is entered through the facet without 0
  for (;;) {
    if (!visited.insert(cur).second) throw std::logic_error("simplex chain revisited a simplex");
    res.chain.push_back(cur);
    auto vs = cur.vertices();
    // The facet opposite `entered_opposite` is completely colored; find the twin vertex.
    const int fresh = col.color(vs[entered_opposite]);
    std::size_t leave = vs.size();
    for (std::size_t k = 0; k < vs.size(); ++k)
      if (k != entered_opposite && col.color(vs[k]) == fresh) leave = k;
    if (leave == vs.size()) throw std::logic_error("chain simplex lost a color");
    KuhnSimplex next = cur.pivot(leave);
    bool valid = true;
    for (const Point& p : next.vertices())
      if (!b.in_cube(p)) valid = false;
    if (!valid) {
      // Exit facet: all vertices except vs[leave].
      for (int i = 0; i < d && res.exit_hyperplane == 0; ++i) {
        bool all = true;
        for (std::size_t k = 0; k < vs.size(); ++k)
          if (k != leave && vs[k][i] != n + 1) all = false;
        if (all) res.exit_hyperplane = i + 1;
      }
      if (res.exit_hyperplane == 0) throw std::logic_error("chain left the cube outside every H_i^+");
      break;
    }
    // Pivoting at an end rotates the vertex order, so the new vertex moves to the other end.
    entered_opposite = leave == 0 ? vs.size() - 1 : leave == vs.size() - 1 ? 0 : leave;
    cur = next;
  }

  const int w = res.exit_hyperplane;
  res.winner = w;
  std::set<Point> candidates;
  for (const auto& s : res.chain)
    for (const Point& p : s.vertices())
      if (col.color(p) == w) candidates.insert(p);
  Point start(d, 0);
  for (int i = 0; i < d; ++i) start[i] = i < w - 1 ? 0 : -1;
  if (!candidates.count(start)) throw std::logic_error("chain misses the starting vertex of the winner");
  std::map<Point, Point> parent{{start, start}};
  std::deque<Point> queue{start};
  while (!queue.empty()) {
    Point v = queue.front();
    queue.pop_front();
    if (v[w - 1] == n + 1) {
      for (Point y = v;; y = parent[y]) {
        res.path.push_back(y);
        if (parent[y] == y) break;
      }
      std::reverse(res.path.begin(), res.path.end());
      break;
    }
    col.for_each_neighbor(v, [&](const Point& u) {
      if (candidates.count(u) && !parent.count(u)) {
        parent[u] = v;
        queue.push_back(u);
      }
    });
  }
  if (res.path.empty()) throw std::logic_error("winner-colored chain vertices are not connected");
  return res;
}

/// Full coloring of H(cols−1, 2) from a square rhombus board: x_1 = c, x_2 = rows−1−r, White = 1.
inline DColoring dual_coloring(const HexBoard& b, const Coloring& tiles) {
  if (b.rows != b.cols) throw std::invalid_argument("dual board needs a square rhombus");
  DBoard h(b.cols - 1, 2);
  DColoring col(h);
  for (int r = 0; r < b.rows; ++r)
    for (int c = 0; c < b.cols; ++c) {
      const Tile t = tiles[b.index(r, c)];
      if (t == Tile::Grey) continue;
      col.set({c, b.rows - 1 - r}, t == Tile::White ? 1 : 2);
    }
  return col;
}

/// The face Δ(x) of Δ(n,d) containing x in its relative interior.
inline std::vector<Point> simplex_of_point(int n, const QVector& x) {
  const std::size_t d = x.size();
  for (const auto& xi : x)
    if (xi < -1 || xi > n + 1) throw std::invalid_argument("point lies outside the cube");
  std::vector<int> lo(d), hi(d);
  for (std::size_t i = 0; i < d; ++i) {
    lo[i] = floor_of(x[i]).convert_to<int>();
    hi[i] = ceil_of(x[i]).convert_to<int>();
  }
  std::vector<Point> out;
  Point v(d);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == d) {
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t c = 0; c < d; ++c) {
          if (a == c) continue;
          const Rational diff = x[a] - x[c];
          const int delta = v[a] - v[c];
          if (delta < floor_of(diff) || delta > ceil_of(diff)) return;
        }
      out.push_back(v);
      return;
    }
    for (int t = lo[i]; t <= hi[i]; ++t) {
      v[i] = t;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

inline std::vector<Point> simplex_of_point(int n, const std::vector<double>& x, int bits = 30) {
  QVector q;
  for (double xi : x) q.push_back(snap_to_rational(xi, bits));
  return simplex_of_point(n, q);
}

struct TriangulationReport {
  std::size_t maximal_cliques = 0;
  std::size_t full_dimensional = 0;
  Rational volume;
  bool ok = false;
};

namespace detail {

struct CliqueVolumeVisitor {
  const DBoard* board;
  int d;
  TriangulationReport* rep;
  bool* ok;
  Rational fact;
  template <typename Clique, typename G>
  void clique(const Clique& c, const G&) {
    ++rep->maximal_cliques;
    if (static_cast<int>(c.size()) != d + 1) {
      *ok = false;
      return;
    }
    ++rep->full_dimensional;
    std::vector<Point> pts;
    for (auto v : c) pts.push_back(board->point(v));
    QMatrix m(d, QVector(d));
    for (int r = 0; r < d; ++r)
      for (int s = 0; s < d; ++s) m[r][s] = pts[r + 1][s] - pts[0][s];
    // |det| by elimination
    Rational det = 1;
    for (int col = 0; col < d; ++col) {
      int piv = col;
      while (piv < d && m[piv][col] == 0) ++piv;
      if (piv == d) {
        det = 0;
        break;
      }
      if (piv != col) {
        std::swap(m[piv], m[col]);
        det = -det;
      }
      det *= m[col][col];
      for (int r = col + 1; r < d; ++r) {
        const Rational f = m[r][col] / m[col][col];
        for (int s = col; s < d; ++s) m[r][s] -= f * m[col][s];
      }
    }
    if (det < 0) det = -det;
    if (det != 1) *ok = false;
    rep->volume += det / fact;
  }
};

}  // namespace detail

/// Checks that the clique complex of H(n,d) tiles [−1,n+1]^d by unit-volume/d! simplices.
inline TriangulationReport triangulation_check(int n, int d, std::size_t samples = 200, std::uint64_t seed = 1) {
  DBoard b(n, d);
  using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  Graph g(b.vertex_count());
  for (std::size_t i = 0; i < b.vertex_count(); ++i)
    for (std::size_t j = i + 1; j < b.vertex_count(); ++j)
      if (DBoard::adjacent(b.point(i), b.point(j))) boost::add_edge(i, j, g);

  TriangulationReport rep;
  bool shape_ok = true;
  Rational fact = 1;
  for (int k = 2; k <= d; ++k) fact *= k;
  detail::CliqueVolumeVisitor vis{&b, d, &rep, &shape_ok, fact};
  boost::bron_kerbosch_all_cliques(g, vis, 1);

  Rational expected = 1;
  for (int i = 0; i < d; ++i) expected *= (n + 2);
  bool samples_ok = true;
  std::uint64_t state = seed * 6364136223846793005ULL + 1442695040888963407ULL;
  auto next = [&]() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return state >> 33;
  };
  for (std::size_t s = 0; s < samples; ++s) {
    QVector x(d);
    for (int i = 0; i < d; ++i) x[i] = Rational(BigInt(static_cast<long long>(next() % (16 * (n + 2) + 1))), BigInt(16)) - 1;
    auto simplex = simplex_of_point(n, x);
    if (simplex.empty() || static_cast<int>(simplex.size()) > d + 1) samples_ok = false;
    for (std::size_t a = 0; a < simplex.size(); ++a)
      for (std::size_t c = a + 1; c < simplex.size(); ++c)
        if (!DBoard::adjacent(simplex[a], simplex[c])) samples_ok = false;
  }
  rep.ok = shape_ok && samples_ok && rep.volume == expected;
  return rep;
}

inline std::string format_dcoloring(const DColoring& col) {
  std::ostringstream out;
  const DBoard& b = col.board();
  out << "dhex " << b.n() << " " << b.d() << "\n";
  for (const Point& v : b.interior_points()) {
    for (int x : v) out << x << " ";
    out << ": " << col.color(v) << "\n";
  }
  return out.str();
}

inline DColoring parse_dcoloring(std::istream& in) {
  std::string word;
  int n = 0, d = 0;
  if (!(in >> word >> n >> d) || word != "dhex") throw std::invalid_argument("file must start with 'dhex n d'");
  DBoard b(n, d);
  DColoring col(b);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw std::invalid_argument("expected 'v_1 ... v_d : color'");
    }
    std::istringstream vs(line.substr(0, colon));
    Point v;
    for (int x; vs >> x;) v.push_back(x);
    if (static_cast<int>(v.size()) != d) throw std::invalid_argument("vertex has wrong dimension");
    col.set(v, std::stoi(line.substr(colon + 1)));
  }
  return col;
}

}  // namespace hexatope
