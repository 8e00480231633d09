#pragma once

// Exact solving of rhombus HEX positions, position counts, and the pairing
// strategy for the board where Black owns the longer sides.

#include "hexatope/budget.hpp"
#include "hexatope/hexboard.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace hexatope {

struct Position {
  HexBoard board;
  Coloring coloring;
  Tile to_move = Tile::White;

  static Position empty(int rows, int cols) { return {HexBoard(rows, cols), Coloring(rows * cols, Tile::Grey), Tile::White}; }

  int count(Tile t) const { return static_cast<int>(std::count(coloring.begin(), coloring.end(), t)); }
  int grey() const { return count(Tile::Grey); }

  bool legal() const {
    if (static_cast<int>(coloring.size()) != board.tiles()) return false;
    const int w = count(Tile::White), b = count(Tile::Black);
    return to_move == Tile::White ? w == b : to_move == Tile::Black && w == b + 1;
  }

  void play(int tile) {
    if (tile < 0 || tile >= board.tiles()) throw std::out_of_range("tile outside the board");
    if (coloring[tile] != Tile::Grey) throw std::invalid_argument("tile already taken");
    coloring[tile] = to_move;
    to_move = opponent(to_move);
  }
};

struct SolveResult {
  Tile winner = Tile::Grey;
  std::optional<Cell> move;  // a winning move when the mover wins, otherwise some legal move
  bool move_wins = false;
  std::uint64_t nodes = 0;
};

using BoardMask = std::uint64_t;

/// Bitmask solver with one memo table per instance. Tiles are limited to 25.
class HexSolver {
 public:
  explicit HexSolver(const HexBoard& b, int tile_cap = 16) : board_(b) {
    if (b.tiles() > tile_cap) throw BudgetExceeded("board has more tiles than the solver cap");
    if (b.tiles() > 25) throw BudgetExceeded("solver supports at most 25 tiles");
    const int n = b.tiles();
    nbr_.resize(n);
    for (int i = 0; i < n; ++i)
      for (int j : b.neighbors(i)) nbr_[i] |= BoardMask{1} << j;
    for (int r = 0; r < b.rows; ++r) {
      left_ |= bit(b.index(r, 0));
      right_ |= bit(b.index(r, b.cols - 1));
    }
    for (int c = 0; c < b.cols; ++c) {
      top_ |= bit(b.index(0, c));
      bottom_ |= bit(b.index(b.rows - 1, c));
    }
    // centre first
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0);
    const double cr = (b.rows - 1) / 2.0, cc = (b.cols - 1) / 2.0;
    std::stable_sort(order_.begin(), order_.end(), [&](int x, int y) {
      auto dist = [&](int i) { return std::abs(b.cell(i).r - cr) + std::abs(b.cell(i).c - cc); };
      return dist(x) < dist(y);
    });
  }

  const HexBoard& board() const { return board_; }

  void set_move_order(std::vector<int> order) {
    std::vector<int> check = order;
    std::sort(check.begin(), check.end());
    for (int i = 0; i < board_.tiles(); ++i)
      if (static_cast<int>(check.size()) != board_.tiles() || check[i] != i)
        throw std::invalid_argument("move order must be a permutation of the tiles");
    order_ = std::move(order);
    memo_.clear();
  }

  bool connects(BoardMask own, BoardMask from, BoardMask to) const {
    BoardMask reached = own & from, frontier = reached;
    while (frontier) {
      BoardMask next = 0;
      for (BoardMask f = frontier; f; f &= f - 1) next |= nbr_[std::countr_zero(f)];
      next &= own & ~reached;
      reached |= next;
      frontier = next;
    }
    return (reached & to) != 0;
  }

  bool white_connected(BoardMask w) const { return connects(w, left_, right_); }
  bool black_connected(BoardMask b) const { return connects(b, top_, bottom_); }

  /// Winner under optimal play. Positions need not satisfy the tile-count rule.
  Tile winner(BoardMask white, BoardMask black, Tile to_move) {
    if (white & black) throw std::invalid_argument("tile colored twice");
    return win(white, black, to_move == Tile::White) ? Tile::White : Tile::Black;
  }

  SolveResult solve(const Position& p) {
    if (!p.legal()) throw std::invalid_argument("illegal position: tile counts do not match the player to move");
    if (p.board.rows != board_.rows || p.board.cols != board_.cols) throw std::invalid_argument("position is for another board");
    BoardMask w = 0, b = 0;
    for (int i = 0; i < board_.tiles(); ++i) {
      if (p.coloring[i] == Tile::White) w |= bit(i);
      if (p.coloring[i] == Tile::Black) b |= bit(i);
    }
    const std::uint64_t before = nodes_;
    SolveResult res;
    const bool white_moves = p.to_move == Tile::White;
    res.winner = win(w, b, white_moves) ? Tile::White : Tile::Black;
    if (std::popcount(w | b) < board_.tiles()) {
      for (int i : order_) {
        if ((w | b) & bit(i)) continue;
        if (!res.move) res.move = board_.cell(i);
        const bool white_after = white_moves ? win(w | bit(i), b, false) : win(w, b | bit(i), true);
        if (white_after == white_moves) {
          res.move = board_.cell(i);
          res.move_wins = true;
          break;
        }
      }
    }
    res.nodes = nodes_ - before;
    return res;
  }

  std::uint64_t nodes() const { return nodes_; }
  std::size_t memo_size() const { return memo_.size(); }

 private:
  static BoardMask bit(int i) { return BoardMask{1} << i; }

  bool win(BoardMask w, BoardMask b, bool white_moves) {
    if (white_connected(w)) return true;
    if (black_connected(b)) return false;
    const BoardMask full = (BoardMask{1} << board_.tiles()) - 1;
    if ((w | b) == full) throw std::logic_error("full board without a winner");
    const std::uint64_t key = w | b << 25 | static_cast<std::uint64_t>(white_moves) << 50;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    ++nodes_;
    bool white_wins = !white_moves;
    for (int i : order_) {
      if ((w | b) & bit(i)) continue;
      const bool r = white_moves ? win(w | bit(i), b, false) : win(w, b | bit(i), true);
      if (r == white_moves) {
        white_wins = white_moves;
        break;
      }
    }
    memo_.emplace(key, white_wins);
    return white_wins;
  }

  HexBoard board_;
  std::vector<BoardMask> nbr_;
  BoardMask left_ = 0, right_ = 0, top_ = 0, bottom_ = 0;
  std::vector<int> order_;
  std::unordered_map<std::uint64_t, bool> memo_;
  std::uint64_t nodes_ = 0;
};

inline SolveResult solve(const Position& p, int tile_cap = 16) {
  HexSolver s(p.board, tile_cap);
  return s.solve(p);
}

struct TreeSize {
  std::uint64_t positions = 0;  // distinct legal positions reachable from the empty board
  std::uint64_t sequences = 0;  // nodes of the move tree, play continuing until the board is full
  std::vector<std::uint64_t> positions_by_grey;  // index g = number of grey tiles
};

/// Counted by DFS over move sequences with a visited set for positions.
inline TreeSize tree_size(int rows, int cols, std::uint64_t budget = 50'000'000) {
  HexBoard b(rows, cols);
  const int n = b.tiles();
  if (n > 25) throw BudgetExceeded("tree_size supports at most 25 tiles");
  TreeSize out;
  out.positions_by_grey.assign(n + 1, 0);
  std::unordered_map<std::uint64_t, std::uint64_t> subtree;  // position → sequences below it
  auto rec = [&](auto&& self, BoardMask w, BoardMask k, int placed) -> std::uint64_t {
    const std::uint64_t key = w | k << 25;
    if (auto it = subtree.find(key); it != subtree.end()) return it->second;
    if (subtree.size() >= budget) throw BudgetExceeded("tree_size position budget exhausted");
    ++out.positions;
    ++out.positions_by_grey[n - placed];
    std::uint64_t count = 1;
    for (int i = 0; i < n; ++i) {
      const BoardMask m = BoardMask{1} << i;
      if ((w | k) & m) continue;
      count += placed % 2 == 0 ? self(self, w | m, k, placed + 1) : self(self, w, k | m, placed + 1);
    }
    subtree.emplace(key, count);
    return count;
  };
  out.sequences = rec(rec, 0, 0, 0);
  return out;
}

/// Black's pairing strategy on the board with rows = n and cols = n + 1, where
/// Black joins the (longer) top and bottom sides. Tile (r,c) with c ≤ r is
/// paired with its reflection (c, r+1).
class PairingStrategy {
 public:
  explicit PairingStrategy(int n) : board_(n, n + 1), partner_(board_.tiles(), -1) {
    if (n < 1) throw std::invalid_argument("pairing needs n ≥ 1");
    for (int r = 0; r < n; ++r)
      for (int c = 0; c <= r; ++c) {
        const int a = board_.index(r, c), b = board_.index(c, r + 1);
        partner_[a] = b;
        partner_[b] = a;
      }
  }

  static PairingStrategy for_board(int rows, int cols) {
    if (cols != rows + 1) throw std::invalid_argument("pairing strategy needs cols = rows + 1");
    return PairingStrategy(rows);
  }

  const HexBoard& board() const { return board_; }
  int partner(int tile) const { return partner_.at(tile); }
  Cell partner(Cell x) const { return board_.cell(partner_.at(board_.index(x.r, x.c))); }

  /// Label of a tile: both tiles of a pair share it.
  int label(int tile) const { return std::min(tile, partner_.at(tile)); }

  Cell move(const Position& p, std::optional<Cell> last_white) const {
    if (p.board.rows != board_.rows || p.board.cols != board_.cols) throw std::invalid_argument("position is for another board");
    if (p.to_move != Tile::Black) throw std::invalid_argument("pairing strategy plays Black");
    if (!last_white) throw std::invalid_argument("no White move to answer");
    const int t = board_.index(last_white->r, last_white->c);
    if (p.coloring.at(t) != Tile::White) throw std::invalid_argument("last move is not a White tile");
    const int q = partner_[t];
    if (p.coloring[q] == Tile::Grey) return board_.cell(q);
    for (int i = 0; i < board_.tiles(); ++i)
      if (p.coloring[i] == Tile::Grey) return board_.cell(i);
    throw std::invalid_argument("board is full");
  }

 private:
  HexBoard board_;
  std::vector<int> partner_;
};

struct PairingReport {
  std::uint64_t lines = 0;
  std::uint64_t black_wins = 0;
  bool all_black() const { return lines == black_wins; }
};

inline Tile final_winner(const HexBoard& b, const Coloring& c) { return winner_2d(b, c).winner; }

/// Every sequence of White moves against the pairing reply, played to a full board.
inline PairingReport pairing_exhaustive(int n, std::uint64_t budget = 10'000'000) {
  PairingStrategy s(n);
  PairingReport rep;
  Position p = Position::empty(s.board().rows, s.board().cols);
  auto rec = [&](auto&& self) -> void {
    if (p.grey() == 0) {
      if (++rep.lines > budget) throw BudgetExceeded("pairing line budget exhausted");
      if (final_winner(p.board, p.coloring) == Tile::Black) ++rep.black_wins;
      return;
    }
    for (int i = 0; i < p.board.tiles(); ++i) {
      if (p.coloring[i] != Tile::Grey) continue;
      Position saved = p;
      p.play(i);
      const Cell reply = s.move(p, p.board.cell(i));
      p.play(p.board.index(reply.r, reply.c));
      self(self);
      p = saved;
    }
  };
  rec(rec);
  return rep;
}

inline PairingReport pairing_playouts(int n, std::uint64_t playouts, std::uint64_t seed) {
  PairingStrategy s(n);
  std::mt19937_64 rng(seed);
  PairingReport rep;
  for (std::uint64_t k = 0; k < playouts; ++k) {
    Position p = Position::empty(s.board().rows, s.board().cols);
    while (p.grey() > 0) {
      std::vector<int> free;
      for (int i = 0; i < p.board.tiles(); ++i)
        if (p.coloring[i] == Tile::Grey) free.push_back(i);
      const int w = free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)];
      p.play(w);
      const Cell reply = s.move(p, p.board.cell(w));
      p.play(p.board.index(reply.r, reply.c));
    }
    ++rep.lines;
    if (final_winner(p.board, p.coloring) == Tile::Black) ++rep.black_wins;
  }
  return rep;
}

struct StrategyStealingReport {
  int n = 0;
  Tile empty_board_winner = Tile::Grey;
  bool monotonicity_exhaustive = false;
  std::uint64_t positions_checked = 0;
  std::uint64_t violations = 0;
  bool holds() const { return empty_board_winner == Tile::White && violations == 0; }
};

/// Solves the empty n×n board and checks that an extra White tile never turns a
/// White win into a Black win. Exhaustive over all colorings up to 9 tiles,
/// otherwise over `samples` random colorings.
inline StrategyStealingReport strategy_stealing_report(int n, std::uint64_t samples = 2000, std::uint64_t seed = 1) {
  StrategyStealingReport rep;
  rep.n = n;
  HexBoard b(n, n);
  HexSolver s(b, 25);
  rep.empty_board_winner = s.winner(0, 0, Tile::White);
  const int tiles = b.tiles();
  auto check = [&](BoardMask w, BoardMask k) {
    for (Tile mover : {Tile::White, Tile::Black}) {
      if (s.winner(w, k, mover) != Tile::White) continue;
      for (int i = 0; i < tiles; ++i) {
        const BoardMask m = BoardMask{1} << i;
        if ((w | k) & m) continue;
        ++rep.positions_checked;
        if (s.winner(w | m, k, mover) != Tile::White) ++rep.violations;
      }
    }
  };
  auto decode = [&](std::uint64_t code, BoardMask& w, BoardMask& k) {
    w = k = 0;
    for (int i = 0; i < tiles; ++i, code /= 3) {
      if (code % 3 == 1) w |= BoardMask{1} << i;
      if (code % 3 == 2) k |= BoardMask{1} << i;
    }
  };
  if (tiles <= 9) {
    rep.monotonicity_exhaustive = true;
    std::uint64_t total = 1;
    for (int i = 0; i < tiles; ++i) total *= 3;
    for (std::uint64_t code = 0; code < total; ++code) {
      BoardMask w, k;
      decode(code, w, k);
      check(w, k);
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, 2);
    for (std::uint64_t t = 0; t < samples; ++t) {
      BoardMask w = 0, k = 0;
      for (int i = 0; i < tiles; ++i) {
        const int v = pick(rng);
        if (v == 1) w |= BoardMask{1} << i;
        if (v == 2) k |= BoardMask{1} << i;
      }
      check(w, k);
    }
  }
  return rep;
}

}  // namespace hexatope
