#pragma once

// Game sessions against an engine, persisted as one JSON-lines log per
// session, and the HTTP routes that expose them.

#include "hexatope/hexboard.hpp"
#include "hexatope/hexsolve.hpp"

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace hexatope::service {

using json = nlohmann::json;

enum class EngineMode { Exact, Pairing, Random };

inline const char* to_string(EngineMode m) {
  switch (m) {
    case EngineMode::Exact: return "exact";
    case EngineMode::Pairing: return "pairing";
    default: return "random";
  }
}

struct ServiceError : std::runtime_error {
  int status;
  std::string code;
  ServiceError(int s, std::string c, const std::string& msg) : std::runtime_error(msg), status(s), code(std::move(c)) {}
};

inline EngineMode parse_engine(const std::string& s) {
  if (s == "exact" || s == "exact-solver") return EngineMode::Exact;
  if (s == "pairing") return EngineMode::Pairing;
  if (s == "random") return EngineMode::Random;
  throw ServiceError(400, "bad_engine", "engine must be exact, pairing or random");
}

inline Tile parse_color(const std::string& s) {
  if (s == "White" || s == "white") return Tile::White;
  if (s == "Black" || s == "black") return Tile::Black;
  throw ServiceError(400, "bad_color", "humanColor must be White or Black");
}

inline constexpr int kPlayTileCap = 64;
inline constexpr int kExactTileCap = 16;

struct Move {
  Cell cell;
  Tile color = Tile::Grey;
};

struct GameSession {
  std::string id;
  Position position;
  std::vector<Move> history;
  EngineMode engine = EngineMode::Exact;
  Tile human = Tile::White;
  std::string created;
  std::uint64_t seed = 0;
  Tile winner = Tile::Grey;
  std::vector<Cell> path;

  bool finished() const { return winner != Tile::Grey; }
  std::string encoding() const { return format_board(position.board, position.coloring); }
};

inline json cell_json(Cell c) { return {{"row", c.r}, {"col", c.c}}; }

inline json to_json(const GameSession& s) {
  const auto& b = s.position.board;
  json rows = json::array();
  for (int r = 0; r < b.rows; ++r) {
    std::string line;
    for (int c = 0; c < b.cols; ++c) line += tile_char(s.position.coloring[b.index(r, c)]);
    rows.push_back(line);
  }
  json history = json::array();
  for (const Move& m : s.history) history.push_back({{"row", m.cell.r}, {"col", m.cell.c}, {"color", to_string(m.color)}});
  json path = json::array();
  for (Cell c : s.path) path.push_back(cell_json(c));
  return {{"id", s.id},
          {"rows", b.rows},
          {"cols", b.cols},
          {"engine", to_string(s.engine)},
          {"humanColor", to_string(s.human)},
          {"toMove", s.finished() ? "none" : to_string(s.position.to_move)},
          {"board", rows},
          {"history", history},
          {"status", s.finished() ? "finished" : "in_progress"},
          {"winner", s.finished() ? json(to_string(s.winner)) : json(nullptr)},
          {"path", path},
          {"createdAt", s.created}};
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace detail {

inline void validate_shape(int rows, int cols, EngineMode engine, Tile human) {
  if (rows < 1 || cols < 1) throw ServiceError(400, "bad_size", "rows and cols must be positive");
  if (rows * cols > kPlayTileCap) throw ServiceError(400, "bad_size", "board exceeds 64 tiles");
  if (engine == EngineMode::Exact && rows * cols > kExactTileCap)
    throw ServiceError(400, "bad_size", "exact engine supports at most 16 tiles");
  if (engine == EngineMode::Pairing) {
    if (cols != rows + 1) throw ServiceError(400, "bad_size", "pairing engine needs cols = rows + 1");
    if (human != Tile::White) throw ServiceError(400, "bad_color", "pairing engine plays Black");
  }
}

inline void record(GameSession& s, Cell c) {
  const Tile color = s.position.to_move;
  s.position.play(s.position.board.index(c.r, c.c));
  s.history.push_back({c, color});
  if (auto w = connected_winner(s.position.board, s.position.coloring)) {
    s.winner = w->first;
    s.path = w->second;
  }
}

inline Cell engine_move(const GameSession& s) {
  const Position& p = s.position;
  switch (s.engine) {
    case EngineMode::Exact: {
      const SolveResult r = solve(p, kExactTileCap);
      return *r.move;
    }
    case EngineMode::Pairing: {
      std::optional<Cell> last;
      if (!s.history.empty()) last = s.history.back().cell;
      return PairingStrategy::for_board(p.board.rows, p.board.cols).move(p, last);
    }
    default: {
      std::vector<int> grey;
      for (int i = 0; i < p.board.tiles(); ++i)
        if (p.coloring[i] == Tile::Grey) grey.push_back(i);
      std::mt19937_64 rng(s.seed + s.history.size());
      return p.board.cell(grey[std::uniform_int_distribution<std::size_t>(0, grey.size() - 1)(rng)]);
    }
  }
}

inline void engine_turn(GameSession& s) {
  if (!s.finished() && s.position.to_move != s.human) record(s, engine_move(s));
}

}  // namespace detail

/// Rebuilds a session from its log lines. Engine replies are replayed from the
/// log, never recomputed.
inline GameSession replay(const std::vector<json>& log) {
  if (log.empty() || log.front().value("type", "") != "create") throw std::invalid_argument("session log must start with a create record");
  const json& h = log.front();
  GameSession s;
  s.id = h.at("id");
  s.engine = parse_engine(h.at("engine"));
  s.human = parse_color(h.at("humanColor"));
  s.created = h.value("createdAt", "");
  s.seed = h.value("seed", std::uint64_t{0});
  s.position = Position::empty(h.at("rows").get<int>(), h.at("cols").get<int>());
  for (std::size_t i = 1; i < log.size(); ++i) {
    const json& m = log[i];
    if (m.value("type", "") != "move") throw std::invalid_argument("unknown session record");
    const Cell c{m.at("row").get<int>(), m.at("col").get<int>()};
    if (to_string(s.position.to_move) != m.at("color").get<std::string>()) throw std::invalid_argument("move color out of turn");
    detail::record(s, c);
  }
  return s;
}

struct Analysis {
  Tile winner = Tile::Grey;
  std::optional<Cell> best_move;
  std::uint64_t nodes = 0;
};

inline json to_json(const Analysis& a) {
  return {{"winnerWithOptimalPlay", to_string(a.winner)},
          {"bestMove", a.best_move ? cell_json(*a.best_move) : json(nullptr)},
          {"nodes", a.nodes}};
}

/// Session registry. The map lock covers lookup only; each session carries its
/// own mutex so moves within a session are serialized.
class GameStore {
 public:
  explicit GameStore(std::optional<std::filesystem::path> dir = std::nullopt, std::uint64_t seed = std::random_device{}())
      : dir_(std::move(dir)), rng_(seed) {
    if (!dir_) return;
    std::filesystem::create_directories(*dir_);
    for (const auto& entry : std::filesystem::directory_iterator(*dir_)) {
      if (entry.path().extension() != ".jsonl") continue;
      std::ifstream in(entry.path());
      std::vector<json> log;
      for (std::string line; std::getline(in, line);)
        if (!line.empty()) log.push_back(json::parse(line));
      auto e = std::make_shared<Entry>();
      e->session = replay(log);
      sessions_.emplace(e->session.id, e);
    }
  }

  static GameStore from_env(std::uint64_t seed = std::random_device{}()) {
    if (const char* d = std::getenv("HEXATOPE_DATA_DIR"); d && *d) return GameStore(std::filesystem::path(d), seed);
    return GameStore(std::nullopt, seed);
  }

  GameSession create(int rows, int cols, EngineMode engine, Tile human) {
    detail::validate_shape(rows, cols, engine, human);
    auto e = std::make_shared<Entry>();
    GameSession& s = e->session;
    s.position = Position::empty(rows, cols);
    s.engine = engine;
    s.human = human;
    s.created = utc_timestamp();
    {
      std::lock_guard lock(map_mutex_);
      do s.id = fresh_id();
      while (sessions_.count(s.id));
      s.seed = rng_();
      sessions_.emplace(s.id, e);
    }
    std::lock_guard lock(e->mutex);
    append(s.id, {{"type", "create"}, {"id", s.id}, {"rows", rows}, {"cols", cols}, {"engine", to_string(engine)},
                  {"humanColor", to_string(human)}, {"createdAt", s.created}, {"seed", s.seed}});
    const std::size_t before = s.history.size();
    detail::engine_turn(s);
    log_moves(s, before);
    return s;
  }

  GameSession get(const std::string& id) const {
    auto e = find(id);
    std::lock_guard lock(e->mutex);
    return e->session;
  }

  GameSession play(const std::string& id, int row, int col) {
    auto e = find(id);
    std::lock_guard lock(e->mutex);
    GameSession& s = e->session;
    if (s.finished()) throw ServiceError(409, "game_over", "the game is finished");
    if (s.position.to_move != s.human) throw ServiceError(409, "not_your_turn", "it is the engine's turn");
    if (!s.position.board.inside(row, col)) throw ServiceError(400, "illegal_tile", "tile is outside the board");
    if (s.position.coloring[s.position.board.index(row, col)] != Tile::Grey)
      throw ServiceError(409, "illegal_tile", "tile is already colored");
    const std::size_t before = s.history.size();
    detail::record(s, {row, col});
    detail::engine_turn(s);
    log_moves(s, before);
    return s;
  }

  Analysis analysis(const std::string& id) const {
    const GameSession s = get(id);
    if (s.engine != EngineMode::Exact || s.position.board.tiles() > kExactTileCap)
      throw ServiceError(409, "unavailable", "analysis needs the exact engine on at most 16 tiles");
    if (s.finished()) return {s.winner, std::nullopt, 0};
    const SolveResult r = solve(s.position, kExactTileCap);
    return {r.winner, r.move, r.nodes};
  }

  std::vector<std::string> ids() const {
    std::lock_guard lock(map_mutex_);
    std::vector<std::string> out;
    for (const auto& [id, e] : sessions_) out.push_back(id);
    return out;
  }

  std::optional<std::filesystem::path> log_path(const std::string& id) const {
    if (!dir_) return std::nullopt;
    return *dir_ / (id + ".jsonl");
  }

 private:
  struct Entry {
    mutable std::mutex mutex;
    GameSession session;
  };

  std::shared_ptr<Entry> find(const std::string& id) const {
    std::lock_guard lock(map_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw ServiceError(404, "not_found", "no game with id " + id);
    return it->second;
  }

  std::string fresh_id() {
    static constexpr char hex[] = "0123456789abcdef";
    std::string id;
    for (std::uint64_t x = rng_(), k = 0; k < 12; ++k, x >>= 4) id += hex[x & 15];
    return id;
  }

  void log_moves(const GameSession& s, std::size_t from) const {
    for (std::size_t i = from; i < s.history.size(); ++i) {
      const Move& m = s.history[i];
      append(s.id, {{"type", "move"}, {"row", m.cell.r}, {"col", m.cell.c}, {"color", to_string(m.color)}});
    }
  }

  void append(const std::string& id, const json& record) const {
    if (!dir_) return;
    std::ofstream out(*log_path(id), std::ios::app);
    out << record.dump() << "\n";
  }

  std::optional<std::filesystem::path> dir_;
  mutable std::mutex map_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::mt19937_64 rng_;
};

namespace detail {

inline void send_error(httplib::Response& res, int status, const std::string& code, const std::string& message) {
  res.status = status;
  res.set_content(json{{"code", code}, {"message", message}}.dump(), "application/json");
}

template <class F>
void guarded(httplib::Response& res, F&& body) {
  try {
    body();
  } catch (const ServiceError& e) {
    send_error(res, e.status, e.code, e.what());
  } catch (const json::exception& e) {
    send_error(res, 400, "bad_request", e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, "internal", e.what());
  }
}

inline json body_json(const httplib::Request& req) {
  json j = json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ServiceError(400, "bad_request", "body must be a JSON object");
  return j;
}

}  // namespace detail

/// Registers the game routes on a server. The store must outlive the server.
inline void install_routes(httplib::Server& server, GameStore& store) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  server.Post("/games", [&store](const httplib::Request& req, httplib::Response& res) {
    detail::guarded(res, [&] {
      const json j = detail::body_json(req);
      const GameSession s = store.create(j.at("rows").get<int>(), j.at("cols").get<int>(),
                                         parse_engine(j.value("engine", "exact")), parse_color(j.value("humanColor", "White")));
      res.status = 201;
      res.set_content(to_json(s).dump(), "application/json");
    });
  });
  server.Post(R"(/games/([0-9a-z]+)/moves)", [&store](const httplib::Request& req, httplib::Response& res) {
    detail::guarded(res, [&] {
      const json j = detail::body_json(req);
      const GameSession s = store.play(req.matches[1], j.at("row").get<int>(), j.at("col").get<int>());
      res.set_content(to_json(s).dump(), "application/json");
    });
  });
  server.Get(R"(/games/([0-9a-z]+))", [&store](const httplib::Request& req, httplib::Response& res) {
    detail::guarded(res, [&] { res.set_content(to_json(store.get(req.matches[1])).dump(), "application/json"); });
  });
  server.Get(R"(/games/([0-9a-z]+)/analysis)", [&store](const httplib::Request& req, httplib::Response& res) {
    detail::guarded(res, [&] { res.set_content(to_json(store.analysis(req.matches[1])).dump(), "application/json"); });
  });
}

}  // namespace hexatope::service
