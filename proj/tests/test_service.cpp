#include "hexatope/service.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <thread>

using namespace hexatope;
using namespace hexatope::service;

namespace {

// Minimax over the raw rules: White joins column 0 to the last column, Black
// joins row 0 to the last row, neighbours are the six hex directions.
bool joins(const std::vector<int>& g, int rows, int cols, int who) {
  std::vector<int> seen(rows * cols, 0), stack;
  for (int k = 0; k < (who == 1 ? rows : cols); ++k) {
    const int i = who == 1 ? k * cols : k;
    if (g[i] == who) seen[i] = 1, stack.push_back(i);
  }
  const int dr[] = {-1, 1, 0, 0, 1, -1}, dc[] = {0, 0, -1, 1, -1, 1};
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    const int r = i / cols, c = i % cols;
    if (who == 1 ? c == cols - 1 : r == rows - 1) return true;
    for (int d = 0; d < 6; ++d) {
      const int rr = r + dr[d], cc = c + dc[d];
      if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) continue;
      const int j = rr * cols + cc;
      if (!seen[j] && g[j] == who) seen[j] = 1, stack.push_back(j);
    }
  }
  return false;
}

// Winner (1 White, 2 Black) with optimal play, mover given.
int oracle(std::vector<int>& g, int rows, int cols, int mover) {
  if (joins(g, rows, cols, 1)) return 1;
  if (joins(g, rows, cols, 2)) return 2;
  for (int i = 0; i < rows * cols; ++i) {
    if (g[i]) continue;
    g[i] = mover;
    const int w = oracle(g, rows, cols, 3 - mover);
    g[i] = 0;
    if (w == mover) return mover;
  }
  return 3 - mover;
}

std::vector<int> grid(const GameSession& s) {
  std::vector<int> g;
  for (Tile t : s.position.coloring) g.push_back(static_cast<int>(t));
  return g;
}

int tile_id(Tile t) { return static_cast<int>(t); }

std::filesystem::path temp_dir(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() / ("hexatope_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  return p;
}

Cell first_grey(const GameSession& s) {
  for (int i = 0; i < s.position.board.tiles(); ++i)
    if (s.position.coloring[i] == Tile::Grey) return s.position.board.cell(i);
  throw std::logic_error("full");
}

}  // namespace

TEST(Service, CreateSessions) {
  GameStore store(std::nullopt, 1);
  const GameSession a = store.create(3, 3, EngineMode::Exact, Tile::White);
  EXPECT_TRUE(a.history.empty());
  EXPECT_EQ(a.position.grey(), 9);
  EXPECT_EQ(a.position.to_move, Tile::White);

  const GameSession b = store.create(4, 5, EngineMode::Pairing, Tile::White);
  EXPECT_EQ(b.position.grey(), 20);

  const GameSession c = store.create(3, 3, EngineMode::Exact, Tile::Black);
  ASSERT_EQ(c.history.size(), 1u);
  EXPECT_EQ(c.history[0].color, Tile::White);
  EXPECT_EQ(c.position.to_move, Tile::Black);

  auto status = [&](int r, int cols, EngineMode m, Tile h) {
    try {
      store.create(r, cols, m, h);
    } catch (const ServiceError& e) {
      return e.status;
    }
    return 0;
  };
  EXPECT_EQ(status(11, 11, EngineMode::Exact, Tile::White), 400);
  EXPECT_EQ(status(9, 9, EngineMode::Random, Tile::White), 400);
  EXPECT_EQ(status(4, 4, EngineMode::Pairing, Tile::White), 400);
  EXPECT_EQ(status(3, 4, EngineMode::Pairing, Tile::Black), 400);
  EXPECT_EQ(status(8, 8, EngineMode::Random, Tile::White), 0);
}

TEST(Service, PairingSessionOnFourByThree) {
  // rows 3, cols 4: Black owns the longer top and bottom sides
  GameStore store(std::nullopt, 2);
  GameSession s = store.create(3, 4, EngineMode::Pairing, Tile::White);
  std::mt19937_64 rng(5);
  while (!s.finished()) {
    std::vector<Cell> grey;
    for (int i = 0; i < 12; ++i)
      if (s.position.coloring[i] == Tile::Grey) grey.push_back(s.position.board.cell(i));
    const Cell c = grey[rng() % grey.size()];
    s = store.play(s.id, c.r, c.c);
  }
  EXPECT_EQ(s.winner, Tile::Black);
}

TEST(Service, ExactEngineReplyIsOptimal) {
  GameStore store(std::nullopt, 3);
  for (int first = 0; first < 4; ++first) {
    GameSession s = store.create(2, 2, EngineMode::Exact, Tile::White);
    s = store.play(s.id, first / 2, first % 2);
    ASSERT_EQ(s.history.size(), 2u);
    const Cell reply = s.history[1].cell;
    // the engine's reply must be one the oracle rates as best for Black
    std::vector<int> g(4, 0);
    g[first] = 1;
    const int value = oracle(g, 2, 2, 2);
    g[reply.r * 2 + reply.c] = 2;
    EXPECT_EQ(oracle(g, 2, 2, 1), value) << "first move " << first;
  }
}

TEST(Service, EngineNeverSpoilsAWin) {
  GameStore store(std::nullopt, 4);
  std::mt19937_64 rng(11);
  for (int game = 0; game < 12; ++game) {
    const Tile human = game % 2 ? Tile::Black : Tile::White;
    const int rows = 2 + game % 2, cols = 3;
    GameSession s = store.create(rows, cols, EngineMode::Exact, human);
    std::size_t checked = 0;
    while (true) {
      for (; checked < s.history.size(); ++checked) {
        if (s.history[checked].color == human) continue;
        // rebuild the position just before the engine move
        std::vector<int> g(rows * cols, 0);
        for (std::size_t i = 0; i < checked; ++i) g[s.history[i].cell.r * cols + s.history[i].cell.c] = tile_id(s.history[i].color);
        const int engine = tile_id(opponent(human));
        if (oracle(g, rows, cols, engine) != engine) continue;
        const Cell c = s.history[checked].cell;
        g[c.r * cols + c.c] = engine;
        EXPECT_EQ(oracle(g, rows, cols, 3 - engine), engine) << "game " << game << " move " << checked;
      }
      if (s.finished()) break;
      std::vector<Cell> grey;
      for (int i = 0; i < rows * cols; ++i)
        if (s.position.coloring[i] == Tile::Grey) grey.push_back(s.position.board.cell(i));
      const Cell c = grey[rng() % grey.size()];
      s = store.play(s.id, c.r, c.c);
    }
  }
}

TEST(Service, MoveErrorsAndFinish) {
  GameStore store(std::nullopt, 5);
  GameSession s = store.create(2, 2, EngineMode::Exact, Tile::White);
  s = store.play(s.id, 0, 0);
  const Cell taken = s.history[1].cell;
  try {
    store.play(s.id, taken.r, taken.c);
    FAIL() << "colored tile accepted";
  } catch (const ServiceError& e) {
    EXPECT_EQ(e.status, 409);
  }
  try {
    store.play(s.id, 5, 0);
    FAIL() << "outside tile accepted";
  } catch (const ServiceError& e) {
    EXPECT_EQ(e.status, 400);
  }
  try {
    store.play("nosuchgame", 0, 0);
    FAIL();
  } catch (const ServiceError& e) {
    EXPECT_EQ(e.status, 404);
  }
  while (!s.finished()) {
    const Cell c = first_grey(s);
    s = store.play(s.id, c.r, c.c);
  }
  // winner and path against the path-following winner of the filled-in board
  Coloring full = s.position.coloring;
  for (Tile& t : full)
    if (t == Tile::Grey) t = s.winner;
  EXPECT_EQ(winner_2d(s.position.board, full).winner, s.winner);
  ASSERT_FALSE(s.path.empty());
  for (std::size_t i = 0; i < s.path.size(); ++i) {
    EXPECT_EQ(s.position.coloring[s.position.board.index(s.path[i].r, s.path[i].c)], s.winner);
    if (i) EXPECT_TRUE(s.position.board.adjacent(s.path[i - 1], s.path[i]));
  }
  EXPECT_TRUE(joins(grid(s), 2, 2, tile_id(s.winner)));
  try {
    store.play(s.id, 0, 0);
    FAIL() << "move after the end accepted";
  } catch (const ServiceError& e) {
    EXPECT_EQ(e.status, 409);
    EXPECT_EQ(e.code, "game_over");
  }
}

TEST(Service, Analysis) {
  GameStore store(std::nullopt, 6);
  GameSession empty = store.create(2, 2, EngineMode::Exact, Tile::White);
  EXPECT_EQ(store.analysis(empty.id).winner, Tile::White);
  std::vector<int> g(4, 0);
  EXPECT_EQ(oracle(g, 2, 2, 1), 1);

  // every opening move, analysed, agrees with the oracle
  for (int first = 0; first < 4; ++first) {
    Position p = Position::empty(2, 2);
    p.play(first);
    std::vector<int> h(4, 0);
    h[first] = 1;
    const int expect = oracle(h, 2, 2, 2);
    EXPECT_EQ(tile_id(solve(p).winner), expect);
  }

  // a 2×3 game where White blunders: the evaluation flips to Black
  bool flipped = false;
  for (int first = 0; first < 6 && !flipped; ++first) {
    std::vector<int> h(6, 0);
    h[first] = 1;
    if (oracle(h, 2, 3, 2) != 2) continue;
    GameSession t = store.create(2, 3, EngineMode::Exact, Tile::White);
    std::vector<int> fresh(6, 0);
    EXPECT_EQ(tile_id(store.analysis(t.id).winner), oracle(fresh, 2, 3, 1));
    t = store.play(t.id, first / 3, first % 3);
    const Analysis a = store.analysis(t.id);
    EXPECT_EQ(a.winner, t.finished() ? t.winner : Tile::Black);
    flipped = true;
  }
  EXPECT_TRUE(flipped);

  GameSession big = store.create(5, 5, EngineMode::Random, Tile::White);
  try {
    store.analysis(big.id);
    FAIL();
  } catch (const ServiceError& e) {
    EXPECT_EQ(e.code, "unavailable");
  }
}

TEST(Service, PersistenceAndReplay) {
  const auto dir = temp_dir("persist");
  std::vector<std::pair<std::string, std::string>> encodings;
  {
    GameStore store(dir, 7);
    for (EngineMode m : {EngineMode::Exact, EngineMode::Random, EngineMode::Pairing}) {
      GameSession s = store.create(3, 4, m, Tile::White);
      for (int k = 0; k < 3 && !s.finished(); ++k) {
        const Cell c = first_grey(s);
        s = store.play(s.id, c.r, c.c);
      }
      encodings.emplace_back(s.id, s.encoding());
      // the log replays to the same bytes
      std::ifstream in(*store.log_path(s.id));
      std::vector<json> log;
      for (std::string line; std::getline(in, line);) log.push_back(json::parse(line));
      EXPECT_EQ(log.size(), s.history.size() + 1);
      EXPECT_EQ(replay(log).encoding(), s.encoding());
    }
  }
  GameStore reloaded(dir, 8);
  EXPECT_EQ(reloaded.ids().size(), encodings.size());
  for (const auto& [id, enc] : encodings) {
    const GameSession s = reloaded.get(id);
    EXPECT_EQ(s.encoding(), enc);
    EXPECT_EQ(to_json(s).dump(), to_json(s).dump());
  }
  std::filesystem::remove_all(dir);
}

class HttpFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = temp_dir("http");
    store_ = std::make_unique<GameStore>(dir_, 9);
    install_routes(server_, *store_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
    std::filesystem::remove_all(dir_);
  }
  httplib::Client client() const { return httplib::Client("127.0.0.1", port_); }

  std::filesystem::path dir_;
  std::unique_ptr<GameStore> store_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(HttpFixture, Routes) {
  auto cli = client();
  auto r = cli.Post("/games", R"({"rows":2,"cols":2,"engine":"exact","humanColor":"White"})", "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 201);
  const json game = json::parse(r->body);
  const std::string id = game.at("id");
  EXPECT_EQ(game.at("board"), json::array({"..", ".."}));
  EXPECT_EQ(game.at("status"), "in_progress");

  r = cli.Get("/games/" + id + "/analysis");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(json::parse(r->body).at("winnerWithOptimalPlay"), "White");

  r = cli.Post("/games/" + id + "/moves", R"({"row":0,"col":1})", "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  json after = json::parse(r->body);
  EXPECT_EQ(after.at("history").size(), 2u);

  const json reply = after.at("history")[1];
  r = cli.Post("/games/" + id + "/moves", json{{"row", reply["row"]}, {"col", reply["col"]}}.dump(), "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 409);
  const json err = json::parse(r->body);
  EXPECT_EQ(err.at("code"), "illegal_tile");
  EXPECT_TRUE(err.contains("message"));

  r = cli.Get("/games/ffffffffffff");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 404);
  r = cli.Post("/games", R"({"rows":11,"cols":11,"engine":"exact"})", "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 400);
  r = cli.Post("/games", "not json", "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 400);
  r = cli.Post("/games/" + id + "/moves", R"({"row":"x"})", "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 400);

  r = cli.Get("/games/" + id);
  ASSERT_TRUE(r);
  EXPECT_EQ(json::parse(r->body), after);
}

TEST_F(HttpFixture, PlayToCompletion) {
  auto cli = client();
  auto r = cli.Post("/games", R"({"rows":3,"cols":3,"engine":"exact","humanColor":"Black"})", "application/json");
  ASSERT_TRUE(r);
  json g = json::parse(r->body);
  const std::string id = g.at("id");
  while (g.at("status") == "in_progress") {
    int row = -1, col = -1;
    for (int i = 0; i < 3 && row < 0; ++i)
      for (int j = 0; j < 3 && row < 0; ++j)
        if (g["board"][i].get<std::string>()[j] == '.') row = i, col = j;
    r = cli.Post("/games/" + id + "/moves", json{{"row", row}, {"col", col}}.dump(), "application/json");
    ASSERT_TRUE(r);
    ASSERT_EQ(r->status, 200);
    g = json::parse(r->body);
  }
  // White has a first-player win on 3×3 and the exact engine keeps it
  EXPECT_EQ(g.at("winner"), "White");
  EXPECT_FALSE(g.at("path").empty());
  r = cli.Get("/games/" + id);
  ASSERT_TRUE(r);
  EXPECT_EQ(json::parse(r->body), g);
}

TEST_F(HttpFixture, ConcurrentSessions) {
  constexpr int kThreads = 4;
  std::atomic<int> failures{0};
  std::vector<std::string> ids(kThreads);
  std::vector<json> finals(kThreads);
  std::vector<std::thread> workers;
  for (int t = 0; t < kThreads; ++t)
    workers.emplace_back([&, t] {
      auto cli = client();
      auto r = cli.Post("/games", R"({"rows":4,"cols":5,"engine":"random","humanColor":"White"})", "application/json");
      if (!r || r->status != 201) return void(++failures);
      json g = json::parse(r->body);
      ids[t] = g.at("id");
      std::mt19937_64 rng(t);
      while (g.at("status") == "in_progress") {
        std::vector<std::pair<int, int>> grey;
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 5; ++j)
            if (g["board"][i].get<std::string>()[j] == '.') grey.emplace_back(i, j);
        const auto [row, col] = grey[rng() % grey.size()];
        r = cli.Post("/games/" + ids[t] + "/moves", json{{"row", row}, {"col", col}}.dump(), "application/json");
        if (!r || r->status != 200) return void(++failures);
        g = json::parse(r->body);
      }
      finals[t] = g;
    });
  // a second client hammers one session with the same move; exactly one wins
  auto cli = client();
  auto r = cli.Post("/games", R"({"rows":3,"cols":4,"engine":"pairing","humanColor":"White"})", "application/json");
  ASSERT_TRUE(r);
  const std::string shared = json::parse(r->body).at("id");
  std::atomic<int> accepted{0};
  std::vector<std::thread> racers;
  for (int k = 0; k < 3; ++k)
    racers.emplace_back([&] {
      auto c = client();
      auto res = c.Post("/games/" + shared + "/moves", R"({"row":1,"col":1})", "application/json");
      if (res && res->status == 200) ++accepted;
    });
  for (auto& w : racers) w.join();
  for (auto& w : workers) w.join();
  EXPECT_EQ(failures.load(), 0);
  EXPECT_EQ(accepted.load(), 1);
  EXPECT_EQ(store_->get(shared).history.size(), 2u);

  for (int t = 0; t < kThreads; ++t) {
    r = cli.Get("/games/" + ids[t]);
    ASSERT_TRUE(r);
    const json g = json::parse(r->body);
    EXPECT_EQ(g, finals[t]);
    // state replays from history
    GameSession s = store_->get(ids[t]);
    Position p = Position::empty(4, 5);
    for (const Move& m : s.history) p.play(p.board.index(m.cell.r, m.cell.c));
    EXPECT_EQ(format_board(p.board, p.coloring), s.encoding());
    EXPECT_TRUE(joins(grid(s), 4, 5, tile_id(s.winner)));
  }
}
