#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <sstream>

#include "noma/code.hpp"
#include "noma/rng.hpp"

using namespace noma;

namespace {

Gf2Matrix random_full_rank(std::size_t k, std::size_t n, RngStream& rng) {
  for (;;) {
    Gf2Matrix m(k, n);
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if (rng.bit()) m.set(r, c, true);
    if (m.rank() == k) return m;
  }
}

// row space comparison via rank of the stacked matrix
bool same_row_space(const Gf2Matrix& a, const Gf2Matrix& b) {
  if (a.cols() != b.cols()) return false;
  Gf2Matrix stacked(a.rows() + b.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (a.get(r, c)) stacked.set(r, c, true);
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c)
      if (b.get(r, c)) stacked.set(a.rows() + r, c, true);
  return stacked.rank() == a.rank() && a.rank() == b.rank();
}

}  // namespace

TEST_CASE("build_ebch constructs the supported codes") {
  const Code c84 = build_ebch(8, 4);
  CHECK(c84.n == 8);
  CHECK(c84.k == 4);
  CHECK(c84.d_min == 4);
  CHECK(c84.G.rank() == 4);

  const Code c6416 = build_ebch(64, 16);
  CHECK(c6416.d_min == 24);
  CHECK(c6416.G.rank() == 16);
  CHECK(build_ebch(64, 24).d_min == 16);
  CHECK(build_ebch(64, 30).d_min == 14);
  CHECK(build_ebch(64, 36).d_min == 12);

  CHECK_THROWS_WITH(build_ebch(32, 16), Catch::Matchers::ContainsSubstring("not built-in"));
  CHECK_THROWS_WITH(build_ebch(64, 32), Catch::Matchers::ContainsSubstring("not built-in"));
}

TEST_CASE("(8,4) codebook: even weights, weight spectrum, d_min") {
  const Code code = build_ebch(8, 4);
  const auto book = enumerate_codebook(code);
  REQUIRE(book.size() == 16);
  std::map<int, int> spectrum;
  for (const auto& cw : book) ++spectrum[cw.weight()];
  // extended Hamming(8,4): 1 + 14 z^4 + z^8
  CHECK(spectrum == std::map<int, int>{{0, 1}, {4, 14}, {8, 1}});
  int min_nonzero = 8;
  for (const auto& cw : book)
    if (cw.weight() > 0) min_nonzero = std::min(min_nonzero, cw.weight());
  CHECK(min_nonzero == 4);
}

TEST_CASE("(64,16) extension has even-weight rows and d_min consistent rows") {
  const Code code = build_ebch(64, 16);
  for (std::size_t r = 0; r < code.k; ++r) {
    CHECK(code.G.row_bits(r).weight() % 2 == 0);
  }
}

TEST_CASE("encode basics") {
  const Code code = build_ebch(8, 4);
  BitVec zero(4);
  CHECK(encode(code, zero) == BitVec(8));

  for (std::size_t i = 0; i < 4; ++i) {
    BitVec e(4);
    e.set(i, true);
    CHECK(encode(code, e) == code.G.row_bits(i));
  }

  BitVec wrong(5);
  CHECK_THROWS_AS(encode(code, wrong), std::invalid_argument);
}

TEST_CASE("gaussian_eliminate on an already systematic matrix is a fixed point") {
  Gf2Matrix g(3, 6);
  // [I | P]
  for (std::size_t i = 0; i < 3; ++i) g.set(i, i, true);
  g.set(0, 3, true);
  g.set(1, 4, true);
  g.set(2, 3, true);
  g.set(2, 5, true);
  const SystematicForm sys = gaussian_eliminate(g);
  CHECK(sys.G_tilde == g);
  CHECK(is_identity(sys.pi2));
}

TEST_CASE("gaussian_eliminate swaps a later column into a dead position") {
  Gf2Matrix g(2, 4);
  // column 0 all zero: pivot must come from a later column
  g.set(0, 1, true);
  g.set(0, 3, true);
  g.set(1, 2, true);
  const SystematicForm sys = gaussian_eliminate(g);
  CHECK_FALSE(is_identity(sys.pi2));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(sys.G_tilde.get(i, j) == (i == j));
  // nearest later usable column for position 0 is column 1
  CHECK(sys.pi2[0] == 1);
}

TEST_CASE("gaussian_eliminate: row space preserved under the recorded permutation") {
  RngStream rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Gf2Matrix g = random_full_rank(4, 8, rng);
    const SystematicForm sys = gaussian_eliminate(g);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) CHECK(sys.G_tilde.get(i, j) == (i == j));
    CHECK(same_row_space(sys.G_tilde, permute_cols(sys.pi2, g)));
  }
}

TEST_CASE("gaussian_eliminate is idempotent on its own output") {
  RngStream rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Gf2Matrix g = random_full_rank(5, 12, rng);
    const SystematicForm once = gaussian_eliminate(g);
    const SystematicForm twice = gaussian_eliminate(once.G_tilde);
    CHECK(twice.G_tilde == once.G_tilde);
    CHECK(is_identity(twice.pi2));
  }
}

TEST_CASE("gaussian_eliminate rejects rank-deficient input") {
  Gf2Matrix g(2, 4);
  g.set(0, 0, true);
  g.set(1, 0, true);  // duplicate rows
  CHECK_THROWS_AS(gaussian_eliminate(g), std::invalid_argument);
}

TEST_CASE("code file round trip") {
  const Code code = build_ebch(8, 4);
  std::stringstream buf;
  save_code(code, buf);
  const Code loaded = load_code(buf);
  CHECK(loaded.n == 8);
  CHECK(loaded.k == 4);
  CHECK(loaded.d_min == 4);
  CHECK(loaded.G == code.G);
}

TEST_CASE("load_code: header d_min recorded, malformed input rejected") {
  {
    std::stringstream in("8 4 4\n10000111\n01001011\n00101101\n00011110\n");
    const Code c = load_code(in);
    CHECK(c.d_min == 4);
    CHECK(c.n == 8);
  }
  {
    std::stringstream in("8 4\n10000111\n01001011\n00101101\n00011110\n");
    const Code c = load_code(in);
    CHECK_FALSE(c.d_min.has_value());
  }
  {
    // duplicate rows: rank deficient
    std::stringstream in("8 4\n10000111\n10000111\n00101101\n00011110\n");
    CHECK_THROWS_WITH(load_code(in), Catch::Matchers::ContainsSubstring("rank-deficient"));
  }
  {
    std::stringstream in("8 4\n1000011\n01001011\n00101101\n00011110\n");
    CHECK_THROWS_WITH(load_code(in), Catch::Matchers::ContainsSubstring("row 1"));
  }
  {
    std::stringstream in("4 8\n");
    CHECK_THROWS_AS(load_code(in), std::invalid_argument);
  }
}
