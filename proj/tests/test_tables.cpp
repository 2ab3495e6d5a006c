#include <doctest.h>

#include "prism/tables.hpp"

using namespace prism;

// domain (Cancer, Fever, Heart) = cells 0,1,2 throughout

TEST_CASE("presence table over the hospital domain") {
  // hospital 2 treats cancer and fever
  auto t = build_presence_table({0, 1, 1}, 3);
  CHECK(t.bits == std::vector<std::uint8_t>{1, 1, 0});
  CHECK(build_presence_table({}, 3).bits == std::vector<std::uint8_t>{0, 0, 0});
  CHECK(build_presence_table({2, 2, 2}, 3).bits == std::vector<std::uint8_t>{0, 0, 1});
  CHECK_THROWS_AS(build_presence_table({3}, 3), parameter_error);
}

TEST_CASE("sum table groups payloads per cell") {
  // hospital 1: (Cancer,100), (Cancer,200), (Heart,300)
  std::vector<PlainRow> rows{{0, {100}}, {0, {200}}, {2, {300}}};
  auto t = build_sum_table(rows, 3, 1);
  CHECK(t.bits == std::vector<std::uint8_t>{1, 0, 1});
  CHECK(t.payload_sum[0] == std::vector<u64>{300, 0, 300});
  CHECK(t.payload_count == std::vector<u64>{2, 0, 1});
  CHECK(t.payload_max[0] == std::vector<u64>{200, 0, 300});
  CHECK_THROWS_AS(build_sum_table({{5, {1}}}, 3, 1), parameter_error);
  CHECK_THROWS_AS(build_sum_table({{0, {1, 2}}}, 3, 1), parameter_error);
}

TEST_CASE("bucket tree OR-aggregates sixteen leaves by fours") {
  std::vector<std::uint8_t> bits(16, 0);
  bits[3] = bits[6] = bits[7] = 1;  // leaf positions 4,7,8 one-based
  BucketTree tree = build_bucket_tree(bits, 4);
  REQUIRE(tree.levels.size() == 3);
  CHECK(tree.levels[0] == bits);
  CHECK(tree.levels[1] == std::vector<std::uint8_t>{1, 1, 0, 0});
  CHECK(tree.levels[2] == std::vector<std::uint8_t>{1});

  BucketTree zero = build_bucket_tree(std::vector<std::uint8_t>(16, 0), 4);
  for (const auto& level : zero.levels)
    for (auto bit : level) CHECK(bit == 0);

  CHECK_THROWS_AS(build_bucket_tree(bits, 1), parameter_error);
}

TEST_CASE("every parent is the OR of its children") {
  SplitMix64 rng(13);
  for (int t = 0; t < 20; ++t) {
    u64 n = 1 + rng.uniform(100);
    u64 fanout = 2 + rng.uniform(5);
    std::vector<std::uint8_t> bits(n);
    for (auto& b : bits) b = rng.uniform(2);
    BucketTree tree = build_bucket_tree(bits, fanout);
    for (std::size_t lvl = 0; lvl + 1 < tree.levels.size(); ++lvl) {
      const auto& child = tree.levels[lvl];
      const auto& parent = tree.levels[lvl + 1];
      for (std::size_t p = 0; p < parent.size(); ++p) {
        std::uint8_t any = 0;
        for (std::size_t c = p * fanout; c < std::min(child.size(), (p + 1) * fanout); ++c)
          any |= child[c];
        CHECK(parent[p] == any);
      }
    }
    // leaf level padded to a full tree, zeros beyond the data
    for (std::size_t c = n; c < tree.levels[0].size(); ++c) CHECK(tree.levels[0][c] == 0);
  }
}
