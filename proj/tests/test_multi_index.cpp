#include <catch_amalgamated.hpp>

#include <set>

#include <twistlab/multi_index.hpp>

using namespace twistlab;

TEST_CASE("multi-index order and validation") {
  MultiIndex a({2, 3});
  CHECK(a.order() == 5);
  CHECK(a.dim() == 2);
  CHECK(a.max_entry() == 3);
  CHECK_THROWS_AS(MultiIndex({1, -1}), std::invalid_argument);
  CHECK_THROWS_AS(MultiIndexPair(MultiIndex({1}), MultiIndex({1, 0})), dimension_error);
}

TEST_CASE("pair eigenvalue is 2|nu| + n") {
  CHECK(MultiIndexPair(0, 0).eigenvalue() == 1);
  CHECK(MultiIndexPair(4, 1).eigenvalue() == 3);
  CHECK(MultiIndexPair(MultiIndex({0, 0}), MultiIndex({1, 2})).eigenvalue() == 8);
}

TEST_CASE("enumerate_pairs sizes") {
  CHECK(enumerate_pairs(1, 0).size() == 1);
  CHECK(enumerate_pairs(1, 0)[0] == MultiIndexPair(0, 0));
  CHECK(enumerate_pairs(1, 1).size() == 4);
  CHECK(enumerate_pairs(2, 1).size() == 9);
  CHECK(enumerate_pairs(1, 8).size() == 81);
  CHECK(enumerate_pairs(2, 2).size() == 36);
  CHECK_THROWS(enumerate_pairs(0, 1));
  CHECK_THROWS(enumerate_pairs(1, -1));
}

TEST_CASE("truncation ordering is graded and duplicate free") {
  for (int n : {1, 2, 3})
    for (int k : {0, 1, 3}) {
      auto tr = enumerate_pairs(n, k);
      std::set<MultiIndexPair> seen(tr.begin(), tr.end());
      CHECK(seen.size() == tr.size());
      for (std::size_t i = 1; i < tr.size(); ++i) {
        int g0 = tr[i - 1].mu.order() + tr[i - 1].nu.order();
        int g1 = tr[i].mu.order() + tr[i].nu.order();
        CHECK(g0 <= g1);
      }
      for (std::size_t i = 0; i < tr.size(); ++i) CHECK(tr.index_of(tr[i]) == i);
      // deterministic across constructions
      auto again = enumerate_pairs(n, k);
      CHECK(std::equal(tr.begin(), tr.end(), again.begin()));
    }
}

TEST_CASE("multi_indices_of_order counts") {
  CHECK(multi_indices_of_order(2, 2).size() == 3);
  CHECK(multi_indices_of_order(3, 2).size() == 6);
  CHECK(multi_indices_up_to(2, 2).size() == 6);
}

TEST_CASE("minimal truncation degree") {
  CHECK(minimal_truncation_degree(1, 1) == 0);
  CHECK(minimal_truncation_degree(1, 2) == 1);
  CHECK(minimal_truncation_degree(1, 4) == 1);
  CHECK(minimal_truncation_degree(1, 5) == 2);
  CHECK(minimal_truncation_degree(1, 16) == 3);
  CHECK(minimal_truncation_degree(2, 9) == 1);
}
