#include <combforge/layout.hpp>
#include <doctest.h>

#include <stdexcept>

using namespace combforge;

TEST_CASE("layout basics") {
  Layout l({{"A", 2}, {"B", 3}, {"C", 1}});
  CHECK(l.total_dim() == 6);
  CHECK(l.position("B") == 1);
  CHECK(l.dim_of("C") == 1);
  CHECK(l.has("A"));
  CHECK(!l.has("D"));
}

TEST_CASE("layout rejects duplicates and bad dims") {
  CHECK_THROWS_AS(Layout({{"A", 2}, {"A", 3}}), std::invalid_argument);
  CHECK_THROWS_AS(Layout({{"A", 0}}), std::invalid_argument);
}

TEST_CASE("dim-1 factors are first-class") {
  Layout l({{"A", 1}, {"B", 2}});
  CHECK(l.total_dim() == 2);
  CHECK(l.factor_count() == 2);
  CHECK(l.without({"A"}).factor_count() == 1);
}

TEST_CASE("concat requires disjoint labels") {
  Layout a({{"A", 2}});
  Layout b({{"B", 3}});
  CHECK(a.concat(b).total_dim() == 6);
  CHECK_THROWS_AS(a.concat(a), std::invalid_argument);
}

TEST_CASE("strides and encode/decode round-trip") {
  Layout l({{"A", 2}, {"B", 3}, {"C", 4}});
  auto s = l.strides();
  CHECK(s == std::vector<Index>{12, 4, 1});
  std::vector<Index> digits(3);
  for (Index i = 0; i < l.total_dim(); ++i) {
    l.decode(i, digits);
    CHECK(l.encode(digits) == i);
  }
}

TEST_CASE("permuted and reversed") {
  Layout l({{"A", 2}, {"B", 3}});
  Layout p = l.permuted({"B", "A"});
  CHECK(p.factors()[0].label == "B");
  CHECK(l.reversed() == p);
  CHECK_THROWS_AS(l.permuted({"A", "A"}), std::invalid_argument);
}
