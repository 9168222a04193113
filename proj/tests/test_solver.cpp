#include <doctest.h>

#include <algorithm>
#include <random>
#include <cmath>
#include <set>

#include "facteq/arith.hpp"
#include "facteq/solver.hpp"

using namespace facteq;

namespace {

mpz_class fact(unsigned long n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

// Every (x, y) with x^2 + y^2 = N, x, y >= 0, by scanning x.
bool has_two_squares(long N) {
  for (long x = 0; x * x <= N; ++x) {
    long y = static_cast<long>(std::sqrt(static_cast<double>(N - x * x)));
    while (y * y > N - x * x) --y;
    while ((y + 1) * (y + 1) <= N - x * x) ++y;
    if (y * y == N - x * x) return true;
  }
  return false;
}

SearchTask sum_task(RightSide rhs, std::uint64_t nmax) {
  SearchTask t;
  t.equation.family = std::holds_alternative<BinaryForm>(rhs) ? Family::SumFactBinary : Family::SumFactUni;
  t.equation.rhs = std::move(rhs);
  t.n_min = 2;
  t.n_max = nmax;
  t.m_min = 1;
  return t;
}

}  // namespace

TEST_CASE("definite quadratic representation against brute force") {
  const std::vector<BinaryForm> forms = {BinaryForm({1, 0, 1}), BinaryForm({1, 1, 1}), BinaryForm({2, 1, 3}),
                                         BinaryForm({1, 0, 5})};
  for (const auto& f : forms) {
    const auto& c = f.coeffs();
    for (long N = 0; N <= 400; ++N) {
      bool expect = false;
      for (long x = -25; x <= 25 && !expect; ++x)
        for (long y = -25; y <= 25 && !expect; ++y)
          if (c[0] * x * x + c[1] * x * y + c[2] * y * y == N) expect = true;
      const auto r = represent_definite_quadratic(f, N);
      CHECK_MESSAGE(r.has_value() == expect, f.to_string(), " N=", N);
      if (r) CHECK(f(r->first, r->second) == N);
    }
  }
  const auto r = represent_definite_quadratic(BinaryForm({1, 0, 1}), 26);
  REQUIRE(r);
  CHECK(r->first * r->first + r->second * r->second == 26);
  CHECK_THROWS_AS(represent_definite_quadratic(BinaryForm({1, 0, 1}), mpz_class("1000000000000000000000"), 1000),
                  ResourceError);
}

TEST_CASE("integer_roots against brute force on random polynomials") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    // Build from chosen roots times a random factor, so roots actually occur.
    std::vector<mpz_class> asc = {1};
    const int k = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < k; ++i) {
      const long r = static_cast<long>(rng() % 41) - 20;
      std::vector<mpz_class> next(asc.size() + 1, 0);
      for (std::size_t j = 0; j < asc.size(); ++j) {
        next[j] -= asc[j] * r;
        next[j + 1] += asc[j];
      }
      asc = next;
    }
    if (rng() % 2) {
      // times (a x^2 + b x + c) with random coefficients
      const long a = 1 + static_cast<long>(rng() % 3), b = static_cast<long>(rng() % 7) - 3,
                 c = static_cast<long>(rng() % 9) - 4;
      std::vector<mpz_class> next(asc.size() + 2, 0);
      for (std::size_t j = 0; j < asc.size(); ++j) {
        next[j] += asc[j] * c;
        next[j + 1] += asc[j] * b;
        next[j + 2] += asc[j] * a;
      }
      asc = next;
    }
    std::set<long> expect;
    for (long x = -200; x <= 200; ++x) {
      mpz_class v = 0;
      for (std::size_t j = asc.size(); j-- > 0;) v = v * x + asc[j];
      if (v == 0) expect.insert(x);
    }
    const auto got = integer_roots(asc);
    std::set<long> g;
    for (const auto& r : got) g.insert(r.get_si());
    CHECK(g == expect);
    CHECK(std::is_sorted(got.begin(), got.end()));
  }
}

TEST_CASE("integer_root solves f(x) = N") {
  const auto f = UnivariatePoly::from_descending({1, 0, 0});
  CHECK(integer_root(f, 144) == std::vector<mpz_class>{-12, 12});
  CHECK(integer_root(f, 145).empty());
  const auto g = UnivariatePoly::from_descending({1, 0, 0, -2});
  CHECK(integer_root(g, 25) == std::vector<mpz_class>{3});
  CHECK(integer_root(UnivariatePoly::from_descending({1, 0, -1}), fact(7)) == std::vector<mpz_class>{-71, 71});
}

TEST_CASE("cornacchia and two_squares against brute force") {
  for (std::uint64_t p : small_primes().range(5, 5000)) {
    if (p % 4 != 1) continue;
    const auto [a, b] = cornacchia_prime(mpz_class(static_cast<unsigned long>(p)));
    CHECK(a * a + b * b == static_cast<unsigned long>(p));
  }
  for (long N = 1; N <= 3000; ++N) {
    const auto r = two_squares(factor(mpz_class(N)));
    CHECK_MESSAGE(r.has_value() == has_two_squares(N), "N=", N);
    if (r) CHECK(r->first * r->first + r->second * r->second == N);
  }
  // A large value with a known decomposition.
  const mpz_class big = fact(20) + fact(8);
  const auto r = two_squares(factor(big));
  if (r) CHECK(r->first * r->first + r->second * r->second == big);
}

TEST_CASE("square filter never rejects actual squares") {
  Equation eq;
  eq.family = Family::SumFactUni;
  eq.rhs = UnivariatePoly::from_descending({1, 0, 0});
  std::vector<std::uint64_t> primes;
  for (auto q : small_primes().range(101, 400)) primes.push_back(q);
  int rejected = 0;
  for (std::uint64_t n = 2; n <= 40; ++n) {
    for (std::uint64_t m = 1; m < n; ++m) {
      const std::uint64_t cell[] = {n, m};
      const mpz_class L = fact(n) + fact(m);
      const bool sq = is_square(L);
      for (auto isa : {simd::Isa::Scalar, simd::active_isa()}) {
        const bool rej = square_filter(eq, cell, 1, 0, primes, isa);
        if (sq) CHECK_FALSE(rej);
        if (rej) ++rejected;
      }
    }
  }
  CHECK(rejected > 1000);
  // alpha L + beta: x^2 + x = L iff 4L + 1 is a square.
  for (std::uint64_t n = 2; n <= 12; ++n) {
    const std::uint64_t cell[] = {n, 1};
    const bool sq = is_square(4 * (fact(n) + 1) + 1);
    if (sq) CHECK_FALSE(square_filter(eq, cell, 4, 1, primes));
  }
}

TEST_CASE("local obstruction: x^3 + y^3 misses 3, 4 mod 7") {
  const BinaryForm f({1, 0, 0, 1});
  CHECK(local_obstruction(f, 3) == 7);
  CHECK(local_obstruction(f, 2) == 0);  // 1 + 1
  // Oracle: cubes mod 7 are {0, 1, 6}, so sums lie in {0, 1, 2, 5, 6}.
  for (long N = 1; N < 200; ++N) {
    const auto q = local_obstruction(f, N);
    if (q == 7) CHECK((N % 7 == 3 || N % 7 == 4));
    if (q != 0) {
      bool hit = false;
      for (std::uint64_t x = 0; x < q && !hit; ++x)
        for (std::uint64_t y = 0; y < q && !hit; ++y) hit = (x * x * x + y * y * y) % q == static_cast<std::uint64_t>(N) % q;
      CHECK_FALSE(hit);
    }
  }
  const auto r = represent_general_form(f, 3, 100);
  CHECK(r.status == RepStatus::LocallyImpossible);
  const auto r2 = represent_general_form(f, 1729, 20);
  CHECK(r2.status == RepStatus::Found);
  CHECK(f(r2.point->first, r2.point->second) == 1729);
}

TEST_CASE("cell enumeration order") {
  auto t = sum_task(BinaryForm({1, 0, 1}), 5);
  const auto cells = enumerate_cells(t);
  CHECK(cells.size() == 10);
  for (std::size_t i = 1; i < cells.size(); ++i) {
    const auto s0 = cells[i - 1][0] + cells[i - 1][1], s1 = cells[i][0] + cells[i][1];
    CHECK((s0 < s1 || (s0 == s1 && cells[i - 1] < cells[i])));
  }
  for (const auto& c : cells) CHECK(c[0] > c[1]);
  t.include_diagonal = true;
  CHECK(enumerate_cells(t).size() == 14);

  SearchTask p;
  p.equation.family = Family::ProdDfactUni;
  p.equation.rhs = UnivariatePoly::from_descending({1, 0, 1});
  p.n_min = 1;
  p.n_max = 6;
  p.arity = 2;
  const auto pc = enumerate_cells(p);
  CHECK(pc.size() == 21);
  for (const auto& c : pc) CHECK(c[0] <= c[1]);
}

TEST_CASE("task validation") {
  auto t = sum_task(BinaryForm({1, 0, 1}), 0);
  CHECK_THROWS_AS(t.validate(), InputError);
  // A product of arity r can equal a polynomial of degree <= r infinitely often.
  SearchTask p;
  p.equation.family = Family::ProdDfactUni;
  p.equation.rhs = UnivariatePoly::from_descending({1, 0, 0});
  p.n_max = 10;
  p.arity = 2;
  CHECK_THROWS_AS(p.validate(), InputError);
  p.allow_infinite = true;
  CHECK_NOTHROW(p.validate());
  p.arity = 1;
  p.allow_infinite = false;
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("classify x^2 + y^2 cells: solutions are real, certificates disagree with brute force") {
  const auto t = sum_task(BinaryForm({1, 0, 1}), 12);
  const ProfileEngine engine(t.equation.rhs);
  for (const auto& cell : enumerate_cells(t)) {
    const auto rec = classify_cell(t, engine, cell);
    const mpz_class N = fact(cell[0]) + fact(cell[1]);
    const bool rep = has_two_squares(N.get_si());
    switch (rec.status) {
      case CellStatus::Solution:
        REQUIRE(rec.witness.size() == 2);
        CHECK(rec.witness[0] * rec.witness[0] + rec.witness[1] * rec.witness[1] == N);
        break;
      case CellStatus::Certified:
      case CellStatus::Exhausted: CHECK_FALSE(rep); break;
      default: break;
    }
    CHECK(rec.left.reconstruct() == N);
  }
}

TEST_CASE("classify: product family x^2 - 1 finds Brocard solutions") {
  SearchTask t;
  t.equation.family = Family::ProdDfactUni;
  t.equation.kind = FactorialKind::Factorial;
  t.equation.rhs = UnivariatePoly::from_descending({1, 0, -1});
  t.n_min = 1;
  t.n_max = 60;
  const auto rep = run_search(t);
  std::vector<std::uint64_t> sols;
  for (const auto& r : rep.records)
    if (r.status == CellStatus::Solution) sols.push_back(r.cell[0]);
  CHECK(sols == std::vector<std::uint64_t>{4, 5, 7});
  CHECK(rep.totals.unknown == 0);
  CHECK(rep.totals.cells == 60);
}

TEST_CASE("run_search is independent of the worker count") {
  auto t = sum_task(UnivariatePoly::from_descending({1, 0, 0}), 25);
  const auto a = run_search(t);
  t.workers = 3;
  const auto b = run_search(t);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].cell == b.records[i].cell);
    CHECK(a.records[i].status == b.records[i].status);
  }
  const auto tot = tally(a.records);
  CHECK(tot.cells == a.totals.cells);
  CHECK(tot.solution == 4);  // (4,1) (5,1) (5,4) (7,1)
}

TEST_CASE("cell status names") {
  for (auto s : {CellStatus::Solution, CellStatus::Certified, CellStatus::Degenerate, CellStatus::Exhausted,
                 CellStatus::Unknown})
    CHECK(parse_cell_status(to_string(s)) == s);
  CHECK_FALSE(parse_cell_status("MAYBE"));
}
