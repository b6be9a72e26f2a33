#include "doctest.h"

#include "cfl/f2_linalg.hpp"

#include <random>
#include <set>
#include <stdexcept>

using namespace cfl::f2;

namespace {

BitMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    BitMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) m.row(r) = BitVector::random(cols, rng);
    return m;
}

// All 2^rows combinations of the rows, as u64 words (cols <= 64).
std::set<std::uint64_t> span_by_enumeration(const BitMatrix& m) {
    std::set<std::uint64_t> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m.rows()); ++mask) {
        std::uint64_t acc = 0;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (mask >> r & 1) acc ^= m.row(r).to_u64();
        }
        out.insert(acc);
    }
    return out;
}

std::size_t log2_exact(std::size_t x) {
    std::size_t k = 0;
    while ((std::size_t{1} << k) < x) ++k;
    return k;
}

}  // namespace

TEST_CASE("bit vector basics") {
    const BitVector v = BitVector::from_string("1011001");
    CHECK(v.size() == 7);
    CHECK(v.weight() == 4);
    CHECK(v.support() == std::vector<std::size_t>{0, 2, 3, 6});
    CHECK(v.to_string() == "1011001");
    CHECK(v.dot(BitVector::from_string("0010001")) == false);
    CHECK(v.dot(BitVector::from_string("0010000")) == true);
    CHECK((v ^ v).is_zero());
    CHECK(BitVector::unit(5, 3).to_string() == "00010");
    CHECK(BitVector::from_u64(7, v.to_u64()) == v);
    CHECK_THROWS_AS(BitVector::from_string("10x"), std::invalid_argument);
    CHECK_THROWS_AS(v ^ BitVector(3), std::invalid_argument);
    CHECK_THROWS(v.get(7));
}

TEST_CASE("bit vector spans word boundaries") {
    BitVector v(130);
    v.set(0);
    v.set(63);
    v.set(64);
    v.set(129);
    CHECK(v.weight() == 4);
    CHECK(v.support() == std::vector<std::size_t>{0, 63, 64, 129});
    v.flip(64);
    CHECK(!v.get(64));
    CHECK_THROWS(v.to_u64());
}

TEST_CASE("rank of small matrices") {
    CHECK(rank(BitMatrix::identity(5)) == 5);
    CHECK(rank(BitMatrix(4, 6)) == 0);
    CHECK(rank(BitMatrix::from_strings({"110", "011", "101"})) == 2);
    CHECK(rank(BitMatrix()) == 0);
}

TEST_CASE("rank equals log2 of span size") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t rows = 1 + rng() % 10;
        const std::size_t cols = 1 + rng() % 12;
        const BitMatrix m = random_matrix(rows, cols, rng);
        CHECK(rank(m) == log2_exact(span_by_enumeration(m).size()));
    }
}

TEST_CASE("row reduction transform reproduces the reduced rows") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const BitMatrix m = random_matrix(1 + rng() % 9, 1 + rng() % 70, rng);
        const RowEchelon e = row_reduce(m);
        REQUIRE(e.reduced.rows() == e.rank());
        for (std::size_t i = 0; i < e.rank(); ++i) {
            CHECK(m.combine(e.transform.row(i)) == e.reduced.row(i));
            // Pivot columns are cleared in every other reduced row.
            for (std::size_t j = 0; j < e.rank(); ++j) CHECK(e.reduced.get(j, e.pivots[i]) == (i == j));
            if (i > 0) CHECK(e.pivots[i - 1] < e.pivots[i]);
        }
    }
}

TEST_CASE("nullspace satisfies rank-nullity and annihilates the matrix") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t cols = 1 + rng() % 80;
        const BitMatrix m = random_matrix(rng() % 12, cols, rng);
        const BitMatrix ns = nullspace_basis(m);
        CHECK(ns.rows() + rank(m) == cols);
        CHECK(rank(ns) == ns.rows());
        for (const auto& v : ns.row_vectors()) CHECK(m.apply(v).is_zero());
    }
}

TEST_CASE("nullspace of a small matrix counted by enumeration") {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t cols = 1 + rng() % 10;
        const BitMatrix m = random_matrix(rng() % 6, cols, rng);
        std::size_t zeros = 0;
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << cols); ++x) {
            if (m.apply(BitVector::from_u64(cols, x)).is_zero()) ++zeros;
        }
        CHECK((std::size_t{1} << nullspace_basis(m).rows()) == zeros);
    }
}

TEST_CASE("span membership agrees with enumeration") {
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t cols = 1 + rng() % 10;
        const BitMatrix m = random_matrix(1 + rng() % 6, cols, rng);
        const auto span = span_by_enumeration(m);
        const RowSpaceSolver solver(m);
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << cols); ++x) {
            const BitVector target = BitVector::from_u64(cols, x);
            const auto coeffs = solve_for_target(target, m);
            CHECK(coeffs.has_value() == (span.count(x) == 1));
            if (coeffs) CHECK(m.combine(*coeffs) == target);
            CHECK(solver.contains(target) == coeffs.has_value());
            const SpanMembership sm = in_row_space(target, m);
            CHECK(sm.member == coeffs.has_value());
            if (sm.member) CHECK(m.combine(sm.coefficients) == target);
        }
    }
}

TEST_CASE("solver handles dependent rows and empty row sets") {
    const BitMatrix m = BitMatrix::from_strings({"1100", "0110", "1010"});
    const RowSpaceSolver solver(m);
    CHECK(solver.rank() == 2);
    const auto c = solver.solve(BitVector::from_string("1010"));
    REQUIRE(c.has_value());
    CHECK(m.combine(*c).to_string() == "1010");
    CHECK(!solver.solve(BitVector::from_string("1000")));

    const RowSpaceSolver empty(BitMatrix(0, 4));
    CHECK(empty.contains(BitVector(4)));
    CHECK(!empty.contains(BitVector::unit(4, 1)));
}

TEST_CASE("matrix product, transpose and stacking") {
    std::mt19937_64 rng(16);
    for (int trial = 0; trial < 50; ++trial) {
        const BitMatrix a = random_matrix(1 + rng() % 6, 1 + rng() % 6, rng);
        const BitMatrix b = random_matrix(a.cols(), 1 + rng() % 6, rng);
        const BitMatrix ab = a * b;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            for (std::size_t j = 0; j < b.cols(); ++j) {
                bool acc = false;
                for (std::size_t t = 0; t < a.cols(); ++t) acc ^= a.get(i, t) && b.get(t, j);
                CHECK(ab.get(i, j) == acc);
            }
        }
        CHECK(a.transpose().transpose() == a);
        const BitVector v = BitVector::random(a.cols(), rng);
        CHECK(a.apply(v) == a.transpose().combine(v));
    }
    const BitMatrix top = BitMatrix::from_strings({"10"});
    const BitMatrix s = BitMatrix::stack(top, BitMatrix::from_strings({"01", "11"}));
    CHECK(s.to_strings() == std::vector<std::string>{"10", "01", "11"});
    CHECK(s.without_row(1).to_strings() == std::vector<std::string>{"10", "11"});
    CHECK_THROWS_AS(BitMatrix::stack(top, BitMatrix(1, 3)), std::invalid_argument);
}

TEST_CASE("nullspace examples") {
    CHECK(nullspace_basis(BitMatrix::identity(2)).rows() == 0);

    const BitMatrix ns = nullspace_basis(BitMatrix::from_strings({"111"}));
    CHECK(ns.rows() == 2);
    // Even-weight vectors of length 3, found by enumeration.
    std::set<std::uint64_t> even;
    for (std::uint64_t x = 0; x < 8; ++x) {
        if (BitVector::from_u64(3, x).weight() % 2 == 0) even.insert(x);
    }
    CHECK(span_by_enumeration(ns) == even);

    // Three column-sum rows over a 3x3 grid of coordinates (file-major).
    const BitMatrix sums = BitMatrix::from_strings({"100100100", "010010010", "001001001"});
    CHECK(nullspace_basis(sums).rows() == 6);
}

TEST_CASE("rank-nullity up to 32x32") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t rows = 1 + rng() % 32;
        const std::size_t cols = 1 + rng() % 32;
        const BitMatrix m = random_matrix(rows, cols, rng);
        const std::size_t r = rank(m);
        CHECK(nullspace_basis(m).rows() == cols - r);
        CHECK(nullspace_basis(m.transpose()).rows() == rows - r);
    }
}

TEST_CASE("row space membership examples") {
    const auto zero = in_row_space(BitVector(3), BitMatrix::from_strings({"110", "011"}));
    CHECK(zero.member);
    CHECK(zero.coefficients.is_zero());

    const auto direct = in_row_space(BitVector::from_string("101"), BitMatrix::from_strings({"100", "001"}));
    CHECK(direct.member);
    CHECK(direct.coefficients.to_string() == "11");

    CHECK(!in_row_space(BitVector::from_string("100"), BitMatrix::from_strings({"111"})).member);

    const BitMatrix m = BitMatrix::from_strings({"1100", "0110", "0011"});
    for (std::size_t r = 0; r < m.rows(); ++r) CHECK(*solve_for_target(m.row(r), m) == BitVector::unit(3, r));
}
