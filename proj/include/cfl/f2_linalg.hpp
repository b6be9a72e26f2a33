#pragma once

// Dense bit-packed linear algebra over GF(2).
//
// Coordinates are 0-based and "leftmost" means lowest index.  Row reduction
// always picks the leftmost available pivot so reduced forms and nullspace
// bases are reproducible.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cfl::f2 {

class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t length);

    /// Parses a string of '0'/'1' characters, leftmost character = coordinate 0.
    static BitVector from_string(std::string_view bits);
    static BitVector unit(std::size_t length, std::size_t index);

    template <class Rng>
    static BitVector random(std::size_t length, Rng& rng) {
        BitVector v(length);
        std::uniform_int_distribution<std::uint64_t> dist;
        for (auto& w : v.words_) w = dist(rng);
        v.clear_tail();
        return v;
    }

    std::size_t size() const noexcept { return length_; }
    bool empty() const noexcept { return length_ == 0; }

    bool get(std::size_t i) const;
    void set(std::size_t i, bool value = true);
    void flip(std::size_t i);

    bool operator[](std::size_t i) const { return get(i); }

    BitVector& operator^=(const BitVector& other);
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
    BitVector& operator&=(const BitVector& other);
    friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }

    /// Inner product over GF(2).
    bool dot(const BitVector& other) const;
    std::size_t weight() const noexcept;
    bool is_zero() const noexcept;

    /// Coordinates holding a 1, ascending.
    std::vector<std::size_t> support() const;
    std::string to_string() const;

    /// Low 64 coordinates packed into one word; requires size() <= 64.
    std::uint64_t to_u64() const;
    static BitVector from_u64(std::size_t length, std::uint64_t bits);

    std::span<const std::uint64_t> words() const noexcept { return words_; }

    friend bool operator==(const BitVector&, const BitVector&) = default;

private:
    void clear_tail() noexcept;
    void check_same_length(const BitVector& other) const;

    std::size_t length_ = 0;
    std::vector<std::uint64_t> words_;
};

struct BitVectorHash {
    std::size_t operator()(const BitVector& v) const noexcept;
};

class BitMatrix {
public:
    BitMatrix() = default;
    /// rows x cols zero matrix.
    BitMatrix(std::size_t rows, std::size_t cols);
    /// Every row must have length `cols`.
    BitMatrix(std::size_t cols, std::vector<BitVector> rows);

    static BitMatrix from_strings(std::initializer_list<std::string_view> rows);
    static BitMatrix from_strings(const std::vector<std::string>& rows);
    static BitMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_.size(); }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_.empty(); }

    const BitVector& row(std::size_t r) const { return rows_.at(r); }
    BitVector& row(std::size_t r) { return rows_.at(r); }
    const std::vector<BitVector>& row_vectors() const noexcept { return rows_; }

    bool get(std::size_t r, std::size_t c) const { return rows_.at(r).get(c); }
    void set(std::size_t r, std::size_t c, bool value = true) { rows_.at(r).set(c, value); }

    void append_row(BitVector v);
    /// Copy without row r.
    BitMatrix without_row(std::size_t r) const;
    /// Rows of `top` followed by rows of `bottom`.
    static BitMatrix stack(const BitMatrix& top, const BitMatrix& bottom);

    /// m * v, one bit per row.
    BitVector apply(const BitVector& v) const;
    /// c * m, a combination of rows selected by c.
    BitVector combine(const BitVector& coefficients) const;
    BitMatrix transpose() const;
    BitMatrix operator*(const BitMatrix& rhs) const;

    std::vector<std::string> to_strings() const;

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
    std::size_t cols_ = 0;
    std::vector<BitVector> rows_;
};

/// Reduced row echelon form with leftmost pivots.
struct RowEchelon {
    BitMatrix reduced;                 // rank() nonzero rows, in pivot order
    std::vector<std::size_t> pivots;   // pivot column of each reduced row
    BitMatrix transform;               // transform.row(i) . original == reduced.row(i)

    std::size_t rank() const noexcept { return pivots.size(); }
};

RowEchelon row_reduce(const BitMatrix& m);

std::size_t rank(const BitMatrix& m);

/// Basis of {v : m v = 0}; one row per free column, in column order.
BitMatrix nullspace_basis(const BitMatrix& m);

struct SpanMembership {
    bool member = false;
    BitVector coefficients;  // valid when member; coefficients . m == v
};

SpanMembership in_row_space(const BitVector& v, const BitMatrix& m);

/// Coefficients c with c . rows == target, or nullopt outside the row space.
std::optional<BitVector> solve_for_target(const BitVector& target, const BitMatrix& rows);

/// Reduces a fixed row set once and answers many solve_for_target queries.
class RowSpaceSolver {
public:
    explicit RowSpaceSolver(const BitMatrix& rows);

    std::optional<BitVector> solve(const BitVector& target) const;
    bool contains(const BitVector& target) const;
    std::size_t rank() const noexcept { return echelon_.rank(); }
    std::size_t cols() const noexcept { return cols_; }

private:
    std::size_t cols_;
    std::size_t source_rows_;
    RowEchelon echelon_;
};

}  // namespace cfl::f2
