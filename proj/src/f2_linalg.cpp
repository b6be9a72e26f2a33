#include "cfl/f2_linalg.hpp"

#include <bit>
#include <stdexcept>

namespace cfl::f2 {

namespace {

constexpr std::size_t kWordBits = 64;

std::size_t word_count(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

}  // namespace

BitVector::BitVector(std::size_t length) : length_(length), words_(word_count(length), 0) {}

BitVector BitVector::from_string(std::string_view bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') {
            v.set(i);
        } else if (bits[i] != '0') {
            throw std::invalid_argument("bit string may only contain '0' and '1'");
        }
    }
    return v;
}

BitVector BitVector::unit(std::size_t length, std::size_t index) {
    BitVector v(length);
    v.set(index);
    return v;
}

bool BitVector::get(std::size_t i) const {
    if (i >= length_) throw std::out_of_range("BitVector index out of range");
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
}

void BitVector::set(std::size_t i, bool value) {
    if (i >= length_) throw std::out_of_range("BitVector index out of range");
    const std::uint64_t mask = std::uint64_t{1} << (i % kWordBits);
    if (value) {
        words_[i / kWordBits] |= mask;
    } else {
        words_[i / kWordBits] &= ~mask;
    }
}

void BitVector::flip(std::size_t i) {
    if (i >= length_) throw std::out_of_range("BitVector index out of range");
    words_[i / kWordBits] ^= std::uint64_t{1} << (i % kWordBits);
}

void BitVector::check_same_length(const BitVector& other) const {
    if (other.length_ != length_) throw std::invalid_argument("BitVector length mismatch");
}

BitVector& BitVector::operator^=(const BitVector& other) {
    check_same_length(other);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
    return *this;
}

BitVector& BitVector::operator&=(const BitVector& other) {
    check_same_length(other);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
    return *this;
}

bool BitVector::dot(const BitVector& other) const {
    check_same_length(other);
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & other.words_[w];
    return std::popcount(acc) & 1;
}

std::size_t BitVector::weight() const noexcept {
    std::size_t total = 0;
    for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
}

bool BitVector::is_zero() const noexcept {
    for (auto w : words_) {
        if (w != 0) return false;
    }
    return true;
}

std::vector<std::size_t> BitVector::support() const {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t bits = words_[w];
        while (bits != 0) {
            out.push_back(w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits)));
            bits &= bits - 1;
        }
    }
    return out;
}

std::string BitVector::to_string() const {
    std::string s(length_, '0');
    for (auto i : support()) s[i] = '1';
    return s;
}

std::uint64_t BitVector::to_u64() const {
    if (length_ > kWordBits) throw std::length_error("BitVector wider than 64 bits");
    return words_.empty() ? 0 : words_[0];
}

BitVector BitVector::from_u64(std::size_t length, std::uint64_t bits) {
    if (length > kWordBits) throw std::length_error("BitVector wider than 64 bits");
    BitVector v(length);
    if (length > 0) {
        v.words_[0] = bits;
        v.clear_tail();
    }
    return v;
}

void BitVector::clear_tail() noexcept {
    const std::size_t rem = length_ % kWordBits;
    if (rem != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << rem) - 1;
}

std::size_t BitVectorHash::operator()(const BitVector& v) const noexcept {
    std::size_t h = std::hash<std::size_t>{}(v.size());
    for (auto w : v.words()) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVector(cols)) {}

BitMatrix::BitMatrix(std::size_t cols, std::vector<BitVector> rows) : cols_(cols), rows_(std::move(rows)) {
    for (const auto& r : rows_) {
        if (r.size() != cols_) throw std::invalid_argument("BitMatrix row length mismatch");
    }
}

BitMatrix BitMatrix::from_strings(std::initializer_list<std::string_view> rows) {
    std::vector<std::string> copy(rows.begin(), rows.end());
    return from_strings(copy);
}

BitMatrix BitMatrix::from_strings(const std::vector<std::string>& rows) {
    if (rows.empty()) return {};
    std::vector<BitVector> parsed;
    parsed.reserve(rows.size());
    for (const auto& r : rows) parsed.push_back(BitVector::from_string(r));
    const std::size_t cols = parsed.front().size();
    return BitMatrix(cols, std::move(parsed));
}

BitMatrix BitMatrix::identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
}

void BitMatrix::append_row(BitVector v) {
    if (v.size() != cols_) throw std::invalid_argument("BitMatrix row length mismatch");
    rows_.push_back(std::move(v));
}

BitMatrix BitMatrix::without_row(std::size_t r) const {
    if (r >= rows_.size()) throw std::out_of_range("BitMatrix row out of range");
    std::vector<BitVector> kept;
    kept.reserve(rows_.size() - 1);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (i != r) kept.push_back(rows_[i]);
    }
    return BitMatrix(cols_, std::move(kept));
}

BitMatrix BitMatrix::stack(const BitMatrix& top, const BitMatrix& bottom) {
    if (top.cols_ != bottom.cols_) throw std::invalid_argument("BitMatrix::stack column mismatch");
    std::vector<BitVector> rows = top.rows_;
    rows.insert(rows.end(), bottom.rows_.begin(), bottom.rows_.end());
    return BitMatrix(top.cols_, std::move(rows));
}

BitVector BitMatrix::apply(const BitVector& v) const {
    if (v.size() != cols_) throw std::invalid_argument("BitMatrix::apply length mismatch");
    BitVector out(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (rows_[r].dot(v)) out.set(r);
    }
    return out;
}

BitVector BitMatrix::combine(const BitVector& coefficients) const {
    if (coefficients.size() != rows_.size()) throw std::invalid_argument("BitMatrix::combine length mismatch");
    BitVector out(cols_);
    for (auto r : coefficients.support()) out ^= rows_[r];
    return out;
}

BitMatrix BitMatrix::transpose() const {
    BitMatrix t(cols_, rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        for (auto c : rows_[r].support()) t.set(c, r);
    }
    return t;
}

BitMatrix BitMatrix::operator*(const BitMatrix& rhs) const {
    if (cols_ != rhs.rows()) throw std::invalid_argument("BitMatrix product dimension mismatch");
    BitMatrix out(rows_.size(), rhs.cols());
    for (std::size_t r = 0; r < rows_.size(); ++r) out.rows_[r] = rhs.combine(rows_[r]);
    return out;
}

std::vector<std::string> BitMatrix::to_strings() const {
    std::vector<std::string> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_) out.push_back(r.to_string());
    return out;
}

RowEchelon row_reduce(const BitMatrix& m) {
    std::vector<BitVector> rows = m.row_vectors();
    std::vector<BitVector> transform = BitMatrix::identity(m.rows()).row_vectors();
    std::vector<std::size_t> pivots;

    std::size_t rank = 0;
    for (std::size_t col = 0; col < m.cols() && rank < rows.size(); ++col) {
        std::size_t sel = rank;
        while (sel < rows.size() && !rows[sel].get(col)) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[rank], rows[sel]);
        std::swap(transform[rank], transform[sel]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r != rank && rows[r].get(col)) {
                rows[r] ^= rows[rank];
                transform[r] ^= transform[rank];
            }
        }
        pivots.push_back(col);
        ++rank;
    }
    rows.resize(rank);
    transform.resize(rank);

    RowEchelon out;
    out.reduced = BitMatrix(m.cols(), std::move(rows));
    out.transform = BitMatrix(m.rows(), std::move(transform));
    out.pivots = std::move(pivots);
    return out;
}

std::size_t rank(const BitMatrix& m) {
    // Elimination without the transform bookkeeping.
    std::vector<BitVector> rows = m.row_vectors();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m.cols() && rank < rows.size(); ++col) {
        std::size_t sel = rank;
        while (sel < rows.size() && !rows[sel].get(col)) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[rank], rows[sel]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            if (rows[r].get(col)) rows[r] ^= rows[rank];
        }
        ++rank;
    }
    return rank;
}

BitMatrix nullspace_basis(const BitMatrix& m) {
    const RowEchelon ech = row_reduce(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : ech.pivots) is_pivot[p] = true;

    BitMatrix basis(0, m.cols());
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        BitVector v(m.cols());
        v.set(free);
        for (std::size_t i = 0; i < ech.pivots.size(); ++i) {
            if (ech.reduced.get(i, free)) v.set(ech.pivots[i]);
        }
        basis.append_row(std::move(v));
    }
    return basis;
}

RowSpaceSolver::RowSpaceSolver(const BitMatrix& rows)
    : cols_(rows.cols()), source_rows_(rows.rows()), echelon_(row_reduce(rows)) {}

std::optional<BitVector> RowSpaceSolver::solve(const BitVector& target) const {
    if (target.size() != cols_) throw std::invalid_argument("solve: target length mismatch");
    BitVector residual = target;
    BitVector coefficients(source_rows_);
    for (std::size_t i = 0; i < echelon_.pivots.size(); ++i) {
        if (residual.get(echelon_.pivots[i])) {
            residual ^= echelon_.reduced.row(i);
            coefficients ^= echelon_.transform.row(i);
        }
    }
    if (!residual.is_zero()) return std::nullopt;
    return coefficients;
}

bool RowSpaceSolver::contains(const BitVector& target) const { return solve(target).has_value(); }

SpanMembership in_row_space(const BitVector& v, const BitMatrix& m) {
    auto c = solve_for_target(v, m);
    if (!c) return {};
    return {true, std::move(*c)};
}

std::optional<BitVector> solve_for_target(const BitVector& target, const BitMatrix& rows) {
    return RowSpaceSolver(rows).solve(target);
}

}  // namespace cfl::f2
