#pragma once

// Binary linear block codes used as the outer code of the concatenated
// delivery: a small registry, constructive families, bounded-distance
// decoding, and an optional table of best-known lengths N_2[k, d].

#include "cfl/f2_linalg.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cfl {

enum class CodeOrigin { Identity, Registered, Repetition, ShortenedHamming, UserTable };

std::string to_string(CodeOrigin origin);

class DecodingFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DecodeResult {
    f2::BitVector message;
    std::size_t corrected = 0;  // Hamming distance to the decoded codeword
};

class LinearCode {
public:
    /// Validates rank(G) = k and, for k <= 20, that every nonzero codeword has weight >= d.
    LinearCode(f2::BitMatrix generator, std::size_t design_distance, CodeOrigin origin, std::string name = {});

    std::size_t n() const noexcept { return generator_.cols(); }
    std::size_t k() const noexcept { return generator_.rows(); }
    std::size_t d() const noexcept { return d_; }
    std::size_t radius() const noexcept { return (d_ - 1) / 2; }
    CodeOrigin origin() const noexcept { return origin_; }
    const std::string& name() const noexcept { return name_; }
    const f2::BitMatrix& generator() const noexcept { return generator_; }
    const f2::BitMatrix& parity_check() const noexcept { return parity_check_; }

    /// True when G = [I_k | P].
    bool systematic() const;

    f2::BitVector encode(const f2::BitVector& message) const;

    /// Unique message whose codeword lies within radius() of `received`;
    /// throws DecodingFailure otherwise.
    DecodeResult decode_bounded(const f2::BitVector& received) const;

    /// Individual strategies, exposed so they can be cross-checked.
    bool has_syndrome_table() const noexcept { return !syndrome_table_.empty(); }
    DecodeResult decode_syndrome(const f2::BitVector& received) const;
    DecodeResult decode_nearest(const f2::BitVector& received) const;

private:
    DecodeResult finish(const f2::BitVector& codeword, std::size_t corrected) const;
    bool repetition_layout() const;
    DecodeResult decode_majority(const f2::BitVector& received) const;

    f2::BitMatrix generator_;
    std::size_t d_;
    CodeOrigin origin_;
    std::string name_;
    f2::BitMatrix parity_check_;
    f2::RowSpaceSolver message_solver_;
    std::unordered_map<f2::BitVector, f2::BitVector, f2::BitVectorHash> syndrome_table_;
};

inline constexpr std::size_t kMinDistanceSweepLimit = 24;

/// Exact minimum weight over nonzero codewords; requires k <= 24.
std::size_t min_distance(const LinearCode& code);
std::size_t min_distance(const f2::BitMatrix& generator);

/// Smallest n = k + r with 2^r >= k + r + 1.
std::size_t shortened_hamming_length(std::size_t k);
/// Systematic [I_k | P]; P rows are r-bit columns of weight >= 2, lightest first,
/// then in descending binary order.
LinearCode shortened_hamming_code(std::size_t k);

/// [k(2δ+1), k, 2δ+1]: k copies of the identity side by side, 2δ+1 times.
LinearCode repetition_code(std::size_t k, std::size_t delta);
LinearCode identity_code(std::size_t k);

/// Generators printed as worked examples alongside the best-known lengths
/// N_2[6,3] = 10 and N_2[3,3] = 6.
LinearCode code_10_6_3();
LinearCode code_6_3_3();

/// n is the shortest length allowed by the sphere-packing bound for d = 3:
/// 2^(n-k) >= n + 1 holds and fails for n - 1.
bool meets_hamming_bound_d3(std::size_t n, std::size_t k);

/// Reads a generator matrix: one row per line, '0'/'1' characters; blank lines and '#' comments skipped.
f2::BitMatrix read_generator(const std::filesystem::path& path);

class CodeTable {
public:
    struct Entry {
        std::size_t k = 0;
        std::size_t d = 0;
        std::size_t n = 0;
        std::string source;
        std::optional<f2::BitMatrix> generator;
    };

    CodeTable() = default;

    /// CSV with header `k,d,n,source`.  A source of the form `generator:<path>`
    /// attaches a generator file (relative paths resolve against the CSV's directory).
    static CodeTable load_csv(const std::filesystem::path& path);

    /// Throws std::invalid_argument when n < k or n decreases in k for fixed d.
    void add(Entry entry);
    const Entry* find(std::size_t k, std::size_t d) const;
    std::size_t size() const noexcept { return entries_.size(); }

private:
    void check_monotone(std::size_t d) const;
    std::map<std::pair<std::size_t, std::size_t>, Entry> entries_;
};

/// Outer code for dimension k correcting `delta` errors.  Priority: identity
/// (delta = 0), the registered example generators, a table entry with a
/// generator, then repetition (k = 1), shortened Hamming (d = 3), repetition.
LinearCode best_code(std::size_t k, std::size_t delta, const CodeTable* table = nullptr);

/// Whether the returned length is known to equal N_2[k, 2δ+1].
bool length_is_optimal(const LinearCode& code, const CodeTable* table = nullptr);

/// Lengths quoted elsewhere for an entry that disagree with what is provably optimal.
struct LengthDiscrepancy {
    std::size_t k;
    std::size_t d;
    std::size_t quoted_n;
    std::string note;
};

std::optional<LengthDiscrepancy> known_length_discrepancy(std::size_t k, std::size_t d);

}  // namespace cfl
