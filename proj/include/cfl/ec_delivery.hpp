#pragma once

// δ-error-correcting delivery: the coded-caching schedule concatenated with
// an outer block code, plus a payload-level simulation of the broadcast link.

#include "cfl/caching_core.hpp"
#include "cfl/delivery.hpp"
#include "cfl/ecc.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace cfl {

struct EcSchedule {
    TransmissionSchedule inner;  // κ rows
    LinearCode outer;            // k = κ, d >= 2δ+1
    std::size_t delta = 0;
    /// Row t = sum over i of G[i][t] * inner row i; outer.n() rows in total.
    TransmissionSchedule transmissions;

    std::size_t size() const noexcept { return transmissions.size(); }
};

/// Labels of concatenated rows list inner terms in generator-row order with
/// repeated subfiles cancelled.
EcSchedule build_ec_schedule(TransmissionSchedule inner, std::size_t delta, const CodeTable* table = nullptr);

/// One b-bit block per message coordinate.
struct PayloadInstance {
    std::size_t bits = 0;
    std::vector<f2::BitVector> blocks;

    template <class Rng>
    static PayloadInstance random(std::size_t n_msgs, std::size_t bits, Rng& rng) {
        PayloadInstance p{bits, {}};
        p.blocks.reserve(n_msgs);
        for (std::size_t i = 0; i < n_msgs; ++i) p.blocks.push_back(f2::BitVector::random(bits, rng));
        return p;
    }
    static PayloadInstance zeros(std::size_t n_msgs, std::size_t bits);
};

using Symbols = std::vector<f2::BitVector>;

/// XOR of the payload blocks selected by each row of `rows`.
Symbols combine_blocks(const f2::BitMatrix& rows, const Symbols& blocks, std::size_t bits);

Symbols transmit(const EcSchedule& sched, const PayloadInstance& payload);

struct ErrorPattern {
    std::vector<std::pair<std::size_t, f2::BitVector>> flips;  // (transmission, nonzero mask)
};

/// Throws std::invalid_argument when more than `delta` positions are given,
/// a position repeats or is out of range, or a mask is zero or mis-sized.
Symbols corrupt(Symbols symbols, const ErrorPattern& e, std::size_t delta);

/// Blocks of the user's cached packets under `payload`.
Symbols cache_payload(const Placement& placement, std::size_t user, const PayloadInstance& payload);

/// Subfile blocks X_{file,1..n_CFL} of the true payload.
Symbols file_payload(const CachingParams& params, const PayloadInstance& payload, int file);

class UnsatisfiableDemand : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Outer-decodes every bit-plane, then solves each demanded subfile from the
/// user's cache and the recovered inner symbols.  Throws DecodingFailure when
/// a bit-plane is beyond the decoding radius.
Symbols receiver_decode(std::size_t user, const Symbols& received, const Symbols& cache, const EcSchedule& sched,
                        const Placement& placement, const Demand& d);

struct SimReport {
    CachingParams params;
    Demand demand;
    std::size_t delta = 0;
    std::size_t code_n = 0;
    std::size_t code_k = 0;
    std::size_t code_d = 0;
    CodeOrigin code_origin = CodeOrigin::Identity;
    std::size_t bits = 0;
    std::uint64_t trials = 0;            // random draws requested
    bool exhaustive = false;
    std::uint64_t exhaustive_patterns = 0;
    std::uint64_t runs = 0;              // trials + exhaustive patterns
    std::vector<std::uint64_t> successes;  // per user
    std::uint64_t seed = 0;

    bool all_succeeded() const;
};

/// Pattern count of the exhaustive sweep: sum_{w <= delta} C(n, w).
std::uint64_t error_pattern_count(std::size_t n, std::size_t delta);

/// `trials` random (payload, pattern) draws with at most δ corrupted
/// transmissions, plus the exhaustive sweep when requested (default: when
/// outer.n <= 16).  Deterministic given the seed.
SimReport end_to_end_sim(const CachingParams& params, const Demand& d, std::size_t delta, std::size_t bits,
                         std::uint64_t trials, std::uint64_t seed, std::optional<bool> exhaustive = std::nullopt,
                         const CodeTable* table = nullptr);

nlohmann::json to_json(const SimReport& report);

}  // namespace cfl
