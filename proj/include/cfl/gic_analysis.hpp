#pragma once

// The generalized index coding problem induced by the coded placement and a
// demand, with closed-form min-rank values, the constructive subspaces that
// certify the matching independence number, and brute-force oracles for
// small instances.

#include "cfl/caching_core.hpp"
#include "cfl/f2_linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfl {

/// Raised when a brute-force search would exceed its documented bound.
class SearchBoundExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

struct Receiver {
    std::size_t user;          // 0-based owner
    SubfileIndex wanted;       // demanded subfile
    f2::BitMatrix side_info;   // V^(i): the owner's cache rows
    f2::BitVector demand_row;  // R_i: unit vector on `wanted`
};

struct GicInstance {
    std::size_t n_msgs = 0;
    std::vector<Receiver> receivers;  // user-major, then part
};

/// One receiver per (user, part of the demanded file).
GicInstance build_gic_instance(const Placement& placement, const Demand& d);

/// Min-rank (= independence number) of the induced problem with `ne` distinct demands.
std::size_t kappa_closed_form(const CachingParams& params, int ne);

/// Z-set membership: V^(i) v = 0 and R_i v != 0.
bool z_set_contains(const GicInstance& inst, std::size_t receiver, const f2::BitVector& v);

/// Membership in the union of all Z-sets; receivers sharing side information are grouped.
class ZSetUnion {
public:
    explicit ZSetUnion(const GicInstance& inst);

    bool contains(const f2::BitVector& v) const;
    /// Fast path for n_msgs <= 64.
    bool contains(std::uint64_t v) const;
    std::size_t n_msgs() const noexcept { return n_msgs_; }

private:
    struct Group {
        f2::BitMatrix side_info;
        f2::BitVector demand_mask;
        std::vector<std::uint64_t> side_info64;
        std::uint64_t demand_mask64 = 0;
    };
    std::size_t n_msgs_;
    std::vector<Group> groups_;
};

struct SubspaceBasis {
    f2::BitMatrix basis;        // independent rows spanning S
    f2::BitMatrix constraints;  // S = nullspace(constraints)

    std::size_t dim() const noexcept { return basis.rows(); }
};

/// Constraint rows (cache equations plus zeroing rows) whose solution space
/// lies inside the Z-set union; its dimension equals kappa_closed_form.
SubspaceBasis constructive_subspace(const Placement& placement, const Demand& d);

struct CheckMode {
    enum class Kind { Exhaustive, Sampled };
    Kind kind = Kind::Exhaustive;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;

    static CheckMode exhaustive() { return {}; }
    static CheckMode sampled(std::uint64_t trials, std::uint64_t seed = 0) { return {Kind::Sampled, trials, seed}; }
};

inline constexpr std::size_t kExhaustiveSubspaceDimLimit = 24;

struct SubspaceCheck {
    bool in_a = true;                      // no checked vector fell outside the union
    std::uint64_t checked = 0;             // nonzero span vectors examined
    std::optional<f2::BitVector> witness;  // first violating vector, if any
    /// Exact sufficient condition: S projects injectively onto coordinates
    /// demanded by receivers whose side information annihilates S.
    bool structural_certificate = false;
};

/// Exhaustive mode requires dim(S) <= 24.  Sampled mode checks `trials`
/// random nonzero span vectors plus every basis vector and pairwise sum.
SubspaceCheck verify_subspace_in_A(const GicInstance& inst, const SubspaceBasis& s, CheckMode mode);

bool structural_certificate(const GicInstance& inst, const f2::BitMatrix& basis);

inline constexpr unsigned kMinRankSearchBits = 20;

/// Exact min-rank by enumerating every A_i in the row space of V^(i).
/// Throws SearchBoundExceeded when the total side-information row count exceeds 20.
std::size_t min_rank_bruteforce(const GicInstance& inst);

/// Number of t-dimensional subspaces of GF(2)^n, saturating at UINT64_MAX.
std::uint64_t gaussian_binomial2(std::size_t n, std::size_t t);

inline constexpr std::uint64_t kAlphaSearchBudget = 1'000'000'000;

/// True iff no t-dimensional subspace lies inside the Z-set union plus zero.
/// Requires n_msgs <= 64 and gaussian_binomial2(n, t) * 2^t <= 1e9.
bool alpha_upper_verify(const GicInstance& inst, std::size_t t);

}  // namespace cfl
