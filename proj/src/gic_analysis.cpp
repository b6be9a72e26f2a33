#include "cfl/gic_analysis.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <random>
#include <set>

namespace cfl {

GicInstance build_gic_instance(const Placement& placement, const Demand& d) {
    const CachingParams& params = placement.params;
    d.validate(params);

    GicInstance inst;
    inst.n_msgs = params.message_count();
    const int parts = params.subfiles_per_file();
    inst.receivers.reserve(static_cast<std::size_t>(params.users()) * static_cast<std::size_t>(parts));
    for (std::size_t user = 0; user < static_cast<std::size_t>(params.users()); ++user) {
        for (int part = 1; part <= parts; ++part) {
            const SubfileIndex wanted{d[user], part};
            inst.receivers.push_back({user, wanted, placement.user_cache(user),
                                      f2::BitVector::unit(inst.n_msgs, flat_index(params, wanted))});
        }
    }
    return inst;
}

std::size_t kappa_closed_form(const CachingParams& params, int ne) {
    const auto n = static_cast<std::size_t>(params.files());
    const auto k = static_cast<std::size_t>(params.users());
    if (ne < 1 || static_cast<std::size_t>(ne) > n) throw std::invalid_argument("N_e must lie in [1, N]");
    const auto e = static_cast<std::size_t>(ne);
    if (params.regime() == Regime::NeqK) return e <= n - 1 ? n * e : n * (n - 1);
    return e <= n - 1 ? n * k * e : n * n * (k - 1);
}

bool z_set_contains(const GicInstance& inst, std::size_t receiver, const f2::BitVector& v) {
    const Receiver& r = inst.receivers.at(receiver);
    return r.demand_row.dot(v) && r.side_info.apply(v).is_zero();
}

ZSetUnion::ZSetUnion(const GicInstance& inst) : n_msgs_(inst.n_msgs) {
    std::map<std::vector<std::string>, std::size_t> index;
    for (const auto& r : inst.receivers) {
        auto key = r.side_info.to_strings();
        auto [it, inserted] = index.try_emplace(std::move(key), groups_.size());
        if (inserted) groups_.push_back({r.side_info, f2::BitVector(n_msgs_), {}, 0});
        for (auto c : r.demand_row.support()) groups_[it->second].demand_mask.set(c);
    }
    if (n_msgs_ <= 64) {
        for (auto& g : groups_) {
            for (const auto& row : g.side_info.row_vectors()) g.side_info64.push_back(row.to_u64());
            g.demand_mask64 = g.demand_mask.to_u64();
        }
    }
}

bool ZSetUnion::contains(const f2::BitVector& v) const {
    if (n_msgs_ <= 64) return contains(v.to_u64());
    for (const auto& g : groups_) {
        if ((g.demand_mask & v).is_zero()) continue;
        if (g.side_info.apply(v).is_zero()) return true;
    }
    return false;
}

bool ZSetUnion::contains(std::uint64_t v) const {
    for (const auto& g : groups_) {
        if ((g.demand_mask64 & v) == 0) continue;
        bool annihilated = true;
        for (auto row : g.side_info64) {
            if (std::popcount(row & v) & 1) {
                annihilated = false;
                break;
            }
        }
        if (annihilated) return true;
    }
    return false;
}

SubspaceBasis constructive_subspace(const Placement& placement, const Demand& d) {
    const CachingParams& params = placement.params;
    d.validate(params);
    const int ne = num_distinct(d);
    const std::size_t n = params.message_count();

    f2::BitMatrix constraints(0, n);
    if (ne == params.files()) {
        // Cache equations of the lowest-indexed user requesting each file.
        std::set<int> covered;
        for (std::size_t user = 0; user < d.size(); ++user) {
            if (!covered.insert(d[user]).second) continue;
            for (const auto& row : placement.user_cache(user).row_vectors()) constraints.append_row(row);
        }
    } else {
        for (const auto& cache : placement.cache_rows) {
            for (const auto& row : cache.row_vectors()) constraints.append_row(row);
        }
        // Zero every undemanded file except the largest-indexed one.
        const std::set<int> demanded(d.files().begin(), d.files().end());
        std::vector<int> undemanded;
        for (int f = 1; f <= params.files(); ++f) {
            if (!demanded.contains(f)) undemanded.push_back(f);
        }
        undemanded.pop_back();
        for (int f : undemanded) {
            for (int part = 1; part <= params.subfiles_per_file(); ++part) {
                constraints.append_row(f2::BitVector::unit(n, flat_index(params, {f, part})));
            }
        }
    }
    return {f2::nullspace_basis(constraints), std::move(constraints)};
}

bool structural_certificate(const GicInstance& inst, const f2::BitMatrix& basis) {
    std::vector<bool> covered(inst.n_msgs, false);
    for (const auto& r : inst.receivers) {
        bool annihilates = true;
        for (const auto& b : basis.row_vectors()) {
            if (!r.side_info.apply(b).is_zero()) {
                annihilates = false;
                break;
            }
        }
        if (annihilates) {
            for (auto c : r.demand_row.support()) covered[c] = true;
        }
    }
    std::vector<std::size_t> columns;
    for (std::size_t c = 0; c < inst.n_msgs; ++c) {
        if (covered[c]) columns.push_back(c);
    }
    f2::BitMatrix projected(basis.rows(), columns.size());
    for (std::size_t r = 0; r < basis.rows(); ++r) {
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (basis.get(r, columns[j])) projected.set(r, j);
        }
    }
    return f2::rank(projected) == basis.rows();
}

namespace {

void record(SubspaceCheck& result, const ZSetUnion& zu, const f2::BitVector& v) {
    ++result.checked;
    if (result.in_a && !zu.contains(v)) {
        result.in_a = false;
        result.witness = v;
    }
}

void check_exhaustive(SubspaceCheck& result, const ZSetUnion& zu, const f2::BitMatrix& basis, std::size_t n) {
    const std::size_t dim = basis.rows();
    const std::uint64_t total = std::uint64_t{1} << dim;
    if (n <= 64) {
        std::vector<std::uint64_t> rows;
        for (const auto& b : basis.row_vectors()) rows.push_back(b.to_u64());
        std::uint64_t v = 0;
        for (std::uint64_t i = 1; i < total; ++i) {
            v ^= rows[static_cast<std::size_t>(std::countr_zero(i))];
            if (!zu.contains(v)) {
                result.in_a = false;
                result.witness = f2::BitVector::from_u64(n, v);
                result.checked = i;
                return;
            }
        }
        result.checked = total - 1;
        return;
    }
    f2::BitVector v(n);
    for (std::uint64_t i = 1; i < total; ++i) {
        v ^= basis.row(static_cast<std::size_t>(std::countr_zero(i)));
        record(result, zu, v);
        if (!result.in_a) return;
    }
}

}  // namespace

SubspaceCheck verify_subspace_in_A(const GicInstance& inst, const SubspaceBasis& s, CheckMode mode) {
    const f2::BitMatrix& basis = s.basis;
    if (basis.rows() > 0 && basis.cols() != inst.n_msgs) throw std::invalid_argument("subspace dimension mismatch");
    const ZSetUnion zu(inst);
    SubspaceCheck result;
    result.structural_certificate = structural_certificate(inst, basis);

    if (mode.kind == CheckMode::Kind::Exhaustive) {
        if (basis.rows() > kExhaustiveSubspaceDimLimit) {
            throw SearchBoundExceeded("exhaustive subspace check limited to dim <= 24, got dim " +
                                      std::to_string(basis.rows()));
        }
        check_exhaustive(result, zu, basis, inst.n_msgs);
        return result;
    }

    for (std::size_t i = 0; i < basis.rows() && result.in_a; ++i) {
        record(result, zu, basis.row(i));
        for (std::size_t j = i + 1; j < basis.rows() && result.in_a; ++j) record(result, zu, basis.row(i) ^ basis.row(j));
    }
    if (basis.rows() == 0) return result;
    std::mt19937_64 rng(mode.seed);
    for (std::uint64_t t = 0; t < mode.trials && result.in_a; ++t) {
        f2::BitVector coeffs;
        do {
            coeffs = f2::BitVector::random(basis.rows(), rng);
        } while (coeffs.is_zero());
        record(result, zu, basis.combine(coeffs));
    }
    return result;
}

namespace {

// Incrementally maintained row basis; each row has a distinct pivot and is
// reduced against every earlier row.
class IncrementalBasis {
public:
    explicit IncrementalBasis(std::size_t n) : n_(n) {}

    f2::BitVector reduce(f2::BitVector v) const {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (v.get(pivots_[i])) v ^= rows_[i];
        }
        return v;
    }
    // v must already be reduced and nonzero.
    void push(f2::BitVector v) {
        pivots_.push_back(v.support().front());
        rows_.push_back(std::move(v));
    }
    void pop() {
        rows_.pop_back();
        pivots_.pop_back();
    }
    std::size_t size() const noexcept { return rows_.size(); }

private:
    std::size_t n_;
    std::vector<f2::BitVector> rows_;
    std::vector<std::size_t> pivots_;
};

struct MinRankSearch {
    std::vector<std::vector<f2::BitVector>> candidates;  // per receiver: every A_i + R_i
    IncrementalBasis basis;
    std::size_t best;

    void run(std::size_t receiver) {
        if (basis.size() >= best) return;
        if (receiver == candidates.size()) {
            best = basis.size();
            return;
        }
        // Candidates already in the span first: they cannot raise the rank.
        std::vector<f2::BitVector> fresh;
        for (const auto& c : candidates[receiver]) {
            auto reduced = basis.reduce(c);
            if (reduced.is_zero()) {
                run(receiver + 1);
            } else {
                fresh.push_back(std::move(reduced));
            }
        }
        if (basis.size() + 1 >= best) return;
        for (auto& r : fresh) {
            basis.push(r);
            run(receiver + 1);
            basis.pop();
        }
    }
};

}  // namespace

std::size_t min_rank_bruteforce(const GicInstance& inst) {
    std::size_t bits = 0;
    for (const auto& r : inst.receivers) bits += r.side_info.rows();
    if (bits > kMinRankSearchBits) {
        throw SearchBoundExceeded("min-rank search space 2^" + std::to_string(bits) + " exceeds bound 2^" +
                                  std::to_string(kMinRankSearchBits));
    }

    MinRankSearch search{{}, IncrementalBasis(inst.n_msgs), inst.receivers.size() + 1};
    for (const auto& r : inst.receivers) {
        std::vector<f2::BitVector> options;
        const std::size_t s = r.side_info.rows();
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << s); ++mask) {
            options.push_back(r.side_info.combine(f2::BitVector::from_u64(s, mask)) ^ r.demand_row);
        }
        search.candidates.push_back(std::move(options));
    }
    search.run(0);
    return search.best;
}

std::uint64_t gaussian_binomial2(std::size_t n, std::size_t t) {
    if (t > n) return 0;
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    // [n, t] = [n-1, t-1] + 2^t [n-1, t], tabulated row by row.
    std::vector<std::uint64_t> row(t + 1, 0);
    row[0] = 1;
    for (std::size_t m = 1; m <= n; ++m) {
        for (std::size_t j = std::min(m, t); j >= 1; --j) {
            std::uint64_t scaled = row[j];
            for (std::size_t b = 0; b < j && scaled != kMax; ++b) scaled = scaled > kMax / 2 ? kMax : scaled * 2;
            row[j] = (scaled > kMax - row[j - 1]) ? kMax : scaled + row[j - 1];
        }
    }
    return row[t];
}

namespace {

// Depth-first search over reduced echelon bases, choosing rows from the
// largest pivot downward so every partial basis spans a subspace that must
// itself lie in the union.
class SubspaceSearch {
public:
    SubspaceSearch(const ZSetUnion& zu, std::size_t n) : zu_(zu), n_(n) {
        if (n_ <= 20) {
            table_.resize(std::size_t{1} << n_);
            for (std::uint64_t v = 0; v < table_.size(); ++v) table_[v] = v != 0 && zu_.contains(v);
        }
    }

    bool find(std::size_t t) {
        span_.assign(1, 0);
        return extend(t, 0, n_);
    }

private:
    bool member(std::uint64_t v) const { return table_.empty() ? zu_.contains(v) : table_[v] != 0; }

    bool extend(std::size_t remaining, std::uint64_t pivot_mask, std::size_t upper) {
        if (remaining == 0) return true;
        for (std::size_t p = upper; p-- > remaining - 1;) {
            std::vector<std::size_t> free_cols;
            for (std::size_t c = p + 1; c < n_; ++c) {
                if (!((pivot_mask >> c) & 1U)) free_cols.push_back(c);
            }
            const std::uint64_t combos = std::uint64_t{1} << free_cols.size();
            for (std::uint64_t a = 0; a < combos; ++a) {
                std::uint64_t row = std::uint64_t{1} << p;
                for (std::size_t i = 0; i < free_cols.size(); ++i) {
                    if ((a >> i) & 1U) row |= std::uint64_t{1} << free_cols[i];
                }
                const std::size_t old = span_.size();
                bool ok = true;
                for (std::size_t i = 0; i < old; ++i) {
                    if (!member(row ^ span_[i])) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) continue;
                for (std::size_t i = 0; i < old; ++i) span_.push_back(row ^ span_[i]);
                const bool found = extend(remaining - 1, pivot_mask | (std::uint64_t{1} << p), p);
                span_.resize(old);
                if (found) return true;
            }
        }
        return false;
    }

    const ZSetUnion& zu_;
    std::size_t n_;
    std::vector<std::uint8_t> table_;
    std::vector<std::uint64_t> span_;
};

}  // namespace

bool alpha_upper_verify(const GicInstance& inst, std::size_t t) {
    const std::size_t n = inst.n_msgs;
    if (t > n) return true;
    if (n > 64) throw SearchBoundExceeded("subspace search requires at most 64 messages");
    const std::uint64_t count = gaussian_binomial2(n, t);
    if (t >= 30 || count > kAlphaSearchBudget >> t) {
        throw SearchBoundExceeded("subspace search over " + std::to_string(t) + "-dim subspaces of GF(2)^" +
                                  std::to_string(n) + " exceeds 1e9 operations");
    }
    const ZSetUnion zu(inst);
    SubspaceSearch search(zu, n);
    return !search.find(t);
}

}  // namespace cfl
