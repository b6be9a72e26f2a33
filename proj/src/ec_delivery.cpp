#include "cfl/ec_delivery.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

namespace cfl {

namespace {

std::vector<SubfileIndex> xor_terms(const std::vector<SubfileIndex>& acc, const std::vector<SubfileIndex>& add) {
    std::vector<SubfileIndex> out = acc;
    for (const auto& t : add) {
        const auto it = std::find(out.begin(), out.end(), t);
        if (it != out.end()) {
            out.erase(it);
        } else {
            out.push_back(t);
        }
    }
    return out;
}

}  // namespace

EcSchedule build_ec_schedule(TransmissionSchedule inner, std::size_t delta, const CodeTable* table) {
    if (inner.size() == 0) throw std::invalid_argument("inner schedule is empty");
    LinearCode outer = best_code(inner.size(), delta, table);
    const f2::BitMatrix& g = outer.generator();

    TransmissionSchedule out{f2::BitMatrix(0, inner.rows.cols()), {}};
    for (std::size_t t = 0; t < outer.n(); ++t) {
        f2::BitVector row(inner.rows.cols());
        std::vector<SubfileIndex> terms;
        for (std::size_t i = 0; i < outer.k(); ++i) {
            if (!g.get(i, t)) continue;
            row ^= inner.rows.row(i);
            terms = xor_terms(terms, inner.terms[i]);
        }
        out.rows.append_row(std::move(row));
        out.terms.push_back(std::move(terms));
    }
    return {std::move(inner), std::move(outer), delta, std::move(out)};
}

PayloadInstance PayloadInstance::zeros(std::size_t n_msgs, std::size_t bits) {
    return {bits, Symbols(n_msgs, f2::BitVector(bits))};
}

Symbols combine_blocks(const f2::BitMatrix& rows, const Symbols& blocks, std::size_t bits) {
    if (rows.cols() != blocks.size()) throw std::invalid_argument("block count does not match row width");
    Symbols out;
    out.reserve(rows.rows());
    for (const auto& row : rows.row_vectors()) {
        f2::BitVector acc(bits);
        for (auto c : row.support()) acc ^= blocks[c];
        out.push_back(std::move(acc));
    }
    return out;
}

Symbols transmit(const EcSchedule& sched, const PayloadInstance& payload) {
    if (payload.bits == 0) throw std::invalid_argument("payload blocks need at least one bit");
    return combine_blocks(sched.transmissions.rows, payload.blocks, payload.bits);
}

Symbols corrupt(Symbols symbols, const ErrorPattern& e, std::size_t delta) {
    if (e.flips.size() > delta) {
        throw std::invalid_argument("error pattern corrupts " + std::to_string(e.flips.size()) +
                                    " transmissions, more than delta = " + std::to_string(delta));
    }
    std::set<std::size_t> seen;
    for (const auto& [pos, mask] : e.flips) {
        if (pos >= symbols.size()) throw std::invalid_argument("error position out of range");
        if (!seen.insert(pos).second) throw std::invalid_argument("error position repeated");
        if (mask.is_zero()) throw std::invalid_argument("error mask must be nonzero");
        if (mask.size() != symbols[pos].size()) throw std::invalid_argument("error mask length must equal symbol length");
        symbols[pos] ^= mask;
    }
    return symbols;
}

Symbols cache_payload(const Placement& placement, std::size_t user, const PayloadInstance& payload) {
    return combine_blocks(placement.user_cache(user), payload.blocks, payload.bits);
}

Symbols file_payload(const CachingParams& params, const PayloadInstance& payload, int file) {
    Symbols out;
    for (int part = 1; part <= params.subfiles_per_file(); ++part) {
        out.push_back(payload.blocks.at(flat_index(params, {file, part})));
    }
    return out;
}

Symbols receiver_decode(std::size_t user, const Symbols& received, const Symbols& cache, const EcSchedule& sched,
                        const Placement& placement, const Demand& d) {
    const LinearCode& outer = sched.outer;
    if (received.size() != outer.n()) throw std::invalid_argument("expected one symbol per transmission");
    const std::size_t bits = received.empty() ? 0 : received.front().size();

    // Outer decoding, one bit-plane at a time.
    Symbols inner(outer.k(), f2::BitVector(bits));
    for (std::size_t p = 0; p < bits; ++p) {
        f2::BitVector word(outer.n());
        for (std::size_t t = 0; t < outer.n(); ++t) {
            if (received[t].get(p)) word.set(t);
        }
        const DecodeResult plane = outer.decode_bounded(word);
        for (auto i : plane.message.support()) inner[i].set(p);
    }

    // Index decoding from cache packets and inner symbols.
    const f2::BitMatrix& cache_rows = placement.user_cache(user);
    if (cache.size() != cache_rows.rows()) throw std::invalid_argument("cache payload does not match placement");
    const f2::RowSpaceSolver solver(f2::BitMatrix::stack(cache_rows, sched.inner.rows));
    const CachingParams& params = placement.params;
    Symbols file;
    for (int part = 1; part <= params.subfiles_per_file(); ++part) {
        const SubfileIndex want{d[user], part};
        const auto coeffs = solver.solve(f2::BitVector::unit(params.message_count(), flat_index(params, want)));
        if (!coeffs) throw UnsatisfiableDemand("user " + std::to_string(user + 1) + " cannot solve " + subfile_label(want));
        f2::BitVector block(bits);
        for (auto i : coeffs->support()) block ^= i < cache.size() ? cache[i] : inner[i - cache.size()];
        file.push_back(std::move(block));
    }
    return file;
}

bool SimReport::all_succeeded() const {
    return std::all_of(successes.begin(), successes.end(), [this](std::uint64_t s) { return s == runs; });
}

std::uint64_t error_pattern_count(std::size_t n, std::size_t delta) {
    std::uint64_t total = 0;
    std::uint64_t term = 1;
    for (std::size_t w = 0; w <= delta && w <= n; ++w) {
        if (w > 0) term = term * (n - w + 1) / w;
        total += term;
    }
    return total;
}

namespace {

struct SimContext {
    const Placement& placement;
    const Demand& demand;
    const EcSchedule& sched;
    std::size_t bits;
    SimReport& report;

    void run(std::mt19937_64& rng, const std::vector<std::size_t>& positions) {
        const CachingParams& params = placement.params;
        const auto payload = PayloadInstance::random(params.message_count(), bits, rng);
        ErrorPattern e;
        for (auto pos : positions) {
            f2::BitVector mask;
            do {
                mask = f2::BitVector::random(bits, rng);
            } while (mask.is_zero());
            e.flips.emplace_back(pos, std::move(mask));
        }
        const Symbols received = corrupt(transmit(sched, payload), e, sched.delta);
        for (std::size_t user = 0; user < static_cast<std::size_t>(params.users()); ++user) {
            try {
                const auto got = receiver_decode(user, received, cache_payload(placement, user, payload), sched,
                                                 placement, demand);
                if (got == file_payload(params, payload, demand[user])) ++report.successes[user];
            } catch (const DecodingFailure&) {
                // counted as a failure
            }
        }
        ++report.runs;
    }
};

std::mt19937_64 run_rng(std::uint64_t seed, std::uint64_t run) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(run), static_cast<std::uint32_t>(run >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

SimReport end_to_end_sim(const CachingParams& params, const Demand& d, std::size_t delta, std::size_t bits,
                         std::uint64_t trials, std::uint64_t seed, std::optional<bool> exhaustive,
                         const CodeTable* table) {
    if (bits == 0) throw std::invalid_argument("payload blocks need at least one bit");
    const Placement placement = cfl_place(params);
    const EcSchedule sched = build_ec_schedule(cfl_deliver(placement, d), delta, table);
    const std::size_t n = sched.outer.n();

    SimReport report{params, d, delta, 0, 0, 0, CodeOrigin::Identity, 0, 0, false, 0, 0, {}, 0};
    report.delta = delta;
    report.code_n = n;
    report.code_k = sched.outer.k();
    report.code_d = sched.outer.d();
    report.code_origin = sched.outer.origin();
    report.bits = bits;
    report.trials = trials;
    report.exhaustive = exhaustive.value_or(n <= 16);
    report.successes.assign(static_cast<std::size_t>(params.users()), 0);
    report.seed = seed;

    SimContext ctx{placement, d, sched, bits, report};
    std::uint64_t run = 0;
    if (report.exhaustive) {
        report.exhaustive_patterns = error_pattern_count(n, delta);
        for (std::size_t w = 0; w <= delta && w <= n; ++w) {
            std::vector<std::size_t> pos(w);
            std::iota(pos.begin(), pos.end(), std::size_t{0});
            while (true) {
                auto rng = run_rng(seed, run++);
                ctx.run(rng, pos);
                std::size_t i = w;
                while (i > 0 && pos[i - 1] == n - w + (i - 1)) --i;
                if (i == 0) break;
                ++pos[i - 1];
                for (std::size_t j = i; j < w; ++j) pos[j] = pos[j - 1] + 1;
            }
        }
    }
    for (std::uint64_t t = 0; t < trials; ++t) {
        auto rng = run_rng(seed, run++);
        const auto weight = std::uniform_int_distribution<std::size_t>(0, std::min(delta, n))(rng);
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), std::size_t{0});
        std::shuffle(all.begin(), all.end(), rng);
        all.resize(weight);
        std::sort(all.begin(), all.end());
        ctx.run(rng, all);
    }
    return report;
}

nlohmann::json to_json(const SimReport& report) {
    return {
        {"params", {{"N", report.params.files()}, {"K", report.params.users()},
                    {"M", to_fraction_string(report.params.memory())}}},
        {"demand", report.demand.files()},
        {"delta", report.delta},
        {"code", {{"n", report.code_n}, {"k", report.code_k}, {"d", report.code_d},
                  {"origin", to_string(report.code_origin)}}},
        {"bits", report.bits},
        {"trials", report.trials},
        {"exhaustive", report.exhaustive},
        {"exhaustive_patterns", report.exhaustive_patterns},
        {"runs", report.runs},
        {"successes", report.successes},
        {"seed", report.seed},
    };
}

}  // namespace cfl
