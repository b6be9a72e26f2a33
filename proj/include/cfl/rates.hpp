#pragma once

// Exact average/peak rates of the error-correcting delivery under uniformly
// random demands, and the memory-sharing line down to M = 0.

#include "cfl/caching_core.hpp"
#include "cfl/ecc.hpp"
#include "cfl/rational.hpp"

#include "json.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace cfl {

/// Number of surjections from a K-set onto a t-set.
BigInt surjections(int k, int t);

/// P(N_e = t) for d uniform on [N]^K, t in [1, min(N, K)].  Requires 1 <= N <= K.
std::map<int, Rational> ne_distribution(int files, int users);

/// N_e -> κ for every t in [1, min(N, K)].
std::map<int, std::size_t> kappa_table(const CachingParams& params);

struct RateRow {
    int ne = 0;
    Rational probability;
    std::size_t kappa = 0;
    std::size_t code_n = 0;
    CodeOrigin code_origin = CodeOrigin::Identity;
    bool optimal = false;
    Rational rate;  // code_n / n_CFL
};

struct RateReport {
    CachingParams params;
    std::size_t delta = 0;
    std::vector<RateRow> rows;
    Rational average_rate;
    Rational peak_rate;
    bool average_exact = true;  // every row uses a code of provably optimal length
    bool peak_exact = true;
    Rational average_rate_no_cache;  // M = 0 endpoint
    Rational peak_rate_no_cache;
    std::vector<std::string> notes;
};

RateReport rate_report(const CachingParams& params, std::size_t delta, const CodeTable* table = nullptr);

Rational average_rate(const CachingParams& params, std::size_t delta, const CodeTable* table = nullptr);
Rational peak_rate(const CachingParams& params, std::size_t delta, const CodeTable* table = nullptr);

struct EnvelopePoint {
    Rational memory;
    Rational average;
    Rational peak;
};

/// Linear interpolation between M = 0 (every demanded subfile sent, no side
/// information) and the coded-placement point M = 1/K.  Requires 0 <= M <= 1/K.
EnvelopePoint memory_envelope(const CachingParams& params, std::size_t delta, const Rational& memory,
                              const CodeTable* table = nullptr);

nlohmann::json to_json(const RateReport& report);
/// Columns: Ne,prob_num,prob_den,kappa,code_n,code_origin,rate_num,rate_den
std::string to_csv(const RateReport& report);
std::string to_text(const RateReport& report);

}  // namespace cfl
