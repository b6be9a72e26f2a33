#include "cfl/rates.hpp"

#include "cfl/gic_analysis.hpp"

#include <iomanip>
#include <sstream>

namespace cfl {

namespace {

BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    BigInt out = 1;
    for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
    return out;
}

BigInt power(int base, int exp) {
    BigInt out = 1;
    for (int i = 0; i < exp; ++i) out *= base;
    return out;
}

void require_placement_point(const CachingParams& params) {
    if (!params.at_placement_point()) throw std::invalid_argument("rates are defined at M = 1/K");
}

std::string decimal(const Rational& r) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << to_double(r);
    return os.str();
}

}  // namespace

BigInt surjections(int k, int t) {
    BigInt total = 0;
    for (int i = 0; i <= t; ++i) {
        const BigInt term = binomial(t, i) * power(t - i, k);
        total += (i % 2 == 0) ? term : BigInt(-term);
    }
    return total;
}

std::map<int, Rational> ne_distribution(int files, int users) {
    if (files < 1 || users < files) throw std::invalid_argument("ne_distribution requires 1 <= N <= K");
    const BigInt total = power(files, users);
    std::map<int, Rational> out;
    for (int t = 1; t <= files; ++t) out[t] = Rational(binomial(files, t) * surjections(users, t), total);
    return out;
}

std::map<int, std::size_t> kappa_table(const CachingParams& params) {
    std::map<int, std::size_t> out;
    for (int t = 1; t <= params.files(); ++t) out[t] = kappa_closed_form(params, t);
    return out;
}

RateReport rate_report(const CachingParams& params, std::size_t delta, const CodeTable* table) {
    require_placement_point(params);
    const int parts = params.subfiles_per_file();
    const auto dist = ne_distribution(params.files(), params.users());
    const auto kappas = kappa_table(params);

    RateReport report{params, delta, {}, 0, 0, true, true, 0, 0, {}};
    for (const auto& [ne, prob] : dist) {
        const std::size_t kappa = kappas.at(ne);
        const LinearCode code = best_code(kappa, delta, table);
        RateRow row;
        row.ne = ne;
        row.probability = prob;
        row.kappa = kappa;
        row.code_n = code.n();
        row.code_origin = code.origin();
        row.optimal = length_is_optimal(code, table);
        row.rate = Rational(BigInt(code.n()), BigInt(parts));
        report.average_rate += prob * row.rate;
        report.average_exact = report.average_exact && row.optimal;
        if (ne == params.files()) {
            report.peak_rate = row.rate;
            report.peak_exact = row.optimal;
        }
        if (auto issue = known_length_discrepancy(kappa, 2 * delta + 1)) {
            report.notes.push_back("N_e=" + std::to_string(ne) + ": code length " + std::to_string(code.n()) +
                                   " used; " + issue->note);
        }
        report.rows.push_back(std::move(row));

        // No cache: all n_CFL * N_e demanded subfiles are index-coding messages.
        const LinearCode bare = best_code(static_cast<std::size_t>(parts) * static_cast<std::size_t>(ne), delta, table);
        const Rational bare_rate(BigInt(bare.n()), BigInt(parts));
        report.average_rate_no_cache += prob * bare_rate;
        if (ne == params.files()) report.peak_rate_no_cache = bare_rate;
    }
    if (!report.average_exact) {
        report.notes.push_back("average rate is an upper bound: some code lengths are achievable, not proven optimal");
    }
    return report;
}

Rational average_rate(const CachingParams& params, std::size_t delta, const CodeTable* table) {
    return rate_report(params, delta, table).average_rate;
}

Rational peak_rate(const CachingParams& params, std::size_t delta, const CodeTable* table) {
    require_placement_point(params);
    const std::size_t kappa = kappa_closed_form(params, params.files());
    return Rational(BigInt(best_code(kappa, delta, table).n()), BigInt(params.subfiles_per_file()));
}

EnvelopePoint memory_envelope(const CachingParams& params, std::size_t delta, const Rational& memory,
                              const CodeTable* table) {
    const Rational top = make_rational(1, params.users());
    if (memory < 0 || memory > top) throw std::invalid_argument("memory must lie in [0, 1/K]");
    const RateReport r = rate_report(params, delta, table);
    const Rational lambda = memory / top;
    return {memory, r.average_rate_no_cache + (r.average_rate - r.average_rate_no_cache) * lambda,
            r.peak_rate_no_cache + (r.peak_rate - r.peak_rate_no_cache) * lambda};
}

nlohmann::json to_json(const RateReport& report) {
    auto rows = nlohmann::json::array();
    for (const auto& row : report.rows) {
        rows.push_back({
            {"Ne", row.ne},
            {"probability", to_fraction_string(row.probability)},
            {"kappa", row.kappa},
            {"code_n", row.code_n},
            {"code_origin", to_string(row.code_origin)},
            {"optimal", row.optimal},
            {"rate", to_fraction_string(row.rate)},
        });
    }
    return {
        {"params", {{"N", report.params.files()}, {"K", report.params.users()},
                    {"M", to_fraction_string(report.params.memory())},
                    {"n_cfl", report.params.subfiles_per_file()}}},
        {"delta", report.delta},
        {"rows", rows},
        {"average_rate", {{"exact", to_fraction_string(report.average_rate)},
                          {"decimal", to_double(report.average_rate)},
                          {"label", report.average_exact ? "optimal" : "upper bound"}}},
        {"peak_rate", {{"exact", to_fraction_string(report.peak_rate)},
                       {"decimal", to_double(report.peak_rate)},
                       {"label", report.peak_exact ? "optimal" : "upper bound"}}},
        {"no_cache", {{"average_rate", to_fraction_string(report.average_rate_no_cache)},
                      {"peak_rate", to_fraction_string(report.peak_rate_no_cache)},
                      {"label", "achievable"}}},
        {"notes", report.notes},
    };
}

std::string to_csv(const RateReport& report) {
    std::ostringstream os;
    os << "Ne,prob_num,prob_den,kappa,code_n,code_origin,rate_num,rate_den\n";
    for (const auto& row : report.rows) {
        os << row.ne << ',' << numerator(row.probability) << ',' << denominator(row.probability) << ',' << row.kappa
           << ',' << row.code_n << ',' << to_string(row.code_origin) << ',' << numerator(row.rate) << ','
           << denominator(row.rate) << '\n';
    }
    return os.str();
}

std::string to_text(const RateReport& report) {
    std::ostringstream os;
    const auto& p = report.params;
    os << "N=" << p.files() << " K=" << p.users() << " M=" << to_fraction_string(p.memory())
       << " n_CFL=" << p.subfiles_per_file() << " delta=" << report.delta << '\n';
    os << "Ne  P(Ne)     kappa  code_n  origin             rate\n";
    for (const auto& row : report.rows) {
        os << std::left << std::setw(4) << row.ne << std::setw(10) << to_fraction_string(row.probability)
           << std::setw(7) << row.kappa << std::setw(8) << row.code_n << std::setw(19)
           << (to_string(row.code_origin) + (row.optimal ? "" : "*")) << to_fraction_string(row.rate) << '\n';
    }
    os << "average rate: " << to_fraction_string(report.average_rate) << " (" << decimal(report.average_rate) << ", "
       << (report.average_exact ? "optimal" : "upper bound") << ")\n";
    os << "peak rate: " << to_fraction_string(report.peak_rate) << " (" << decimal(report.peak_rate) << ", "
       << (report.peak_exact ? "optimal" : "upper bound") << ")\n";
    os << "M=0 endpoint: average " << to_fraction_string(report.average_rate_no_cache) << ", peak "
       << to_fraction_string(report.peak_rate_no_cache) << " (achievable)\n";
    for (const auto& note : report.notes) os << "note: " << note << '\n';
    return os.str();
}

}  // namespace cfl
