#include "cfl/caching_core.hpp"

#include <charconv>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cfl {

CachingParams::CachingParams(int files, int users, Rational memory)
    : files_(files), users_(users), memory_(std::move(memory)) {
    if (files_ < 2) throw std::invalid_argument("need at least 2 files");
    if (users_ < files_) throw std::invalid_argument("need K >= N (no scheme for N > K)");
    if (memory_ < 0 || memory_ > files_) throw std::invalid_argument("memory must lie in [0, N]");
}

CachingParams CachingParams::at_cfl_point(int files, int users) {
    if (users <= 0) throw std::invalid_argument("need at least one user");
    return CachingParams(files, users, make_rational(1, users));
}

int CachingParams::subfiles_per_file() const noexcept { return regime() == Regime::NeqK ? files_ : files_ * users_; }

int CachingParams::rows_per_user() const noexcept { return regime() == Regime::NeqK ? 1 : files_; }

std::size_t CachingParams::message_count() const noexcept {
    return static_cast<std::size_t>(files_) * static_cast<std::size_t>(subfiles_per_file());
}

std::size_t flat_index(const CachingParams& params, SubfileIndex s) {
    const int parts = params.subfiles_per_file();
    if (s.file < 1 || s.file > params.files() || s.part < 1 || s.part > parts) {
        throw std::out_of_range("subfile index out of range");
    }
    return static_cast<std::size_t>(s.file - 1) * static_cast<std::size_t>(parts) + static_cast<std::size_t>(s.part - 1);
}

SubfileIndex subfile_at(const CachingParams& params, std::size_t flat) {
    if (flat >= params.message_count()) throw std::out_of_range("message coordinate out of range");
    const auto parts = static_cast<std::size_t>(params.subfiles_per_file());
    return {static_cast<int>(flat / parts) + 1, static_cast<int>(flat % parts) + 1};
}

std::string subfile_label(SubfileIndex s) {
    return "X_{" + std::to_string(s.file) + "," + std::to_string(s.part) + "}";
}

Demand Demand::parse(std::string_view text) {
    std::vector<int> files;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        auto token = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
        while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
        int value = 0;
        const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (token.empty() || ec != std::errc{} || end != token.data() + token.size()) {
            throw std::invalid_argument("malformed demand entry '" + std::string(token) + "'");
        }
        files.push_back(value);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return Demand(std::move(files));
}

void Demand::validate(const CachingParams& params) const {
    if (files_.size() != static_cast<std::size_t>(params.users())) {
        throw std::invalid_argument("demand has " + std::to_string(files_.size()) + " entries, expected K = " +
                                    std::to_string(params.users()));
    }
    for (int f : files_) {
        if (f < 1 || f > params.files()) {
            throw std::invalid_argument("demand entry " + std::to_string(f) + " outside [1, " +
                                        std::to_string(params.files()) + "]");
        }
    }
}

std::string Demand::to_string() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < files_.size(); ++i) os << (i ? "," : "") << files_[i];
    os << ')';
    return os.str();
}

int num_distinct(const Demand& d) {
    return static_cast<int>(std::set<int>(d.files().begin(), d.files().end()).size());
}

void for_each_demand(int files, int users, const std::function<void(const Demand&)>& visit) {
    if (files < 1 || users < 1) return;
    std::vector<int> current(static_cast<std::size_t>(users), 1);
    while (true) {
        visit(Demand(current));
        int pos = users - 1;
        while (pos >= 0 && current[static_cast<std::size_t>(pos)] == files) {
            current[static_cast<std::size_t>(pos)] = 1;
            --pos;
        }
        if (pos < 0) return;
        ++current[static_cast<std::size_t>(pos)];
    }
}

Placement cfl_place(const CachingParams& params) {
    if (!params.at_placement_point()) throw std::invalid_argument("coded placement requires M = 1/K");

    const std::size_t n = params.message_count();
    const int per_user = params.rows_per_user();
    Placement placement{params, {}};
    placement.cache_rows.reserve(static_cast<std::size_t>(params.users()));
    for (int user = 1; user <= params.users(); ++user) {
        f2::BitMatrix rows(0, n);
        for (int j = 1; j <= per_user; ++j) {
            const int part = per_user * (user - 1) + j;
            f2::BitVector row(n);
            for (int f = 1; f <= params.files(); ++f) row.set(flat_index(params, {f, part}));
            rows.append_row(std::move(row));
        }
        placement.cache_rows.push_back(std::move(rows));
    }
    return placement;
}

}  // namespace cfl
