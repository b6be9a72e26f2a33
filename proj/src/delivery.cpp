#include "cfl/delivery.hpp"

#include <map>
#include <set>

namespace cfl {

std::string xor_label(const std::vector<SubfileIndex>& terms) {
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i > 0) out += " ⊕ ";
        out += subfile_label(terms[i]);
    }
    return out;
}

std::string TransmissionSchedule::label(std::size_t i) const { return xor_label(terms.at(i)); }

std::vector<std::string> TransmissionSchedule::labeled_lines() const {
    std::vector<std::string> lines;
    lines.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) lines.push_back("T_" + std::to_string(i + 1) + ": " + label(i));
    return lines;
}

TransmissionSchedule TransmissionSchedule::without_row(std::size_t i) const {
    TransmissionSchedule out{rows.without_row(i), terms};
    out.terms.erase(out.terms.begin() + static_cast<std::ptrdiff_t>(i));
    return out;
}

namespace {

class ScheduleBuilder {
public:
    explicit ScheduleBuilder(const CachingParams& params) : params_(params) {
        schedule_.rows = f2::BitMatrix(0, params.message_count());
    }

    void add(std::vector<SubfileIndex> terms) {
        f2::BitVector row(params_.message_count());
        for (const auto& t : terms) row.flip(flat_index(params_, t));
        schedule_.rows.append_row(std::move(row));
        schedule_.terms.push_back(std::move(terms));
    }

    TransmissionSchedule finish() { return std::move(schedule_); }

private:
    const CachingParams& params_;
    TransmissionSchedule schedule_;
};

}  // namespace

TransmissionSchedule cfl_deliver(const Placement& placement, const Demand& d) {
    const CachingParams& params = placement.params;
    d.validate(params);
    const int n = params.files();
    const int parts = params.subfiles_per_file();
    const int ne = num_distinct(d);
    ScheduleBuilder out(params);

    if (ne < n) {
        // Every subfile of every demanded file, uncoded.
        for (int f : std::set<int>(d.files().begin(), d.files().end())) {
            for (int part = 1; part <= parts; ++part) out.add({{f, part}});
        }
        return out.finish();
    }

    const int per_user = params.rows_per_user();
    // Within each user's cache block, every subfile of the files that user does not want.
    for (int user = 1; user <= params.users(); ++user) {
        const int wanted = d[static_cast<std::size_t>(user - 1)];
        for (int j = 1; j <= per_user; ++j) {
            const int part = per_user * (user - 1) + j;
            for (int f = 1; f <= n; ++f) {
                if (f != wanted) out.add({{f, part}});
            }
        }
    }
    if (params.regime() == Regime::KgtN) {
        // Chain consecutive users that want the same file through their blocks.
        std::map<int, std::vector<int>> groups;
        for (int user = 1; user <= params.users(); ++user) groups[d[static_cast<std::size_t>(user - 1)]].push_back(user);
        for (const auto& [f, users] : groups) {
            for (std::size_t l = 0; l + 1 < users.size(); ++l) {
                for (int j = 1; j <= n; ++j) {
                    out.add({{f, n * (users[l] - 1) + j}, {f, n * (users[l + 1] - 1) + j}});
                }
            }
        }
    }
    return out.finish();
}

Decodability verify_decodable(const TransmissionSchedule& schedule, const GicInstance& inst) {
    std::map<std::size_t, f2::RowSpaceSolver> solvers;
    for (const auto& r : inst.receivers) {
        auto it = solvers.find(r.user);
        if (it == solvers.end()) {
            it = solvers.emplace(r.user, f2::RowSpaceSolver(f2::BitMatrix::stack(r.side_info, schedule.rows))).first;
        }
        if (!it->second.contains(r.demand_row)) return {false, r.user, r.wanted};
    }
    return {};
}

nlohmann::json schedule_to_json(const TransmissionSchedule& schedule) {
    auto out = nlohmann::json::array();
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        auto support = nlohmann::json::array();
        for (const auto& t : schedule.terms[i]) support.push_back({t.file, t.part});
        out.push_back({{"label", schedule.label(i)}, {"support", support}});
    }
    return out;
}

}  // namespace cfl
