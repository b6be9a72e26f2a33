#pragma once

// Error-free delivery for the coded placement.

#include "cfl/caching_core.hpp"
#include "cfl/f2_linalg.hpp"
#include "cfl/gic_analysis.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cfl {

/// Ordered transmitted combinations; rows.row(i) is the indicator of terms[i].
struct TransmissionSchedule {
    f2::BitMatrix rows;
    std::vector<std::vector<SubfileIndex>> terms;

    std::size_t size() const noexcept { return rows.rows(); }
    /// "X_{1,1} ⊕ X_{1,10}"
    std::string label(std::size_t i) const;
    /// "T_1: X_{2,1}" lines, one per transmission.
    std::vector<std::string> labeled_lines() const;
    TransmissionSchedule without_row(std::size_t i) const;
};

std::string xor_label(const std::vector<SubfileIndex>& terms);

/// Schedule of length kappa_closed_form(params, N_e(d)).  Placement must come from cfl_place.
TransmissionSchedule cfl_deliver(const Placement& placement, const Demand& d);

struct Decodability {
    bool ok = true;
    std::optional<std::size_t> user;       // first failing receiver (0-based user)
    std::optional<SubfileIndex> subfile;   // and the subfile it cannot obtain
};

/// Every receiver's demand row must lie in span(V^(i) rows, schedule rows).
Decodability verify_decodable(const TransmissionSchedule& schedule, const GicInstance& inst);

/// [{"label": ..., "support": [[file, part], ...]}, ...]
nlohmann::json schedule_to_json(const TransmissionSchedule& schedule);

}  // namespace cfl
