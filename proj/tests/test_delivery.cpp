#include "doctest.h"

#include "cfl/delivery.hpp"

#include <fstream>
#include <sstream>

using namespace cfl;

namespace {

std::vector<std::string> golden_lines(const std::string& name) {
    std::ifstream in(std::string(CFL_GOLDEN_DIR) + "/" + name);
    REQUIRE(in.good());
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

TransmissionSchedule deliver(int n, int k, std::vector<int> d) {
    return cfl_deliver(cfl_place(CachingParams::at_cfl_point(n, k)), Demand(std::move(d)));
}

// Decodability by searching every subset of (cache rows, schedule rows) for
// each demanded unit vector.  Only for small row counts.
bool decodable_by_subsets(const Placement& pl, const Demand& d, const TransmissionSchedule& s) {
    const CachingParams& p = pl.params;
    for (std::size_t u = 0; u < static_cast<std::size_t>(p.users()); ++u) {
        std::vector<f2::BitVector> rows = pl.user_cache(u).row_vectors();
        for (const auto& r : s.rows.row_vectors()) rows.push_back(r);
        REQUIRE(rows.size() <= 20);
        std::vector<bool> reached(p.message_count(), false);
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << rows.size()); ++mask) {
            f2::BitVector acc(p.message_count());
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (mask >> i & 1) acc ^= rows[i];
            }
            if (acc.weight() == 1) reached[acc.support().front()] = true;
        }
        for (int part = 1; part <= p.subfiles_per_file(); ++part) {
            if (!reached[flat_index(p, {d[u], part})]) return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("schedule for distinct demands, N = K") {
    const auto s = deliver(3, 3, {1, 2, 3});
    const auto lines = s.labeled_lines();
    const auto golden = golden_lines("schedule_n3_k3_d123_delta1.txt");
    REQUIRE(lines.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) CHECK(lines[i] == golden[i]);
}

TEST_CASE("schedule for repeated demands sends demanded files uncoded") {
    const auto s = deliver(3, 3, {1, 2, 1});
    const auto golden = golden_lines("schedule_n3_k3_d121_delta1.txt");
    REQUIRE(s.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) CHECK(s.labeled_lines()[i] == golden[i]);
}

TEST_CASE("schedule for K > N matches the 27-row listing") {
    const auto s = deliver(3, 4, {1, 2, 3, 1});
    CHECK(s.labeled_lines() == golden_lines("schedule_n3_k4_d1231_delta0.txt"));
    CHECK(s.label(24) == "X_{1,1} ⊕ X_{1,10}");
}

TEST_CASE("decodability examples") {
    const auto p = CachingParams::at_cfl_point(3, 3);
    const Placement pl = cfl_place(p);
    const Demand d({1, 2, 3});
    const auto inst = build_gic_instance(pl, d);
    const auto s = cfl_deliver(pl, d);
    CHECK(verify_decodable(s, inst).ok);

    const auto broken = verify_decodable(s.without_row(0), inst);
    CHECK(!broken.ok);
    REQUIRE(broken.user.has_value());
    CHECK(*broken.user == 0);
    CHECK(*broken.subfile == SubfileIndex{1, 1});

    const auto p34 = CachingParams::at_cfl_point(3, 4);
    const Placement pl34 = cfl_place(p34);
    const Demand d34({1, 2, 3, 1});
    CHECK(verify_decodable(cfl_deliver(pl34, d34), build_gic_instance(pl34, d34)).ok);
}

TEST_CASE("X_{1,1} is the cache packet plus T_1 and T_2") {
    const auto p = CachingParams::at_cfl_point(3, 3);
    const Placement pl = cfl_place(p);
    const auto s = cfl_deliver(pl, Demand({1, 2, 3}));
    const auto rows = f2::BitMatrix::stack(pl.user_cache(0), s.rows);
    const auto target = f2::BitVector::unit(9, flat_index(p, {1, 1}));
    const auto coeffs = f2::solve_for_target(target, rows);
    REQUIRE(coeffs.has_value());
    CHECK(coeffs->to_string() == "1110000");

    // Brute force over all 2^7 row subsets finds exactly this combination.
    int hits = 0;
    for (std::uint64_t mask = 1; mask < 128; ++mask) {
        if (rows.combine(f2::BitVector::from_u64(7, mask)) == target) {
            ++hits;
            CHECK(mask == 0b0000111);
        }
    }
    CHECK(hits == 1);
}

TEST_CASE("schedule length, row weights and decodability over all demands") {
    for (auto [n, k] : {std::pair{2, 2}, {3, 3}, {2, 3}, {3, 4}, {2, 4}}) {
        const auto p = CachingParams::at_cfl_point(n, k);
        const Placement pl = cfl_place(p);
        for_each_demand(n, k, [&](const Demand& d) {
            CAPTURE(n);
            CAPTURE(k);
            CAPTURE(d.to_string());
            const auto inst = build_gic_instance(pl, d);
            const auto s = cfl_deliver(pl, d);
            const int ne = num_distinct(d);
            CHECK(s.size() == kappa_closed_form(p, ne));
            CHECK(s.terms.size() == s.size());
            for (std::size_t i = 0; i < s.size(); ++i) {
                const std::size_t w = s.rows.row(i).weight();
                CHECK(w == s.terms[i].size());
                const bool pairing_allowed = p.regime() == Regime::KgtN && ne == n;
                CHECK((w == 1 || (w == 2 && pairing_allowed)));
            }
            CHECK(verify_decodable(s, inst).ok);
            for (std::size_t r = 0; r < s.size(); ++r) CHECK(!verify_decodable(s.without_row(r), inst).ok);
        });
    }
}

TEST_CASE("solver-based decodability agrees with subset search") {
    for (auto [n, k] : {std::pair{2, 2}, {3, 3}, {2, 3}}) {
        const auto p = CachingParams::at_cfl_point(n, k);
        const Placement pl = cfl_place(p);
        for_each_demand(n, k, [&](const Demand& d) {
            const auto inst = build_gic_instance(pl, d);
            const auto s = cfl_deliver(pl, d);
            CAPTURE(d.to_string());
            CHECK(decodable_by_subsets(pl, d, s));
            for (std::size_t r = 0; r < s.size(); ++r) {
                CHECK(decodable_by_subsets(pl, d, s.without_row(r)) == verify_decodable(s.without_row(r), inst).ok);
            }
        });
    }
}

TEST_CASE("schedule JSON") {
    const auto s = deliver(3, 4, {1, 2, 3, 1});
    const auto j = schedule_to_json(s);
    REQUIRE(j.size() == 27);
    CHECK(j[0]["label"] == "X_{2,1}");
    CHECK(j[26]["label"] == "X_{1,3} ⊕ X_{1,12}");
    CHECK(j[26]["support"] == nlohmann::json::parse("[[1,3],[1,12]]"));
    CHECK(xor_label({{1, 1}, {2, 1}}) == "X_{1,1} ⊕ X_{2,1}");
}

TEST_CASE("invalid demands are rejected") {
    const Placement pl = cfl_place(CachingParams::at_cfl_point(3, 3));
    CHECK_THROWS_AS(cfl_deliver(pl, Demand({1, 2})), std::invalid_argument);
    CHECK_THROWS_AS(cfl_deliver(pl, Demand({1, 2, 5})), std::invalid_argument);
}
