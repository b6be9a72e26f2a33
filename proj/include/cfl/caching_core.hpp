#pragma once

// Caching system model and the coded (XOR) placement for M = 1/K.
//
// Subfiles are addressed 1-based as X_{file,part}.  Message coordinates are
// 0-based and file-major: flat = (file - 1) * subfiles_per_file + (part - 1).

#include "cfl/f2_linalg.hpp"
#include "cfl/rational.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace cfl {

enum class Regime { NeqK, KgtN };

class CachingParams {
public:
    /// Throws std::invalid_argument unless files >= 2, users >= files, 0 <= memory <= files.
    CachingParams(int files, int users, Rational memory);
    /// The placement operating point M = 1/K.
    static CachingParams at_cfl_point(int files, int users);

    int files() const noexcept { return files_; }
    int users() const noexcept { return users_; }
    const Rational& memory() const noexcept { return memory_; }
    Regime regime() const noexcept { return files_ == users_ ? Regime::NeqK : Regime::KgtN; }

    /// n_CFL: N when N = K, N*K when K > N.
    int subfiles_per_file() const noexcept;
    /// Cache rows per user: 1 when N = K, N when K > N.
    int rows_per_user() const noexcept;
    std::size_t message_count() const noexcept;

    bool at_placement_point() const { return memory_ == make_rational(1, users_); }

    friend bool operator==(const CachingParams&, const CachingParams&) = default;

private:
    int files_;
    int users_;
    Rational memory_;
};

struct SubfileIndex {
    int file;  // 1-based
    int part;  // 1-based

    friend bool operator==(const SubfileIndex&, const SubfileIndex&) = default;
};

std::size_t flat_index(const CachingParams& params, SubfileIndex s);
SubfileIndex subfile_at(const CachingParams& params, std::size_t flat);
/// "X_{f,p}"
std::string subfile_label(SubfileIndex s);

class Demand {
public:
    Demand() = default;
    explicit Demand(std::vector<int> files) : files_(std::move(files)) {}

    /// Parses "1,2,3".
    static Demand parse(std::string_view text);

    const std::vector<int>& files() const noexcept { return files_; }
    std::size_t size() const noexcept { return files_.size(); }
    int operator[](std::size_t user) const { return files_.at(user); }

    /// Throws std::invalid_argument unless there is one entry per user, each in [1, N].
    void validate(const CachingParams& params) const;
    std::string to_string() const;

    friend bool operator==(const Demand&, const Demand&) = default;

private:
    std::vector<int> files_;
};

/// N_e(d): number of distinct files requested.
int num_distinct(const Demand& d);

/// Calls `visit` for every demand in [N]^K in lexicographic order.
void for_each_demand(int files, int users, const std::function<void(const Demand&)>& visit);

struct Placement {
    CachingParams params;
    /// cache_rows[user] holds that user's coded packets over the message coordinates.
    std::vector<f2::BitMatrix> cache_rows;

    const f2::BitMatrix& user_cache(std::size_t user) const { return cache_rows.at(user); }
};

/// Requires M = 1/K.  User i's row j XORs X_{f, rows_per_user*(i-1)+j} over all files f.
Placement cfl_place(const CachingParams& params);

}  // namespace cfl
