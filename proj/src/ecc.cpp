#include "cfl/ecc.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>

namespace cfl {

std::string to_string(CodeOrigin origin) {
    switch (origin) {
        case CodeOrigin::Identity: return "identity";
        case CodeOrigin::Registered: return "registered";
        case CodeOrigin::Repetition: return "repetition";
        case CodeOrigin::ShortenedHamming: return "shortened_hamming";
        case CodeOrigin::UserTable: return "user_table";
    }
    return "unknown";
}

namespace {

constexpr std::uint64_t kSyndromeTableLimit = std::uint64_t{1} << 20;
constexpr std::size_t kConstructionCheckLimit = 20;

// sum_{w <= t} C(n, w), saturating at limit + 1.
std::uint64_t ball_size(std::size_t n, std::size_t t, std::uint64_t limit) {
    std::uint64_t total = 0;
    std::uint64_t term = 1;
    for (std::size_t w = 0; w <= t && w <= n; ++w) {
        if (w > 0) {
            term = term * (n - w + 1) / w;
        }
        total += term;
        if (total > limit || term > limit) return limit + 1;
    }
    return total;
}

// Calls visit(e) for every length-n pattern of weight w, positions ascending lexicographically.
template <class Visit>
void for_each_pattern(std::size_t n, std::size_t w, Visit&& visit) {
    std::vector<std::size_t> pos(w);
    for (std::size_t i = 0; i < w; ++i) pos[i] = i;
    if (w > n) return;
    while (true) {
        f2::BitVector e(n);
        for (auto p : pos) e.set(p);
        visit(e);
        std::size_t i = w;
        while (i > 0 && pos[i - 1] == n - w + (i - 1)) --i;
        if (i == 0) return;
        ++pos[i - 1];
        for (std::size_t j = i; j < w; ++j) pos[j] = pos[j - 1] + 1;
    }
}

}  // namespace

LinearCode::LinearCode(f2::BitMatrix generator, std::size_t design_distance, CodeOrigin origin, std::string name)
    : generator_(std::move(generator)),
      d_(design_distance),
      origin_(origin),
      name_(std::move(name)),
      parity_check_(f2::nullspace_basis(generator_)),
      message_solver_(generator_) {
    if (generator_.rows() == 0) throw std::invalid_argument("code dimension must be at least 1");
    if (d_ == 0) throw std::invalid_argument("minimum distance must be at least 1");
    if (message_solver_.rank() != generator_.rows()) throw std::invalid_argument("generator rows are dependent");
    if (k() <= kConstructionCheckLimit && min_distance(generator_) < d_) {
        throw std::invalid_argument("generator does not reach the stated minimum distance " + std::to_string(d_));
    }
    if (name_.empty()) {
        name_ = "[" + std::to_string(n()) + "," + std::to_string(k()) + "," + std::to_string(d_) + "]_2";
    }
    if (ball_size(n(), radius(), kSyndromeTableLimit) <= kSyndromeTableLimit) {
        for (std::size_t w = 0; w <= radius(); ++w) {
            for_each_pattern(n(), w, [&](const f2::BitVector& e) {
                syndrome_table_.emplace(parity_check_.apply(e), e);
            });
        }
    }
}

bool LinearCode::systematic() const {
    for (std::size_t r = 0; r < k(); ++r) {
        for (std::size_t c = 0; c < k(); ++c) {
            if (generator_.get(r, c) != (r == c)) return false;
        }
    }
    return true;
}

f2::BitVector LinearCode::encode(const f2::BitVector& message) const {
    if (message.size() != k()) throw std::invalid_argument("message length must equal k");
    return generator_.combine(message);
}

DecodeResult LinearCode::finish(const f2::BitVector& codeword, std::size_t corrected) const {
    auto message = message_solver_.solve(codeword);
    if (!message) throw std::logic_error("corrected word is not a codeword");
    return {std::move(*message), corrected};
}

DecodeResult LinearCode::decode_syndrome(const f2::BitVector& received) const {
    if (received.size() != n()) throw std::invalid_argument("received length must equal n");
    if (syndrome_table_.empty()) throw std::logic_error("no syndrome table for " + name_);
    const auto it = syndrome_table_.find(parity_check_.apply(received));
    if (it == syndrome_table_.end()) {
        throw DecodingFailure("no codeword of " + name_ + " within radius " + std::to_string(radius()));
    }
    return finish(received ^ it->second, it->second.weight());
}

DecodeResult LinearCode::decode_nearest(const f2::BitVector& received) const {
    if (received.size() != n()) throw std::invalid_argument("received length must equal n");
    if (k() > kMinDistanceSweepLimit) throw std::length_error("nearest-codeword sweep limited to k <= 24");
    f2::BitVector codeword(n());
    std::size_t best = received.weight();
    f2::BitVector best_word = codeword;
    for (std::uint64_t i = 1; i < (std::uint64_t{1} << k()); ++i) {
        codeword ^= generator_.row(static_cast<std::size_t>(std::countr_zero(i)));
        const std::size_t dist = (codeword ^ received).weight();
        if (dist < best) {
            best = dist;
            best_word = codeword;
        }
    }
    if (best > radius()) {
        throw DecodingFailure("no codeword of " + name_ + " within radius " + std::to_string(radius()));
    }
    return finish(best_word, best);
}

bool LinearCode::repetition_layout() const {
    if (n() % k() != 0) return false;
    for (std::size_t r = 0; r < k(); ++r) {
        const auto& row = generator_.row(r);
        if (row.weight() != n() / k()) return false;
        for (std::size_t c = r; c < n(); c += k()) {
            if (!row.get(c)) return false;
        }
    }
    return true;
}

DecodeResult LinearCode::decode_majority(const f2::BitVector& received) const {
    const std::size_t copies = n() / k();
    f2::BitVector message(k());
    std::size_t corrected = 0;
    for (std::size_t i = 0; i < k(); ++i) {
        std::size_t ones = 0;
        for (std::size_t c = 0; c < copies; ++c) ones += received.get(i + c * k()) ? 1 : 0;
        if (2 * ones > copies) message.set(i);
        corrected += std::min(ones, copies - ones);
    }
    if (corrected > radius()) {
        throw DecodingFailure("no codeword of " + name_ + " within radius " + std::to_string(radius()));
    }
    return {message, corrected};
}

DecodeResult LinearCode::decode_bounded(const f2::BitVector& received) const {
    if (received.size() != n()) throw std::invalid_argument("received length must equal n");
    if (!syndrome_table_.empty()) return decode_syndrome(received);
    if (k() <= kMinDistanceSweepLimit) return decode_nearest(received);
    if (repetition_layout()) return decode_majority(received);
    throw std::length_error("no bounded-distance decoder available for " + name_);
}

std::size_t min_distance(const f2::BitMatrix& generator) {
    const std::size_t k = generator.rows();
    if (k > kMinDistanceSweepLimit) throw std::length_error("minimum-distance sweep limited to k <= 24");
    std::size_t best = generator.cols() + 1;
    f2::BitVector codeword(generator.cols());
    for (std::uint64_t i = 1; i < (std::uint64_t{1} << k); ++i) {
        codeword ^= generator.row(static_cast<std::size_t>(std::countr_zero(i)));
        best = std::min(best, codeword.weight());
    }
    return best;
}

std::size_t min_distance(const LinearCode& code) { return min_distance(code.generator()); }

std::size_t shortened_hamming_length(std::size_t k) {
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    std::size_t r = 2;
    while ((std::uint64_t{1} << r) < k + r + 1) ++r;
    return k + r;
}

LinearCode shortened_hamming_code(std::size_t k) {
    const std::size_t r = shortened_hamming_length(k) - k;
    std::vector<std::uint64_t> columns;
    for (std::uint64_t c = 1; c < (std::uint64_t{1} << r); ++c) {
        if (std::popcount(c) >= 2) columns.push_back(c);
    }
    // Bit r-1 is the leftmost parity position, so descending value = descending binary string.
    std::sort(columns.begin(), columns.end(), [](std::uint64_t a, std::uint64_t b) {
        const int wa = std::popcount(a);
        const int wb = std::popcount(b);
        return wa != wb ? wa < wb : a > b;
    });

    f2::BitMatrix g(k, k + r);
    for (std::size_t i = 0; i < k; ++i) {
        g.set(i, i);
        for (std::size_t b = 0; b < r; ++b) {
            if ((columns[i] >> (r - 1 - b)) & 1U) g.set(i, k + b);
        }
    }
    return LinearCode(std::move(g), 3, CodeOrigin::ShortenedHamming);
}

LinearCode repetition_code(std::size_t k, std::size_t delta) {
    const std::size_t copies = 2 * delta + 1;
    f2::BitMatrix g(k, k * copies);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t c = 0; c < copies; ++c) g.set(i, i + c * k);
    }
    return LinearCode(std::move(g), copies, CodeOrigin::Repetition);
}

LinearCode identity_code(std::size_t k) { return LinearCode(f2::BitMatrix::identity(k), 1, CodeOrigin::Identity); }

LinearCode code_10_6_3() {
    return LinearCode(f2::BitMatrix::from_strings({
                          "1000001100",
                          "0100001010",
                          "0010001001",
                          "0001000110",
                          "0000100101",
                          "0000010011",
                      }),
                      3, CodeOrigin::Registered, "[10,6,3]_2");
}

LinearCode code_6_3_3() {
    return LinearCode(f2::BitMatrix::from_strings({
                          "100110",
                          "010101",
                          "001011",
                      }),
                      3, CodeOrigin::Registered, "[6,3,3]_2");
}

bool meets_hamming_bound_d3(std::size_t n, std::size_t k) {
    if (n <= k) return false;
    auto fits = [k](std::size_t len) { return len > k && (len - k >= 63 || (std::uint64_t{1} << (len - k)) >= len + 1); };
    return fits(n) && !fits(n - 1);
}

f2::BitMatrix read_generator(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open generator file " + path.string());
    std::vector<std::string> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::string bits;
        for (char c : line) {
            if (c == '#') break;
            if (c == '0' || c == '1') {
                bits.push_back(c);
            } else if (c != ' ' && c != '\t' && c != '\r') {
                throw std::invalid_argument("unexpected character in generator file " + path.string());
            }
        }
        if (!bits.empty()) rows.push_back(std::move(bits));
    }
    if (rows.empty()) throw std::invalid_argument("empty generator file " + path.string());
    for (const auto& r : rows) {
        if (r.size() != rows.front().size()) throw std::invalid_argument("ragged generator file " + path.string());
    }
    return f2::BitMatrix::from_strings(rows);
}

CodeTable CodeTable::load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open code table " + path.string());

    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };

    std::string line;
    if (!std::getline(in, line) || trim(line) != "k,d,n,source") {
        throw std::invalid_argument("code table must start with header 'k,d,n,source'");
    }
    CodeTable table;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        for (int i = 0; i < 3 && std::getline(ss, field, ','); ++i) fields.push_back(trim(field));
        std::getline(ss, field);
        fields.push_back(trim(field));
        if (fields.size() != 4) {
            throw std::invalid_argument("code table line " + std::to_string(line_no) + ": expected 4 fields");
        }
        Entry e;
        try {
            e.k = std::stoul(fields[0]);
            e.d = std::stoul(fields[1]);
            e.n = std::stoul(fields[2]);
        } catch (const std::logic_error&) {
            throw std::invalid_argument("code table line " + std::to_string(line_no) + ": malformed number");
        }
        e.source = fields[3];
        constexpr std::string_view kPrefix = "generator:";
        if (e.source.starts_with(kPrefix)) {
            std::filesystem::path gen = e.source.substr(kPrefix.size());
            if (gen.is_relative()) gen = path.parent_path() / gen;
            e.generator = read_generator(gen);
            if (e.generator->rows() != e.k || e.generator->cols() != e.n) {
                throw std::invalid_argument("code table line " + std::to_string(line_no) +
                                            ": generator shape does not match k and n");
            }
        }
        table.add(std::move(e));
    }
    return table;
}

void CodeTable::add(Entry entry) {
    if (entry.k == 0 || entry.d == 0) throw std::invalid_argument("code table entries need k >= 1 and d >= 1");
    if (entry.n < entry.k) throw std::invalid_argument("code table entry has n < k");
    const std::size_t d = entry.d;
    const auto key = std::make_pair(entry.k, entry.d);
    entries_.insert_or_assign(key, std::move(entry));
    check_monotone(d);
}

void CodeTable::check_monotone(std::size_t d) const {
    std::size_t last_n = 0;
    for (const auto& [key, e] : entries_) {
        if (key.second != d) continue;
        if (e.n < last_n) {
            throw std::invalid_argument("code table lengths must be non-decreasing in k for d = " + std::to_string(d));
        }
        last_n = e.n;
    }
}

const CodeTable::Entry* CodeTable::find(std::size_t k, std::size_t d) const {
    const auto it = entries_.find({k, d});
    return it == entries_.end() ? nullptr : &it->second;
}

LinearCode best_code(std::size_t k, std::size_t delta, const CodeTable* table) {
    if (k == 0) throw std::invalid_argument("code dimension must be at least 1");
    if (delta == 0) return identity_code(k);
    const std::size_t d = 2 * delta + 1;
    if (k == 6 && d == 3) return code_10_6_3();
    if (k == 3 && d == 3) return code_6_3_3();
    if (table != nullptr) {
        if (const auto* e = table->find(k, d); e != nullptr && e->generator) {
            return LinearCode(*e->generator, d, CodeOrigin::UserTable, "[" + std::to_string(e->n) + "," +
                                                                           std::to_string(k) + "," + std::to_string(d) +
                                                                           "]_2 (" + e->source + ")");
        }
    }
    if (k == 1) return repetition_code(1, delta);
    if (d == 3) return shortened_hamming_code(k);
    return repetition_code(k, delta);
}

bool length_is_optimal(const LinearCode& code, const CodeTable* table) {
    switch (code.origin()) {
        case CodeOrigin::Identity:
        case CodeOrigin::Registered:
        case CodeOrigin::UserTable: return true;
        case CodeOrigin::ShortenedHamming: return meets_hamming_bound_d3(code.n(), code.k());
        case CodeOrigin::Repetition: break;
    }
    if (code.k() == 1) return true;
    if (table != nullptr) {
        if (const auto* e = table->find(code.k(), code.d()); e != nullptr) return e->n == code.n();
    }
    return false;
}

std::optional<LengthDiscrepancy> known_length_discrepancy(std::size_t k, std::size_t d) {
    if (k == 27 && d == 3) {
        return LengthDiscrepancy{27, 3, 42,
                                 "N_2[27,3] = 33 (shortened Hamming [33,27,3], sphere-packing rules out n <= 32); "
                                 "the quoted length 42 is not optimal"};
    }
    return std::nullopt;
}

}  // namespace cfl
