#include "pldpc/lifted_code.hpp"

#include <algorithm>
#include <bit>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "pldpc/rng.hpp"

namespace pldpc {

namespace {

constexpr int kShiftRetries = 200;

// FNV-1a over 64-bit words.
struct Fnv {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    void add(std::uint64_t v) {
        for (int k = 0; k < 8; ++k) {
            h ^= (v >> (8 * k)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    }
};

} // namespace

LiftedCode::LiftedCode(const BaseMatrix& base, int z, std::uint64_t seed)
    : base_(base), z_(z), seed_(seed) {
    base_.validate();
    if (z < 1) throw std::invalid_argument("lift: Z must be >= 1");
    for (int e : base_.entries)
        if (e > z)
            throw std::invalid_argument("lift: bundle multiplicity exceeds Z, disjoint permutations impossible");
    assign_shifts(seed);
    build_graph();
    build_encoder();
}

std::span<const int> LiftedCode::bundle_shifts(int i, int j) const {
    const auto& s = shifts_[static_cast<std::size_t>(i) * base_.cols + j];
    return {s.data(), s.size()};
}

// A 4-cycle between column blocks j1, j2 and row blocks i1, i2 exists exactly
// when shifts a in S(i1,j1), b in S(i1,j2), c in S(i2,j2), d in S(i2,j1)
// satisfy a - b + c - d = 0 (mod Z), with a != b when j1 = j2 (distinct
// variable nodes) and a != d when i1 = i2 (distinct check nodes).
void LiftedCode::assign_shifts(std::uint64_t seed) {
    const int m = base_.rows, n = base_.cols;
    shifts_.assign(static_cast<std::size_t>(m) * n, {});
    auto rng = make_engine(seed, 0x11f7ed);
    std::uniform_int_distribution<int> pick(0, z_ - 1);

    auto closes_4cycle = [&](int i, int j, int s) {
        for (int i2 = 0; i2 < m; ++i2) {
            for (int j2 = 0; j2 < n; ++j2) {
                const auto& sb = shifts_[static_cast<std::size_t>(i) * n + j2];
                const auto& sc = shifts_[static_cast<std::size_t>(i2) * n + j2];
                const auto& sd = shifts_[static_cast<std::size_t>(i2) * n + j];
                const bool own_bundle = (i2 == i && j2 == j);
                if (sb.empty() || sd.empty()) continue;
                if (sc.empty() && !own_bundle) continue;
                for (int b : sb) {
                    if (j2 == j && b == s) continue; // same variable node
                    for (int d : sd) {
                        if (i2 == i && d == s) continue; // same check node
                        const int need = ((b + d - s) % z_ + z_) % z_; // c making the sum vanish
                        for (int c : sc)
                            if (c == need) return true;
                        // the candidate may also sit at the opposite corner of
                        // its own bundle (catches 2*(s-s') = 0 mod Z)
                        if (own_bundle && s == need) return true;
                    }
                }
            }
        }
        return false;
    };

    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            const int k = base_.at(i, j);
            auto& bundle = shifts_[static_cast<std::size_t>(i) * n + j];
            for (int e = 0; e < k; ++e) {
                int fallback = -1;
                int chosen = -1;
                for (int attempt = 0; attempt < kShiftRetries; ++attempt) {
                    int s = (z_ == 1) ? 0 : pick(rng);
                    if (std::find(bundle.begin(), bundle.end(), s) != bundle.end()) continue;
                    if (fallback < 0) fallback = s;
                    if (!closes_4cycle(i, j, s)) {
                        chosen = s;
                        break;
                    }
                }
                if (chosen < 0 && fallback < 0) {
                    // distinctness is a hard requirement; sweep deterministically
                    for (int s = 0; s < z_; ++s)
                        if (std::find(bundle.begin(), bundle.end(), s) == bundle.end()) {
                            fallback = s;
                            break;
                        }
                }
                bundle.push_back(chosen >= 0 ? chosen : fallback);
            }
            std::sort(bundle.begin(), bundle.end());
        }
    }
}

void LiftedCode::build_graph() {
    const int m = base_.rows, n = base_.cols;
    const int checks = m * z_;
    const int vars = n * z_;

    std::vector<std::vector<int>> cols_of_check(checks);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int s : shifts_[static_cast<std::size_t>(i) * n + j]) {
                for (int col_off = 0; col_off < z_; ++col_off) {
                    const int row = i * z_ + (col_off + s) % z_;
                    cols_of_check[row].push_back(j * z_ + col_off);
                }
            }
        }
    }
    check_ptr_.assign(checks + 1, 0);
    for (int r = 0; r < checks; ++r) {
        std::sort(cols_of_check[r].begin(), cols_of_check[r].end());
        check_ptr_[r + 1] = check_ptr_[r] + static_cast<int>(cols_of_check[r].size());
    }
    check_cols_.resize(check_ptr_[checks]);
    for (int r = 0; r < checks; ++r)
        std::copy(cols_of_check[r].begin(), cols_of_check[r].end(),
                  check_cols_.begin() + check_ptr_[r]);

    var_ptr_.assign(vars + 1, 0);
    for (int c : check_cols_) ++var_ptr_[c + 1];
    for (int v = 0; v < vars; ++v) var_ptr_[v + 1] += var_ptr_[v];
    var_edges_.resize(check_cols_.size());
    std::vector<int> cursor(var_ptr_.begin(), var_ptr_.end() - 1);
    for (int e = 0; e < static_cast<int>(check_cols_.size()); ++e)
        var_edges_[cursor[check_cols_[e]]++] = e;
}

void LiftedCode::build_encoder() {
    const int rows = check_count();
    const int cols = block_length();
    const int words = (cols + 63) / 64;

    std::vector<std::uint64_t> mat(static_cast<std::size_t>(rows) * words, 0);
    auto set_bit = [&](int r, int c) { mat[static_cast<std::size_t>(r) * words + c / 64] ^= 1ULL << (c % 64); };
    for (int r = 0; r < rows; ++r)
        for (int c : check_cols(r)) set_bit(r, c);

    // Pivot order: punctured columns first (so they land on parity), then the
    // remaining columns from the right; free columns collect on the left.
    std::vector<int> order;
    order.reserve(cols);
    for (int j = base_.cols - 1; j >= 0; --j)
        if (base_.punctured[j])
            for (int c = (j + 1) * z_ - 1; c >= j * z_; --c) order.push_back(c);
    for (int j = base_.cols - 1; j >= 0; --j)
        if (!base_.punctured[j])
            for (int c = (j + 1) * z_ - 1; c >= j * z_; --c) order.push_back(c);

    std::vector<int> pivot_row_of_col(cols, -1);
    std::vector<std::uint8_t> row_used(rows, 0);
    pivot_cols_.clear();
    int rank = 0;
    for (int c : order) {
        if (rank == rows) break;
        const int w = c / 64;
        const std::uint64_t bit = 1ULL << (c % 64);
        int pivot = -1;
        for (int r = 0; r < rows; ++r) {
            if (!row_used[r] && (mat[static_cast<std::size_t>(r) * words + w] & bit)) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) continue;
        row_used[pivot] = 1;
        pivot_row_of_col[c] = pivot;
        ++rank;
        for (int r = 0; r < rows; ++r) {
            if (r == pivot) continue;
            if (mat[static_cast<std::size_t>(r) * words + w] & bit) {
                std::uint64_t* dst = mat.data() + static_cast<std::size_t>(r) * words;
                const std::uint64_t* src = mat.data() + static_cast<std::size_t>(pivot) * words;
                for (int k = 0; k < words; ++k) dst[k] ^= src[k];
            }
        }
    }
    rank_ = rank;

    free_cols_.clear();
    free_index_of_col_.assign(cols, -1);
    for (int c = 0; c < cols; ++c) {
        if (pivot_row_of_col[c] < 0) {
            free_index_of_col_[c] = static_cast<int>(free_cols_.size());
            free_cols_.push_back(c);
        }
    }
    const int k_p = info_length();
    if (static_cast<int>(free_cols_.size()) < k_p)
        throw std::invalid_argument("lift: internal error, fewer free columns than info bits");
    info_positions_.assign(free_cols_.begin(), free_cols_.begin() + k_p);
    pinned_positions_.assign(free_cols_.begin() + k_p, free_cols_.end());

    // Per pivot row keep its support restricted to free columns, packed over
    // the free-column index space; back-substitution is then a masked parity.
    free_words_ = (static_cast<int>(free_cols_.size()) + 63) / 64;
    solve_rows_.assign(static_cast<std::size_t>(rows) * free_words_, 0);
    pivot_cols_.assign(rows, -1);
    for (int c = 0; c < cols; ++c) {
        const int r = pivot_row_of_col[c];
        if (r < 0) continue;
        pivot_cols_[r] = c;
        std::uint64_t* dst = solve_rows_.data() + static_cast<std::size_t>(r) * free_words_;
        const std::uint64_t* src = mat.data() + static_cast<std::size_t>(r) * words;
        for (int fc = 0; fc < static_cast<int>(free_cols_.size()); ++fc) {
            const int col = free_cols_[fc];
            if (src[col / 64] & (1ULL << (col % 64))) dst[fc / 64] ^= 1ULL << (fc % 64);
        }
    }
}

std::vector<std::uint8_t> LiftedCode::encode(std::span<const std::uint8_t> info) const {
    if (static_cast<int>(info.size()) != info_length())
        throw std::invalid_argument("encode: info length mismatch");
    std::vector<std::uint64_t> free_bits(free_words_, 0);
    for (int k = 0; k < static_cast<int>(info.size()); ++k)
        if (info[k]) free_bits[k / 64] ^= 1ULL << (k % 64); // info occupies the first free indices

    std::vector<std::uint8_t> word(block_length(), 0);
    for (int k = 0; k < static_cast<int>(info.size()); ++k) word[info_positions_[k]] = info[k] & 1;
    for (int r = 0; r < check_count(); ++r) {
        const int pc = pivot_cols_[r];
        if (pc < 0) continue;
        const std::uint64_t* row = solve_rows_.data() + static_cast<std::size_t>(r) * free_words_;
        std::uint64_t acc = 0;
        for (int k = 0; k < free_words_; ++k) acc ^= row[k] & free_bits[k];
        word[pc] = static_cast<std::uint8_t>(std::popcount(acc) & 1);
    }
    return word;
}

bool LiftedCode::syndrome_ok(std::span<const std::uint8_t> bits) const {
    if (static_cast<int>(bits.size()) != block_length())
        throw std::invalid_argument("syndrome_ok: length mismatch");
    for (int r = 0; r < check_count(); ++r) {
        int parity = 0;
        for (int c : check_cols(r)) parity ^= bits[c] & 1;
        if (parity) return false;
    }
    return true;
}

std::size_t LiftedCode::count_4cycles() const {
    // Pairs of checks sharing >= 2 variables; each such pair with k shared
    // variables contributes C(k, 2) cycles.
    std::vector<int> check_of_edge(edge_count());
    for (int r = 0; r < check_count(); ++r)
        for (int e = check_ptr_[r]; e < check_ptr_[r + 1]; ++e) check_of_edge[e] = r;

    std::unordered_map<std::uint64_t, int> shared;
    shared.reserve(check_cols_.size() * 4);
    for (int v = 0; v < block_length(); ++v) {
        const auto edges = var_edges(v);
        for (std::size_t a = 0; a < edges.size(); ++a) {
            for (std::size_t b = a + 1; b < edges.size(); ++b) {
                int r1 = check_of_edge[edges[a]];
                int r2 = check_of_edge[edges[b]];
                if (r1 > r2) std::swap(r1, r2);
                ++shared[(static_cast<std::uint64_t>(r1) << 32) | static_cast<std::uint32_t>(r2)];
            }
        }
    }
    std::size_t cycles = 0;
    for (const auto& [key, k] : shared) {
        (void)key;
        cycles += static_cast<std::size_t>(k) * (k - 1) / 2;
    }
    return cycles;
}

std::uint64_t LiftedCode::structure_hash() const {
    Fnv f;
    f.add(static_cast<std::uint64_t>(z_));
    f.add(static_cast<std::uint64_t>(base_.rows));
    f.add(static_cast<std::uint64_t>(base_.cols));
    for (int j = 0; j < base_.cols; ++j) f.add(base_.punctured[j]);
    for (const auto& bundle : shifts_) {
        f.add(bundle.size());
        for (int s : bundle) f.add(static_cast<std::uint64_t>(s));
    }
    return f.h;
}

void LiftedCode::write_sparse(std::ostream& out) const {
    out << check_count() << ' ' << block_length() << ' ' << edge_count() << '\n';
    for (int r = 0; r < check_count(); ++r)
        for (int c : check_cols(r)) out << (r + 1) << ' ' << (c + 1) << '\n';
}

} // namespace pldpc
