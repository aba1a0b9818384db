#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "pldpc/base_matrix.hpp"

namespace pldpc {

// Parity-check matrix obtained by copy-and-permute lifting of a protograph.
// Each edge bundle (i, j) with multiplicity k becomes k disjoint Z x Z
// circulant permutation blocks; shifts are drawn randomly and conditioned to
// avoid 4-cycles where possible (best effort, bounded retries).
//
// A systematic encoder is derived at construction by GF(2) elimination with
// column pivoting. Punctured columns are preferred as pivots so information
// positions always fall on transmitted bits.
class LiftedCode {
  public:
    LiftedCode(const BaseMatrix& base, int z, std::uint64_t seed);

    const BaseMatrix& base() const { return base_; }
    int lifting_factor() const { return z_; }
    std::uint64_t seed() const { return seed_; }

    int block_length() const { return base_.cols * z_; }          // N * Z
    int check_count() const { return base_.rows * z_; }           // M * Z
    int info_length() const { return (base_.cols - base_.rows) * z_; }
    int punctured_length() const { return base_.punctured_count() * z_; }
    int transmit_length() const { return block_length() - punctured_length(); }

    int proto_col(int var) const { return var / z_; }
    bool transmitted(int var) const { return !base_.punctured[proto_col(var)]; }

    // Tanner graph in CSR-by-check form; the edge id is the position in
    // check_cols(). var_edges(v) lists edge ids incident to variable v.
    int edge_count() const { return static_cast<int>(check_cols_.size()); }
    std::span<const int> check_cols(int check) const {
        return {check_cols_.data() + check_ptr_[check],
                static_cast<std::size_t>(check_ptr_[check + 1] - check_ptr_[check])};
    }
    std::span<const int> var_edges(int var) const {
        return {var_edges_.data() + var_ptr_[var],
                static_cast<std::size_t>(var_ptr_[var + 1] - var_ptr_[var])};
    }
    int var_degree(int var) const { return var_ptr_[var + 1] - var_ptr_[var]; }
    int check_degree(int check) const { return check_ptr_[check + 1] - check_ptr_[check]; }
    int check_edge_offset(int check) const { return check_ptr_[check]; }

    // Circulant shifts assigned to bundle (i, j); empty when b[i][j] = 0.
    std::span<const int> bundle_shifts(int i, int j) const;

    // Systematic encoding: maps info bits onto the recorded free positions
    // and solves the parity positions. Output has block_length() bits and
    // satisfies every check.
    std::vector<std::uint8_t> encode(std::span<const std::uint8_t> info) const;
    const std::vector<int>& info_positions() const { return info_positions_; }
    int rank() const { return rank_; }

    bool syndrome_ok(std::span<const std::uint8_t> bits) const;

    // Total number of length-4 cycles in the lifted Tanner graph.
    std::size_t count_4cycles() const;

    // Stable structural fingerprint (graph + puncturing), for reproducibility
    // headers.
    std::uint64_t structure_hash() const;

    // "rows cols nnz" header then one 1-based "row col" pair per line.
    void write_sparse(std::ostream& out) const;

  private:
    void assign_shifts(std::uint64_t seed);
    void build_graph();
    void build_encoder();

    BaseMatrix base_;
    int z_ = 1;
    std::uint64_t seed_ = 0;

    std::vector<std::vector<int>> shifts_; // per (i*cols + j) bundle
    std::vector<int> check_ptr_, check_cols_;
    std::vector<int> var_ptr_, var_edges_;

    int rank_ = 0;
    std::vector<int> info_positions_;     // first K_p free columns, ascending
    std::vector<int> pinned_positions_;   // extra free columns (rank-deficient H), always 0
    std::vector<int> pivot_cols_;         // per eliminated row, the solved column
    std::vector<std::uint64_t> solve_rows_; // per pivot row: packed support over free columns
    int free_words_ = 0;
    std::vector<int> free_index_of_col_;  // -1 for pivot columns
    std::vector<int> free_cols_;
};

// Convenience wrapper matching the construction operation name.
inline LiftedCode lift(const BaseMatrix& base, int z, std::uint64_t seed) {
    return LiftedCode(base, z, seed);
}

} // namespace pldpc
