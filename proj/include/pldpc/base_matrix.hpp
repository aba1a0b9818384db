#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace pldpc {

enum class CodeFamily { ar3a, ar4ja, custom };

std::string family_name(CodeFamily family);
CodeFamily family_from_name(const std::string& name);

// Exact design rate as a reduced fraction.
struct Rate {
    long num = 0;
    long den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rate&) const = default;
};

// Protograph described by its edge-multiplicity matrix plus per-column
// puncture flags. Entry (i, j) counts parallel edges between check node i
// and variable node j.
struct BaseMatrix {
    int rows = 0; // M, check nodes
    int cols = 0; // N, variable nodes
    std::vector<int> entries;            // row-major, rows*cols
    std::vector<std::uint8_t> punctured; // per column, 1 = not transmitted
    CodeFamily family = CodeFamily::custom;
    int extension = 0; // n for the AR3A/AR4JA rate family

    int at(int i, int j) const { return entries[static_cast<std::size_t>(i) * cols + j]; }
    int& at(int i, int j) { return entries[static_cast<std::size_t>(i) * cols + j]; }

    int col_sum(int j) const;
    int row_sum(int i) const;
    int punctured_count() const;
    int total_edges() const;

    // Throws std::invalid_argument when a structural invariant is violated
    // (empty row/column, negative entry, M >= N, bad flag vector).
    void validate() const;

    // Plain-text form: "M N" line, M rows of entries, one row of puncture flags.
    std::string to_text() const;
    static BaseMatrix from_text(std::istream& in);
    static BaseMatrix from_text(const std::string& text);
};

// AR3A protograph for rate (n+1)/(n+2); 3 x (5+2n), column 2 (1-based) punctured.
BaseMatrix build_ar3a(int n);

// AR4JA protograph for rate (n+1)/(n+2); same shape and puncturing as AR3A.
BaseMatrix build_ar4ja(int n);

BaseMatrix build_family(CodeFamily family, int n);

// (N - M) / (N - #punctured). Throws when the denominator is not positive
// or when N <= M.
Rate code_rate(const BaseMatrix& base);

} // namespace pldpc
