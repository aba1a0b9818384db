#include "pldpc/base_matrix.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace pldpc {

std::string family_name(CodeFamily family) {
    switch (family) {
    case CodeFamily::ar3a: return "ar3a";
    case CodeFamily::ar4ja: return "ar4ja";
    default: return "custom";
    }
}

CodeFamily family_from_name(const std::string& name) {
    if (name == "ar3a") return CodeFamily::ar3a;
    if (name == "ar4ja") return CodeFamily::ar4ja;
    if (name == "custom") return CodeFamily::custom;
    throw std::invalid_argument("unknown code family: " + name);
}

int BaseMatrix::col_sum(int j) const {
    int s = 0;
    for (int i = 0; i < rows; ++i) s += at(i, j);
    return s;
}

int BaseMatrix::row_sum(int i) const {
    int s = 0;
    for (int j = 0; j < cols; ++j) s += at(i, j);
    return s;
}

int BaseMatrix::punctured_count() const {
    int s = 0;
    for (auto p : punctured) s += p ? 1 : 0;
    return s;
}

int BaseMatrix::total_edges() const {
    return std::accumulate(entries.begin(), entries.end(), 0);
}

void BaseMatrix::validate() const {
    if (rows <= 0 || cols <= 0) throw std::invalid_argument("base matrix: empty dimensions");
    if (rows >= cols) throw std::invalid_argument("base matrix: requires M < N");
    if (entries.size() != static_cast<std::size_t>(rows) * cols)
        throw std::invalid_argument("base matrix: entry count mismatch");
    if (punctured.size() != static_cast<std::size_t>(cols))
        throw std::invalid_argument("base matrix: puncture flag count mismatch");
    for (int e : entries)
        if (e < 0) throw std::invalid_argument("base matrix: negative edge multiplicity");
    for (int j = 0; j < cols; ++j)
        if (col_sum(j) == 0) throw std::invalid_argument("base matrix: empty column");
    for (int i = 0; i < rows; ++i)
        if (row_sum(i) == 0) throw std::invalid_argument("base matrix: empty row");
}

namespace {

BaseMatrix build_family_matrix(CodeFamily family, int n, const int head[3][5], int rep_row1_a,
                               int rep_row1_b, int rep_row2_a, int rep_row2_b) {
    if (n < 0) throw std::invalid_argument("extension index n must be >= 0");
    BaseMatrix bm;
    bm.rows = 3;
    bm.cols = 5 + 2 * n;
    bm.entries.assign(static_cast<std::size_t>(bm.rows) * bm.cols, 0);
    bm.punctured.assign(bm.cols, 0);
    bm.punctured[1] = 1;
    bm.family = family;
    bm.extension = n;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 5; ++j) bm.at(i, j) = head[i][j];
    for (int k = 0; k < n; ++k) {
        bm.at(1, 5 + 2 * k) = rep_row1_a;
        bm.at(1, 5 + 2 * k + 1) = rep_row1_b;
        bm.at(2, 5 + 2 * k) = rep_row2_a;
        bm.at(2, 5 + 2 * k + 1) = rep_row2_b;
    }
    bm.validate();
    return bm;
}

} // namespace

BaseMatrix build_ar3a(int n) {
    static const int head[3][5] = {{1, 2, 1, 0, 0}, {0, 2, 1, 1, 1}, {0, 1, 2, 1, 1}};
    return build_family_matrix(CodeFamily::ar3a, n, head, 2, 1, 1, 2);
}

BaseMatrix build_ar4ja(int n) {
    static const int head[3][5] = {{1, 2, 0, 0, 0}, {0, 3, 1, 1, 1}, {0, 1, 2, 2, 1}};
    return build_family_matrix(CodeFamily::ar4ja, n, head, 3, 1, 1, 3);
}

BaseMatrix build_family(CodeFamily family, int n) {
    switch (family) {
    case CodeFamily::ar3a: return build_ar3a(n);
    case CodeFamily::ar4ja: return build_ar4ja(n);
    default: throw std::invalid_argument("build_family: custom matrices come from from_text()");
    }
}

Rate code_rate(const BaseMatrix& base) {
    base.validate();
    const long num = base.cols - base.rows;
    const long den = base.cols - base.punctured_count();
    if (den <= 0) throw std::invalid_argument("code_rate: no transmitted columns");
    if (num <= 0) throw std::invalid_argument("code_rate: N <= M");
    const long g = std::gcd(num, den);
    return Rate{num / g, den / g};
}

std::string BaseMatrix::to_text() const {
    std::ostringstream out;
    out << rows << ' ' << cols << '\n';
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) out << (j ? " " : "") << at(i, j);
        out << '\n';
    }
    for (int j = 0; j < cols; ++j) out << (j ? " " : "") << int(punctured[j]);
    out << '\n';
    return out.str();
}

BaseMatrix BaseMatrix::from_text(std::istream& in) {
    BaseMatrix bm;
    if (!(in >> bm.rows >> bm.cols)) throw std::invalid_argument("base matrix text: bad header");
    if (bm.rows <= 0 || bm.cols <= 0) throw std::invalid_argument("base matrix text: bad dimensions");
    bm.entries.resize(static_cast<std::size_t>(bm.rows) * bm.cols);
    for (auto& e : bm.entries)
        if (!(in >> e)) throw std::invalid_argument("base matrix text: truncated entries");
    bm.punctured.resize(bm.cols);
    for (auto& p : bm.punctured) {
        int v;
        if (!(in >> v)) throw std::invalid_argument("base matrix text: truncated puncture row");
        if (v != 0 && v != 1) throw std::invalid_argument("base matrix text: puncture flag not 0/1");
        p = static_cast<std::uint8_t>(v);
    }
    bm.family = CodeFamily::custom;
    bm.validate();
    return bm;
}

BaseMatrix BaseMatrix::from_text(const std::string& text) {
    std::istringstream in(text);
    return from_text(in);
}

} // namespace pldpc
