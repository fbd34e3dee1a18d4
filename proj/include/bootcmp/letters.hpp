#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "bootcmp/error.hpp"

namespace bootcmp {

/// Compact letter display over systems already ordered by descending score.
/// Systems sharing a letter are pairwise not significantly different.
struct LetterGrouping {
    /// Maximal contiguous runs of mutually non-significant systems,
    /// inclusive [first, last] index pairs in letter order.
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    /// Per-system concatenation of the letters of every run containing it.
    std::vector<std::string> letters;
    /// True when some non-significant pair could not share a letter because it
    /// straddles a significant system (non-transitive significance pattern).
    bool noncontiguous_nonsignificance = false;
};

namespace detail {

inline std::string letter_name(std::size_t index) {
    // a..z, then aa, ab, ...
    std::string name;
    ++index;
    while (index > 0) {
        --index;
        name.insert(name.begin(), static_cast<char>('a' + index % 26));
        index /= 26;
    }
    return name;
}

}  // namespace detail

/// Greedy insert-and-absorb over the score-ordered significance matrix
/// (significant[i][j] == true means systems i and j differ at level alpha).
/// Each letter covers a maximal contiguous run in which every pair is
/// non-significant; runs generated left to right, subset runs absorbed.
inline LetterGrouping letter_groups(const std::vector<std::vector<bool>>& significant) {
    const std::size_t k = significant.size();
    if (k == 0) throw InputError("letter grouping needs at least one system");
    for (std::size_t i = 0; i < k; ++i) {
        if (significant[i].size() != k)
            throw InputError("significance matrix is not square");
        if (significant[i][i])
            throw InputError("significance matrix marks a system as different from itself");
        for (std::size_t j = 0; j < k; ++j)
            if (significant[i][j] != significant[j][i])
                throw InputError("significance matrix is not symmetric");
    }

    LetterGrouping grouping;
    grouping.letters.assign(k, "");

    std::size_t last_end = 0;
    bool have_run = false;
    for (std::size_t i = 0; i < k; ++i) {
        // extend [i..j] while the next system is non-significant against all members
        std::size_t j = i;
        while (j + 1 < k) {
            bool extend = true;
            for (std::size_t p = i; p <= j && extend; ++p)
                if (significant[p][j + 1]) extend = false;
            if (!extend) break;
            ++j;
        }
        if (have_run && j <= last_end) continue;  // absorbed into the previous run
        grouping.runs.emplace_back(i, j);
        last_end = j;
        have_run = true;
    }

    for (std::size_t g = 0; g < grouping.runs.size(); ++g) {
        const auto [first, last] = grouping.runs[g];
        const std::string name = detail::letter_name(g);
        for (std::size_t i = first; i <= last; ++i) grouping.letters[i] += name;
    }

    // a non-significant pair with no shared letter means the significance
    // pattern is non-transitive; report it rather than invent a letter
    for (std::size_t i = 0; i < k && !grouping.noncontiguous_nonsignificance; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            if (significant[i][j]) continue;
            bool shared = false;
            for (const auto& [first, last] : grouping.runs)
                if (first <= i && j <= last) { shared = true; break; }
            if (!shared) {
                grouping.noncontiguous_nonsignificance = true;
                break;
            }
        }
    }
    return grouping;
}

}  // namespace bootcmp
