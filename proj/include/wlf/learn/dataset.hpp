#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace wlf::learn {

// Regression training data: feature rows with exact cost-to-go targets.
struct RegressionSet {
    std::vector<std::vector<double>> x;
    std::vector<double> y;

    std::size_t rows() const {return x.size();}
    std::size_t cols() const {return x.empty() ? 0 : x[0].size();}
};

// Ranking training data: (better, worse) row-index pairs at margin 1,
// where "worse" must score at least one unit higher (heuristic values
// are costs-to-go).
struct RankingSet {
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<int, int>> pairs;

    std::size_t cols() const {return rows.empty() ? 0 : rows[0].size();}
};

} // namespace wlf::learn
