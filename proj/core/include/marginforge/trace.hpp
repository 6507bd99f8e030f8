#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace marginforge {

// Per-iteration solver record. Column sets are fixed per solver:
//   primal: k, f_w, f_u, v_best, step, ns
//   dual:   k, dual_value, grad_map_norm, primal_value_of_recovered, gap, ns
// Integer-valued columns (k, ns) are stored as doubles; counts stay well
// below 2^53 so the representation is exact.
struct SolverTrace {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    int column_index(std::string_view name) const {
        for (size_t i = 0; i < columns.size(); ++i) {
            if (columns[i] == name) return static_cast<int>(i);
        }
        return -1;
    }
};

}  // namespace marginforge
