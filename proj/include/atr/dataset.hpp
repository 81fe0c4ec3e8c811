#pragma once

#include <string>
#include <utility>
#include <vector>

namespace atr {

// Sparse row: (feature index, value) pairs, 0-based, strictly increasing index.
using SparseRow = std::vector<std::pair<int, double>>;

struct Dataset {
    std::vector<SparseRow> rows;
    std::vector<int> labels;  // each is -1 or +1
    int n_features = 0;

    std::size_t size() const { return rows.size(); }
};

enum class LabelMode { normalize, strict };

// LIBSVM text format: `<label> <idx>:<val> ...` with 1-based indices.
// normalize mode maps any two distinct labels to {-1,+1} (smaller -> -1);
// strict mode rejects labels outside {-1,+1}.
Dataset load_libsvm(const std::string& path, LabelMode mode = LabelMode::normalize,
                    int n_features_override = 0);
Dataset parse_libsvm_text(const std::string& text, LabelMode mode = LabelMode::normalize,
                          int n_features_override = 0);

void save_libsvm(const Dataset& data, const std::string& path);
std::string serialize_libsvm(const Dataset& data);

// Synthetic sparse binary-feature dataset in the style of the small LIBSVM
// classification sets; deterministic in the seed.
Dataset synthetic_logistic_dataset(int rows, int cols, unsigned long long seed,
                                   int nnz_per_row = 14);

}  // namespace atr
