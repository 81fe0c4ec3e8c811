#include "atr/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "atr/errors.hpp"

namespace atr {

namespace {

// from_chars rejects a leading '+', which labels like "+1" use
bool parse_double(const std::string& tok, double& out)
{
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (first != last && *first == '+')
        ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return first != last && ec == std::errc{} && ptr == last;
}

bool parse_int(const std::string& tok, long& out)
{
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (first != last && *first == '+')
        ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return first != last && ec == std::errc{} && ptr == last;
}

}  // namespace

Dataset parse_libsvm_text(const std::string& text, LabelMode mode,
                          int n_features_override)
{
    Dataset out;
    std::vector<double> raw_labels;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    int max_index = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok))
            continue;  // blank line
        double label;
        if (!parse_double(tok, label))
            throw ParseError(line_no, 1, "bad label token '" + tok + "'");
        SparseRow row;
        int col = 1;
        while (ls >> tok) {
            ++col;
            const auto colon = tok.find(':');
            if (colon == std::string::npos)
                throw ParseError(line_no, col, "expected idx:val, got '" + tok + "'");
            long idx;
            double val;
            if (!parse_int(tok.substr(0, colon), idx) || idx < 1)
                throw ParseError(line_no, col, "bad feature index in '" + tok + "'");
            if (!parse_double(tok.substr(colon + 1), val))
                throw ParseError(line_no, col, "bad feature value in '" + tok + "'");
            row.emplace_back(static_cast<int>(idx) - 1, val);
            max_index = std::max<int>(max_index, static_cast<int>(idx));
        }
        std::sort(row.begin(), row.end());
        out.rows.push_back(std::move(row));
        raw_labels.push_back(label);
    }
    out.n_features = n_features_override > 0 ? n_features_override : max_index;
    for (const auto& row : out.rows)
        for (const auto& [idx, val] : row)
            if (idx >= out.n_features)
                throw ParseError(0, 0, "feature index exceeds n_features override");

    std::set<double> distinct(raw_labels.begin(), raw_labels.end());
    const bool plus_minus_one =
        std::all_of(raw_labels.begin(), raw_labels.end(),
                    [](double l) { return l == 1.0 || l == -1.0; });
    if (plus_minus_one) {
        for (double l : raw_labels)
            out.labels.push_back(l > 0 ? 1 : -1);
        return out;
    }
    if (mode == LabelMode::strict)
        throw LabelError("labels outside {-1,+1} in strict mode");
    if (distinct.size() > 2)
        throw LabelError("more than two distinct labels");
    const double low = *distinct.begin();
    for (double l : raw_labels)
        out.labels.push_back(l == low ? -1 : 1);
    return out;
}

Dataset load_libsvm(const std::string& path, LabelMode mode, int n_features_override)
{
    std::ifstream f(path);
    if (!f)
        throw Error("cannot open dataset file " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_libsvm_text(buf.str(), mode, n_features_override);
}

std::string serialize_libsvm(const Dataset& data)
{
    std::ostringstream out;
    char num[64];
    for (std::size_t i = 0; i < data.rows.size(); ++i) {
        out << (data.labels[i] > 0 ? "+1" : "-1");
        for (const auto& [idx, val] : data.rows[i]) {
            auto res = std::to_chars(num, num + sizeof(num), val);
            out << ' ' << (idx + 1) << ':' << std::string_view(num, res.ptr - num);
        }
        out << '\n';
    }
    return out.str();
}

void save_libsvm(const Dataset& data, const std::string& path)
{
    std::ofstream f(path);
    if (!f)
        throw Error("cannot write dataset file " + path);
    f << serialize_libsvm(data);
    if (!f)
        throw Error("I/O failure while writing " + path);
}

Dataset synthetic_logistic_dataset(int rows, int cols, unsigned long long seed,
                                   int nnz_per_row)
{
    std::mt19937_64 rng(seed);
    auto next_uniform = [&rng]() {
        // 53-bit mantissa uniform in [0,1); avoids distribution objects so the
        // stream is pinned by the engine alone
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    auto next_index = [&](int bound) {
        return static_cast<int>(rng() % static_cast<unsigned long long>(bound));
    };

    Dataset out;
    out.n_features = cols;
    std::vector<double> truth(cols);
    for (int j = 0; j < cols; ++j)
        truth[j] = 2.0 * next_uniform() - 1.0;

    const int k = std::min(nnz_per_row, cols - 1);
    std::vector<double> margins;
    for (int i = 0; i < rows; ++i) {
        std::set<int> picked;
        picked.insert(cols - 1);  // bias feature present in every row
        while (static_cast<int>(picked.size()) < k + 1)
            picked.insert(next_index(cols - 1));
        SparseRow row;
        double margin = 0.0;
        for (int idx : picked) {
            row.emplace_back(idx, 1.0);
            margin += truth[idx];
        }
        margin += 0.5 * (2.0 * next_uniform() - 1.0);
        out.rows.push_back(std::move(row));
        margins.push_back(margin);
    }
    // center the margins so the shared bias feature cannot collapse the
    // dataset into a single class
    double mean = 0.0;
    for (double m : margins)
        mean += m;
    mean /= rows > 0 ? rows : 1;
    for (double m : margins)
        out.labels.push_back(m >= mean ? 1 : -1);
    return out;
}

}  // namespace atr
