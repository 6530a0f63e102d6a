#pragma once

// Roof pitch estimation: mean pitch as a linear function of latitude, and a
// random-forest regressor for the normalized pitch (pitch - mean) / mean.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "solarpot/error.hpp"

namespace solarpot::pitch {

inline constexpr const char* kUnknown = "unknown";

/// Structured building attributes consumed by the forest. Missing numerics are
/// imputed with the training-set median stored in the model.
struct FeatureVector {
    std::string roof_material = kUnknown;
    std::string roof_type = kUnknown;
    std::optional<double> building_height_m;
    std::string roof_shape = kUnknown;
    std::optional<double> footprint_area_m2;
};

struct LinearPitchModel {
    double slope = 0.0;      // degrees of pitch per degree of latitude
    double intercept = 0.0;  // degrees

    double mean_pitch(double latitude_deg) const { return intercept + slope * latitude_deg; }
};

struct MeanPitchFit {
    LinearPitchModel model;
    double r2 = 0.0;
    std::optional<double> loo_r2;
    std::optional<double> loo_mae;
};

struct PitchTrainingRow {
    FeatureVector features;
    double latitude_deg = 0.0;
    double pitch_deg = 0.0;
};

namespace detail {

inline LinearPitchModel ols(std::span<const std::pair<double, double>> pts) {
    const double n = static_cast<double>(pts.size());
    double mx = 0, my = 0;
    for (auto [x, y] : pts) mx += x, my += y;
    mx /= n, my /= n;
    double sxx = 0, sxy = 0;
    for (auto [x, y] : pts) sxx += (x - mx) * (x - mx), sxy += (x - mx) * (y - my);
    if (!(sxx > 1e-12 * std::max(1.0, mx * mx))) throw TrainingError("fit_mean_pitch: latitudes are all identical");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

}  // namespace detail

/// Ordinary least squares of city mean pitch against latitude. With three or
/// more points it also reports leave-one-out R^2 and MAE.
inline MeanPitchFit fit_mean_pitch(std::span<const std::pair<double, double>> city_means) {
    if (city_means.size() < 2) throw TrainingError("fit_mean_pitch: need at least 2 points");
    MeanPitchFit fit;
    fit.model = detail::ols(city_means);

    double my = 0;
    for (auto [x, y] : city_means) my += y;
    my /= static_cast<double>(city_means.size());
    double ss_tot = 0, ss_res = 0;
    for (auto [x, y] : city_means) {
        ss_tot += (y - my) * (y - my);
        const double r = y - fit.model.mean_pitch(x);
        ss_res += r * r;
    }
    fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;

    if (city_means.size() >= 3) {
        double loo_res = 0, loo_abs = 0;
        bool ok = true;
        for (std::size_t k = 0; k < city_means.size() && ok; ++k) {
            std::vector<std::pair<double, double>> rest;
            for (std::size_t i = 0; i < city_means.size(); ++i)
                if (i != k) rest.push_back(city_means[i]);
            try {
                const LinearPitchModel m = detail::ols(rest);
                const double r = city_means[k].second - m.mean_pitch(city_means[k].first);
                loo_res += r * r;
                loo_abs += std::abs(r);
            } catch (const TrainingError&) {
                ok = false;
            }
        }
        if (ok) {
            fit.loo_r2 = ss_tot > 0 ? 1.0 - loo_res / ss_tot : 1.0;
            fit.loo_mae = loo_abs / static_cast<double>(city_means.size());
        }
    }
    return fit;
}

inline double normalized_pitch(double pitch_deg, double mean_pitch_deg) {
    if (!(mean_pitch_deg > 0.0)) throw ArgumentError("normalized_pitch: mean pitch must be > 0");
    return (pitch_deg - mean_pitch_deg) / mean_pitch_deg;
}

// ---------------------------------------------------------------------------
// Regression forest over a dense table of numeric and categorical columns.
// Categorical columns hold level codes and split one-vs-rest.

enum class ColumnKind { numeric, categorical };

struct Table {
    std::size_t n_rows = 0;
    std::vector<ColumnKind> kinds;
    std::vector<double> values;  // row-major, n_rows * kinds.size()

    std::size_t n_features() const { return kinds.size(); }
    double at(std::size_t row, std::size_t col) const { return values[row * kinds.size() + col]; }
    std::span<const double> row(std::size_t r) const { return {values.data() + r * kinds.size(), kinds.size()}; }
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;  // numeric: go left when x <= threshold; categorical: left when x == threshold
    int left = -1;
    int right = -1;
    double value = 0.0;  // mean target of the training rows reaching the node
    int count = 0;       // bootstrap rows reaching the node
};

struct RegressionTree {
    std::vector<TreeNode> nodes;

    double predict(std::span<const double> x, std::span<const ColumnKind> kinds) const {
        int i = 0;
        while (nodes[i].feature >= 0) {
            const TreeNode& n = nodes[i];
            const double v = x[n.feature];
            const bool go_left = kinds[n.feature] == ColumnKind::categorical ? v == n.threshold : v <= n.threshold;
            i = go_left ? n.left : n.right;
        }
        return nodes[i].value;
    }
};

struct ForestParams {
    int n_trees = 100;
    int max_depth = 15;
    int min_leaf = 5;
    std::uint64_t seed = 42;
    unsigned threads = 1;  // 0 = hardware concurrency
};

struct Forest {
    std::vector<RegressionTree> trees;
    std::vector<ColumnKind> kinds;
    int n_trees = 100;
    int max_depth = 15;
    int min_leaf = 5;
    std::uint64_t seed = 42;

    /// Arithmetic mean of the per-tree predictions, summed in tree order.
    double predict(std::span<const double> x) const {
        double acc = 0.0;
        for (const RegressionTree& t : trees) acc += t.predict(x, kinds);
        return acc / static_cast<double>(trees.size());
    }
};

namespace detail {

class TreeBuilder {
public:
    TreeBuilder(const Table& table, std::span<const double> y, const ForestParams& params, std::uint64_t seed)
        : table_(table), y_(y), params_(params), rng_(seed) {}

    RegressionTree build() {
        std::vector<std::size_t> rows(table_.n_rows);
        std::uniform_int_distribution<std::size_t> pick(0, table_.n_rows - 1);
        for (std::size_t& r : rows) r = pick(rng_);
        mtry_ = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(table_.n_features()))));
        grow(rows, 0);
        return std::move(tree_);
    }

private:
    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double gain = 0.0;
    };

    int grow(std::vector<std::size_t>& rows, int depth) {
        const int id = static_cast<int>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        double sum = 0, sum2 = 0;
        for (std::size_t r : rows) sum += y_[r], sum2 += y_[r] * y_[r];
        const double n = static_cast<double>(rows.size());
        tree_.nodes[id].value = sum / n;
        tree_.nodes[id].count = static_cast<int>(rows.size());
        const double sse = sum2 - sum * sum / n;

        const auto min_leaf = static_cast<std::size_t>(params_.min_leaf);
        if (depth >= params_.max_depth || rows.size() < 2 * min_leaf || sse <= 1e-12 * std::max(1.0, n)) return id;

        const Split split = best_split(rows, sse);
        if (split.feature < 0) return id;

        std::vector<std::size_t> left, right;
        const bool cat = table_.kinds[split.feature] == ColumnKind::categorical;
        for (std::size_t r : rows) {
            const double v = table_.at(r, split.feature);
            ((cat ? v == split.threshold : v <= split.threshold) ? left : right).push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();
        tree_.nodes[id].feature = split.feature;
        tree_.nodes[id].threshold = split.threshold;
        const int l = grow(left, depth + 1);
        tree_.nodes[id].left = l;
        const int r = grow(right, depth + 1);
        tree_.nodes[id].right = r;
        return id;
    }

    Split best_split(const std::vector<std::size_t>& rows, double parent_sse) {
        // partial Fisher-Yates draw of mtry distinct features
        std::vector<std::size_t> features(table_.n_features());
        std::iota(features.begin(), features.end(), std::size_t{0});
        for (std::size_t i = 0; i < mtry_; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, features.size() - 1);
            std::swap(features[i], features[pick(rng_)]);
        }
        features.resize(mtry_);
        std::sort(features.begin(), features.end());

        Split best;
        for (std::size_t f : features) {
            if (table_.kinds[f] == ColumnKind::numeric)
                numeric_split(rows, f, parent_sse, best);
            else
                categorical_split(rows, f, parent_sse, best);
        }
        return best;
    }

    void consider(Split& best, std::size_t f, double threshold, double gain) {
        if (gain > best.gain + 1e-12) best = {static_cast<int>(f), threshold, gain};
    }

    void numeric_split(const std::vector<std::size_t>& rows, std::size_t f, double parent_sse, Split& best) {
        std::vector<std::pair<double, double>> vy;
        vy.reserve(rows.size());
        for (std::size_t r : rows) vy.emplace_back(table_.at(r, f), y_[r]);
        std::sort(vy.begin(), vy.end());
        double total = 0, total2 = 0;
        for (auto [v, y] : vy) total += y, total2 += y * y;
        const auto n = vy.size();
        const auto min_leaf = static_cast<std::size_t>(params_.min_leaf);
        double ls = 0, ls2 = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            ls += vy[i].second;
            ls2 += vy[i].second * vy[i].second;
            const std::size_t nl = i + 1, nr = n - nl;
            if (vy[i].first == vy[i + 1].first || nl < min_leaf || nr < min_leaf) continue;
            const double rs = total - ls, rs2 = total2 - ls2;
            const double sse = (ls2 - ls * ls / nl) + (rs2 - rs * rs / nr);
            consider(best, f, (vy[i].first + vy[i + 1].first) / 2.0, parent_sse - sse);
        }
    }

    void categorical_split(const std::vector<std::size_t>& rows, std::size_t f, double parent_sse, Split& best) {
        std::map<double, std::array<double, 3>> levels;  // code -> count, sum, sum2
        double total = 0, total2 = 0;
        for (std::size_t r : rows) {
            auto& acc = levels[table_.at(r, f)];
            acc[0] += 1, acc[1] += y_[r], acc[2] += y_[r] * y_[r];
            total += y_[r], total2 += y_[r] * y_[r];
        }
        const double n = static_cast<double>(rows.size());
        for (const auto& [code, acc] : levels) {
            const double nl = acc[0], nr = n - nl;
            if (nl < params_.min_leaf || nr < params_.min_leaf) continue;
            const double rs = total - acc[1], rs2 = total2 - acc[2];
            const double sse = (acc[2] - acc[1] * acc[1] / nl) + (rs2 - rs * rs / nr);
            consider(best, f, code, parent_sse - sse);
        }
    }

    const Table& table_;
    std::span<const double> y_;
    const ForestParams& params_;
    std::mt19937_64 rng_;
    std::size_t mtry_ = 1;
    RegressionTree tree_;
};

}  // namespace detail

/// Bootstrap-aggregated regression trees. Tree i draws from its own generator
/// seeded with seed + i, so results do not depend on the thread count.
inline Forest train_forest(const Table& table, std::span<const double> targets, const ForestParams& params) {
    if (table.n_rows == 0 || targets.size() != table.n_rows) throw TrainingError("train_forest: empty training data");
    if (params.n_trees < 1 || params.max_depth < 0 || params.min_leaf < 1)
        throw ArgumentError("train_forest: invalid parameters");
    for (double t : targets)
        if (!std::isfinite(t)) throw TrainingError("train_forest: non-finite target");

    Forest forest;
    forest.kinds = table.kinds;
    forest.n_trees = params.n_trees;
    forest.max_depth = params.max_depth;
    forest.min_leaf = params.min_leaf;
    forest.seed = params.seed;
    forest.trees.resize(static_cast<std::size_t>(params.n_trees));

    unsigned threads = params.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : params.threads;
    threads = std::min<unsigned>(threads, static_cast<unsigned>(params.n_trees));
    auto work = [&](unsigned w) {
        for (std::size_t i = w; i < forest.trees.size(); i += threads)
            forest.trees[i] = detail::TreeBuilder(table, targets, params, params.seed + i).build();
    };
    if (threads <= 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    }
    return forest;
}

// ---------------------------------------------------------------------------
// FeatureVector encoding and the combined pitch model.

struct FeatureEncoder {
    static constexpr std::size_t kFeatures = 5;
    std::array<std::vector<std::string>, 3> vocabulary;  // roof_material, roof_type, roof_shape
    double median_height_m = 0.0;
    double median_footprint_m2 = 0.0;

    static std::vector<ColumnKind> kinds() {
        return {ColumnKind::categorical, ColumnKind::categorical, ColumnKind::numeric, ColumnKind::categorical,
                ColumnKind::numeric};
    }

    static FeatureEncoder fit(std::span<const FeatureVector> rows) {
        FeatureEncoder enc;
        std::array<std::vector<std::string>, 3> seen;
        std::vector<double> heights, areas;
        for (const FeatureVector& f : rows) {
            seen[0].push_back(f.roof_material);
            seen[1].push_back(f.roof_type);
            seen[2].push_back(f.roof_shape);
            if (f.building_height_m) heights.push_back(*f.building_height_m);
            if (f.footprint_area_m2) areas.push_back(*f.footprint_area_m2);
        }
        for (std::size_t k = 0; k < 3; ++k) {
            std::vector<std::string>& v = seen[k];
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
            enc.vocabulary[k].push_back(kUnknown);
            for (std::string& s : v)
                if (s != kUnknown && !s.empty()) enc.vocabulary[k].push_back(std::move(s));
        }
        enc.median_height_m = median(heights);
        enc.median_footprint_m2 = median(areas);
        return enc;
    }

    std::array<double, kFeatures> encode(const FeatureVector& f) const {
        return {code(0, f.roof_material), code(1, f.roof_type), f.building_height_m.value_or(median_height_m),
                code(2, f.roof_shape), f.footprint_area_m2.value_or(median_footprint_m2)};
    }

    Table encode_all(std::span<const FeatureVector> rows) const {
        Table t;
        t.n_rows = rows.size();
        t.kinds = kinds();
        t.values.reserve(rows.size() * kFeatures);
        for (const FeatureVector& f : rows)
            for (double v : encode(f)) t.values.push_back(v);
        return t;
    }

private:
    double code(std::size_t k, const std::string& level) const {
        const auto& v = vocabulary[k];
        const auto it = std::find(v.begin(), v.end(), level);
        return it == v.end() ? 0.0 : static_cast<double>(it - v.begin());
    }

    static double median(std::vector<double> v) {
        if (v.empty()) return 0.0;
        std::sort(v.begin(), v.end());
        const std::size_t m = v.size() / 2;
        return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2.0;
    }
};

struct PitchModel {
    LinearPitchModel linear;
    FeatureEncoder encoder;
    Forest forest;
};

inline constexpr double kMaxPredictedPitchDeg = 75.0;

/// Inverse of normalized_pitch, clamped to [0, 75].
inline double combine_pitch(double mean_pitch_deg, double normalized) {
    return std::clamp(mean_pitch_deg * (1.0 + normalized), 0.0, kMaxPredictedPitchDeg);
}

inline double predict_pitch(const FeatureVector& f, double latitude_deg, const PitchModel& model) {
    const auto x = model.encoder.encode(f);
    return combine_pitch(model.linear.mean_pitch(latitude_deg), model.forest.predict(x));
}

/// Fits the latitude line on per-latitude mean pitches, then the forest on
/// normalized pitch against that line.
inline PitchModel train_pitch_model(std::span<const PitchTrainingRow> rows, const ForestParams& params) {
    if (rows.size() < 20) throw TrainingError("train_pitch_model: need at least 20 rows");
    std::map<double, std::pair<double, int>> by_lat;
    for (const PitchTrainingRow& r : rows) {
        if (!(r.pitch_deg >= 0.0 && r.pitch_deg < 90.0)) throw RangeError("training pitch outside [0, 90)");
        auto& acc = by_lat[r.latitude_deg];
        acc.first += r.pitch_deg;
        acc.second += 1;
    }
    std::vector<std::pair<double, double>> means;
    for (const auto& [lat, acc] : by_lat) means.emplace_back(lat, acc.first / acc.second);

    PitchModel model;
    model.linear = fit_mean_pitch(means).model;
    std::vector<FeatureVector> features;
    std::vector<double> targets;
    for (const PitchTrainingRow& r : rows) {
        features.push_back(r.features);
        targets.push_back(normalized_pitch(r.pitch_deg, model.linear.mean_pitch(r.latitude_deg)));
    }
    model.encoder = FeatureEncoder::fit(features);
    model.forest = train_forest(model.encoder.encode_all(features), targets, params);
    return model;
}

// ---------------------------------------------------------------------------
// Persistence.

inline nlohmann::json to_json(const PitchModel& m) {
    using nlohmann::json;
    json trees = json::array();
    for (const RegressionTree& t : m.forest.trees) {
        json feature = json::array(), threshold = json::array(), left = json::array(), right = json::array(),
             value = json::array(), count = json::array();
        for (const TreeNode& n : t.nodes) {
            feature.push_back(n.feature);
            threshold.push_back(n.threshold);
            left.push_back(n.left);
            right.push_back(n.right);
            value.push_back(n.value);
            count.push_back(n.count);
        }
        trees.push_back({{"feature", feature},
                         {"threshold", threshold},
                         {"left", left},
                         {"right", right},
                         {"value", value},
                         {"count", count}});
    }
    return {
        {"format", "solarpot-pitch-model"},
        {"version", 1},
        {"linear", {{"slope", m.linear.slope}, {"intercept", m.linear.intercept}}},
        {"vocabulary",
         {{"roof_material", m.encoder.vocabulary[0]}, {"roof_type", m.encoder.vocabulary[1]},
          {"roof_shape", m.encoder.vocabulary[2]}}},
        {"numeric_medians",
         {{"building_height_m", m.encoder.median_height_m}, {"footprint_area_m2", m.encoder.median_footprint_m2}}},
        {"forest",
         {{"n_trees", m.forest.n_trees},
          {"max_depth", m.forest.max_depth},
          {"min_leaf", m.forest.min_leaf},
          {"seed", m.forest.seed},
          {"trees", trees}}},
    };
}

inline PitchModel pitch_model_from_json(const nlohmann::json& j) {
    try {
        if (j.at("format") != "solarpot-pitch-model") throw FormatError("not a pitch model document");
        PitchModel m;
        m.linear.slope = j.at("linear").at("slope").get<double>();
        m.linear.intercept = j.at("linear").at("intercept").get<double>();
        const auto& voc = j.at("vocabulary");
        m.encoder.vocabulary[0] = voc.at("roof_material").get<std::vector<std::string>>();
        m.encoder.vocabulary[1] = voc.at("roof_type").get<std::vector<std::string>>();
        m.encoder.vocabulary[2] = voc.at("roof_shape").get<std::vector<std::string>>();
        m.encoder.median_height_m = j.at("numeric_medians").at("building_height_m").get<double>();
        m.encoder.median_footprint_m2 = j.at("numeric_medians").at("footprint_area_m2").get<double>();
        const auto& f = j.at("forest");
        m.forest.kinds = FeatureEncoder::kinds();
        m.forest.n_trees = f.at("n_trees").get<int>();
        m.forest.max_depth = f.at("max_depth").get<int>();
        m.forest.min_leaf = f.at("min_leaf").get<int>();
        m.forest.seed = f.at("seed").get<std::uint64_t>();
        for (const auto& t : f.at("trees")) {
            RegressionTree tree;
            const auto feature = t.at("feature").get<std::vector<int>>();
            const auto threshold = t.at("threshold").get<std::vector<double>>();
            const auto left = t.at("left").get<std::vector<int>>();
            const auto right = t.at("right").get<std::vector<int>>();
            const auto value = t.at("value").get<std::vector<double>>();
            const auto count = t.at("count").get<std::vector<int>>();
            const std::size_t n = feature.size();
            if (threshold.size() != n || left.size() != n || right.size() != n || value.size() != n ||
                count.size() != n || n == 0)
                throw FormatError("pitch model: ragged tree arrays");
            for (std::size_t i = 0; i < n; ++i) {
                const bool leaf = feature[i] < 0;
                if (!leaf && (feature[i] >= static_cast<int>(FeatureEncoder::kFeatures) || left[i] <= 0 ||
                              right[i] <= 0 || left[i] >= static_cast<int>(n) || right[i] >= static_cast<int>(n)))
                    throw FormatError("pitch model: node index out of range");
                tree.nodes.push_back({feature[i], threshold[i], left[i], right[i], value[i], count[i]});
            }
            m.forest.trees.push_back(std::move(tree));
        }
        if (m.forest.trees.empty()) throw FormatError("pitch model: forest has no trees");
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("pitch model: ") + e.what());
    }
}

inline void save_pitch_model(const PitchModel& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << to_json(m).dump(1) << '\n';
}

inline PitchModel load_pitch_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open pitch model " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
    return pitch_model_from_json(j);
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline std::optional<double> parse_optional_number(const std::string& s, const std::string& what, std::size_t line) {
    if (s.empty()) return std::nullopt;
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw FormatError("line " + std::to_string(line) + ": bad " + what + " '" + s + "'");
    }
}

}  // namespace detail

inline constexpr const char* kTrainingCsvHeader =
    "latitude_deg,roof_material,roof_type,building_height_m,roof_shape,footprint_area_m2,pitch_deg";

/// Reads pitch training rows. Empty categorical cells become "unknown", empty
/// numeric feature cells are left missing.
inline std::vector<PitchTrainingRow> load_training_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open training data " + path);
    std::string line;
    if (!std::getline(in, line)) throw FormatError(path + ": empty file");
    while (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kTrainingCsvHeader) throw FormatError(path + ": unexpected header '" + line + "'");
    std::vector<PitchTrainingRow> rows;
    std::size_t n = 1;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty() || line == "\r") continue;
        const auto cells = detail::split_csv_line(line);
        if (cells.size() != 7) throw FormatError(path + ": line " + std::to_string(n) + " has wrong field count");
        PitchTrainingRow r;
        const auto lat = detail::parse_optional_number(cells[0], "latitude_deg", n);
        const auto pitch = detail::parse_optional_number(cells[6], "pitch_deg", n);
        if (!lat || !pitch) throw FormatError(path + ": line " + std::to_string(n) + " lacks latitude or pitch");
        r.latitude_deg = *lat;
        r.pitch_deg = *pitch;
        r.features.roof_material = cells[1].empty() ? kUnknown : cells[1];
        r.features.roof_type = cells[2].empty() ? kUnknown : cells[2];
        r.features.building_height_m = detail::parse_optional_number(cells[3], "building_height_m", n);
        r.features.roof_shape = cells[4].empty() ? kUnknown : cells[4];
        r.features.footprint_area_m2 = detail::parse_optional_number(cells[5], "footprint_area_m2", n);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace solarpot::pitch
