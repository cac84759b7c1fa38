#include "graphrec/feature_builder.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "graphrec/io.hpp"

namespace graphrec {

std::vector<std::pair<std::string, std::string>> default_occupation_groups(DatasetVariant variant) {
    if (variant == DatasetVariant::ML100K) {
        return {
            {"administrator", "professional"}, {"doctor", "professional"},
            {"executive", "professional"},     {"healthcare", "professional"},
            {"lawyer", "professional"},        {"marketing", "professional"},
            {"salesman", "professional"},      {"engineer", "technical"},
            {"programmer", "technical"},       {"scientist", "technical"},
            {"technician", "technical"},       {"educator", "academic"},
            {"librarian", "academic"},         {"entertainment", "service"},
            {"homemaker", "service"},          {"retired", "service"},
            {"student", "student"},            {"artist", "other"},
            {"none", "other"},                 {"other", "other"},
            {"writer", "other"},
        };
    }
    // 1M occupation codes (kept as decimal strings).
    return {
        {"3", "professional"},  {"6", "professional"}, {"7", "professional"},
        {"11", "professional"}, {"14", "professional"}, {"12", "technical"},
        {"15", "technical"},    {"17", "technical"},   {"1", "academic"},
        {"5", "service"},       {"8", "service"},      {"9", "service"},
        {"13", "service"},      {"18", "service"},     {"10", "student_k12"},
        {"4", "student_college"}, {"0", "other"},      {"2", "other"},
        {"16", "other"},        {"19", "other"},       {"20", "other"},
    };
}

namespace {

int age_bin(int age, const std::vector<int>& edges) {
    int bin = 0;
    while (bin < static_cast<int>(edges.size()) && age >= edges[bin]) ++bin;
    return bin;
}

std::string age_bin_label(int bin, const std::vector<int>& edges) {
    if (edges.empty()) return "age_any";
    if (bin == 0) return "age_lt" + std::to_string(edges[0]);
    if (bin == static_cast<int>(edges.size())) return "age_ge" + std::to_string(edges.back());
    return "age_" + std::to_string(edges[bin - 1]) + "_" + std::to_string(edges[bin] - 1);
}

int location_group_size(LocationMode mode) {
    return mode == LocationMode::KnownFlag ? 2 : 11;
}

int location_bin(const std::string& zip, LocationMode mode) {
    const bool known = !zip.empty() && zip[0] >= '0' && zip[0] <= '9';
    if (mode == LocationMode::KnownFlag) return known ? 0 : 1;
    return known ? zip[0] - '0' : 10;
}

std::string location_label(int bin, LocationMode mode) {
    if (mode == LocationMode::KnownFlag) return bin == 0 ? "loc_known" : "loc_unknown";
    return bin < 10 ? "loc_region" + std::to_string(bin) : "loc_unknown";
}

}  // namespace

std::vector<double> quantile_edges(std::vector<double> values, int bins) {
    if (values.empty()) throw std::invalid_argument("quantile_edges: empty input");
    if (bins < 1) throw std::invalid_argument("quantile_edges: bins must be >= 1");
    std::sort(values.begin(), values.end());
    std::vector<double> edges;
    const std::size_t n = values.size();
    for (int k = 1; k < bins; ++k) {
        const double h = (static_cast<double>(n) - 1.0) * k / bins;
        const std::size_t lo = static_cast<std::size_t>(h);
        const double frac = h - static_cast<double>(lo);
        double q = values[lo];
        if (lo + 1 < n) q += frac * (values[lo + 1] - values[lo]);
        edges.push_back(q);
    }
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    // A fully constant column yields a single degenerate bin.
    if (edges.size() == 1 && edges[0] == values.front() && values.front() == values.back()) {
        edges.clear();
    }
    return edges;
}

int bin_of(double value, const std::vector<double>& edges) {
    int bin = 0;
    while (bin < static_cast<int>(edges.size()) && value > edges[bin]) ++bin;
    return bin;
}

CategorizationScheme fit_scheme(const GraphFeatureMatrix& graph_feats,
                                const std::vector<UserProfile>& users,
                                const SchemeConfig& config) {
    if (graph_feats.rows.empty() || users.empty()) {
        throw std::invalid_argument("fit_scheme: empty input");
    }
    CategorizationScheme scheme;
    scheme.config = config;

    for (int c = 0; c < GraphFeatureMatrix::kColumns; ++c) {
        std::vector<double> column(graph_feats.rows.size());
        for (std::size_t i = 0; i < graph_feats.rows.size(); ++i) column[i] = graph_feats.rows[i][c];
        scheme.graph_edges[c] = quantile_edges(std::move(column), config.graph_bins);
    }

    scheme.occupation_map = config.occupation_groups;
    if (scheme.occupation_map.empty()) {
        // No explicit grouping given: keep declared groups in map order below.
        scheme.occupation_map = default_occupation_groups(DatasetVariant::ML100K);
        // Heuristic: integer occupation tokens mean 1M-style codes.
        bool numeric = !users.empty();
        for (const UserProfile& u : users) {
            if (u.occupation.empty() ||
                u.occupation.find_first_not_of("0123456789") != std::string::npos) {
                numeric = false;
                break;
            }
        }
        if (numeric) scheme.occupation_map = default_occupation_groups(DatasetVariant::ML1M);
    }
    for (const auto& [token, group] : scheme.occupation_map) {
        if (std::find(scheme.occupation_group_names.begin(), scheme.occupation_group_names.end(),
                      group) == scheme.occupation_group_names.end()) {
            scheme.occupation_group_names.push_back(group);
        }
    }
    auto other = std::find(scheme.occupation_group_names.begin(),
                           scheme.occupation_group_names.end(), "other");
    if (other == scheme.occupation_group_names.end()) {
        scheme.occupation_group_names.push_back("other");
        other = std::prev(scheme.occupation_group_names.end());
    }
    scheme.other_group = static_cast<int>(other - scheme.occupation_group_names.begin());
    return scheme;
}

int CategorizationScheme::n_columns() const {
    int d = 0;
    for (const auto& edges : graph_edges) d += static_cast<int>(edges.size()) + 1;
    d += 2;                                                    // gender
    d += static_cast<int>(config.age_edges.size()) + 1;        // age bins
    d += static_cast<int>(occupation_group_names.size());      // occupation groups
    d += location_group_size(config.location);                 // location
    return d;
}

std::vector<std::string> CategorizationScheme::column_labels() const {
    std::vector<std::string> labels;
    labels.reserve(n_columns());
    for (int c = 0; c < GraphFeatureMatrix::kColumns; ++c) {
        const int bins = static_cast<int>(graph_edges[c].size()) + 1;
        for (int b = 0; b < bins; ++b) {
            labels.push_back(std::string(GraphFeatureMatrix::kColumnNames[c]) + "_bin" +
                             std::to_string(b));
        }
    }
    labels.push_back("gender_M");
    labels.push_back("gender_F");
    for (int b = 0; b <= static_cast<int>(config.age_edges.size()); ++b) {
        labels.push_back(age_bin_label(b, config.age_edges));
    }
    for (const std::string& g : occupation_group_names) labels.push_back("occ_" + g);
    for (int b = 0; b < location_group_size(config.location); ++b) {
        labels.push_back(location_label(b, config.location));
    }
    return labels;
}

std::string CategorizationScheme::serialize() const {
    std::ostringstream out;
    out << "columns = " << n_columns() << "\n";
    out << "graph_bins = " << config.graph_bins << "\n";
    for (int c = 0; c < GraphFeatureMatrix::kColumns; ++c) {
        out << "edges." << GraphFeatureMatrix::kColumnNames[c] << " =";
        for (double e : graph_edges[c]) out << ' ' << io::format_double(e);
        out << "\n";
    }
    out << "age_edges =";
    for (int e : config.age_edges) out << ' ' << e;
    out << "\n";
    out << "location = " << (config.location == LocationMode::KnownFlag ? "known_flag" : "digit10")
        << "\n";
    for (const auto& [token, group] : occupation_map) {
        out << "occupation." << token << " = " << group << "\n";
    }
    out << "occupation_groups =";
    for (const std::string& g : occupation_group_names) out << ' ' << g;
    out << "\n";
    return out.str();
}

namespace {

Eigen::RowVectorXd encode_one(const CategorizationScheme& scheme,
                              const std::array<double, GraphFeatureMatrix::kColumns>& graph_row,
                              const UserProfile& user) {
    Eigen::RowVectorXd out(scheme.n_columns());
    int col = 0;
    for (int c = 0; c < GraphFeatureMatrix::kColumns; ++c) {
        const auto& edges = scheme.graph_edges[c];
        const int bins = static_cast<int>(edges.size()) + 1;
        out.segment(col, bins).setZero();
        out[col + bin_of(graph_row[c], edges)] = 1.0;
        col += bins;
    }
    out.segment(col, 2).setZero();
    out[col + (user.gender == Gender::M ? 0 : 1)] = 1.0;
    col += 2;

    const int n_age = static_cast<int>(scheme.config.age_edges.size()) + 1;
    out.segment(col, n_age).setZero();
    out[col + age_bin(user.age, scheme.config.age_edges)] = 1.0;
    col += n_age;

    const int n_occ = static_cast<int>(scheme.occupation_group_names.size());
    out.segment(col, n_occ).setZero();
    int occ_group = scheme.other_group;
    for (const auto& [token, group] : scheme.occupation_map) {
        if (token == user.occupation) {
            occ_group = static_cast<int>(
                std::find(scheme.occupation_group_names.begin(),
                          scheme.occupation_group_names.end(), group) -
                scheme.occupation_group_names.begin());
            break;
        }
    }
    out[col + occ_group] = 1.0;
    col += n_occ;

    const int n_loc = location_group_size(scheme.config.location);
    out.segment(col, n_loc).setZero();
    out[col + location_bin(user.zip_code, scheme.config.location)] = 1.0;
    return out;
}

}  // namespace

RawFeatureMatrix encode_users(
    const CategorizationScheme& scheme,
    const std::vector<std::array<double, GraphFeatureMatrix::kColumns>>& graph_rows,
    const std::vector<UserProfile>& users) {
    if (graph_rows.size() != users.size()) {
        throw std::invalid_argument("encode_users: row/profile count mismatch");
    }
    RawFeatureMatrix m;
    m.values.resize(static_cast<Eigen::Index>(users.size()), scheme.n_columns());
    m.labels = scheme.column_labels();
    m.user_ids.resize(users.size());
    for (std::size_t i = 0; i < users.size(); ++i) {
        m.user_ids[i] = users[i].user_id;
        m.values.row(static_cast<Eigen::Index>(i)) = encode_one(scheme, graph_rows[i], users[i]);
    }
    return m;
}

RawFeatureMatrix encode_users(const CategorizationScheme& scheme,
                              const GraphFeatureMatrix& graph_feats,
                              const std::vector<UserProfile>& users) {
    return encode_users(scheme, graph_feats.rows, users);
}

Eigen::VectorXd encode_cold_user(const CategorizationScheme& scheme, const UserProfile& user) {
    return encode_one(scheme, {0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, user).transpose();
}

double sparsity(const RawFeatureMatrix& m) {
    if (m.values.size() == 0) throw std::invalid_argument("sparsity: empty matrix");
    const double zeros = static_cast<double>((m.values.array() == 0.0).count());
    return zeros / static_cast<double>(m.values.size());
}

RawFeatureMatrix RawFeatureMatrix::from_csv(const std::string& text) {
    const auto lines = io::split(text, '\n');
    if (lines.empty() || lines[0].substr(0, 8) != "user_id,") {
        throw std::runtime_error("feature csv: missing header");
    }
    RawFeatureMatrix m;
    for (std::string_view label : io::split(lines[0].substr(8), ',')) {
        m.labels.emplace_back(label);
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::string ctx = "feature csv line " + std::to_string(i + 1);
        const auto fields = io::split(lines[i], ',');
        if (fields.size() != m.labels.size() + 1) {
            throw std::runtime_error(ctx + ": wrong column count");
        }
        m.user_ids.push_back(io::parse_int(fields[0], ctx));
        std::vector<double> row;
        for (std::size_t j = 1; j < fields.size(); ++j) {
            row.push_back(io::parse_double(fields[j], ctx));
        }
        rows.push_back(std::move(row));
    }
    m.values.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(m.labels.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            m.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return m;
}

std::string RawFeatureMatrix::to_csv() const {
    std::ostringstream out;
    out << "user_id";
    for (const std::string& l : labels) out << ',' << l;
    out << '\n';
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        out << user_ids[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            out << ',' << static_cast<int>(values(i, j));
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace graphrec
