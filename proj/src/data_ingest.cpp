#include "graphrec/data_ingest.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "graphrec/io.hpp"

namespace graphrec {

namespace {

const char* k100kGenres[19] = {
    "unknown",     "Action",  "Adventure", "Animation", "Children's", "Comedy", "Crime",
    "Documentary", "Drama",   "Fantasy",   "Film-Noir", "Horror",     "Musical", "Mystery",
    "Romance",     "Sci-Fi",  "Thriller",  "War",       "Western"};

const char* k1mGenres[18] = {
    "Action",    "Adventure", "Animation", "Children's", "Comedy",  "Crime",
    "Documentary", "Drama",   "Fantasy",   "Film-Noir",  "Horror",  "Musical",
    "Mystery",   "Romance",   "Sci-Fi",    "Thriller",   "War",     "Western"};

std::string line_ctx(const std::filesystem::path& file, std::size_t line_no) {
    return file.filename().string() + " line " + std::to_string(line_no);
}

Gender parse_gender(std::string_view field, const std::string& ctx) {
    if (field == "M") return Gender::M;
    if (field == "F") return Gender::F;
    throw std::runtime_error(ctx + ": bad gender '" + std::string(field) + "'");
}

int checked_rating(int rating, const std::string& ctx) {
    if (rating < 1 || rating > 5) {
        throw std::runtime_error(ctx + ": rating outside [1,5]: " + std::to_string(rating));
    }
    return rating;
}

Dataset assemble(DatasetVariant variant, std::vector<RatingRecord> records,
                 std::vector<UserProfile> users, std::vector<ItemProfile> items,
                 std::vector<std::string> genre_names) {
    std::sort(users.begin(), users.end(),
              [](const UserProfile& a, const UserProfile& b) { return a.user_id < b.user_id; });
    std::sort(items.begin(), items.end(),
              [](const ItemProfile& a, const ItemProfile& b) { return a.item_id < b.item_id; });
    std::vector<int> user_ids(users.size()), item_ids(items.size());
    for (std::size_t i = 0; i < users.size(); ++i) user_ids[i] = users[i].user_id;
    for (std::size_t i = 0; i < items.size(); ++i) item_ids[i] = items[i].item_id;

    Dataset ds;
    ds.variant = variant;
    ds.ratings = RatingTable(std::move(records), std::move(user_ids), std::move(item_ids));
    ds.users = std::move(users);
    ds.items = std::move(items);
    ds.genre_names = std::move(genre_names);
    return ds;
}

}  // namespace

Dataset load_movielens_100k(const std::filesystem::path& root) {
    const auto users_file = root / "u.user";
    const auto items_file = root / "u.item";
    const auto data_file = root / "u.data";

    std::vector<UserProfile> users;
    {
        auto lines = io::read_lines(users_file);
        std::size_t n = 0;
        for (const std::string& line : lines) {
            ++n;
            if (line.empty()) continue;
            auto f = io::split(line, '|');
            std::string ctx = line_ctx(users_file, n);
            if (f.size() != 5) throw std::runtime_error(ctx + ": expected 5 fields");
            UserProfile u;
            u.user_id = io::parse_int(f[0], ctx);
            u.age = io::parse_int(f[1], ctx);
            if (u.age <= 0) throw std::runtime_error(ctx + ": non-positive age");
            u.gender = parse_gender(f[2], ctx);
            u.occupation = std::string(f[3]);
            u.zip_code = std::string(f[4]);
            users.push_back(std::move(u));
        }
    }

    std::vector<ItemProfile> items;
    {
        auto lines = io::read_lines(items_file);
        std::size_t n = 0;
        for (const std::string& line : lines) {
            ++n;
            if (line.empty()) continue;
            auto f = io::split(line, '|');
            std::string ctx = line_ctx(items_file, n);
            // id|title|release date|video release date|IMDb URL|19 genre flags
            if (f.size() != 24) throw std::runtime_error(ctx + ": expected 24 fields");
            ItemProfile it;
            it.item_id = io::parse_int(f[0], ctx);
            it.title = io::sanitize_utf8(f[1]);
            for (int g = 0; g < 19; ++g) {
                int flag = io::parse_int(f[5 + g], ctx);
                if (flag != 0 && flag != 1) throw std::runtime_error(ctx + ": genre flag not 0/1");
                if (flag) it.genre_mask |= 1u << g;
            }
            items.push_back(std::move(it));
        }
    }

    std::vector<RatingRecord> records;
    {
        auto lines = io::read_lines(data_file);
        std::size_t n = 0;
        for (const std::string& line : lines) {
            ++n;
            if (line.empty()) continue;
            auto f = io::split(line, '\t');
            std::string ctx = line_ctx(data_file, n);
            if (f.size() != 4) throw std::runtime_error(ctx + ": expected 4 fields");
            RatingRecord r;
            r.user_id = io::parse_int(f[0], ctx);
            r.item_id = io::parse_int(f[1], ctx);
            r.rating = checked_rating(io::parse_int(f[2], ctx), ctx);
            r.timestamp = io::parse_int64(f[3], ctx);
            records.push_back(r);
        }
    }

    return assemble(DatasetVariant::ML100K, std::move(records), std::move(users), std::move(items),
                    {std::begin(k100kGenres), std::end(k100kGenres)});
}

Dataset load_movielens_1m(const std::filesystem::path& root) {
    const auto users_file = root / "users.dat";
    const auto items_file = root / "movies.dat";
    const auto data_file = root / "ratings.dat";

    std::unordered_map<std::string_view, int> genre_index;
    for (int g = 0; g < 18; ++g) genre_index.emplace(k1mGenres[g], g);

    std::vector<UserProfile> users;
    {
        auto lines = io::read_lines(users_file);
        std::size_t n = 0;
        for (const std::string& line : lines) {
            ++n;
            if (line.empty()) continue;
            auto f = io::split_token(line, "::");
            std::string ctx = line_ctx(users_file, n);
            if (f.size() != 5) throw std::runtime_error(ctx + ": expected 5 fields");
            UserProfile u;
            u.user_id = io::parse_int(f[0], ctx);
            u.gender = parse_gender(f[1], ctx);
            u.age = io::parse_int(f[2], ctx);
            if (u.age <= 0) throw std::runtime_error(ctx + ": non-positive age");
            u.occupation = std::string(f[3]);  // integer code kept as token
            u.zip_code = std::string(f[4]);
            users.push_back(std::move(u));
        }
    }

    std::vector<ItemProfile> items;
    {
        auto lines = io::read_lines(items_file);
        std::size_t n = 0;
        for (const std::string& raw : lines) {
            ++n;
            if (raw.empty()) continue;
            std::string line = io::sanitize_utf8(raw);
            auto f = io::split_token(line, "::");
            std::string ctx = line_ctx(items_file, n);
            if (f.size() != 3) throw std::runtime_error(ctx + ": expected 3 fields");
            ItemProfile it;
            it.item_id = io::parse_int(f[0], ctx);
            it.title = std::string(f[1]);
            for (std::string_view tok : io::split(f[2], '|')) {
                if (tok.empty()) continue;
                auto g = genre_index.find(tok);
                if (g == genre_index.end()) {
                    throw std::runtime_error(ctx + ": unknown genre token '" + std::string(tok) + "'");
                }
                it.genre_mask |= 1u << g->second;
            }
            items.push_back(std::move(it));
        }
    }

    std::vector<RatingRecord> records;
    {
        auto lines = io::read_lines(data_file);
        std::size_t n = 0;
        for (const std::string& line : lines) {
            ++n;
            if (line.empty()) continue;
            auto f = io::split_token(line, "::");
            std::string ctx = line_ctx(data_file, n);
            if (f.size() != 4) throw std::runtime_error(ctx + ": expected 4 fields");
            RatingRecord r;
            r.user_id = io::parse_int(f[0], ctx);
            r.item_id = io::parse_int(f[1], ctx);
            r.rating = checked_rating(io::parse_int(f[2], ctx), ctx);
            r.timestamp = io::parse_int64(f[3], ctx);
            records.push_back(r);
        }
    }

    return assemble(DatasetVariant::ML1M, std::move(records), std::move(users), std::move(items),
                    {std::begin(k1mGenres), std::end(k1mGenres)});
}

double density(std::size_t n_ratings, int n_users, int n_items) {
    if (n_users <= 0 || n_items <= 0) {
        throw std::invalid_argument("density: zero denominator");
    }
    return static_cast<double>(n_ratings) /
           (static_cast<double>(n_users) * static_cast<double>(n_items));
}

std::size_t FoldPlan::fold_size(int fold) const {
    return static_cast<std::size_t>(std::count(assignments.begin(), assignments.end(), fold));
}

FoldPlan kfold_split(const RatingTable& ratings, int n_folds, unsigned seed) {
    if (n_folds < 2) throw std::invalid_argument("kfold_split: n_folds must be >= 2");
    const std::size_t n = ratings.size();
    if (static_cast<std::size_t>(n_folds) > n) {
        throw std::invalid_argument("kfold_split: more folds than ratings");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    FoldPlan plan;
    plan.n_folds = n_folds;
    plan.seed = seed;
    plan.assignments.assign(n, 0);
    // First (n mod n_folds) folds take one extra record.
    const std::size_t base = n / static_cast<std::size_t>(n_folds);
    const std::size_t extra = n % static_cast<std::size_t>(n_folds);
    std::size_t pos = 0;
    for (int fold = 0; fold < n_folds; ++fold) {
        std::size_t count = base + (static_cast<std::size_t>(fold) < extra ? 1 : 0);
        for (std::size_t k = 0; k < count; ++k) {
            plan.assignments[order[pos++]] = fold;
        }
    }
    return plan;
}

ColdStartSplit coldstart_mask(const RatingTable& ratings, double user_fraction, unsigned seed) {
    if (user_fraction < 0.0 || user_fraction > 1.0) {
        throw std::invalid_argument("coldstart_mask: fraction outside [0,1]");
    }
    const int n_users = ratings.n_users();
    const int n_held = static_cast<int>(user_fraction * n_users);

    std::vector<int> order(n_users);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<char> held(n_users, 0);
    ColdStartSplit split;
    split.held_users.assign(order.begin(), order.begin() + n_held);
    std::sort(split.held_users.begin(), split.held_users.end());
    for (int u : split.held_users) held[u] = 1;

    std::vector<RatingRecord> train_records;
    train_records.reserve(ratings.size());
    for (const RatingRecord& r : ratings.records()) {
        if (held[ratings.user_index(r.user_id)]) {
            split.test.push_back(r);
        } else {
            train_records.push_back(r);
        }
    }
    split.train = RatingTable(std::move(train_records), ratings.user_ids(), ratings.item_ids());
    return split;
}

RatingTable fold_train_table(const RatingTable& ratings, const FoldPlan& plan, int test_fold) {
    std::vector<RatingRecord> train;
    train.reserve(ratings.size());
    for (std::size_t i = 0; i < ratings.size(); ++i) {
        if (plan.assignments[i] != test_fold) train.push_back(ratings.records()[i]);
    }
    return RatingTable(std::move(train), ratings.user_ids(), ratings.item_ids());
}

std::vector<RatingRecord> fold_test_records(const RatingTable& ratings, const FoldPlan& plan,
                                            int test_fold) {
    std::vector<RatingRecord> test;
    for (std::size_t i = 0; i < ratings.size(); ++i) {
        if (plan.assignments[i] == test_fold) test.push_back(ratings.records()[i]);
    }
    return test;
}

}  // namespace graphrec
