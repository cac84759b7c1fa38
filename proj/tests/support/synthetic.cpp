#include "synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "graphrec/io.hpp"

namespace testsupport {

using namespace graphrec;

namespace {

// One demographic archetype per group; occupations use the 100K vocabulary.
struct Archetype {
    int age_lo, age_hi;
    Gender gender;
    const char* occupation;
};

// One age bin per group so the demographic one-hots identify it exactly.
const Archetype kArchetypes[] = {
    {18, 24, Gender::M, "student"},
    {25, 34, Gender::F, "programmer"},
    {35, 44, Gender::M, "executive"},
    {56, 70, Gender::F, "retired"},
    {45, 49, Gender::M, "artist"},
    {50, 55, Gender::F, "educator"},
};

}  // namespace

Dataset make_synthetic(const SyntheticSpec& spec) {
    if (spec.n_groups < 1 || spec.n_groups > 6) throw std::invalid_argument("n_groups in [1,6]");
    std::mt19937 rng(spec.seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> any_rating(1, 5);

    const int n_genres = spec.n_groups + 2;
    std::vector<std::string> genre_names;
    for (int g = 0; g < n_genres; ++g) genre_names.push_back("genre" + std::to_string(g));

    std::vector<ItemProfile> items;
    std::uniform_int_distribution<int> genre_pick(0, n_genres - 1);
    for (int i = 0; i < spec.n_items; ++i) {
        ItemProfile it;
        it.item_id = i + 1;
        it.title = "item " + std::to_string(i + 1);
        it.genre_mask = 1u << genre_pick(rng);
        if (coin(rng) < 0.3) it.genre_mask |= 1u << genre_pick(rng);
        items.push_back(std::move(it));
    }

    std::vector<UserProfile> users;
    std::vector<int> group_of(spec.n_users);
    for (int u = 0; u < spec.n_users; ++u) {
        const int group = u % spec.n_groups;
        group_of[u] = group;
        const Archetype& a = kArchetypes[group];
        UserProfile p;
        p.user_id = u + 1;
        p.age = std::uniform_int_distribution<int>(a.age_lo, a.age_hi)(rng);
        p.gender = a.gender;
        p.occupation = a.occupation;
        p.zip_code = std::to_string(10000 + (u * 937) % 89999);
        users.push_back(std::move(p));
    }

    // Group g loves genre g and dislikes genre g+1; neutral elsewhere.
    auto preferred_rating = [&](int group, std::uint32_t genre_mask) {
        if (genre_mask & (1u << group)) return 5;
        if (genre_mask & (1u << ((group + 1) % n_genres))) return 1;
        return 3;
    };

    std::vector<RatingRecord> records;
    std::int64_t ts = 880000000;
    for (int u = 0; u < spec.n_users; ++u) {
        for (int i = 0; i < spec.n_items; ++i) {
            if (coin(rng) >= spec.rate_prob) continue;
            int rating = preferred_rating(group_of[u], items[i].genre_mask);
            if (coin(rng) < spec.flip_prob) rating = any_rating(rng);
            records.push_back({u + 1, i + 1, rating, ts++});
        }
    }

    std::vector<int> user_ids(spec.n_users), item_ids(spec.n_items);
    for (int u = 0; u < spec.n_users; ++u) user_ids[u] = u + 1;
    for (int i = 0; i < spec.n_items; ++i) item_ids[i] = i + 1;

    Dataset ds;
    ds.variant = DatasetVariant::ML100K;
    ds.ratings = RatingTable(std::move(records), std::move(user_ids), std::move(item_ids));
    ds.users = std::move(users);
    ds.items = std::move(items);
    ds.genre_names = std::move(genre_names);
    return ds;
}

void write_100k_format(const Dataset& ds, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ostringstream data, user, item;
    for (const RatingRecord& r : ds.ratings.records()) {
        data << r.user_id << '\t' << r.item_id << '\t' << r.rating << '\t' << r.timestamp << '\n';
    }
    for (const UserProfile& u : ds.users) {
        user << u.user_id << '|' << u.age << '|' << (u.gender == Gender::M ? 'M' : 'F') << '|'
             << u.occupation << '|' << u.zip_code << '\n';
    }
    for (const ItemProfile& it : ds.items) {
        item << it.item_id << '|' << it.title << "|01-Jan-1995||http://example.invalid";
        for (int g = 0; g < 19; ++g) {
            item << '|' << ((g < static_cast<int>(ds.genre_names.size()) &&
                             (it.genre_mask & (1u << g)))
                                ? 1
                                : 0);
        }
        item << '\n';
    }
    graphrec::io::write_file(dir / "u.data", data.str());
    graphrec::io::write_file(dir / "u.user", user.str());
    graphrec::io::write_file(dir / "u.item", item.str());
}

}  // namespace testsupport
