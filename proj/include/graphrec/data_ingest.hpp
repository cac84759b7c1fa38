#pragma once

#include <filesystem>
#include <unordered_set>
#include <vector>

#include "graphrec/types.hpp"

namespace graphrec {

/// Assigns every rating record to exactly one fold. Fold sizes differ by at
/// most one; assignment is a deterministic function of the seed.
struct FoldPlan {
    int n_folds = 0;
    unsigned seed = 0;
    std::vector<int> assignments;  // rating index -> fold index

    std::size_t fold_size(int fold) const;
};

struct ColdStartSplit {
    RatingTable train;               // same user/item universe, held users' ratings removed
    std::vector<int> held_users;     // user indices, sorted
    std::vector<RatingRecord> test;  // all ratings of held users
};

/// Loads the 100K layout: tab-separated `u.data`, pipe-separated `u.user` and
/// `u.item` (19 trailing genre flags, first flag is "unknown").
Dataset load_movielens_100k(const std::filesystem::path& root);

/// Loads the 1M layout: `::`-separated ratings.dat/users.dat/movies.dat with
/// pipe-separated genre token lists (18 genres). Ages arrive as the pre-binned
/// codes {1,18,25,35,45,50,56} and occupations as integer codes 0-20; both are
/// kept verbatim (occupation codes as decimal strings).
Dataset load_movielens_1m(const std::filesystem::path& root);

/// |ratings| / (n_users * n_items). Throws on a zero denominator.
double density(std::size_t n_ratings, int n_users, int n_items);

FoldPlan kfold_split(const RatingTable& ratings, int n_folds, unsigned seed);

/// Removes floor(user_fraction * n_users) randomly chosen users' ratings from
/// the training table. Held users keep their profiles and stay in the user
/// universe; their ratings form the test set.
ColdStartSplit coldstart_mask(const RatingTable& ratings, double user_fraction, unsigned seed);

/// Training table for one fold: all records not assigned to `test_fold`.
RatingTable fold_train_table(const RatingTable& ratings, const FoldPlan& plan, int test_fold);
std::vector<RatingRecord> fold_test_records(const RatingTable& ratings, const FoldPlan& plan,
                                            int test_fold);

}  // namespace graphrec
