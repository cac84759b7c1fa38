#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace graphrec {

enum class Gender : std::uint8_t { M, F };

struct RatingRecord {
    int user_id = 0;
    int item_id = 0;
    int rating = 0;  // 1..5
    std::int64_t timestamp = 0;
};

struct UserProfile {
    int user_id = 0;
    int age = 0;
    Gender gender = Gender::M;
    std::string occupation;
    std::string zip_code;
};

struct ItemProfile {
    int item_id = 0;
    std::string title;
    std::uint32_t genre_mask = 0;  // bit k <=> genre_names[k]
};

/// Sparse user-item rating records over an explicit user/item id universe.
/// The universes come from the profile files, not from the ratings, so users
/// and items without ratings still exist (isolated graph nodes, genre-only
/// items). Immutable after construction.
class RatingTable {
public:
    RatingTable() = default;
    RatingTable(std::vector<RatingRecord> records,
                std::vector<int> user_ids,
                std::vector<int> item_ids);

    int n_users() const { return static_cast<int>(user_ids_.size()); }
    int n_items() const { return static_cast<int>(item_ids_.size()); }
    std::size_t size() const { return records_.size(); }

    const std::vector<RatingRecord>& records() const { return records_; }
    const std::vector<int>& user_ids() const { return user_ids_; }
    const std::vector<int>& item_ids() const { return item_ids_; }

    /// Throws on unknown id.
    int user_index(int user_id) const;
    int item_index(int item_id) const;
    int user_id_at(int idx) const { return user_ids_.at(idx); }
    int item_id_at(int idx) const { return item_ids_.at(idx); }

    /// (item index, rating) pairs of one user, sorted by item index.
    const std::vector<std::pair<int, int>>& ratings_of(int user_idx) const {
        return by_user_.at(user_idx);
    }

    double mean_rating() const;

    /// Tab-separated `user item rating timestamp` lines; loses no field.
    std::string to_tsv() const;
    static std::vector<RatingRecord> records_from_tsv(const std::string& text);

private:
    std::vector<RatingRecord> records_;
    std::vector<int> user_ids_;
    std::vector<int> item_ids_;
    std::unordered_map<int, int> user_index_;
    std::unordered_map<int, int> item_index_;
    std::vector<std::vector<std::pair<int, int>>> by_user_;
};

enum class DatasetVariant { ML100K, ML1M };

struct Dataset {
    DatasetVariant variant = DatasetVariant::ML100K;
    RatingTable ratings;
    std::vector<UserProfile> users;  // aligned with ratings.user_ids() order
    std::vector<ItemProfile> items;  // aligned with ratings.item_ids() order
    std::vector<std::string> genre_names;
};

}  // namespace graphrec
