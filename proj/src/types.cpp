#include "graphrec/types.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "graphrec/io.hpp"

namespace graphrec {

RatingTable::RatingTable(std::vector<RatingRecord> records,
                         std::vector<int> user_ids,
                         std::vector<int> item_ids)
    : records_(std::move(records)),
      user_ids_(std::move(user_ids)),
      item_ids_(std::move(item_ids)) {
    user_index_.reserve(user_ids_.size());
    for (int i = 0; i < static_cast<int>(user_ids_.size()); ++i) {
        if (!user_index_.emplace(user_ids_[i], i).second) {
            throw std::runtime_error("duplicate user id " + std::to_string(user_ids_[i]));
        }
    }
    item_index_.reserve(item_ids_.size());
    for (int i = 0; i < static_cast<int>(item_ids_.size()); ++i) {
        if (!item_index_.emplace(item_ids_[i], i).second) {
            throw std::runtime_error("duplicate item id " + std::to_string(item_ids_[i]));
        }
    }
    by_user_.resize(user_ids_.size());
    for (const RatingRecord& r : records_) {
        if (r.rating < 1 || r.rating > 5) {
            throw std::runtime_error("rating outside [1,5] for user " + std::to_string(r.user_id) +
                                     ", item " + std::to_string(r.item_id));
        }
        by_user_[user_index(r.user_id)].emplace_back(item_index(r.item_id), r.rating);
    }
    for (auto& v : by_user_) {
        std::sort(v.begin(), v.end());
    }
}

int RatingTable::user_index(int user_id) const {
    auto it = user_index_.find(user_id);
    if (it == user_index_.end()) {
        throw std::runtime_error("unknown user id " + std::to_string(user_id));
    }
    return it->second;
}

int RatingTable::item_index(int item_id) const {
    auto it = item_index_.find(item_id);
    if (it == item_index_.end()) {
        throw std::runtime_error("unknown item id " + std::to_string(item_id));
    }
    return it->second;
}

double RatingTable::mean_rating() const {
    if (records_.empty()) {
        throw std::runtime_error("mean_rating of empty table");
    }
    double sum = 0.0;
    for (const RatingRecord& r : records_) sum += r.rating;
    return sum / static_cast<double>(records_.size());
}

std::string RatingTable::to_tsv() const {
    std::ostringstream out;
    for (const RatingRecord& r : records_) {
        out << r.user_id << '\t' << r.item_id << '\t' << r.rating << '\t' << r.timestamp << '\n';
    }
    return out.str();
}

std::vector<RatingRecord> RatingTable::records_from_tsv(const std::string& text) {
    std::vector<RatingRecord> records;
    std::size_t line_no = 0;
    for (std::string_view line : io::split(text, '\n')) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = io::split(line, '\t');
        if (fields.size() != 4) {
            throw std::runtime_error("tsv line " + std::to_string(line_no) + ": expected 4 fields");
        }
        std::string ctx = "tsv line " + std::to_string(line_no);
        records.push_back({io::parse_int(fields[0], ctx), io::parse_int(fields[1], ctx),
                           io::parse_int(fields[2], ctx), io::parse_int64(fields[3], ctx)});
    }
    return records;
}

}  // namespace graphrec
