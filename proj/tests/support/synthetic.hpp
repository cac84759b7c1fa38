#pragma once

// Synthetic rating population with planted cluster structure: each latent
// group has genre preferences and a characteristic demographic profile, so
// both the co-rating graph and the side information carry the group signal.

#include <filesystem>

#include "graphrec/types.hpp"

namespace testsupport {

struct SyntheticSpec {
    int n_users = 120;
    int n_items = 60;
    int n_groups = 4;
    double rate_prob = 0.45;  // chance a user rated any given item
    double flip_prob = 0.08;  // chance a rating is replaced by uniform noise
    unsigned seed = 1;
};

graphrec::Dataset make_synthetic(const SyntheticSpec& spec);

/// Writes the dataset in the 100K directory layout (u.data/u.user/u.item).
void write_100k_format(const graphrec::Dataset& ds, const std::filesystem::path& dir);

}  // namespace testsupport
