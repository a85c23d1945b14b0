#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fairvote
{

using ScoreMap = std::map<std::string, double>;

// Pearson correlation of two equally sized vectors. nullopt when either
// vector is constant (zero variance). Throws DimensionMismatch when the
// lengths differ or are shorter than 2.
std::optional<double> pearson_similarity(std::span<double const> u,
                                         std::span<double const> v);

// Context-aware raw score of one entity for one user:
//     ((0.4 * priority) + (0.6 * size)) / 2 + interest
// Expressed in tenths the score is the integer 2*priority + 3*size +
// 10*interest, so unit steps in priority and size move it by exactly 0.2 and
// 0.3.
int64_t context_score_tenths(int64_t priority, int64_t size,
                             int64_t interest);
double context_score(int64_t priority, int64_t size, int64_t interest);

// (x - min) / (max - min); all zeros when max == min. Throws EmptyInput.
ScoreMap normalize_minmax(ScoreMap const& raw);
std::vector<double> normalize_minmax(std::span<double const> raw);

// 4 decimal places, ties to even (applied to the binary value).
double round_score(double x);

} // namespace fairvote
