#pragma once

#include "fairvote/kernels.h"
#include "fairvote/registry.h"
#include "fairvote/scoring.h"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fairvote
{

enum class CollabPolicy
{
    TopCount,    // 1 for destinations at the maximal neighbour count, else 0
    Proportional // min-max normalized neighbour counts
};

std::optional<CollabPolicy> parse_policy(std::string_view name);
std::string_view policy_name(CollabPolicy p);

struct CollabOptions
{
    CollabPolicy policy = CollabPolicy::TopCount;
    bool excludeOwnHistory = true;
};

struct CombinationWeights
{
    double collab = 0.5;
    double context = 0.5;

    // throws InvalidParams on negative, non-finite or all-zero weights
    void validate() const;
    CombinationWeights normalized() const;
};

struct ScoredCandidate
{
    std::string destinationKey;
    std::string displayName;
    Category category = Category::Charity;
    double rawScore = 0;        // combined score before the final min-max
    double normalizedScore = 0; // in [0,1]
    double collabScore = 0;     // collaborative stage, in [0,1]
    double contextScore = 0;    // context stage after min-max
    double contextRaw = 0;      // context stage before min-max
};

struct RecommendationList
{
    std::string federationId;
    // normalizedScore descending, ties by destinationKey ascending
    std::vector<ScoredCandidate> candidates;
};

// Two-stage recommender over a registry. Holds a reference to the registry
// and a vote matrix built at construction; rebuild after the registry
// changes.
class Recommender
{
  public:
    explicit Recommender(Registry const& registry,
                         kernels::Execution exec = kernels::Execution::Parallel);

    ScoreMap collaborativeScores(std::string const& federationId,
                                 CollabOptions const& options = {}) const;
    // raw context scores, one per catalog entity
    ScoreMap contextScores(std::string const& federationId) const;

    RecommendationList recommend(std::string const& federationId,
                                 CombinationWeights const& weights = {},
                                 CollabOptions const& options = {}) const;

    // Combines already computed stage outputs into a sorted list. Exposed so
    // alternative scorers can share the combination and ordering rules.
    RecommendationList assemble(std::string const& federationId,
                                ScoreMap const& collab,
                                ScoreMap const& contextRaw,
                                CombinationWeights const& weights) const;

    std::vector<RecommendationList>
    recommendAll(std::span<std::string const> federationIds,
                 CombinationWeights const& weights = {},
                 CollabOptions const& options = {},
                 kernels::Execution exec = kernels::Execution::Parallel) const;

    Registry const&
    registry() const
    {
        return mRegistry;
    }

  private:
    InterestRatings const& requireInterests(std::string const& id) const;

    Registry const& mRegistry;
    kernels::Execution mExec;
    std::vector<DestinationEntity> mEntities;
    std::vector<std::string> mUserIds;
    std::unordered_map<std::string, size_t> mUserIndex;
    kernels::VoteMatrix mVotes;
};

} // namespace fairvote
