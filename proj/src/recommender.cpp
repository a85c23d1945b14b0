#include "fairvote/recommender.h"
#include "fairvote/errors.h"

#include <algorithm>
#include <cmath>

namespace fairvote
{

std::optional<CollabPolicy>
parse_policy(std::string_view name)
{
    if (name == "top-count")
    {
        return CollabPolicy::TopCount;
    }
    if (name == "proportional")
    {
        return CollabPolicy::Proportional;
    }
    return std::nullopt;
}

std::string_view
policy_name(CollabPolicy p)
{
    return p == CollabPolicy::TopCount ? "top-count" : "proportional";
}

void
CombinationWeights::validate() const
{
    if (!std::isfinite(collab) || !std::isfinite(context) || collab < 0 ||
        context < 0 || (collab == 0 && context == 0))
    {
        throw Error(ErrorCode::InvalidParams,
                    "combination weights must be finite, >= 0 and not both "
                    "zero");
    }
}

CombinationWeights
CombinationWeights::normalized() const
{
    validate();
    double sum = collab + context;
    return {collab / sum, context / sum};
}

Recommender::Recommender(Registry const& registry, kernels::Execution exec)
    : mRegistry(registry), mExec(exec), mEntities(registry.entities())
{
    std::unordered_map<std::string, size_t> entityIndex;
    for (size_t k = 0; k < mEntities.size(); ++k)
    {
        entityIndex.emplace(mEntities[k].publicKey, k);
    }
    for (auto const& u : registry.users())
    {
        mUserIndex.emplace(u.uniqueId, mUserIds.size());
        mUserIds.push_back(u.uniqueId);
    }
    mVotes.users = mUserIds.size();
    mVotes.entities = mEntities.size();
    mVotes.counts.assign(mVotes.users * mVotes.entities, 0.0);
    for (auto const& v : registry.votes())
    {
        mVotes.counts[mUserIndex.at(v.federationId) * mVotes.entities +
                      entityIndex.at(v.destinationKey)] += 1.0;
    }
}

InterestRatings const&
Recommender::requireInterests(std::string const& id) const
{
    auto const& profile = mRegistry.user(id);
    if (!profile.interests)
    {
        throw Error(ErrorCode::InterestsUnset,
                    "interests not recorded for " + id);
    }
    return *profile.interests;
}

ScoreMap
Recommender::collaborativeScores(std::string const& federationId,
                                 CollabOptions const& options) const
{
    mRegistry.user(federationId);
    auto const target = mUserIndex.at(federationId);
    size_t const cols = mEntities.size();

    auto sims = kernels::similarity_row(mVotes, target, mExec);
    bool anyDefined = false;
    for (size_t j = 0; j < sims.size(); ++j)
    {
        anyDefined |= j != target && sims[j].has_value();
    }

    // with no usable overlap to anyone, every other user counts as a
    // neighbour
    std::vector<double> aggregate(cols, 0.0);
    for (size_t j = 0; j < mVotes.users; ++j)
    {
        if (j == target || (anyDefined && !(sims[j] && *sims[j] > 0)))
        {
            continue;
        }
        auto row = mVotes.row(j);
        for (size_t k = 0; k < cols; ++k)
        {
            aggregate[k] += row[k];
        }
    }

    auto own = mVotes.row(target);
    std::vector<bool> excluded(cols, false);
    for (size_t k = 0; k < cols; ++k)
    {
        if (options.excludeOwnHistory && own[k] > 0)
        {
            excluded[k] = true;
            aggregate[k] = 0;
        }
    }

    ScoreMap out;
    if (cols == 0)
    {
        return out;
    }
    if (options.policy == CollabPolicy::TopCount)
    {
        double best = 0;
        for (size_t k = 0; k < cols; ++k)
        {
            if (!excluded[k])
            {
                best = std::max(best, aggregate[k]);
            }
        }
        for (size_t k = 0; k < cols; ++k)
        {
            bool top = best > 0 && !excluded[k] && aggregate[k] == best;
            out.emplace(mEntities[k].publicKey, top ? 1.0 : 0.0);
        }
    }
    else
    {
        auto norm = normalize_minmax(aggregate);
        for (size_t k = 0; k < cols; ++k)
        {
            out.emplace(mEntities[k].publicKey, norm[k]);
        }
    }
    return out;
}

ScoreMap
Recommender::contextScores(std::string const& federationId) const
{
    auto const& interests = requireInterests(federationId);
    ScoreMap out;
    for (auto const& e : mEntities)
    {
        out.emplace(e.publicKey,
                    context_score(e.priority, e.size,
                                  interests[category_index(e.category)]));
    }
    return out;
}

namespace
{

// Sums that are equal in exact arithmetic can differ in the last bit, which
// would break the tie-by-key rule. Snap to a 2^-32 grid so they compare equal.
double
snapToGrid(double x)
{
    constexpr double kGrid = 4294967296.0;
    return std::nearbyint(x * kGrid) / kGrid;
}

} // namespace

RecommendationList
Recommender::assemble(std::string const& federationId,
                      ScoreMap const& collab, ScoreMap const& contextRaw,
                      CombinationWeights const& weights) const
{
    auto w = weights.normalized();
    RecommendationList list;
    list.federationId = federationId;
    if (mEntities.empty())
    {
        return list;
    }

    auto context = normalize_minmax(contextRaw);
    ScoreMap combined;
    for (auto const& e : mEntities)
    {
        auto c = collab.find(e.publicKey);
        double cs = c == collab.end() ? 0.0 : c->second;
        combined.emplace(e.publicKey,
                         snapToGrid(w.collab * cs +
                                    w.context * context.at(e.publicKey)));
    }
    auto finalScores = normalize_minmax(combined);

    for (auto const& e : mEntities)
    {
        auto c = collab.find(e.publicKey);
        ScoredCandidate cand;
        cand.destinationKey = e.publicKey;
        cand.displayName = std::string(category_display_name(e.category));
        cand.category = e.category;
        cand.rawScore = combined.at(e.publicKey);
        cand.normalizedScore = finalScores.at(e.publicKey);
        cand.collabScore = c == collab.end() ? 0.0 : c->second;
        cand.contextScore = context.at(e.publicKey);
        cand.contextRaw = contextRaw.at(e.publicKey);
        list.candidates.push_back(std::move(cand));
    }
    std::sort(list.candidates.begin(), list.candidates.end(),
              [](ScoredCandidate const& a, ScoredCandidate const& b) {
                  if (a.normalizedScore != b.normalizedScore)
                  {
                      return a.normalizedScore > b.normalizedScore;
                  }
                  return a.destinationKey < b.destinationKey;
              });
    return list;
}

RecommendationList
Recommender::recommend(std::string const& federationId,
                       CombinationWeights const& weights,
                       CollabOptions const& options) const
{
    weights.validate();
    auto contextRaw = contextScores(federationId);
    auto collab = collaborativeScores(federationId, options);
    return assemble(federationId, collab, contextRaw, weights);
}

std::vector<RecommendationList>
Recommender::recommendAll(std::span<std::string const> federationIds,
                          CombinationWeights const& weights,
                          CollabOptions const& options,
                          kernels::Execution exec) const
{
    weights.validate();
    // validate up front so no exception escapes the parallel region
    std::vector<InterestRatings> interests;
    interests.reserve(federationIds.size());
    for (auto const& id : federationIds)
    {
        interests.push_back(requireInterests(id));
    }

    auto columns = kernels::EntityColumns::from(mEntities);
    auto tenths = exec == kernels::Execution::Parallel
                      ? kernels::context_matrix_parallel(columns, interests)
                      : kernels::context_matrix_serial(columns, interests);
    size_t const cols = mEntities.size();

    auto one = [&](size_t i) {
        ScoreMap contextRaw;
        for (size_t k = 0; k < cols; ++k)
        {
            contextRaw.emplace(mEntities[k].publicKey,
                               static_cast<double>(tenths[i * cols + k]) /
                                   10.0);
        }
        return assemble(federationIds[i],
                        collaborativeScores(federationIds[i], options),
                        contextRaw, weights);
    };

    std::vector<RecommendationList> out(federationIds.size());
    auto const n = static_cast<std::ptrdiff_t>(federationIds.size());
    if (exec == kernels::Execution::Parallel)
    {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < n; ++i)
        {
            out[i] = one(static_cast<size_t>(i));
        }
    }
    else
    {
        for (std::ptrdiff_t i = 0; i < n; ++i)
        {
            out[i] = one(static_cast<size_t>(i));
        }
    }
    return out;
}

} // namespace fairvote
