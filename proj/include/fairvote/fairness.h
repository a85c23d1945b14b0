#pragma once

#include "fairvote/ledger.h"
#include "fairvote/recommender.h"
#include "fairvote/registry.h"

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fairvote::fairness
{

inline constexpr int64_t kDefaultLargeEntitySize = 100;

// A in {0,1} per entity key.
struct SensitiveAttribute
{
    std::map<std::string, int> label;

    // A = 1 iff size >= threshold ("large corporations")
    static SensitiveAttribute
    from_size(std::vector<DestinationEntity> const& entities,
              int64_t threshold = kDefaultLargeEntitySize);

    SensitiveAttribute flipped(std::string const& entityKey) const;
};

// Y in {0,1} per entity key, always supplied by the caller.
struct QualificationLabel
{
    std::map<std::string, int> label;
};

// C in {0,1} per entity key.
struct SelectionOutcome
{
    std::map<std::string, int> selected;
    size_t k = 0; // top-k used, 0 for payout-based outcomes

    static SelectionOutcome from_top_k(RecommendationList const& list,
                                       size_t k = 1);
    static SelectionOutcome
    from_payouts(InflationRoundResult const& round,
                 std::vector<DestinationEntity> const& entities);
};

struct SelectionRates
{
    double group0 = 0;
    double group1 = 0;
};

struct PPercentResult
{
    double ratio = 0;
    bool pass = false;
};

// |{C=1, A=g}| / |{A=g}|. Throws EmptyGroup; ValidationError when the
// attribute does not cover an audited entity.
SelectionRates selection_rates(SelectionOutcome const& outcomes,
                               SensitiveAttribute const& attr);

// min/max of the two rates, pass iff ratio >= p. Throws BothZero.
PPercentResult p_percent_rule(SelectionRates rates, double p = 0.8);

// |P0[C=1|Y=1] - P1[C=1|Y=1]|. Throws NoQualifiedMembers.
double equal_opportunity_gap(SelectionOutcome const& outcomes,
                             SensitiveAttribute const& attr,
                             QualificationLabel const& labels);

using AttributeAwareRecommender = std::function<RecommendationList(
    std::string const& federationId, SensitiveAttribute const& attr)>;

// The shipped recommender: never looks at the attribute.
AttributeAwareRecommender
shipped_recommender(Recommender const& recommender,
                    CombinationWeights weights = {},
                    CollabOptions options = {});

// True iff flipping only the entity's A leaves its normalized score and
// rank unchanged. Throws UnknownEntity.
bool awareness_check(AttributeAwareRecommender const& recommend,
                     std::string const& federationId,
                     std::string const& entityKey,
                     SensitiveAttribute const& attr);

using EntityScoreFn = std::function<double(DestinationEntity const&)>;
using EntityMetricFn = std::function<double(DestinationEntity const&,
                                            DestinationEntity const&)>;
using EntityPair = std::pair<DestinationEntity, DestinationEntity>;

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

struct LipschitzViolation
{
    std::string first;
    std::string second;
    double scoreGap = 0;
    double distance = 0;
};

// Pairs with |score(a) - score(b)| > lipschitz * metric(a, b).
std::vector<LipschitzViolation>
individual_fairness_check(EntityScoreFn const& score,
                          EntityMetricFn const& metric,
                          std::vector<EntityPair> const& pairs,
                          double lipschitz);

// Weighted L1 distance over (category one-hot, priority, size). Priority
// and size are divided by their scale before weighting.
struct FeatureMetric
{
    double categoryWeight = 1.0;
    double priorityWeight = 1.0;
    double sizeWeight = 1.0;
    double priorityScale = 1.0;
    double sizeScale = 1.0;

    // scales set to the observed ranges, so each feature spans [0,1]
    static FeatureMetric
    normalized_for(std::vector<DestinationEntity> const& entities);

    double operator()(DestinationEntity const& a,
                      DestinationEntity const& b) const;
};

std::vector<EntityPair>
all_pairs(std::vector<DestinationEntity> const& entities);

struct FairnessReport
{
    std::optional<double> selectionRateA0;
    std::optional<double> selectionRateA1;
    std::optional<double> pRatio;
    std::optional<bool> pPass;
    std::optional<double> eoGap;
    bool awarenessPass = true;
    size_t lipschitzViolations = 0;

    // "key=value" lines in fixed order, "n/a" for undefined metrics
    std::string to_kv() const;
};

struct AuditOptions
{
    double p = 0.8;
    double lipschitz = 1.0;
    int64_t largeEntitySize = kDefaultLargeEntitySize;
    // awareness sweep covers the first N users with interests, 0 = all
    size_t awarenessUsers = 0;
};

// Fills whatever metrics are defined for the outcome; undefined ones (empty
// group, both rates zero, no qualified members) stay empty.
// `awarenessPass` and the Lipschitz count are supplied by the caller since
// they depend on what is being audited.
FairnessReport
summarize(SelectionOutcome const& outcome, SensitiveAttribute const& attr,
          std::optional<QualificationLabel> const& labels, double p);

// Audit of one inflation round: C = received a payout, Lipschitz over the
// payout share, awareness over every (user with interests, entity) pair of
// the registry using the shipped recommender.
FairnessReport audit_round(InflationRoundResult const& round,
                           Registry const& registry,
                           std::optional<QualificationLabel> const& labels,
                           AuditOptions const& options = {});

} // namespace fairvote::fairness
