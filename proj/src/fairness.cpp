#include "fairvote/fairness.h"
#include "fairvote/errors.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace fairvote::fairness
{

SensitiveAttribute
SensitiveAttribute::from_size(std::vector<DestinationEntity> const& entities,
                              int64_t threshold)
{
    SensitiveAttribute a;
    for (auto const& e : entities)
    {
        a.label[e.publicKey] = e.size > threshold ? 1 : 0;
    }
    return a;
}

SensitiveAttribute
SensitiveAttribute::flipped(std::string const& entityKey) const
{
    auto it = label.find(entityKey);
    if (it == label.end())
    {
        throw Error(ErrorCode::UnknownEntity,
                    "no sensitive label for " + entityKey);
    }
    SensitiveAttribute out = *this;
    out.label[entityKey] = 1 - it->second;
    return out;
}

SelectionOutcome
SelectionOutcome::from_top_k(RecommendationList const& list, size_t k)
{
    SelectionOutcome o;
    o.k = k;
    for (size_t i = 0; i < list.candidates.size(); ++i)
    {
        o.selected[list.candidates[i].destinationKey] = i < k ? 1 : 0;
    }
    return o;
}

SelectionOutcome
SelectionOutcome::from_payouts(InflationRoundResult const& round,
                               std::vector<DestinationEntity> const& entities)
{
    SelectionOutcome o;
    for (auto const& e : entities)
    {
        auto it = round.payouts.find(e.publicKey);
        o.selected[e.publicKey] =
            it != round.payouts.end() && it->second > 0 ? 1 : 0;
    }
    return o;
}

namespace
{

int
groupOf(SensitiveAttribute const& attr, std::string const& key)
{
    auto it = attr.label.find(key);
    if (it == attr.label.end())
    {
        throw Error(ErrorCode::ValidationError,
                    "sensitive attribute does not cover " + key);
    }
    return it->second != 0 ? 1 : 0;
}

} // namespace

SelectionRates
selection_rates(SelectionOutcome const& outcomes, SensitiveAttribute const& attr)
{
    size_t members[2] = {0, 0};
    size_t selected[2] = {0, 0};
    for (auto const& [key, c] : outcomes.selected)
    {
        int g = groupOf(attr, key);
        ++members[g];
        selected[g] += c != 0 ? 1 : 0;
    }
    if (members[0] == 0 || members[1] == 0)
    {
        throw Error(ErrorCode::EmptyGroup,
                    std::string("group A=") + (members[0] == 0 ? "0" : "1") +
                        " has no members");
    }
    return {static_cast<double>(selected[0]) / static_cast<double>(members[0]),
            static_cast<double>(selected[1]) / static_cast<double>(members[1])};
}

PPercentResult
p_percent_rule(SelectionRates rates, double p)
{
    if (!(rates.group0 >= 0) || !(rates.group1 >= 0))
    {
        throw Error(ErrorCode::InvalidParams, "rates must be non-negative");
    }
    if (rates.group0 == 0 && rates.group1 == 0)
    {
        throw Error(ErrorCode::BothZero, "both selection rates are zero");
    }
    double lo = std::min(rates.group0, rates.group1);
    double hi = std::max(rates.group0, rates.group1);
    double ratio = lo / hi;
    return {ratio, ratio >= p};
}

double
equal_opportunity_gap(SelectionOutcome const& outcomes,
                      SensitiveAttribute const& attr,
                      QualificationLabel const& labels)
{
    size_t qualified[2] = {0, 0};
    size_t chosen[2] = {0, 0};
    for (auto const& [key, c] : outcomes.selected)
    {
        auto y = labels.label.find(key);
        if (y == labels.label.end())
        {
            throw Error(ErrorCode::ValidationError,
                        "qualification label missing for " + key);
        }
        if (y->second == 0)
        {
            continue;
        }
        int g = groupOf(attr, key);
        ++qualified[g];
        chosen[g] += c != 0 ? 1 : 0;
    }
    if (qualified[0] == 0 || qualified[1] == 0)
    {
        throw Error(ErrorCode::NoQualifiedMembers,
                    std::string("group A=") + (qualified[0] == 0 ? "0" : "1") +
                        " has no Y=1 members");
    }
    double p0 =
        static_cast<double>(chosen[0]) / static_cast<double>(qualified[0]);
    double p1 =
        static_cast<double>(chosen[1]) / static_cast<double>(qualified[1]);
    return std::fabs(p0 - p1);
}

AttributeAwareRecommender
shipped_recommender(Recommender const& recommender, CombinationWeights weights,
                    CollabOptions options)
{
    return [&recommender, weights, options](std::string const& id,
                                            SensitiveAttribute const&) {
        return recommender.recommend(id, weights, options);
    };
}

namespace
{

struct Placement
{
    double score;
    size_t rank;
};

Placement
placementOf(RecommendationList const& list, std::string const& key)
{
    for (size_t i = 0; i < list.candidates.size(); ++i)
    {
        if (list.candidates[i].destinationKey == key)
        {
            return {list.candidates[i].normalizedScore, i};
        }
    }
    throw Error(ErrorCode::UnknownEntity,
                "entity not in recommendation list: " + key);
}

} // namespace

bool
awareness_check(AttributeAwareRecommender const& recommend,
                std::string const& federationId, std::string const& entityKey,
                SensitiveAttribute const& attr)
{
    auto flippedAttr = attr.flipped(entityKey);
    auto before = placementOf(recommend(federationId, attr), entityKey);
    auto after = placementOf(recommend(federationId, flippedAttr), entityKey);
    return before.score == after.score && before.rank == after.rank;
}

std::vector<LipschitzViolation>
individual_fairness_check(EntityScoreFn const& score,
                          EntityMetricFn const& metric,
                          std::vector<EntityPair> const& pairs,
                          double lipschitz)
{
    std::vector<LipschitzViolation> out;
    if (std::isinf(lipschitz) && lipschitz > 0)
    {
        return out;
    }
    for (auto const& [a, b] : pairs)
    {
        double gap = std::fabs(score(a) - score(b));
        double dist = metric(a, b);
        if (gap > lipschitz * dist)
        {
            out.push_back({a.publicKey, b.publicKey, gap, dist});
        }
    }
    return out;
}

FeatureMetric
FeatureMetric::normalized_for(std::vector<DestinationEntity> const& entities)
{
    FeatureMetric m;
    if (entities.empty())
    {
        return m;
    }
    auto [pLo, pHi] = std::minmax_element(
        entities.begin(), entities.end(),
        [](auto const& a, auto const& b) { return a.priority < b.priority; });
    auto [sLo, sHi] = std::minmax_element(
        entities.begin(), entities.end(),
        [](auto const& a, auto const& b) { return a.size < b.size; });
    m.priorityScale =
        std::max<double>(1.0, static_cast<double>(pHi->priority - pLo->priority));
    m.sizeScale =
        std::max<double>(1.0, static_cast<double>(sHi->size - sLo->size));
    return m;
}

double
FeatureMetric::operator()(DestinationEntity const& a,
                          DestinationEntity const& b) const
{
    // half the L1 distance of the one-hot encodings: 0 or 1
    double cat = a.category == b.category ? 0.0 : 1.0;
    double pri =
        std::fabs(static_cast<double>(a.priority - b.priority)) / priorityScale;
    double sz = std::fabs(static_cast<double>(a.size - b.size)) / sizeScale;
    return categoryWeight * cat + priorityWeight * pri + sizeWeight * sz;
}

std::vector<EntityPair>
all_pairs(std::vector<DestinationEntity> const& entities)
{
    std::vector<EntityPair> out;
    for (size_t i = 0; i < entities.size(); ++i)
    {
        for (size_t j = i + 1; j < entities.size(); ++j)
        {
            out.emplace_back(entities[i], entities[j]);
        }
    }
    return out;
}

namespace
{

std::string
fmt4(std::optional<double> v)
{
    if (!v)
    {
        return "n/a";
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", *v);
    return buf;
}

} // namespace

std::string
FairnessReport::to_kv() const
{
    std::string out;
    out += "selection_rate_a0=" + fmt4(selectionRateA0) + "\n";
    out += "selection_rate_a1=" + fmt4(selectionRateA1) + "\n";
    out += "p_ratio=" + fmt4(pRatio) + "\n";
    out += "p_pass=" +
           std::string(pPass ? (*pPass ? "true" : "false") : "n/a") + "\n";
    out += "eo_gap=" + fmt4(eoGap) + "\n";
    out += "awareness_pass=" + std::string(awarenessPass ? "true" : "false") +
           "\n";
    out += "lipschitz_violations=" + std::to_string(lipschitzViolations) +
           "\n";
    return out;
}

FairnessReport
summarize(SelectionOutcome const& outcome, SensitiveAttribute const& attr,
          std::optional<QualificationLabel> const& labels, double p)
{
    FairnessReport r;
    try
    {
        auto rates = selection_rates(outcome, attr);
        r.selectionRateA0 = rates.group0;
        r.selectionRateA1 = rates.group1;
        auto pr = p_percent_rule(rates, p);
        r.pRatio = pr.ratio;
        r.pPass = pr.pass;
    }
    catch (Error const& e)
    {
        if (e.code() != ErrorCode::EmptyGroup && e.code() != ErrorCode::BothZero)
        {
            throw;
        }
    }
    if (labels)
    {
        try
        {
            r.eoGap = equal_opportunity_gap(outcome, attr, *labels);
        }
        catch (Error const& e)
        {
            if (e.code() != ErrorCode::NoQualifiedMembers)
            {
                throw;
            }
        }
    }
    return r;
}

FairnessReport
audit_round(InflationRoundResult const& round, Registry const& registry,
            std::optional<QualificationLabel> const& labels,
            AuditOptions const& options)
{
    auto entities = registry.entities();
    auto attr = SensitiveAttribute::from_size(entities, options.largeEntitySize);
    auto outcome = SelectionOutcome::from_payouts(round, entities);
    auto report = summarize(outcome, attr, labels, options.p);

    Recommender recommender(registry);
    auto fn = shipped_recommender(recommender);
    size_t swept = 0;
    for (auto const& u : registry.users())
    {
        if (!u.interests)
        {
            continue;
        }
        if (options.awarenessUsers != 0 && swept++ >= options.awarenessUsers)
        {
            break;
        }
        for (auto const& e : entities)
        {
            if (!awareness_check(fn, u.uniqueId, e.publicKey, attr))
            {
                report.awarenessPass = false;
            }
        }
    }

    auto share = [&round](DestinationEntity const& e) {
        if (round.poolPaid == 0)
        {
            return 0.0;
        }
        auto it = round.payouts.find(e.publicKey);
        return it == round.payouts.end()
                   ? 0.0
                   : static_cast<double>(it->second) /
                         static_cast<double>(round.poolPaid);
    };
    report.lipschitzViolations =
        individual_fairness_check(share, FeatureMetric::normalized_for(entities),
                                  all_pairs(entities), options.lipschitz)
            .size();
    return report;
}

} // namespace fairvote::fairness
