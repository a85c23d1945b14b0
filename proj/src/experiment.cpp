#include "fairvote/experiment.h"
#include "fairvote/errors.h"
#include "fairvote/fixtures.h"
#include "fairvote/ledger.h"

#include <algorithm>
#include <cstdio>
#include <random>

namespace fairvote::experiment
{

namespace fs = std::filesystem;

std::optional<ExperimentKind>
parse_kind(std::string_view name)
{
    if (name == "size-priority")
    {
        return ExperimentKind::SizePriority;
    }
    if (name == "interest")
    {
        return ExperimentKind::Interest;
    }
    if (name == "similarity")
    {
        return ExperimentKind::Similarity;
    }
    return std::nullopt;
}

std::string_view
kind_name(ExperimentKind k)
{
    switch (k)
    {
    case ExperimentKind::SizePriority:
        return "size-priority";
    case ExperimentKind::Interest:
        return "interest";
    case ExperimentKind::Similarity:
        return "similarity";
    }
    return "";
}

CombinationWeights
ExperimentSpec::weights() const
{
    if (kind == ExperimentKind::Similarity)
    {
        return {1.0, 0.0};
    }
    return {0.0, 1.0};
}

namespace
{

std::string
fmt(double v, int decimals)
{
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

struct TestCase
{
    std::string name;
    fs::path dir;
};

std::vector<TestCase>
discoverCases(fs::path const& root)
{
    if (!fs::is_directory(root))
    {
        throw Error(ErrorCode::FixtureParseError,
                    "fixture directory not found: " + root.string());
    }
    std::vector<TestCase> cases;
    for (auto const& entry : fs::directory_iterator(root))
    {
        if (entry.is_directory())
        {
            cases.push_back({entry.path().filename().string(), entry.path()});
        }
    }
    std::sort(cases.begin(), cases.end(),
              [](auto const& a, auto const& b) { return a.name < b.name; });
    if (cases.empty())
    {
        cases.push_back({root.filename().string(), root});
    }
    return cases;
}

std::optional<fs::path>
locate(TestCase const& tc, fs::path const& root, char const* file)
{
    if (fs::exists(tc.dir / file))
    {
        return tc.dir / file;
    }
    if (fs::exists(root / file))
    {
        return root / file;
    }
    return std::nullopt;
}

fs::path
require(TestCase const& tc, fs::path const& root, char const* file)
{
    auto p = locate(tc, root, file);
    if (!p)
    {
        throw Error(ErrorCode::FixtureParseError,
                    std::string("missing ") + file + " for case " + tc.name);
    }
    return *p;
}

std::map<Category, int>
constantRatings(int k)
{
    std::map<Category, int> m;
    for (auto c : kCategories)
    {
        m[c] = k;
    }
    return m;
}

RecommendationList
runCase(ExperimentSpec const& spec, TestCase const& tc)
{
    auto const& root = spec.fixtures;
    Registry reg;
    auto entities = fixtures::read_entities(require(tc, root, "entities.csv"));
    std::string target = spec.targetUser;

    switch (spec.kind)
    {
    case ExperimentKind::SizePriority:
    {
        if (target.empty())
        {
            target = "experiment-user";
        }
        fixtures::load(reg, entities,
                       {{target, constantRatings(spec.constantInterest)}}, {});
        break;
    }
    case ExperimentKind::Interest:
    {
        auto interests =
            fixtures::read_interests(require(tc, root, "interests.csv"));
        if (interests.empty())
        {
            throw Error(ErrorCode::FixtureParseError,
                        "interests.csv has no rows for case " + tc.name);
        }
        if (target.empty())
        {
            target = interests.front().federationId;
        }
        fixtures::load(reg, entities, interests, {});
        break;
    }
    case ExperimentKind::Similarity:
    {
        auto votes = fixtures::read_votes(require(tc, root, "votes.csv"));
        std::vector<fixtures::InterestRow> interests;
        if (auto p = locate(tc, root, "interests.csv"))
        {
            interests = fixtures::read_interests(*p);
        }
        if (target.empty())
        {
            target = "user-1";
        }
        fixtures::load(reg, entities, interests, votes);
        // the collaborative stage ignores interests; users without them get
        // the constant profile so the combined list can be built
        for (auto const& u : reg.users())
        {
            if (!u.interests)
            {
                reg.recordInterests(u.uniqueId,
                                    constantRatings(spec.constantInterest));
            }
        }
        break;
    }
    }

    if (!reg.hasUser(target))
    {
        throw Error(ErrorCode::UnknownReference,
                    "target user not in fixtures: " + target);
    }
    Recommender rec(reg);
    return rec.recommend(target, spec.weights(), spec.collab);
}

} // namespace

ResultTable
run_experiment(ExperimentSpec const& spec)
{
    ResultTable table;
    table.experiment = std::string(kind_name(spec.kind));
    auto cases = discoverCases(spec.fixtures);

    std::map<std::string, ResultRow> rows;
    for (size_t c = 0; c < cases.size(); ++c)
    {
        table.columns.push_back(cases[c].name);
        auto list = runCase(spec, cases[c]);
        for (auto const& cand : list.candidates)
        {
            auto& row = rows[cand.destinationKey];
            row.destinationKey = cand.destinationKey;
            row.displayName = cand.displayName;
            row.values.resize(cases.size());
            row.values[c] = cand.normalizedScore;
        }
    }
    for (auto& [key, row] : rows)
    {
        row.values.resize(cases.size());
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::optional<double>
ResultTable::value(std::string const& key, std::string const& column) const
{
    auto col = std::find(columns.begin(), columns.end(), column);
    if (col == columns.end())
    {
        return std::nullopt;
    }
    for (auto const& r : rows)
    {
        if (r.destinationKey == key)
        {
            return r.values[col - columns.begin()];
        }
    }
    return std::nullopt;
}

std::string
ResultTable::to_text() const
{
    std::string out = "experiment " + experiment + "\n";
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%-10s %-26s", "key", "destination");
    out += buf;
    for (auto const& c : columns)
    {
        std::snprintf(buf, sizeof(buf), " %8s", c.c_str());
        out += buf;
    }
    out += "\n";
    for (auto const& r : rows)
    {
        std::snprintf(buf, sizeof(buf), "%-10s %-26s", r.destinationKey.c_str(),
                      r.displayName.c_str());
        out += buf;
        for (auto const& v : r.values)
        {
            std::snprintf(buf, sizeof(buf), " %8s",
                          v ? fmt(round_score(*v), 4).c_str() : "-");
            out += buf;
        }
        out += "\n";
    }
    return out;
}

std::string
ResultTable::to_csv() const
{
    std::vector<std::string> header{"walletID", "name"};
    header.insert(header.end(), columns.begin(), columns.end());
    std::string out = fixtures::csv_line(header) + "\n";
    for (auto const& r : rows)
    {
        std::vector<std::string> cells{r.destinationKey, r.displayName};
        for (auto const& v : r.values)
        {
            cells.push_back(v ? fmt(round_score(*v), 4) : "");
        }
        out += fixtures::csv_line(cells) + "\n";
    }
    return out;
}

// --- simulation -------------------------------------------------------------

void
SimulationSpec::validate() const
{
    if (users == 0 || entities == 0)
    {
        throw Error(ErrorCode::InvalidParams,
                    "simulation needs at least one user and one entity");
    }
    if (users > 100000 || entities > 10000 || rounds > 100000)
    {
        throw Error(ErrorCode::InvalidParams,
                    "simulation population exceeds desk scale");
    }
}

namespace
{

// Only the engine is standardized bit-for-bit; distributions are not, so
// draws are taken straight from it.
class Draw
{
  public:
    explicit Draw(uint64_t seed) : mEngine(seed)
    {
    }

    int64_t
    between(int64_t lo, int64_t hi)
    {
        auto span = static_cast<uint64_t>(hi - lo) + 1;
        return lo + static_cast<int64_t>(mEngine() % span);
    }

  private:
    std::mt19937_64 mEngine;
};

std::string
numbered(char const* prefix, size_t i)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%04zu", prefix, i);
    return buf;
}

} // namespace

SimulationReport
run_simulation(SimulationSpec const& spec)
{
    spec.validate();
    SimulationReport report;
    report.spec = spec;

    Draw draw(spec.seed);
    LedgerParams params;
    params.weighting =
        spec.uniformVotes ? VoteWeighting::Uniform : VoteWeighting::Stake;
    Ledger ledger(params);
    Registry reg;
    fairness::QualificationLabel labels;

    for (size_t k = 0; k < spec.entities; ++k)
    {
        auto cat = static_cast<Category>(draw.between(1, 4));
        DestinationEntity e{std::string(category_label(cat)) + "-" +
                                std::to_string(k),
                            numbered("E", k), cat, draw.between(1, 5),
                            draw.between(1, 200)};
        labels.label[e.publicKey] = static_cast<int>(draw.between(0, 1));
        ledger.createAccount(e.publicKey, 0);
        reg.registerEntity(std::move(e));
    }

    std::vector<std::string> userIds;
    std::vector<std::string> userKeys;
    for (size_t i = 0; i < spec.users; ++i)
    {
        auto id = numbered("user-", i);
        auto key = numbered("K", i);
        reg.registerUser(fixture_identity(id), id);
        reg.linkPublicKey(id, key);
        std::map<Category, int> ratings;
        for (auto c : kCategories)
        {
            ratings[c] = static_cast<int>(draw.between(1, 5));
        }
        reg.recordInterests(id, ratings);
        ledger.createAccount(key, draw.between(1000, 100000));
        userIds.push_back(id);
        userKeys.push_back(key);
    }

    fairness::AuditOptions audit;
    audit.awarenessUsers = 3;

    for (size_t r = 0; r < spec.rounds; ++r)
    {
        if (spec.users > 1)
        {
            for (size_t i = 0; i < spec.users; ++i)
            {
                auto j = (i + 1 + static_cast<size_t>(draw.between(
                                      0, static_cast<int64_t>(spec.users) - 2))) %
                         spec.users;
                auto amount = draw.between(1, 1000);
                if (ledger.account(userKeys[i]).balance >=
                    amount + params.baseFee)
                {
                    ledger.submitPayment(userKeys[i], userKeys[j], amount);
                }
            }
        }

        std::vector<RecommendationList> lists;
        {
            Recommender rec(reg);
            lists = rec.recommendAll(userIds);
        }
        for (size_t i = 0; i < spec.users; ++i)
        {
            auto const& top = lists[i].candidates.front().destinationKey;
            reg.appendVote(userIds[i], top);
            ledger.setInflationDestination(userKeys[i], top);
        }

        auto round = ledger.runInflationRound();
        RoundSummary s;
        s.round = round.round;
        s.pool = round.pool;
        s.poolPaid = round.poolPaid;
        s.carriedOver = round.carriedOver;
        s.winners = round.payouts.size();
        Amount best = 0;
        for (auto const& [key, amount] : round.payouts)
        {
            if (amount > best)
            {
                best = amount;
                s.topDestination = key;
            }
        }
        s.topShare = round.pool > 0 ? static_cast<double>(best) /
                                          static_cast<double>(round.pool)
                                    : 0.0;
        s.fairness = fairness::audit_round(round, reg, labels, audit);
        report.rounds.push_back(std::move(s));
    }
    return report;
}

namespace
{

std::string
opt4(std::optional<double> v)
{
    return v ? fmt(*v, 4) : "n/a";
}

std::vector<std::string>
roundCells(RoundSummary const& s)
{
    auto const& f = s.fairness;
    return {std::to_string(s.round),
            std::to_string(s.pool),
            std::to_string(s.poolPaid),
            std::to_string(s.carriedOver),
            std::to_string(s.winners),
            s.topDestination.empty() ? "-" : s.topDestination,
            fmt(s.topShare, 4),
            opt4(f.selectionRateA0),
            opt4(f.selectionRateA1),
            opt4(f.pRatio),
            f.pPass ? (*f.pPass ? "true" : "false") : "n/a",
            opt4(f.eoGap),
            f.awarenessPass ? "true" : "false",
            std::to_string(f.lipschitzViolations)};
}

std::vector<std::string> const kRoundHeader = {
    "round",          "pool",          "pool_paid", "carried_over",
    "winners",        "top_destination", "top_share", "rate_a0",
    "rate_a1",        "p_ratio",       "p_pass",    "eo_gap",
    "awareness_pass", "lipschitz_violations"};

} // namespace

std::string
SimulationReport::to_text() const
{
    std::string out = "simulate users=" + std::to_string(spec.users) +
                      " entities=" + std::to_string(spec.entities) +
                      " rounds=" + std::to_string(spec.rounds) +
                      " seed=" + std::to_string(spec.seed) + " weighting=" +
                      (spec.uniformVotes ? "uniform" : "stake") + "\n";
    auto line = [](std::vector<std::string> const& cells) {
        std::string l;
        for (size_t i = 0; i < cells.size(); ++i)
        {
            char buf[64];
            std::snprintf(buf, sizeof(buf), i == 0 ? "%5s" : " %s",
                          cells[i].c_str());
            l += buf;
        }
        return l + "\n";
    };
    out += line(kRoundHeader);
    for (auto const& s : rounds)
    {
        out += line(roundCells(s));
    }
    return out;
}

std::string
SimulationReport::to_csv() const
{
    std::string out = fixtures::csv_line(kRoundHeader) + "\n";
    for (auto const& s : rounds)
    {
        out += fixtures::csv_line(roundCells(s)) + "\n";
    }
    return out;
}

} // namespace fairvote::experiment
