#pragma once

#include "fairvote/fairness.h"
#include "fairvote/recommender.h"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fairvote::experiment
{

enum class ExperimentKind
{
    SizePriority, // context stage only, constant interests
    Interest,     // context stage only, uniform entity dimensions
    Similarity    // collaborative stage only
};

std::optional<ExperimentKind> parse_kind(std::string_view name);
std::string_view kind_name(ExperimentKind k);

struct ExperimentSpec
{
    ExperimentKind kind = ExperimentKind::SizePriority;
    // Either a single test case directory or a directory of case
    // subdirectories (one output column each, in name order). Files missing
    // from a case directory are looked up in the parent.
    std::filesystem::path fixtures;
    // empty: first interests row (interest), "user-1" (similarity)
    std::string targetUser;
    int constantInterest = 3;
    CollabOptions collab;

    // (0,1) for size-priority and interest, (1,0) for similarity
    CombinationWeights weights() const;
};

struct ResultRow
{
    std::string destinationKey;
    std::string displayName;
    std::vector<std::optional<double>> values; // one per column
};

struct ResultTable
{
    std::string experiment;
    std::vector<std::string> columns;
    std::vector<ResultRow> rows; // ordered by destinationKey

    std::optional<double> value(std::string const& key,
                                std::string const& column) const;
    std::string to_text() const;
    std::string to_csv() const;
};

// Throws FixtureParseError or UnknownReference.
ResultTable run_experiment(ExperimentSpec const& spec);

struct SimulationSpec
{
    size_t users = 20;
    size_t entities = 6;
    size_t rounds = 10;
    uint64_t seed = 1;
    bool uniformVotes = false;

    // throws InvalidParams
    void validate() const;
};

struct RoundSummary
{
    uint64_t round = 0;
    Amount pool = 0;
    Amount poolPaid = 0;
    Amount carriedOver = 0;
    size_t winners = 0;
    std::string topDestination; // empty when nothing was paid
    double topShare = 0;        // top payout / pool
    fairness::FairnessReport fairness;
};

struct SimulationReport
{
    SimulationSpec spec;
    std::vector<RoundSummary> rounds;

    std::string to_text() const;
    std::string to_csv() const;
};

// Seeded population; each round: random payments, recommendations for every
// user, every user votes for its top recommendation, one inflation round.
SimulationReport run_simulation(SimulationSpec const& spec);

} // namespace fairvote::experiment
