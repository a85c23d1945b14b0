#pragma once

#include "fairvote/registry.h"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

// Line-oriented comma-separated fixture files with a required header row:
//   entities.csv   name,walletID,category,priority,size
//   interests.csv  federationID,charity,education,economy,health
//   votes.csv      destinationID,federationID
// Blank lines and lines starting with '#' are ignored; cells are trimmed.
namespace fairvote::fixtures
{

struct InterestRow
{
    std::string federationId;
    std::map<Category, int> ratings;
};

struct VoteRow
{
    std::string destinationKey;
    std::string federationId;
};

// All parsers throw Error(FixtureParseError) naming source and line.
std::vector<DestinationEntity> parse_entities(std::string_view text,
                                              std::string const& source);
std::vector<InterestRow> parse_interests(std::string_view text,
                                         std::string const& source);
std::vector<VoteRow> parse_votes(std::string_view text,
                                 std::string const& source);

std::vector<DestinationEntity> read_entities(std::filesystem::path const& p);
std::vector<InterestRow> read_interests(std::filesystem::path const& p);
std::vector<VoteRow> read_votes(std::filesystem::path const& p);

std::string read_file(std::filesystem::path const& p);

// Registers entities, then users for every federation ID seen (with
// fixture_identity()), their interests, then the votes in file order.
// Unknown destinations in votes raise UnknownReference; registry validation
// failures raise FixtureParseError.
void load(Registry& registry, std::vector<DestinationEntity> const& entities,
          std::vector<InterestRow> const& interests,
          std::vector<VoteRow> const& votes);

std::string csv_line(std::vector<std::string> const& cells);

} // namespace fairvote::fixtures
