#pragma once

#include "fairvote/errors.h"
#include "fairvote/fixtures.h"
#include "fairvote/ledger.h"
#include "fairvote/registry.h"

#include <json.hpp>

#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

namespace httplib
{
class Server;
}

namespace fairvote::api
{

using json = nlohmann::json;

struct ApiError
{
    std::string_view code;
    int httpStatus;
};

// Stable wire code and status for every module error.
ApiError api_error(ErrorCode code);

struct Request
{
    std::string method;
    std::string path;
    std::map<std::string, std::string> query;
    std::string body;
};

struct Response
{
    int status = 200;
    std::optional<json> body;
};

struct Route
{
    std::string method;
    std::string path; // "{name}" marks a path parameter
    std::string name;
};

inline constexpr std::string_view kPrefix = "/v1";

std::vector<Route> const& routes();
// same content as api/routes.json
json route_manifest();

// HTTP-shaped boundary over one ledger and one registry. handle() is safe to
// call concurrently: reads share a lock, mutations (and inflation rounds)
// take it exclusively.
class Gateway
{
  public:
    explicit Gateway(LedgerParams params = {},
                     Amount defaultStartingBalance = 0);

    Response handle(Request const& request);

    // Registers fixture tables; entities also get a zero-balance ledger
    // account so they can be voted for.
    void loadFixtures(std::vector<DestinationEntity> const& entities,
                      std::vector<fixtures::InterestRow> const& interests,
                      std::vector<fixtures::VoteRow> const& votes);

    Ledger ledgerSnapshot() const;
    Registry registrySnapshot() const;

  private:
    Response dispatch(Request const& request);

    Response createUser(json const& body);
    Response getUser(std::string const& id);
    Response putInterests(std::string const& id, json const& body);
    Response linkKey(std::string const& id, json const& body);
    Response listEntities();
    Response createEntity(json const& body);
    Response getRecommendations(std::string const& id,
                                std::map<std::string, std::string> const& q);
    Response postVote(json const& body);
    Response postPayment(json const& body);
    Response getAccount(std::string const& key);
    Response getHistory(std::string const& key);
    Response runInflation(std::map<std::string, std::string> const& q,
                          json const& body);

    void ensureEntityAccount(std::string const& key);
    std::string generateKey(std::string const& seed);

    mutable std::shared_mutex mMutex;
    Ledger mLedger;
    Registry mRegistry;
    Amount mDefaultStartingBalance;
    uint64_t mKeyCounter = 0;
};

json error_body(std::string_view code, std::string const& message);

// Routes every request of `server` into `gateway`.
void bind(httplib::Server& server, Gateway& gateway);

} // namespace fairvote::api
