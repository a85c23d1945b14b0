#include "fairvote/gateway.h"
#include "fairvote/fairness.h"
#include "fairvote/recommender.h"
#include "fairvote/scoring.h"

#include <httplib.h>

#include <charconv>
#include <cmath>
#include <mutex>

namespace fairvote::api
{

ApiError
api_error(ErrorCode code)
{
    switch (code)
    {
    case ErrorCode::DuplicateKey:
        return {"duplicate_key", 409};
    case ErrorCode::UnknownAccount:
        return {"unknown_account", 404};
    case ErrorCode::InsufficientBalance:
        return {"insufficient_balance", 422};
    case ErrorCode::NonPositiveAmount:
        return {"non_positive_amount", 422};
    case ErrorCode::InvalidParams:
        return {"invalid_params", 400};
    case ErrorCode::DuplicateUniqueId:
        return {"duplicate_unique_id", 409};
    case ErrorCode::ValidationError:
        return {"validation_error", 400};
    case ErrorCode::UnknownUser:
        return {"unknown_user", 404};
    case ErrorCode::KeyAlreadyLinked:
        return {"key_already_linked", 409};
    case ErrorCode::OutOfRangeRating:
        return {"out_of_range", 400};
    case ErrorCode::MissingCategory:
        return {"missing_category", 400};
    case ErrorCode::UnknownEntity:
        return {"unknown_entity", 404};
    case ErrorCode::DimensionMismatch:
        return {"dimension_mismatch", 422};
    case ErrorCode::InterestsUnset:
        return {"interests_unset", 409};
    case ErrorCode::EmptyInput:
        return {"empty_input", 422};
    case ErrorCode::EmptyGroup:
        return {"empty_group", 422};
    case ErrorCode::BothZero:
        return {"both_zero", 422};
    case ErrorCode::NoQualifiedMembers:
        return {"no_qualified_members", 422};
    case ErrorCode::FixtureParseError:
        return {"fixture_parse_error", 400};
    case ErrorCode::UnknownReference:
        return {"unknown_reference", 404};
    }
    return {"internal_error", 500};
}

std::vector<Route> const&
routes()
{
    static std::vector<Route> const table = {
        {"POST", "/v1/users", "register_user"},
        {"GET", "/v1/users/{id}", "get_user"},
        {"PUT", "/v1/users/{id}/interests", "record_interests"},
        {"POST", "/v1/users/{id}/key", "link_public_key"},
        {"GET", "/v1/entities", "list_entities"},
        {"POST", "/v1/entities", "register_entity"},
        {"GET", "/v1/recommendations/{id}", "recommend"},
        {"POST", "/v1/votes", "append_vote"},
        {"POST", "/v1/payments", "submit_payment"},
        {"GET", "/v1/ledger/accounts/{key}", "get_account"},
        {"GET", "/v1/ledger/accounts/{key}/history", "get_history"},
        {"POST", "/v1/inflation/run", "run_inflation_round"},
        {"GET", "/v1/routes", "route_manifest"},
    };
    return table;
}

json
route_manifest()
{
    json list = json::array();
    for (auto const& r : routes())
    {
        list.push_back({{"method", r.method}, {"path", r.path},
                        {"name", r.name}});
    }
    return {{"version", "v1"}, {"routes", list}};
}

json
error_body(std::string_view code, std::string const& message)
{
    return {{"error", {{"code", code}, {"message", message}}}};
}

namespace
{

// Request-shape problems; always surfaces as validation_error.
struct BadRequest
{
    std::string message;
};

Response
errorResponse(ErrorCode code, std::string const& message)
{
    auto e = api_error(code);
    return {e.httpStatus, error_body(e.code, message)};
}

std::vector<std::string>
segments(std::string_view path)
{
    std::vector<std::string> out;
    size_t i = 0;
    while (i < path.size())
    {
        if (path[i] == '/')
        {
            ++i;
            continue;
        }
        auto next = path.find('/', i);
        if (next == std::string_view::npos)
        {
            next = path.size();
        }
        out.emplace_back(path.substr(i, next - i));
        i = next;
    }
    return out;
}

bool
matchPath(std::string const& pattern, std::vector<std::string> const& actual,
          std::map<std::string, std::string>& params)
{
    auto want = segments(pattern);
    if (want.size() != actual.size())
    {
        return false;
    }
    std::map<std::string, std::string> found;
    for (size_t i = 0; i < want.size(); ++i)
    {
        auto const& w = want[i];
        if (w.size() > 2 && w.front() == '{' && w.back() == '}')
        {
            found[w.substr(1, w.size() - 2)] = actual[i];
        }
        else if (w != actual[i])
        {
            return false;
        }
    }
    params = std::move(found);
    return true;
}

json
parseBody(std::string const& body, bool required)
{
    if (body.empty())
    {
        if (required)
        {
            throw BadRequest{"request body required"};
        }
        return json::object();
    }
    auto parsed = json::parse(body, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object())
    {
        throw BadRequest{"body must be a JSON object"};
    }
    return parsed;
}

std::string
str(json const& body, char const* name)
{
    auto it = body.find(name);
    if (it == body.end() || !it->is_string())
    {
        throw BadRequest{std::string("field '") + name + "' must be a string"};
    }
    return it->get<std::string>();
}

int64_t
integer(json const& body, char const* name)
{
    auto it = body.find(name);
    if (it == body.end() || !it->is_number_integer())
    {
        throw BadRequest{std::string("field '") + name +
                         "' must be an integer"};
    }
    return it->get<int64_t>();
}

std::optional<int64_t>
optInteger(json const& body, char const* name)
{
    if (!body.contains(name))
    {
        return std::nullopt;
    }
    return integer(body, name);
}

double
queryDouble(std::map<std::string, std::string> const& q, char const* name,
            double fallback)
{
    auto it = q.find(name);
    if (it == q.end() || it->second.empty())
    {
        return fallback;
    }
    try
    {
        size_t used = 0;
        double v = std::stod(it->second, &used);
        if (used != it->second.size())
        {
            throw BadRequest{""};
        }
        return v;
    }
    catch (...)
    {
        throw BadRequest{std::string("query parameter '") + name +
                         "' must be a number"};
    }
}

bool
queryFlag(std::map<std::string, std::string> const& q, char const* name,
          bool fallback)
{
    auto it = q.find(name);
    if (it == q.end() || it->second.empty())
    {
        return fallback;
    }
    if (it->second == "1" || it->second == "true")
    {
        return true;
    }
    if (it->second == "0" || it->second == "false")
    {
        return false;
    }
    throw BadRequest{std::string("query parameter '") + name +
                     "' must be 0/1"};
}

json
profileJson(UserProfile const& u)
{
    json j = {{"unique_id", u.uniqueId},
              {"name", u.identity.name},
              {"mobile", u.identity.mobile},
              {"email", u.identity.email},
              {"national_code", u.identity.nationalCode},
              {"public_key", nullptr},
              {"interests", nullptr}};
    if (u.publicKey)
    {
        j["public_key"] = *u.publicKey;
    }
    if (u.interests)
    {
        auto const& r = *u.interests;
        j["interests"] = {{"charity", r[0]},
                          {"education", r[1]},
                          {"economy", r[2]},
                          {"health", r[3]}};
    }
    return j;
}

json
entityJson(DestinationEntity const& e)
{
    return {{"name", e.name},
            {"public_key", e.publicKey},
            {"category", static_cast<int>(e.category)},
            {"category_label", category_label(e.category)},
            {"display_name", category_display_name(e.category)},
            {"priority", e.priority},
            {"size", e.size}};
}

json
accountJson(Account const& a)
{
    json j = {{"public_key", a.publicKey},
              {"balance", a.balance},
              {"inflation_destination", nullptr}};
    if (a.inflationDestination)
    {
        j["inflation_destination"] = *a.inflationDestination;
    }
    return j;
}

json
receiptJson(Receipt const& r)
{
    json j = {{"sequence", r.sequence},
              {"kind", r.kind == ReceiptKind::Payment ? "payment"
                                                       : "inflation_payout"},
              {"source", nullptr},
              {"destination", r.destination},
              {"amount", r.amount},
              {"fee", r.fee}};
    if (!r.source.empty())
    {
        j["source"] = r.source;
    }
    return j;
}

json
optNumber(std::optional<double> v)
{
    return v ? json(round_score(*v)) : json(nullptr);
}

json
fairnessJson(fairness::FairnessReport const& f)
{
    return {{"selection_rate_a0", optNumber(f.selectionRateA0)},
            {"selection_rate_a1", optNumber(f.selectionRateA1)},
            {"p_ratio", optNumber(f.pRatio)},
            {"p_pass", f.pPass ? json(*f.pPass) : json(nullptr)},
            {"eo_gap", optNumber(f.eoGap)},
            {"awareness_pass", f.awarenessPass},
            {"lipschitz_violations", f.lipschitzViolations}};
}

} // namespace

Gateway::Gateway(LedgerParams params, Amount defaultStartingBalance)
    : mLedger(params), mDefaultStartingBalance(defaultStartingBalance)
{
}

Response
Gateway::handle(Request const& request)
{
    try
    {
        if (request.method == "GET")
        {
            std::shared_lock lock(mMutex);
            return dispatch(request);
        }
        std::unique_lock lock(mMutex);
        return dispatch(request);
    }
    catch (Error const& e)
    {
        return errorResponse(e.code(), e.what());
    }
    catch (BadRequest const& e)
    {
        return errorResponse(ErrorCode::ValidationError, e.message);
    }
    catch (std::exception const& e)
    {
        return {500, error_body("internal_error", e.what())};
    }
}

Response
Gateway::dispatch(Request const& req)
{
    auto parts = segments(req.path);
    std::map<std::string, std::string> params;
    bool pathKnown = false;
    for (auto const& r : routes())
    {
        if (!matchPath(r.path, parts, params))
        {
            continue;
        }
        pathKnown = true;
        if (r.method != req.method)
        {
            continue;
        }
        auto const& n = r.name;
        if (n == "register_user")
        {
            return createUser(parseBody(req.body, true));
        }
        if (n == "get_user")
        {
            return getUser(params["id"]);
        }
        if (n == "record_interests")
        {
            return putInterests(params["id"], parseBody(req.body, true));
        }
        if (n == "link_public_key")
        {
            return linkKey(params["id"], parseBody(req.body, false));
        }
        if (n == "list_entities")
        {
            return listEntities();
        }
        if (n == "register_entity")
        {
            return createEntity(parseBody(req.body, true));
        }
        if (n == "recommend")
        {
            return getRecommendations(params["id"], req.query);
        }
        if (n == "append_vote")
        {
            return postVote(parseBody(req.body, true));
        }
        if (n == "submit_payment")
        {
            return postPayment(parseBody(req.body, true));
        }
        if (n == "get_account")
        {
            return getAccount(params["key"]);
        }
        if (n == "get_history")
        {
            return getHistory(params["key"]);
        }
        if (n == "run_inflation_round")
        {
            return runInflation(req.query, parseBody(req.body, false));
        }
        if (n == "route_manifest")
        {
            return {200, route_manifest()};
        }
    }
    if (pathKnown)
    {
        return {405, error_body("method_not_allowed",
                                req.method + " not allowed on " + req.path)};
    }
    return {404, error_body("not_found", "no route for " + req.path)};
}

Response
Gateway::createUser(json const& body)
{
    Identity id{str(body, "name"), str(body, "mobile"), str(body, "email"),
                str(body, "national_code")};
    auto const& profile = mRegistry.registerUser(id, str(body, "unique_id"));
    return {201, profileJson(profile)};
}

Response
Gateway::getUser(std::string const& id)
{
    return {200, profileJson(mRegistry.user(id))};
}

Response
Gateway::putInterests(std::string const& id, json const& body)
{
    std::map<Category, int> ratings;
    for (auto const& [name, value] : body.items())
    {
        auto cat = category_from_label(name);
        if (!cat)
        {
            throw BadRequest{"unknown category '" + name + "'"};
        }
        if (!value.is_number_integer())
        {
            throw BadRequest{"rating for '" + name + "' must be an integer"};
        }
        auto v = value.get<int64_t>();
        ratings[*cat] = static_cast<int>(std::clamp<int64_t>(v, -1, 6));
    }
    mRegistry.recordInterests(id, ratings);
    return {204, std::nullopt};
}

std::string
Gateway::generateKey(std::string const& seed)
{
    static constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZ234567";
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : seed)
    {
        h = (h ^ c) * 1099511628211ull;
    }
    while (true)
    {
        uint64_t x = h ^ (++mKeyCounter * 0x9E3779B97F4A7C15ull);
        std::string key = "G";
        for (int i = 0; i < 15; ++i)
        {
            x ^= x >> 31;
            x *= 0xBF58476D1CE4E5B9ull;
            x ^= x >> 27;
            key += kAlphabet[x & 31];
        }
        if (!mLedger.hasAccount(key) && !mRegistry.userForKey(key))
        {
            return key;
        }
    }
}

Response
Gateway::linkKey(std::string const& id, json const& body)
{
    mRegistry.user(id);
    auto key = body.contains("public_key") ? str(body, "public_key")
                                           : generateKey(id);
    auto balance =
        optInteger(body, "starting_balance").value_or(mDefaultStartingBalance);
    if (auto owner = mRegistry.userForKey(key); owner && *owner != id)
    {
        throw Error(ErrorCode::KeyAlreadyLinked,
                    "key " + key + " is linked to " + *owner);
    }
    if (!mLedger.hasAccount(key))
    {
        mLedger.createAccount(key, balance);
    }
    mRegistry.linkPublicKey(id, key);
    json out = {{"unique_id", id},
                {"public_key", key},
                {"balance", mLedger.account(key).balance}};
    return {201, out};
}

Response
Gateway::listEntities()
{
    json out = json::array();
    for (auto const& e : mRegistry.entities())
    {
        out.push_back(entityJson(e));
    }
    return {200, out};
}

void
Gateway::ensureEntityAccount(std::string const& key)
{
    if (!mLedger.hasAccount(key))
    {
        mLedger.createAccount(key, 0);
    }
}

Response
Gateway::createEntity(json const& body)
{
    Category cat = Category::Charity;
    auto c = body.find("category");
    if (c != body.end() && c->is_number_integer())
    {
        cat = category_from_id(static_cast<int>(
            std::clamp<int64_t>(c->get<int64_t>(), 0, 5)));
    }
    else if (c != body.end() && c->is_string())
    {
        auto parsed = category_from_label(c->get<std::string>());
        if (!parsed)
        {
            throw BadRequest{"unknown category"};
        }
        cat = *parsed;
    }
    else
    {
        throw BadRequest{"field 'category' must be an id or label"};
    }
    DestinationEntity e{str(body, "name"), str(body, "public_key"), cat,
                        integer(body, "priority"), integer(body, "size")};
    if (mRegistry.hasEntity(e.publicKey))
    {
        throw Error(ErrorCode::DuplicateKey,
                    "entity already registered: " + e.publicKey);
    }
    // validate fully before touching the ledger
    Registry probe;
    probe.registerEntity(e);
    ensureEntityAccount(e.publicKey);
    mRegistry.registerEntity(e);
    return {201, entityJson(e)};
}

Response
Gateway::getRecommendations(std::string const& id,
                            std::map<std::string, std::string> const& q)
{
    CombinationWeights w{queryDouble(q, "w_collab", 0.5),
                         queryDouble(q, "w_context", 0.5)};
    CollabOptions opts;
    if (auto p = q.find("policy"); p != q.end() && !p->second.empty())
    {
        auto parsed = parse_policy(p->second);
        if (!parsed)
        {
            throw BadRequest{"policy must be top-count or proportional"};
        }
        opts.policy = *parsed;
    }
    opts.excludeOwnHistory = queryFlag(q, "exclude_own", true);

    Recommender rec(mRegistry);
    auto list = rec.recommend(id, w, opts);
    auto nw = w.normalized();
    json candidates = json::array();
    for (auto const& c : list.candidates)
    {
        candidates.push_back({{"destination_key", c.destinationKey},
                              {"display_name", c.displayName},
                              {"category", category_label(c.category)},
                              {"normalized_score", round_score(c.normalizedScore)},
                              {"collab_score", round_score(c.collabScore)},
                              {"context_score", round_score(c.contextScore)}});
    }
    json out = {{"federation_id", list.federationId},
                {"weights", {{"collab", nw.collab}, {"context", nw.context}}},
                {"policy", policy_name(opts.policy)},
                {"exclude_own", opts.excludeOwnHistory},
                {"candidates", candidates}};
    return {200, out};
}

Response
Gateway::postVote(json const& body)
{
    auto fid = str(body, "federation_id");
    auto dest = str(body, "destination_key");
    mRegistry.user(fid);
    mRegistry.entity(dest);
    auto const& key = mRegistry.user(fid).publicKey;
    bool ledgerUpdate = key && mLedger.hasAccount(*key);
    if (ledgerUpdate)
    {
        ensureEntityAccount(dest);
    }
    auto rec = mRegistry.appendVote(fid, dest);
    if (ledgerUpdate)
    {
        mLedger.setInflationDestination(*key, dest);
    }
    json out = {{"federation_id", rec.federationId},
                {"destination_key", rec.destinationKey},
                {"sequence", rec.sequence},
                {"ledger_update", ledgerUpdate}};
    return {201, out};
}

Response
Gateway::postPayment(json const& body)
{
    auto r = mLedger.submitPayment(str(body, "src"), str(body, "dst"),
                                   integer(body, "amount"));
    return {201, receiptJson(r)};
}

Response
Gateway::getAccount(std::string const& key)
{
    return {200, accountJson(mLedger.account(key))};
}

Response
Gateway::getHistory(std::string const& key)
{
    json out = json::array();
    for (auto const& r : mLedger.history(key))
    {
        out.push_back(receiptJson(r));
    }
    return {200, out};
}

Response
Gateway::runInflation(std::map<std::string, std::string> const& q,
                      json const& body)
{
    bool audit = queryFlag(q, "audit", false);
    std::optional<fairness::QualificationLabel> labels;
    if (auto it = body.find("qualified"); it != body.end())
    {
        if (!it->is_array())
        {
            throw BadRequest{"'qualified' must be an array of entity keys"};
        }
        labels.emplace();
        for (auto const& e : mRegistry.entities())
        {
            labels->label[e.publicKey] = 0;
        }
        for (auto const& k : *it)
        {
            if (!k.is_string())
            {
                throw BadRequest{"'qualified' must hold strings"};
            }
            mRegistry.entity(k.get<std::string>());
            labels->label[k.get<std::string>()] = 1;
        }
    }

    auto round = mLedger.runInflationRound();
    json payouts = json::object();
    for (auto const& [key, amount] : round.payouts)
    {
        payouts[key] = amount;
    }
    json out = {{"round", round.round},
                {"minted", round.minted},
                {"fees_consumed", round.feesConsumed},
                {"carryover_consumed", round.carryoverConsumed},
                {"pool", round.pool},
                {"pool_paid", round.poolPaid},
                {"carried_over", round.carriedOver},
                {"payouts", payouts}};
    if (audit)
    {
        out["fairness"] =
            fairnessJson(fairness::audit_round(round, mRegistry, labels));
    }
    return {200, out};
}

void
Gateway::loadFixtures(std::vector<DestinationEntity> const& entities,
                      std::vector<fixtures::InterestRow> const& interests,
                      std::vector<fixtures::VoteRow> const& votes)
{
    std::unique_lock lock(mMutex);
    fixtures::load(mRegistry, entities, interests, votes);
    for (auto const& e : entities)
    {
        ensureEntityAccount(e.publicKey);
    }
}

Ledger
Gateway::ledgerSnapshot() const
{
    std::shared_lock lock(mMutex);
    return mLedger;
}

Registry
Gateway::registrySnapshot() const
{
    std::shared_lock lock(mMutex);
    return mRegistry;
}

void
bind(httplib::Server& server, Gateway& gateway)
{
    auto handler = [&gateway](httplib::Request const& req,
                              httplib::Response& res) {
        Request r{req.method, req.path, {}, req.body};
        for (auto const& [k, v] : req.params)
        {
            r.query[k] = v;
        }
        auto out = gateway.handle(r);
        res.status = out.status;
        if (out.body)
        {
            res.set_content(out.body->dump(), "application/json");
        }
    };
    server.Get(".*", handler);
    server.Post(".*", handler);
    server.Put(".*", handler);
    server.Delete(".*", handler);
    server.Patch(".*", handler);
}

} // namespace fairvote::api
