#include "fairvote/registry.h"
#include "fairvote/errors.h"

#include <fstream>
#include <sstream>

namespace fairvote
{

std::string_view
category_label(Category c)
{
    switch (c)
    {
    case Category::Charity:
        return "charity";
    case Category::Education:
        return "education";
    case Category::Economy:
        return "economy";
    case Category::Healthcare:
        return "healthcare";
    }
    return "";
}

std::string_view
category_display_name(Category c)
{
    switch (c)
    {
    case Category::Charity:
        return "Charity Organization";
    case Category::Education:
        return "Education Organization";
    case Category::Economy:
        return "Economic Organization";
    case Category::Healthcare:
        return "Healthcare Organization";
    }
    return "";
}

Category
category_from_id(int id)
{
    if (id < 1 || id > 4)
    {
        throw Error(ErrorCode::ValidationError,
                    "category must be 1..4, got " + std::to_string(id));
    }
    return static_cast<Category>(id);
}

std::optional<Category>
category_from_label(std::string_view label)
{
    for (auto c : kCategories)
    {
        if (label == category_label(c))
        {
            return c;
        }
    }
    if (label == "health")
    {
        return Category::Healthcare;
    }
    return std::nullopt;
}

Identity
fixture_identity(std::string const& federationId)
{
    return Identity{federationId, "fixture", federationId + "@fixture",
                    "fixture"};
}

// --- Registry ---------------------------------------------------------------

namespace
{

void
requireNonEmpty(std::string const& value, char const* what)
{
    if (value.empty())
    {
        throw Error(ErrorCode::ValidationError,
                    std::string(what) + " must be non-empty");
    }
}

} // namespace

UserProfile const&
Registry::registerUser(Identity identity, std::string const& uniqueId)
{
    requireNonEmpty(uniqueId, "unique_id");
    requireNonEmpty(identity.name, "name");
    requireNonEmpty(identity.mobile, "mobile");
    requireNonEmpty(identity.email, "email");
    requireNonEmpty(identity.nationalCode, "national_code");
    if (mUsers.count(uniqueId) != 0)
    {
        throw Error(ErrorCode::DuplicateUniqueId,
                    "unique id already registered: " + uniqueId);
    }
    auto [it, inserted] = mUsers.emplace(
        uniqueId, UserProfile{uniqueId, std::move(identity), {}, {}});
    return it->second;
}

void
Registry::linkPublicKey(std::string const& uniqueId,
                        std::string const& publicKey)
{
    auto& profile = mutableUser(uniqueId);
    requireNonEmpty(publicKey, "public_key");
    auto it = mKeyToUser.find(publicKey);
    if (it != mKeyToUser.end())
    {
        if (it->second == uniqueId)
        {
            return;
        }
        throw Error(ErrorCode::KeyAlreadyLinked,
                    "key " + publicKey + " is linked to " + it->second);
    }
    if (profile.publicKey)
    {
        mKeyToUser.erase(*profile.publicKey);
    }
    profile.publicKey = publicKey;
    mKeyToUser.emplace(publicKey, uniqueId);
}

void
Registry::recordInterests(std::string const& uniqueId,
                          std::map<Category, int> const& ratings)
{
    auto& profile = mutableUser(uniqueId);
    InterestRatings stored{};
    for (auto c : kCategories)
    {
        auto it = ratings.find(c);
        if (it == ratings.end())
        {
            throw Error(ErrorCode::MissingCategory,
                        "missing rating for " +
                            std::string(category_label(c)));
        }
        if (it->second < 1 || it->second > 5)
        {
            throw Error(ErrorCode::OutOfRangeRating,
                        "rating for " + std::string(category_label(c)) +
                            " must be 1..5, got " +
                            std::to_string(it->second));
        }
        stored[category_index(c)] = it->second;
    }
    profile.interests = stored;
}

void
Registry::registerEntity(DestinationEntity entity)
{
    requireNonEmpty(entity.publicKey, "public_key");
    requireNonEmpty(entity.name, "name");
    category_from_id(static_cast<int>(entity.category));
    if (entity.priority < 1 || entity.size < 1)
    {
        throw Error(ErrorCode::ValidationError,
                    "priority and size must be >= 1");
    }
    if (mEntities.count(entity.publicKey) != 0)
    {
        throw Error(ErrorCode::DuplicateKey,
                    "entity already registered: " + entity.publicKey);
    }
    auto key = entity.publicKey;
    mEntities.emplace(std::move(key), std::move(entity));
}

VoteRecord
Registry::appendVote(std::string const& federationId,
                     std::string const& destinationKey)
{
    mutableUser(federationId);
    entity(destinationKey);
    VoteRecord rec{federationId, destinationKey, mVotes.size() + 1};
    mVotes.push_back(rec);
    return rec;
}

UserProfile const&
Registry::user(std::string const& uniqueId) const
{
    auto it = mUsers.find(uniqueId);
    if (it == mUsers.end())
    {
        throw Error(ErrorCode::UnknownUser, "unknown user: " + uniqueId);
    }
    return it->second;
}

UserProfile&
Registry::mutableUser(std::string const& uniqueId)
{
    auto it = mUsers.find(uniqueId);
    if (it == mUsers.end())
    {
        throw Error(ErrorCode::UnknownUser, "unknown user: " + uniqueId);
    }
    return it->second;
}

bool
Registry::hasUser(std::string const& uniqueId) const
{
    return mUsers.count(uniqueId) != 0;
}

std::optional<std::string>
Registry::userForKey(std::string const& publicKey) const
{
    auto it = mKeyToUser.find(publicKey);
    if (it == mKeyToUser.end())
    {
        return std::nullopt;
    }
    return it->second;
}

DestinationEntity const&
Registry::entity(std::string const& publicKey) const
{
    auto it = mEntities.find(publicKey);
    if (it == mEntities.end())
    {
        throw Error(ErrorCode::UnknownEntity, "unknown entity: " + publicKey);
    }
    return it->second;
}

bool
Registry::hasEntity(std::string const& publicKey) const
{
    return mEntities.count(publicKey) != 0;
}

std::vector<DestinationEntity>
Registry::entities() const
{
    std::vector<DestinationEntity> out;
    out.reserve(mEntities.size());
    for (auto const& [key, e] : mEntities)
    {
        out.push_back(e);
    }
    return out;
}

std::vector<UserProfile>
Registry::users() const
{
    std::vector<UserProfile> out;
    out.reserve(mUsers.size());
    for (auto const& [key, u] : mUsers)
    {
        out.push_back(u);
    }
    return out;
}

std::map<std::string, int64_t>
Registry::voteCounts(std::string const& federationId) const
{
    user(federationId);
    std::map<std::string, int64_t> counts;
    for (auto const& [key, e] : mEntities)
    {
        counts[key] = 0;
    }
    for (auto const& v : mVotes)
    {
        if (v.federationId == federationId)
        {
            ++counts[v.destinationKey];
        }
    }
    return counts;
}

// --- RegistryStore ----------------------------------------------------------

namespace
{

std::string
escapeField(std::string const& s)
{
    std::string out;
    out.reserve(s.size());
    for (char c : s)
    {
        switch (c)
        {
        case '\\':
            out += "\\\\";
            break;
        case '\t':
            out += "\\t";
            break;
        case '\n':
            out += "\\n";
            break;
        case '\r':
            out += "\\r";
            break;
        default:
            out += c;
        }
    }
    return out;
}

std::vector<std::string>
splitRecord(std::string const& line)
{
    std::vector<std::string> fields(1);
    for (size_t i = 0; i < line.size(); ++i)
    {
        char c = line[i];
        if (c == '\t')
        {
            fields.emplace_back();
        }
        else if (c == '\\' && i + 1 < line.size())
        {
            char n = line[++i];
            fields.back() += n == 't'   ? '\t'
                             : n == 'n' ? '\n'
                             : n == 'r' ? '\r'
                                        : n;
        }
        else
        {
            fields.back() += c;
        }
    }
    return fields;
}

std::string
joinRecord(std::vector<std::string> const& fields)
{
    std::string line;
    for (size_t i = 0; i < fields.size(); ++i)
    {
        if (i)
        {
            line += '\t';
        }
        line += escapeField(fields[i]);
    }
    return line;
}

std::vector<std::string>
interestFields(std::string const& uid, std::map<Category, int> const& r)
{
    std::vector<std::string> f{"interests", uid};
    for (auto c : kCategories)
    {
        auto it = r.find(c);
        f.push_back(it == r.end() ? "" : std::to_string(it->second));
    }
    return f;
}

std::vector<std::vector<std::string>>
snapshotRecords(Registry const& reg)
{
    std::vector<std::vector<std::string>> out;
    for (auto const& u : reg.users())
    {
        out.push_back({"user", u.uniqueId, u.identity.name, u.identity.mobile,
                       u.identity.email, u.identity.nationalCode});
        if (u.publicKey)
        {
            out.push_back({"key", u.uniqueId, *u.publicKey});
        }
        if (u.interests)
        {
            std::map<Category, int> m;
            for (auto c : kCategories)
            {
                m[c] = (*u.interests)[category_index(c)];
            }
            out.push_back(interestFields(u.uniqueId, m));
        }
    }
    for (auto const& e : reg.entities())
    {
        out.push_back({"entity", e.publicKey, e.name,
                       std::to_string(static_cast<int>(e.category)),
                       std::to_string(e.priority), std::to_string(e.size)});
    }
    for (auto const& v : reg.votes())
    {
        out.push_back({"vote", std::to_string(v.sequence), v.federationId,
                       v.destinationKey});
    }
    return out;
}

int64_t
toInt(std::string const& s)
{
    size_t used = 0;
    auto v = std::stoll(s, &used);
    if (used != s.size())
    {
        throw std::invalid_argument(s);
    }
    return v;
}

void
applyRecord(Registry& reg, std::vector<std::string> const& f)
{
    auto const& tag = f.at(0);
    if (tag == "user" && f.size() == 6)
    {
        reg.registerUser(Identity{f[2], f[3], f[4], f[5]}, f[1]);
    }
    else if (tag == "key" && f.size() == 3)
    {
        reg.linkPublicKey(f[1], f[2]);
    }
    else if (tag == "interests" && f.size() == 6)
    {
        std::map<Category, int> m;
        for (auto c : kCategories)
        {
            m[c] = static_cast<int>(toInt(f[2 + category_index(c)]));
        }
        reg.recordInterests(f[1], m);
    }
    else if (tag == "entity" && f.size() == 6)
    {
        reg.registerEntity(DestinationEntity{
            f[2], f[1], category_from_id(static_cast<int>(toInt(f[3]))),
            toInt(f[4]), toInt(f[5])});
    }
    else if (tag == "vote" && f.size() == 4)
    {
        auto rec = reg.appendVote(f[2], f[3]);
        if (rec.sequence != static_cast<uint64_t>(toInt(f[1])))
        {
            throw std::invalid_argument("vote sequence gap");
        }
    }
    else
    {
        throw std::invalid_argument("unknown record " + tag);
    }
}

} // namespace

RegistryStore::RegistryStore(std::filesystem::path path)
    : mPath(std::move(path))
{
    if (std::filesystem::exists(mPath))
    {
        mRegistry = load(mPath);
    }
}

Registry
RegistryStore::load(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw Error(ErrorCode::FixtureParseError,
                    "cannot open registry store " + path.string());
    }
    Registry reg;
    std::string line;
    size_t lineNo = 0;
    while (std::getline(in, line))
    {
        ++lineNo;
        if (line.empty())
        {
            continue;
        }
        try
        {
            applyRecord(reg, splitRecord(line));
        }
        catch (std::exception const& e)
        {
            throw Error(ErrorCode::FixtureParseError,
                        path.string() + ":" + std::to_string(lineNo) + ": " +
                            e.what());
        }
    }
    return reg;
}

void
RegistryStore::append(std::vector<std::string> const& fields)
{
    std::ofstream out(mPath, std::ios::app);
    out << joinRecord(fields) << '\n';
    out.flush();
    if (!out)
    {
        throw std::runtime_error("cannot append to " + mPath.string());
    }
}

UserProfile const&
RegistryStore::registerUser(Identity identity, std::string const& uniqueId)
{
    auto const& u = mRegistry.registerUser(identity, uniqueId);
    append({"user", uniqueId, identity.name, identity.mobile, identity.email,
            identity.nationalCode});
    return u;
}

void
RegistryStore::linkPublicKey(std::string const& uniqueId,
                             std::string const& publicKey)
{
    mRegistry.linkPublicKey(uniqueId, publicKey);
    append({"key", uniqueId, publicKey});
}

void
RegistryStore::recordInterests(std::string const& uniqueId,
                               std::map<Category, int> const& ratings)
{
    mRegistry.recordInterests(uniqueId, ratings);
    append(interestFields(uniqueId, ratings));
}

void
RegistryStore::registerEntity(DestinationEntity entity)
{
    std::vector<std::string> rec{
        "entity", entity.publicKey, entity.name,
        std::to_string(static_cast<int>(entity.category)),
        std::to_string(entity.priority), std::to_string(entity.size)};
    mRegistry.registerEntity(std::move(entity));
    append(rec);
}

VoteRecord
RegistryStore::appendVote(std::string const& federationId,
                          std::string const& destinationKey)
{
    auto rec = mRegistry.appendVote(federationId, destinationKey);
    append({"vote", std::to_string(rec.sequence), federationId,
            destinationKey});
    return rec;
}

void
RegistryStore::compact()
{
    auto tmp = mPath;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        for (auto const& rec : snapshotRecords(mRegistry))
        {
            out << joinRecord(rec) << '\n';
        }
        out.flush();
        if (!out)
        {
            throw std::runtime_error("cannot write " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, mPath);
}

} // namespace fairvote
