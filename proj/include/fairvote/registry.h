#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fairvote
{

enum class Category : int
{
    Charity = 1,
    Education = 2,
    Economy = 3,
    Healthcare = 4
};

inline constexpr std::array<Category, 4> kCategories = {
    Category::Charity, Category::Education, Category::Economy,
    Category::Healthcare};

// "charity", "education", "economy", "healthcare"
std::string_view category_label(Category c);
// "Charity Organization", ...
std::string_view category_display_name(Category c);
// throws ValidationError unless id is 1..4
Category category_from_id(int id);
// accepts the labels above plus the fixture header spelling "health"
std::optional<Category> category_from_label(std::string_view label);

inline size_t
category_index(Category c)
{
    return static_cast<size_t>(c) - 1;
}

// ratings indexed by category_index()
using InterestRatings = std::array<int, 4>;

struct Identity
{
    std::string name;
    std::string mobile;
    std::string email;
    std::string nationalCode;

    bool operator==(Identity const&) const = default;
};

struct UserProfile
{
    std::string uniqueId;
    Identity identity;
    std::optional<std::string> publicKey;
    std::optional<InterestRatings> interests;

    bool operator==(UserProfile const&) const = default;
};

struct DestinationEntity
{
    std::string name;
    std::string publicKey;
    Category category = Category::Charity;
    int64_t priority = 1;
    int64_t size = 1;

    bool operator==(DestinationEntity const&) const = default;
};

struct VoteRecord
{
    std::string federationId;
    std::string destinationKey;
    uint64_t sequence = 0;

    bool operator==(VoteRecord const&) const = default;
};

// Off-chain identities, the public-key mapping, interests, the entity
// catalog and the append-only vote history.
class Registry
{
  public:
    UserProfile const& registerUser(Identity identity,
                                    std::string const& uniqueId);
    void linkPublicKey(std::string const& uniqueId,
                       std::string const& publicKey);
    void recordInterests(std::string const& uniqueId,
                         std::map<Category, int> const& ratings);
    void registerEntity(DestinationEntity entity);
    VoteRecord appendVote(std::string const& federationId,
                          std::string const& destinationKey);

    UserProfile const& user(std::string const& uniqueId) const;
    bool hasUser(std::string const& uniqueId) const;
    std::optional<std::string>
    userForKey(std::string const& publicKey) const;

    DestinationEntity const& entity(std::string const& publicKey) const;
    bool hasEntity(std::string const& publicKey) const;

    // ordered by public key
    std::vector<DestinationEntity> entities() const;
    // ordered by unique id
    std::vector<UserProfile> users() const;
    std::vector<VoteRecord> const&
    votes() const
    {
        return mVotes;
    }

    // votes cast by one user per destination; every catalog entity present
    std::map<std::string, int64_t>
    voteCounts(std::string const& federationId) const;

    bool operator==(Registry const&) const = default;

  private:
    UserProfile& mutableUser(std::string const& uniqueId);

    std::map<std::string, UserProfile> mUsers;
    std::map<std::string, std::string> mKeyToUser;
    std::map<std::string, DestinationEntity> mEntities;
    std::vector<VoteRecord> mVotes;
};

// Identity used for users that only appear by federation ID in fixtures.
Identity fixture_identity(std::string const& federationId);

// Single-file store. Every mutation appends one tab-separated record; load()
// replays the journal and compact() atomically rewrites it as the minimal
// record set for the current state.
class RegistryStore
{
  public:
    explicit RegistryStore(std::filesystem::path path);

    Registry const&
    registry() const
    {
        return mRegistry;
    }
    std::filesystem::path const&
    path() const
    {
        return mPath;
    }

    UserProfile const& registerUser(Identity identity,
                                    std::string const& uniqueId);
    void linkPublicKey(std::string const& uniqueId,
                       std::string const& publicKey);
    void recordInterests(std::string const& uniqueId,
                         std::map<Category, int> const& ratings);
    void registerEntity(DestinationEntity entity);
    VoteRecord appendVote(std::string const& federationId,
                          std::string const& destinationKey);

    void compact();

    static Registry load(std::filesystem::path const& path);

  private:
    void append(std::vector<std::string> const& fields);

    std::filesystem::path mPath;
    Registry mRegistry;
};

} // namespace fairvote
