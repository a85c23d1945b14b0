#include "fairvote/errors.h"
#include "fairvote/registry.h"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

using namespace fairvote;

namespace
{

ErrorCode
codeOf(auto&& fn)
{
    try
    {
        fn();
    }
    catch (Error const& e)
    {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::ValidationError;
}

Identity
ident(std::string name)
{
    return {std::move(name), "09120000000", "a@b.c", "0012345678"};
}

Registry
catalog()
{
    Registry r;
    r.registerEntity({"charity", "GAIRWQ", Category::Charity, 1, 6});
    r.registerEntity({"health", "CAIRWQ", Category::Healthcare, 2, 5});
    r.registerEntity({"education", "BAIRWQ", Category::Education, 2, 4});
    r.registerEntity({"economy", "NNIRWQ", Category::Economy, 2, 1});
    return r;
}

std::filesystem::path
tempPath(std::string const& name)
{
    auto p = std::filesystem::temp_directory_path() /
             ("fairvote_test_" + name + "_" +
              std::to_string(std::random_device{}()));
    std::filesystem::remove(p);
    return p;
}

} // namespace

TEST_CASE("register_user and link_public_key")
{
    Registry r;
    auto const& u = r.registerUser(ident("Test-one"), "User-1");
    CHECK(u.uniqueId == "User-1");
    CHECK(!u.publicKey);
    CHECK(!u.interests);
    r.linkPublicKey("User-1", "ANDOISQKX");
    CHECK(r.user("User-1").publicKey == "ANDOISQKX");
    CHECK(r.userForKey("ANDOISQKX") == "User-1");

    CHECK(codeOf([&] { r.registerUser(ident("again"), "User-1"); }) ==
          ErrorCode::DuplicateUniqueId);

    r.registerUser(ident("Test-two"), "User-2");
    CHECK(codeOf([&] { r.linkPublicKey("User-2", "ANDOISQKX"); }) ==
          ErrorCode::KeyAlreadyLinked);
    CHECK(codeOf([&] { r.linkPublicKey("User-9", "KODOISQF7"); }) ==
          ErrorCode::UnknownUser);

    // relinking replaces the previous key
    r.linkPublicKey("User-1", "NEWKEY");
    CHECK(r.user("User-1").publicKey == "NEWKEY");
    CHECK(!r.userForKey("ANDOISQKX"));
    r.linkPublicKey("User-2", "ANDOISQKX");
    CHECK(r.userForKey("ANDOISQKX") == "User-2");

    CHECK(codeOf([&] { r.registerUser(ident(""), "User-3"); }) ==
          ErrorCode::ValidationError);
    CHECK(codeOf([&] { r.registerUser(ident("x"), ""); }) ==
          ErrorCode::ValidationError);
}

TEST_CASE("record_interests")
{
    Registry r;
    r.registerUser(ident("Test-one"), "user-1");
    r.recordInterests("user-1", {{Category::Charity, 1},
                                 {Category::Education, 1},
                                 {Category::Economy, 3},
                                 {Category::Healthcare, 4}});
    CHECK(r.user("user-1").interests == InterestRatings{1, 1, 3, 4});

    CHECK(codeOf([&] {
              r.recordInterests("user-1", {{Category::Charity, 6},
                                           {Category::Education, 1},
                                           {Category::Economy, 3},
                                           {Category::Healthcare, 4}});
          }) == ErrorCode::OutOfRangeRating);
    CHECK(codeOf([&] {
              r.recordInterests("user-1", {{Category::Charity, 0},
                                           {Category::Education, 1},
                                           {Category::Economy, 3},
                                           {Category::Healthcare, 4}});
          }) == ErrorCode::OutOfRangeRating);
    CHECK(codeOf([&] {
              r.recordInterests("user-1", {{Category::Charity, 1},
                                           {Category::Education, 1},
                                           {Category::Economy, 3}});
          }) == ErrorCode::MissingCategory);
    CHECK(codeOf([&] {
              r.recordInterests("nobody", {{Category::Charity, 1},
                                           {Category::Education, 1},
                                           {Category::Economy, 1},
                                           {Category::Healthcare, 1}});
          }) == ErrorCode::UnknownUser);
    // failed calls leave the previous ratings in place
    CHECK(r.user("user-1").interests == InterestRatings{1, 1, 3, 4});
}

TEST_CASE("register_entity")
{
    auto r = catalog();
    CHECK(r.entity("GAIRWQ") ==
          DestinationEntity{"charity", "GAIRWQ", Category::Charity, 1, 6});
    CHECK(r.entities().size() == 4);
    CHECK(codeOf([&] {
              r.registerEntity({"dup", "GAIRWQ", Category::Charity, 1, 1});
          }) == ErrorCode::DuplicateKey);
    CHECK(codeOf([&] {
              r.registerEntity({"zero", "ZZ", Category::Charity, 1, 0});
          }) == ErrorCode::ValidationError);
    CHECK(codeOf([&] {
              r.registerEntity({"zero", "ZZ", Category::Charity, 0, 1});
          }) == ErrorCode::ValidationError);
    CHECK(!r.hasEntity("ZZ"));
    CHECK(codeOf([&] { r.entity("ZZ"); }) == ErrorCode::UnknownEntity);
}

TEST_CASE("categories")
{
    CHECK(category_from_id(1) == Category::Charity);
    CHECK(category_from_id(4) == Category::Healthcare);
    CHECK(codeOf([] { category_from_id(5); }) == ErrorCode::ValidationError);
    CHECK(codeOf([] { category_from_id(0); }) == ErrorCode::ValidationError);
    CHECK(category_from_label("health") == Category::Healthcare);
    CHECK(category_from_label("economy") == Category::Economy);
    CHECK(!category_from_label("sports"));
    CHECK(category_display_name(Category::Economy) == "Economic Organization");
    for (auto c : kCategories)
    {
        CHECK(category_from_label(category_label(c)) == c);
    }
}

TEST_CASE("append_vote keeps arrival order")
{
    auto r = catalog();
    r.registerUser(fixture_identity("user-1"), "user-1");
    r.registerUser(fixture_identity("user-2"), "user-2");
    std::vector<std::pair<std::string, std::string>> rows = {
        {"GAIRWQ", "user-1"}, {"GAIRWQ", "user-2"}, {"BAIRWQ", "user-2"},
        {"GAIRWQ", "user-2"}, {"BAIRWQ", "user-2"}, {"BAIRWQ", "user-2"},
        {"CAIRWQ", "user-2"}, {"GAIRWQ", "user-2"}};
    uint64_t seq = 0;
    for (auto const& [dest, user] : rows)
    {
        auto rec = r.appendVote(user, dest);
        CHECK(rec.sequence == ++seq);
    }
    REQUIRE(r.votes().size() == 8);
    CHECK(r.votes().back().sequence == 8);
    CHECK(r.voteCounts("user-2") ==
          std::map<std::string, int64_t>{
              {"BAIRWQ", 3}, {"CAIRWQ", 1}, {"GAIRWQ", 3}, {"NNIRWQ", 0}});
    CHECK(r.voteCounts("user-1") ==
          std::map<std::string, int64_t>{
              {"BAIRWQ", 0}, {"CAIRWQ", 0}, {"GAIRWQ", 1}, {"NNIRWQ", 0}});

    CHECK(codeOf([&] { r.appendVote("user-1", "XXXX"); }) ==
          ErrorCode::UnknownEntity);
    CHECK(codeOf([&] { r.appendVote("user-9", "GAIRWQ"); }) ==
          ErrorCode::UnknownUser);
    CHECK(r.votes().size() == 8);
}

TEST_CASE("store journal survives reload and compaction")
{
    auto path = tempPath("store");
    {
        RegistryStore s(path);
        s.registerUser(ident("Tab\tand\\slash"), "user-1");
        s.linkPublicKey("user-1", "ANDOISQKX");
        s.recordInterests("user-1", {{Category::Charity, 1},
                                     {Category::Education, 2},
                                     {Category::Economy, 3},
                                     {Category::Healthcare, 4}});
        s.registerEntity({"charity", "GAIRWQ", Category::Charity, 1, 6});
        s.appendVote("user-1", "GAIRWQ");
        s.appendVote("user-1", "GAIRWQ");
        CHECK_THROWS(s.appendVote("user-1", "nope"));
    }
    auto loaded = RegistryStore::load(path);
    CHECK(loaded.user("user-1").identity.name == "Tab\tand\\slash");
    CHECK(loaded.user("user-1").interests == InterestRatings{1, 2, 3, 4});
    CHECK(loaded.votes().size() == 2);

    RegistryStore again(path);
    CHECK(again.registry() == loaded);
    again.linkPublicKey("user-1", "SECOND");
    again.compact();
    CHECK(!std::filesystem::exists(path.string() + ".tmp"));
    auto compacted = RegistryStore::load(path);
    CHECK(compacted == again.registry());
    CHECK(compacted.user("user-1").publicKey == "SECOND");
    std::filesystem::remove(path);

    auto bad = tempPath("bad");
    std::ofstream(bad) << "user\tonly-two\n";
    CHECK(codeOf([&] { RegistryStore::load(bad); }) ==
          ErrorCode::FixtureParseError);
    std::filesystem::remove(bad);
}

TEST_CASE("property: random registry histories replay identically")
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial)
    {
        auto path = tempPath("prop");
        Registry mirror;
        {
            RegistryStore s(path);
            int users = 1 + static_cast<int>(rng() % 5);
            int ents = 1 + static_cast<int>(rng() % 5);
            for (int i = 0; i < users; ++i)
            {
                auto id = "u" + std::to_string(i);
                s.registerUser(fixture_identity(id), id);
            }
            for (int i = 0; i < ents; ++i)
            {
                s.registerEntity({"e", "E" + std::to_string(i),
                                  category_from_id(1 + static_cast<int>(rng() % 4)),
                                  1 + static_cast<int64_t>(rng() % 9),
                                  1 + static_cast<int64_t>(rng() % 900)});
            }
            for (int i = 0; i < 50; ++i)
            {
                auto u = "u" + std::to_string(rng() % users);
                switch (rng() % 3)
                {
                case 0:
                    s.appendVote(u, "E" + std::to_string(rng() % ents));
                    break;
                case 1:
                    s.recordInterests(
                        u, {{Category::Charity, 1 + static_cast<int>(rng() % 5)},
                            {Category::Education, 1 + static_cast<int>(rng() % 5)},
                            {Category::Economy, 1 + static_cast<int>(rng() % 5)},
                            {Category::Healthcare, 1 + static_cast<int>(rng() % 5)}});
                    break;
                default:
                    try
                    {
                        s.linkPublicKey(u, "K" + std::to_string(rng() % 4));
                    }
                    catch (Error const& e)
                    {
                        REQUIRE(e.code() == ErrorCode::KeyAlreadyLinked);
                    }
                }
            }
            mirror = s.registry();
        }
        CHECK(RegistryStore::load(path) == mirror);
        std::filesystem::remove(path);
    }
}
