#pragma once

// Registries built from every case under fixtures/, with constant interests
// filled in for users that have none.

#include "fairvote/fixtures.h"
#include "fairvote/registry.h"

#include <filesystem>
#include <string>
#include <vector>

namespace testpop
{

struct Case
{
    std::string name;
    fairvote::Registry registry;
};

inline std::vector<Case>
fixture_population(std::filesystem::path const& root)
{
    using namespace fairvote;
    std::vector<Case> out;
    auto constant = [](Registry& reg) {
        for (auto const& u : reg.users())
        {
            if (!u.interests)
            {
                reg.recordInterests(u.uniqueId,
                                    {{Category::Charity, 3},
                                     {Category::Education, 3},
                                     {Category::Economy, 3},
                                     {Category::Healthcare, 3}});
            }
        }
    };
    for (auto t : {"test1", "test2", "test3"})
    {
        Case c{std::string("size-priority/") + t, {}};
        fixtures::load(c.registry,
                       fixtures::read_entities(root / "size-priority" / t /
                                               "entities.csv"),
                       {}, {});
        c.registry.registerUser(fixture_identity("experiment-user"),
                                "experiment-user");
        constant(c.registry);
        out.push_back(std::move(c));
    }
    for (auto t : {"test1", "test2", "test3"})
    {
        Case c{std::string("interest/") + t, {}};
        fixtures::load(
            c.registry, fixtures::read_entities(root / "interest" / "entities.csv"),
            fixtures::read_interests(root / "interest" / t / "interests.csv"), {});
        out.push_back(std::move(c));
    }
    for (auto t : {"test1", "test2"})
    {
        Case c{std::string("similarity/") + t, {}};
        fixtures::load(
            c.registry,
            fixtures::read_entities(root / "similarity" / "entities.csv"), {},
            fixtures::read_votes(root / "similarity" / t / "votes.csv"));
        constant(c.registry);
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace testpop
