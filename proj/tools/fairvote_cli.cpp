#include "fairvote/errors.h"
#include "fairvote/experiment.h"
#include "fairvote/fixtures.h"
#include "fairvote/gateway.h"

#include <CLI11.hpp>
#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

using namespace fairvote;

namespace
{

int
exitCodeFor(Error const& e)
{
    switch (e.code())
    {
    case ErrorCode::FixtureParseError:
        return 2;
    case ErrorCode::UnknownReference:
    case ErrorCode::UnknownUser:
    case ErrorCode::UnknownEntity:
        return 3;
    default:
        return 1;
    }
}

void
writeOut(std::string const& path, std::string const& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out)
    {
        throw std::runtime_error("cannot write " + path);
    }
}

} // namespace

int
main(int argc, char** argv)
{
    CLI::App app{"fairvote: collective-asset distribution toolkit"};
    app.require_subcommand(1);

    // experiment
    auto* exp = app.add_subcommand(
        "experiment", "replay a scoring experiment over fixture tables");
    std::string kindName;
    std::string fixturesDir;
    std::string outFile;
    std::string user;
    std::string policyName = "top-count";
    int interest = 3;
    exp->add_option("kind", kindName, "size-priority | interest | similarity")
        ->required()
        ->check(CLI::IsMember({"size-priority", "interest", "similarity"}));
    exp->add_option("--fixtures", fixturesDir, "fixture directory")
        ->required();
    exp->add_option("--out", outFile, "write the table as CSV");
    exp->add_option("--user", user, "target federation ID");
    exp->add_option("--policy", policyName, "collaborative policy")
        ->check(CLI::IsMember({"top-count", "proportional"}));
    exp->add_option("--interest", interest,
                    "constant interest rating for synthetic profiles")
        ->check(CLI::Range(1, 5));

    // simulate
    auto* sim = app.add_subcommand("simulate", "seeded multi-round voting run");
    experiment::SimulationSpec simSpec;
    std::string simOut;
    sim->add_option("--users", simSpec.users)->required();
    sim->add_option("--entities", simSpec.entities)->required();
    sim->add_option("--rounds", simSpec.rounds)->required();
    sim->add_option("--seed", simSpec.seed)->required();
    sim->add_flag("--uniform-votes", simSpec.uniformVotes,
                  "one account, one vote");
    sim->add_option("--out", simOut, "write per-round CSV");

    // serve
    auto* serve = app.add_subcommand("serve", "run the HTTP JSON gateway");
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string serveFixtures;
    Amount startingBalance = 10000;
    serve->add_option("--host", host);
    serve->add_option("--port", port);
    serve->add_option("--fixtures", serveFixtures,
                      "directory with entities.csv [interests.csv] "
                      "[votes.csv]");
    serve->add_option("--starting-balance", startingBalance,
                      "balance of ledger accounts created on key link");

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        // keep 2 and 3 for fixture and reference errors
        return app.exit(e) == 0 ? 0 : 1;
    }

    try
    {
        if (*exp)
        {
            experiment::ExperimentSpec spec;
            spec.kind = *experiment::parse_kind(kindName);
            spec.fixtures = fixturesDir;
            spec.targetUser = user;
            spec.constantInterest = interest;
            spec.collab.policy = *parse_policy(policyName);
            auto table = experiment::run_experiment(spec);
            std::cout << table.to_text();
            if (!outFile.empty())
            {
                writeOut(outFile, table.to_csv());
            }
            return 0;
        }
        if (*sim)
        {
            auto report = experiment::run_simulation(simSpec);
            std::cout << report.to_text();
            if (!simOut.empty())
            {
                writeOut(simOut, report.to_csv());
            }
            return 0;
        }
        if (*serve)
        {
            api::Gateway gateway({}, startingBalance);
            if (!serveFixtures.empty())
            {
                namespace fs = std::filesystem;
                fs::path dir = serveFixtures;
                // a test case directory may share its parent's files
                auto locate = [&](char const* name) -> std::optional<fs::path> {
                    for (auto const& d : {dir, dir.parent_path()})
                    {
                        if (fs::exists(d / name))
                        {
                            return d / name;
                        }
                    }
                    return std::nullopt;
                };
                auto entities = fixtures::read_entities(
                    locate("entities.csv").value_or(dir / "entities.csv"));
                std::vector<fixtures::InterestRow> interests;
                std::vector<fixtures::VoteRow> votes;
                if (auto p = locate("interests.csv"))
                {
                    interests = fixtures::read_interests(*p);
                }
                if (auto p = locate("votes.csv"))
                {
                    votes = fixtures::read_votes(*p);
                }
                gateway.loadFixtures(entities, interests, votes);
            }
            httplib::Server server;
            api::bind(server, gateway);
            std::cerr << "listening on http://" << host << ":" << port
                      << api::kPrefix << "\n";
            if (!server.listen(host, port))
            {
                std::cerr << "cannot bind " << host << ":" << port << "\n";
                return 1;
            }
            return 0;
        }
    }
    catch (Error const& e)
    {
        std::cerr << "error: " << error_name(e.code()) << ": " << e.what()
                  << "\n";
        return exitCodeFor(e);
    }
    catch (std::exception const& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
