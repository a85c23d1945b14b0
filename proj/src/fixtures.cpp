#include "fairvote/fixtures.h"
#include "fairvote/errors.h"

#include <charconv>
#include <fstream>
#include <sstream>

namespace fairvote::fixtures
{

namespace
{

std::string
trim(std::string_view s)
{
    size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r'))
    {
        ++b;
    }
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r'))
    {
        --e;
    }
    return std::string(s.substr(b, e - b));
}

struct Row
{
    size_t line;
    std::vector<std::string> cells;
};

[[noreturn]] void
fail(std::string const& source, size_t line, std::string const& what)
{
    throw Error(ErrorCode::FixtureParseError,
                source + ":" + std::to_string(line) + ": " + what);
}

std::vector<Row>
readTable(std::string_view text, std::string const& source,
          std::vector<std::string> const& header)
{
    std::vector<Row> rows;
    bool sawHeader = false;
    size_t lineNo = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line))
    {
        ++lineNo;
        auto t = trim(line);
        if (t.empty() || t[0] == '#')
        {
            continue;
        }
        std::vector<std::string> cells;
        std::string_view rest = t;
        while (true)
        {
            auto comma = rest.find(',');
            cells.push_back(trim(rest.substr(0, comma)));
            if (comma == std::string_view::npos)
            {
                break;
            }
            rest.remove_prefix(comma + 1);
        }
        if (!sawHeader)
        {
            if (cells != header)
            {
                std::string want;
                for (auto const& h : header)
                {
                    want += (want.empty() ? "" : ",") + h;
                }
                fail(source, lineNo, "expected header '" + want + "'");
            }
            sawHeader = true;
            continue;
        }
        if (cells.size() != header.size())
        {
            fail(source, lineNo,
                 "expected " + std::to_string(header.size()) + " cells, got " +
                     std::to_string(cells.size()));
        }
        for (auto const& c : cells)
        {
            if (c.empty())
            {
                fail(source, lineNo, "empty cell");
            }
        }
        rows.push_back({lineNo, std::move(cells)});
    }
    if (!sawHeader)
    {
        fail(source, lineNo, "missing header row");
    }
    return rows;
}

int64_t
integer(std::string const& cell, std::string const& source, size_t line)
{
    int64_t v = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size())
    {
        fail(source, line, "not an integer: '" + cell + "'");
    }
    return v;
}

} // namespace

std::vector<DestinationEntity>
parse_entities(std::string_view text, std::string const& source)
{
    std::vector<DestinationEntity> out;
    for (auto const& r : readTable(
             text, source, {"name", "walletID", "category", "priority", "size"}))
    {
        auto cat = integer(r.cells[2], source, r.line);
        if (cat < 1 || cat > 4)
        {
            fail(source, r.line, "category must be 1..4");
        }
        out.push_back(DestinationEntity{
            r.cells[0], r.cells[1], static_cast<Category>(cat),
            integer(r.cells[3], source, r.line),
            integer(r.cells[4], source, r.line)});
    }
    return out;
}

std::vector<InterestRow>
parse_interests(std::string_view text, std::string const& source)
{
    std::vector<InterestRow> out;
    for (auto const& r : readTable(text, source,
                                   {"federationID", "charity", "education",
                                    "economy", "health"}))
    {
        InterestRow row{r.cells[0], {}};
        for (auto c : kCategories)
        {
            row.ratings[c] = static_cast<int>(
                integer(r.cells[1 + category_index(c)], source, r.line));
        }
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<VoteRow>
parse_votes(std::string_view text, std::string const& source)
{
    std::vector<VoteRow> out;
    for (auto const& r :
         readTable(text, source, {"destinationID", "federationID"}))
    {
        out.push_back({r.cells[0], r.cells[1]});
    }
    return out;
}

std::string
read_file(std::filesystem::path const& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in)
    {
        throw Error(ErrorCode::FixtureParseError,
                    "cannot read fixture " + p.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<DestinationEntity>
read_entities(std::filesystem::path const& p)
{
    return parse_entities(read_file(p), p.string());
}

std::vector<InterestRow>
read_interests(std::filesystem::path const& p)
{
    return parse_interests(read_file(p), p.string());
}

std::vector<VoteRow>
read_votes(std::filesystem::path const& p)
{
    return parse_votes(read_file(p), p.string());
}

void
load(Registry& registry, std::vector<DestinationEntity> const& entities,
     std::vector<InterestRow> const& interests,
     std::vector<VoteRow> const& votes)
{
    auto guarded = [](auto&& step) {
        try
        {
            step();
        }
        catch (Error const& e)
        {
            if (e.code() == ErrorCode::UnknownEntity ||
                e.code() == ErrorCode::UnknownUser)
            {
                throw Error(ErrorCode::UnknownReference, e.what());
            }
            throw Error(ErrorCode::FixtureParseError, e.what());
        }
    };

    for (auto const& e : entities)
    {
        guarded([&] { registry.registerEntity(e); });
    }
    auto ensureUser = [&](std::string const& id) {
        if (!registry.hasUser(id))
        {
            guarded([&] { registry.registerUser(fixture_identity(id), id); });
        }
    };
    for (auto const& row : interests)
    {
        ensureUser(row.federationId);
        guarded(
            [&] { registry.recordInterests(row.federationId, row.ratings); });
    }
    for (auto const& v : votes)
    {
        ensureUser(v.federationId);
        guarded([&] { registry.appendVote(v.federationId, v.destinationKey); });
    }
}

std::string
csv_line(std::vector<std::string> const& cells)
{
    std::string out;
    for (size_t i = 0; i < cells.size(); ++i)
    {
        if (i)
        {
            out += ',';
        }
        out += cells[i];
    }
    return out;
}

} // namespace fairvote::fixtures
