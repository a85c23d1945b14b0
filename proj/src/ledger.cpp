#include "fairvote/ledger.h"
#include "fairvote/errors.h"

#include <cctype>
#include <sstream>

namespace fairvote
{

namespace
{

void
requireKeyShape(std::string const& key)
{
    if (key.empty() || key == "-")
    {
        throw Error(ErrorCode::ValidationError, "public key must be non-empty");
    }
    for (unsigned char c : key)
    {
        if (std::isspace(c) || std::iscntrl(c))
        {
            throw Error(ErrorCode::ValidationError,
                        "public key contains whitespace: '" + key + "'");
        }
    }
}

char const*
weightingName(VoteWeighting w)
{
    return w == VoteWeighting::Stake ? "stake" : "uniform";
}

} // namespace

void
LedgerParams::validate() const
{
    if (baseFee < 1)
    {
        throw Error(ErrorCode::InvalidParams, "base_fee must be >= 1");
    }
    if (!inflationRatePerRound.isValid() ||
        !(inflationRatePerRound < Rational{1, 1}))
    {
        throw Error(ErrorCode::InvalidParams,
                    "inflation_rate_per_round must be in [0,1)");
    }
    if (!minVoteFraction.isValid() || Rational{1, 1} < minVoteFraction)
    {
        throw Error(ErrorCode::InvalidParams,
                    "min_vote_fraction must be in [0,1]");
    }
}

Ledger::Ledger(LedgerParams params) : mParams(params)
{
    mParams.validate();
}

Account const&
Ledger::createAccount(std::string const& publicKey, Amount startingBalance)
{
    requireKeyShape(publicKey);
    if (startingBalance < 0)
    {
        throw Error(ErrorCode::InvalidParams,
                    "starting balance must be non-negative");
    }
    if (mAccounts.count(publicKey) != 0)
    {
        throw Error(ErrorCode::DuplicateKey,
                    "account already exists: " + publicKey);
    }
    auto [it, inserted] =
        mAccounts.emplace(publicKey, Account{publicKey, startingBalance, {}});
    mGenesisBalances[publicKey] = startingBalance;
    mGenesis += startingBalance;
    return it->second;
}

Receipt
Ledger::submitPayment(std::string const& src, std::string const& dst,
                      Amount amount)
{
    auto& from = mutableAccount(src);
    auto& to = mutableAccount(dst);
    if (amount <= 0)
    {
        throw Error(ErrorCode::NonPositiveAmount,
                    "payment amount must be positive");
    }
    if (from.balance < amount || from.balance - amount < mParams.baseFee)
    {
        throw Error(ErrorCode::InsufficientBalance,
                    "balance " + std::to_string(from.balance) +
                        " < amount + fee " +
                        std::to_string(amount + mParams.baseFee));
    }

    from.balance -= amount + mParams.baseFee;
    to.balance += amount;
    mPool.collectedFees += mParams.baseFee;

    Receipt r{mNextSequence++, ReceiptKind::Payment, src, dst, amount,
              mParams.baseFee};
    mReceipts.push_back(r);
    return r;
}

void
Ledger::setInflationDestination(std::string const& account,
                                std::string const& dest)
{
    auto& acc = mutableAccount(account);
    if (!hasAccount(dest))
    {
        throw Error(ErrorCode::UnknownAccount, "unknown account: " + dest);
    }
    acc.inflationDestination = dest;
}

InflationRoundResult
Ledger::runInflationRound()
{
    /*
    1. mint floor(total supply * rate) into the pool, together with the
       collected fees and the previous carryover
    2. tally vote weight per destination from every account that set one
    3. destinations holding at least min_vote_fraction of the voted weight
       split the pool in proportion to weight, rounding down
    4. whatever is not paid out carries over to the next round
    */
    InflationRoundResult res;
    res.round = ++mRounds;
    res.minted = mParams.inflationRatePerRound.floorMul(totalSupply());
    res.feesConsumed = mPool.collectedFees;
    res.carryoverConsumed = mPool.carryover;
    res.pool = res.minted + res.feesConsumed + res.carryoverConsumed;

    Amount totalVoted = 0;
    for (auto const& [key, acc] : mAccounts)
    {
        if (!acc.inflationDestination)
        {
            continue;
        }
        Amount w =
            mParams.weighting == VoteWeighting::Stake ? acc.balance : 1;
        res.voteWeights[*acc.inflationDestination] += w;
        totalVoted += w;
    }

    std::map<std::string, Amount> winners;
    Amount winningWeight = 0;
    if (totalVoted > 0)
    {
        auto const& frac = mParams.minVoteFraction;
        for (auto const& [dest, w] : res.voteWeights)
        {
            if (w <= 0)
            {
                continue;
            }
            if (static_cast<__int128>(w) * frac.den >=
                static_cast<__int128>(frac.num) * totalVoted)
            {
                winners.emplace(dest, w);
                winningWeight += w;
            }
        }
    }

    Amount paid = 0;
    for (auto const& [dest, w] : winners)
    {
        auto share = static_cast<Amount>(static_cast<__int128>(res.pool) * w /
                                         winningWeight);
        if (share == 0)
        {
            continue;
        }
        mutableAccount(dest).balance += share;
        res.payouts.emplace(dest, share);
        paid += share;
        mReceipts.push_back(Receipt{mNextSequence++,
                                    ReceiptKind::InflationPayout, "", dest,
                                    share, 0});
    }

    res.poolPaid = paid;
    res.carriedOver = res.pool - paid;
    mPool.collectedFees = 0;
    mPool.carryover = res.carriedOver;
    mMinted += res.minted;
    return res;
}

std::vector<Receipt>
Ledger::history(std::string const& accountKey) const
{
    account(accountKey);
    std::vector<Receipt> out;
    for (auto const& r : mReceipts)
    {
        if (r.source == accountKey || r.destination == accountKey)
        {
            out.push_back(r);
        }
    }
    return out;
}

Account const&
Ledger::account(std::string const& publicKey) const
{
    auto it = mAccounts.find(publicKey);
    if (it == mAccounts.end())
    {
        throw Error(ErrorCode::UnknownAccount,
                    "unknown account: " + publicKey);
    }
    return it->second;
}

Account&
Ledger::mutableAccount(std::string const& publicKey)
{
    auto it = mAccounts.find(publicKey);
    if (it == mAccounts.end())
    {
        throw Error(ErrorCode::UnknownAccount,
                    "unknown account: " + publicKey);
    }
    return it->second;
}

bool
Ledger::hasAccount(std::string const& publicKey) const
{
    return mAccounts.count(publicKey) != 0;
}

Amount
Ledger::genesisBalance(std::string const& publicKey) const
{
    account(publicKey);
    return mGenesisBalances.at(publicKey);
}

Amount
Ledger::heldTokens() const
{
    Amount sum = mPool.collectedFees + mPool.carryover;
    for (auto const& [key, acc] : mAccounts)
    {
        sum += acc.balance;
    }
    return sum;
}

std::string
Ledger::exportText() const
{
    std::ostringstream out;
    out << "fairvote-ledger 1\n";
    out << "params base_fee=" << mParams.baseFee
        << " inflation_rate=" << mParams.inflationRatePerRound.toString()
        << " min_vote_fraction=" << mParams.minVoteFraction.toString()
        << " weighting=" << weightingName(mParams.weighting) << "\n";
    out << "pool collected_fees=" << mPool.collectedFees
        << " carryover=" << mPool.carryover << " genesis=" << mGenesis
        << " minted=" << mMinted << " rounds=" << mRounds << "\n";
    for (auto const& [key, acc] : mAccounts)
    {
        out << "account " << key << " " << acc.balance << " "
            << acc.inflationDestination.value_or("-") << "\n";
    }
    return out.str();
}

namespace
{

[[noreturn]] void
parseFail(std::string const& what)
{
    throw Error(ErrorCode::FixtureParseError, "ledger document: " + what);
}

// reads "name=value" and checks the name
std::string
field(std::istream& in, std::string const& name)
{
    std::string tok;
    if (!(in >> tok))
    {
        parseFail("missing field " + name);
    }
    auto eq = tok.find('=');
    if (eq == std::string::npos || tok.substr(0, eq) != name)
    {
        parseFail("expected field " + name + ", got '" + tok + "'");
    }
    return tok.substr(eq + 1);
}

int64_t
intField(std::istream& in, std::string const& name)
{
    auto v = field(in, name);
    try
    {
        size_t used = 0;
        auto n = std::stoll(v, &used);
        if (used != v.size())
        {
            parseFail("bad integer for " + name);
        }
        return n;
    }
    catch (std::logic_error const&)
    {
        parseFail("bad integer for " + name);
    }
}

} // namespace

Ledger
Ledger::importText(std::string const& text)
{
    std::istringstream doc(text);
    std::string line;
    if (!std::getline(doc, line) || line != "fairvote-ledger 1")
    {
        parseFail("missing header");
    }

    LedgerParams params;
    if (!std::getline(doc, line))
    {
        parseFail("missing params line");
    }
    {
        std::istringstream in(line);
        std::string tag;
        in >> tag;
        if (tag != "params")
        {
            parseFail("expected params line");
        }
        params.baseFee = intField(in, "base_fee");
        try
        {
            params.inflationRatePerRound =
                Rational::parse(field(in, "inflation_rate"));
            params.minVoteFraction =
                Rational::parse(field(in, "min_vote_fraction"));
        }
        catch (Error const& e)
        {
            parseFail(e.what());
        }
        auto w = field(in, "weighting");
        if (w == "stake")
        {
            params.weighting = VoteWeighting::Stake;
        }
        else if (w == "uniform")
        {
            params.weighting = VoteWeighting::Uniform;
        }
        else
        {
            parseFail("unknown weighting " + w);
        }
    }

    Ledger ledger;
    try
    {
        ledger = Ledger(params);
    }
    catch (Error const& e)
    {
        parseFail(e.what());
    }

    if (!std::getline(doc, line))
    {
        parseFail("missing pool line");
    }
    Amount genesis = 0;
    Amount minted = 0;
    {
        std::istringstream in(line);
        std::string tag;
        in >> tag;
        if (tag != "pool")
        {
            parseFail("expected pool line");
        }
        ledger.mPool.collectedFees = intField(in, "collected_fees");
        ledger.mPool.carryover = intField(in, "carryover");
        genesis = intField(in, "genesis");
        minted = intField(in, "minted");
        ledger.mRounds = static_cast<uint64_t>(intField(in, "rounds"));
    }

    std::map<std::string, std::string> votes;
    while (std::getline(doc, line))
    {
        if (line.empty())
        {
            continue;
        }
        std::istringstream in(line);
        std::string tag, key, dest;
        Amount balance = 0;
        if (!(in >> tag >> key >> balance >> dest) || tag != "account")
        {
            parseFail("bad account line '" + line + "'");
        }
        try
        {
            ledger.createAccount(key, balance);
        }
        catch (Error const& e)
        {
            parseFail(e.what());
        }
        if (dest != "-")
        {
            votes[key] = dest;
        }
    }
    for (auto const& [key, dest] : votes)
    {
        if (!ledger.hasAccount(dest))
        {
            parseFail("destination of " + key + " is not an account");
        }
        ledger.mAccounts[key].inflationDestination = dest;
    }

    ledger.mGenesis = genesis;
    ledger.mMinted = minted;
    if (ledger.mPool.collectedFees < 0 || ledger.mPool.carryover < 0 ||
        ledger.heldTokens() != ledger.totalSupply())
    {
        parseFail("document does not conserve supply");
    }
    return ledger;
}

} // namespace fairvote
