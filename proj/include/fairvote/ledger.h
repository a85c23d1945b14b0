#pragma once

#include "fairvote/rational.h"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fairvote
{

using Amount = int64_t;

struct Account
{
    std::string publicKey;
    Amount balance = 0;
    std::optional<std::string> inflationDestination;

    bool operator==(Account const&) const = default;
};

enum class VoteWeighting
{
    Stake,  // vote weight = voter balance
    Uniform // one account, one vote
};

struct LedgerParams
{
    Amount baseFee = 100;
    Rational inflationRatePerRound{1, 10000};
    Rational minVoteFraction{5, 10000};
    VoteWeighting weighting = VoteWeighting::Stake;

    // throws Error(InvalidParams)
    void validate() const;

    bool operator==(LedgerParams const&) const = default;
};

struct PoolState
{
    Amount collectedFees = 0;
    Amount carryover = 0;

    bool operator==(PoolState const&) const = default;
};

enum class ReceiptKind
{
    Payment,
    InflationPayout
};

struct Receipt
{
    uint64_t sequence = 0;
    ReceiptKind kind = ReceiptKind::Payment;
    std::string source; // empty for inflation payouts (paid by the pool)
    std::string destination;
    Amount amount = 0;
    Amount fee = 0;

    bool operator==(Receipt const&) const = default;
};

struct InflationRoundResult
{
    uint64_t round = 0;
    Amount minted = 0;
    Amount feesConsumed = 0;
    Amount carryoverConsumed = 0;
    Amount pool = 0; // minted + feesConsumed + carryoverConsumed
    Amount poolPaid = 0;
    std::map<std::string, Amount> payouts;
    Amount carriedOver = 0;
    // per-destination vote weight seen by the round, including losers
    std::map<std::string, Amount> voteWeights;
};

// Deterministic in-process token ledger. Not internally synchronized: callers
// serialize mutations (single writer) and may hand out copies as read
// snapshots.
class Ledger
{
  public:
    Ledger() = default;
    explicit Ledger(LedgerParams params);

    Account const& createAccount(std::string const& publicKey,
                                 Amount startingBalance);
    Receipt submitPayment(std::string const& src, std::string const& dst,
                          Amount amount);
    void setInflationDestination(std::string const& account,
                                 std::string const& dest);
    InflationRoundResult runInflationRound();

    std::vector<Receipt> history(std::string const& account) const;

    Account const& account(std::string const& publicKey) const;
    bool hasAccount(std::string const& publicKey) const;
    std::map<std::string, Account> const&
    accounts() const
    {
        return mAccounts;
    }

    // balance the account was created (or imported) with; replaying
    // history() from here reproduces the current balance
    Amount genesisBalance(std::string const& publicKey) const;

    LedgerParams const&
    params() const
    {
        return mParams;
    }
    PoolState const&
    pool() const
    {
        return mPool;
    }
    Amount
    genesisSupply() const
    {
        return mGenesis;
    }
    Amount
    mintedSupply() const
    {
        return mMinted;
    }
    Amount
    totalSupply() const
    {
        return mGenesis + mMinted;
    }
    uint64_t
    roundsRun() const
    {
        return mRounds;
    }

    // sum of balances + collected fees + carryover
    Amount heldTokens() const;

    // Canonical text document: header, params, pool, then one line per
    // account ordered by key.
    std::string exportText() const;
    static Ledger importText(std::string const& text);

    bool operator==(Ledger const&) const = default;

  private:
    Account& mutableAccount(std::string const& publicKey);

    LedgerParams mParams;
    std::map<std::string, Account> mAccounts;
    std::map<std::string, Amount> mGenesisBalances;
    PoolState mPool;
    std::vector<Receipt> mReceipts;
    Amount mGenesis = 0;
    Amount mMinted = 0;
    uint64_t mNextSequence = 1;
    uint64_t mRounds = 0;
};

} // namespace fairvote
