#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fairvote
{

// Every failure a module can report. The gateway maps each one onto exactly
// one stable wire code (see api_code()).
enum class ErrorCode
{
    // ledger
    DuplicateKey,
    UnknownAccount,
    InsufficientBalance,
    NonPositiveAmount,
    InvalidParams,
    // registry
    DuplicateUniqueId,
    ValidationError,
    UnknownUser,
    KeyAlreadyLinked,
    OutOfRangeRating,
    MissingCategory,
    UnknownEntity,
    // recommender
    DimensionMismatch,
    InterestsUnset,
    EmptyInput,
    // fairness
    EmptyGroup,
    BothZero,
    NoQualifiedMembers,
    // fixtures / experiments
    FixtureParseError,
    UnknownReference,
};

inline constexpr ErrorCode kAllErrorCodes[] = {
    ErrorCode::DuplicateKey,       ErrorCode::UnknownAccount,
    ErrorCode::InsufficientBalance, ErrorCode::NonPositiveAmount,
    ErrorCode::InvalidParams,      ErrorCode::DuplicateUniqueId,
    ErrorCode::ValidationError,    ErrorCode::UnknownUser,
    ErrorCode::KeyAlreadyLinked,   ErrorCode::OutOfRangeRating,
    ErrorCode::MissingCategory,    ErrorCode::UnknownEntity,
    ErrorCode::DimensionMismatch,  ErrorCode::InterestsUnset,
    ErrorCode::EmptyInput,         ErrorCode::EmptyGroup,
    ErrorCode::BothZero,           ErrorCode::NoQualifiedMembers,
    ErrorCode::FixtureParseError,  ErrorCode::UnknownReference,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error
{
  public:
    Error(ErrorCode code, std::string const& message)
        : std::runtime_error(message), mCode(code)
    {
    }

    ErrorCode
    code() const noexcept
    {
        return mCode;
    }

  private:
    ErrorCode mCode;
};

} // namespace fairvote
