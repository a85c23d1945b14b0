#include "fairvote/errors.h"

namespace fairvote
{

std::string_view
error_name(ErrorCode code)
{
    switch (code)
    {
    case ErrorCode::DuplicateKey:
        return "DuplicateKey";
    case ErrorCode::UnknownAccount:
        return "UnknownAccount";
    case ErrorCode::InsufficientBalance:
        return "InsufficientBalance";
    case ErrorCode::NonPositiveAmount:
        return "NonPositiveAmount";
    case ErrorCode::InvalidParams:
        return "InvalidParams";
    case ErrorCode::DuplicateUniqueId:
        return "DuplicateUniqueId";
    case ErrorCode::ValidationError:
        return "ValidationError";
    case ErrorCode::UnknownUser:
        return "UnknownUser";
    case ErrorCode::KeyAlreadyLinked:
        return "KeyAlreadyLinked";
    case ErrorCode::OutOfRangeRating:
        return "OutOfRangeRating";
    case ErrorCode::MissingCategory:
        return "MissingCategory";
    case ErrorCode::UnknownEntity:
        return "UnknownEntity";
    case ErrorCode::DimensionMismatch:
        return "DimensionMismatch";
    case ErrorCode::InterestsUnset:
        return "InterestsUnset";
    case ErrorCode::EmptyInput:
        return "EmptyInput";
    case ErrorCode::EmptyGroup:
        return "EmptyGroup";
    case ErrorCode::BothZero:
        return "BothZero";
    case ErrorCode::NoQualifiedMembers:
        return "NoQualifiedMembers";
    case ErrorCode::FixtureParseError:
        return "FixtureParseError";
    case ErrorCode::UnknownReference:
        return "UnknownReference";
    }
    return "Unknown";
}

} // namespace fairvote
